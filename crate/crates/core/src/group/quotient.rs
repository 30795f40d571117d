//! Normal subgroups with abelian quotient, and the coset keys labelling G/N.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::{perm, Group, GroupElement, GroupKind};
use crate::error::{Error, Result};

/// Canonical label of a coset `gN`.
///
/// Heisenberg and ℤⁿ keys are integer tuples composed by addition (reduced
/// modulo `m` for the congruence quotients). Permutation keys are the
/// lexicographically smallest member of the coset in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CosetKey {
    Ints(Vec<i64>),
    Perm(Vec<u8>),
}

impl CosetKey {
    pub fn ints(v: impl Into<Vec<i64>>) -> Self {
        CosetKey::Ints(v.into())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("key serialization is infallible")
    }
}

impl fmt::Display for CosetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetKey::Ints(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            CosetKey::Perm(p) => f.write_str(&perm::cycle_string(p)),
        }
    }
}

impl fmt::Debug for CosetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for CosetKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CosetKey::Ints(v) => v.serialize(serializer),
            CosetKey::Perm(p) => serializer.serialize_str(&perm::cycle_string(p)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientKind {
    /// N = G′, so G/N is the abelianization.
    Derived,
    /// Infinite kernels only: N = {g : abelianized coordinates ≡ 0 mod m}.
    Modulus(i64),
    /// Finite kernels only: an explicit normal subgroup.
    Subgroup,
}

#[derive(Clone, Debug)]
struct FiniteQuotient {
    members: BTreeSet<GroupElement>,
    keys: BTreeMap<GroupElement, Vec<u8>>,
}

/// A normal subgroup `N ⊴ G` with `G/N` abelian, checked at construction.
#[derive(Clone, Debug)]
pub struct QuotientSpec {
    group: Arc<Group>,
    kind: QuotientKind,
    finite: Option<FiniteQuotient>,
}

impl QuotientSpec {
    /// N = G′.
    pub fn derived(group: &Arc<Group>) -> Result<Self> {
        match group.derived_subgroup() {
            Some(d) => Self::finite(group, QuotientKind::Derived, d.clone()),
            None => Ok(QuotientSpec {
                group: Arc::clone(group),
                kind: QuotientKind::Derived,
                finite: None,
            }),
        }
    }

    /// Congruence quotient of the abelianized coordinates, `m ≥ 1`.
    pub fn modulus(group: &Arc<Group>, m: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::Spec(format!("modulus must be positive, got {m}")));
        }
        if group.is_finite() {
            return Err(Error::Spec(
                "modulus quotients are defined for heisenberg and zn groups".into(),
            ));
        }
        Ok(QuotientSpec {
            group: Arc::clone(group),
            kind: QuotientKind::Modulus(m),
            finite: None,
        })
    }

    /// The subgroup generated by `generators`, in a finite group.
    pub fn generated_by(group: &Arc<Group>, generators: &[GroupElement]) -> Result<Self> {
        let (degree, perms) = finite_perms(group, generators)?;
        let members = perm::subgroup_generated(degree, &perms)
            .into_iter()
            .map(GroupElement::Perm)
            .collect();
        Self::finite(group, QuotientKind::Subgroup, members)
    }

    /// An explicitly listed subgroup of a finite group; the list must be
    /// closed under multiplication.
    pub fn from_elements(group: &Arc<Group>, elements: &[GroupElement]) -> Result<Self> {
        finite_perms(group, elements)?;
        let members: BTreeSet<GroupElement> = elements.iter().cloned().collect();
        if !members.contains(&group.identity()) {
            return Err(Error::Spec("subgroup must contain the identity".into()));
        }
        for a in &members {
            for b in &members {
                if !members.contains(&(a * b)) {
                    return Err(Error::Spec(format!(
                        "element list is not closed under multiplication: {a}·{b} missing"
                    )));
                }
            }
        }
        Self::finite(group, QuotientKind::Subgroup, members)
    }

    fn finite(
        group: &Arc<Group>,
        kind: QuotientKind,
        members: BTreeSet<GroupElement>,
    ) -> Result<Self> {
        for s in group.generators() {
            for n in &members {
                let c = s.conjugate(n)?;
                if !members.contains(&c) {
                    return Err(Error::NotNormal(format!("{s}·{n}·{s}⁻¹ = {c} is not in N")));
                }
            }
        }
        let mut keys = BTreeMap::new();
        for g in group.elements().unwrap_or_default() {
            if keys.contains_key(&g) {
                continue;
            }
            let coset: BTreeSet<GroupElement> = members.iter().map(|n| &g * n).collect();
            let rep = match coset.first() {
                Some(GroupElement::Perm(p)) => p.clone(),
                _ => unreachable!("finite kernels are permutation groups"),
            };
            for c in coset {
                keys.insert(c, rep.clone());
            }
        }
        let spec = QuotientSpec {
            group: Arc::clone(group),
            kind,
            finite: Some(FiniteQuotient { members, keys }),
        };
        spec.check_abelian()?;
        Ok(spec)
    }

    /// `G/N` is abelian iff `key(st) = key(ts)` for all generator pairs. On
    /// failure the error carries a conjugacy class that escapes its coset.
    fn check_abelian(&self) -> Result<()> {
        let gens: Vec<&GroupElement> = self.group.generators().collect();
        for a in &gens {
            for t in &gens {
                if self.key(&(*a * *t)) == self.key(&(*t * *a)) {
                    continue;
                }
                let class = self.group.conjugacy_class(a);
                let coset = self.coset(a).unwrap_or_default();
                let escaping: Vec<&GroupElement> =
                    class.iter().filter(|c| !coset.contains(c)).collect();
                let join = |it: &mut dyn Iterator<Item = &GroupElement>| {
                    it.map(|g| g.to_string()).collect::<Vec<_>>().join(", ")
                };
                return Err(Error::NonAbelianQuotient {
                    element: a.to_string(),
                    class: join(&mut class.iter()),
                    coset: join(&mut coset.iter()),
                    escaping: join(&mut escaping.into_iter()),
                });
            }
        }
        Ok(())
    }

    /// Parses `{"kind": "derived"}`, `{"kind": "modulus", "modulus": m}`, or
    /// `{"kind": "subgroup", "generators": [...]}` /
    /// `{"kind": "subgroup", "elements": [...]}`.
    pub fn from_json(value: &serde_json::Value, group: &Arc<Group>) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            kind: String,
            modulus: Option<i64>,
            generators: Option<Vec<serde_json::Value>>,
            elements: Option<Vec<serde_json::Value>>,
        }
        let raw: Raw = serde_json::from_value(value.clone())
            .map_err(|e| Error::Spec(format!("quotient spec: {e}")))?;
        let parse_all = |vals: &[serde_json::Value]| -> Result<Vec<GroupElement>> {
            vals.iter().map(|v| group.parse_element(v)).collect()
        };
        match (raw.kind.as_str(), raw.modulus, raw.generators, raw.elements) {
            ("derived", None, None, None) => Self::derived(group),
            ("modulus", Some(m), None, None) => Self::modulus(group, m),
            ("subgroup", None, Some(g), None) => Self::generated_by(group, &parse_all(&g)?),
            ("subgroup", None, None, Some(e)) => Self::from_elements(group, &parse_all(&e)?),
            (kind, ..) => Err(Error::Spec(format!(
                "quotient spec of kind {kind:?} has missing or conflicting fields"
            ))),
        }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn kind(&self) -> &QuotientKind {
        &self.kind
    }

    pub fn key(&self, g: &GroupElement) -> CosetKey {
        let reduce = |v: Vec<i64>| match self.kind {
            QuotientKind::Modulus(m) => v.into_iter().map(|x| x.rem_euclid(m)).collect(),
            _ => v,
        };
        match g {
            GroupElement::Heisenberg { a, b, .. } => CosetKey::Ints(reduce(vec![*a, *b])),
            GroupElement::Vector(v) => CosetKey::Ints(reduce(v.clone())),
            GroupElement::Perm(p) => CosetKey::Perm(
                self.finite
                    .as_ref()
                    .and_then(|f| f.keys.get(g).cloned())
                    .unwrap_or_else(|| p.clone()),
            ),
        }
    }

    pub fn identity_key(&self) -> CosetKey {
        self.key(&self.group.identity())
    }

    /// The group operation of G/N on keys.
    pub fn compose(&self, k: &CosetKey, l: &CosetKey) -> CosetKey {
        match (k, l) {
            (CosetKey::Ints(x), CosetKey::Ints(y)) => {
                let sum = x.iter().zip(y).map(|(a, b)| a + b);
                CosetKey::Ints(match self.kind {
                    QuotientKind::Modulus(m) => sum.map(|s| s.rem_euclid(m)).collect(),
                    _ => sum.collect(),
                })
            }
            (CosetKey::Perm(p), CosetKey::Perm(q)) => {
                self.key(&GroupElement::Perm(perm::compose(p, q)))
            }
            _ => panic!("keys {k} and {l} come from different quotients"),
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.key(g) == self.identity_key()
    }

    /// The coset `gN`, for finite groups.
    pub fn coset(&self, g: &GroupElement) -> Option<BTreeSet<GroupElement>> {
        self.finite
            .as_ref()
            .map(|f| f.members.iter().map(|n| g * n).collect())
    }

    /// Enumerated members of N, for finite groups.
    pub fn members(&self) -> Option<&BTreeSet<GroupElement>> {
        self.finite.as_ref().map(|f| &f.members)
    }

    /// Number of cosets when G/N is finite.
    pub fn index(&self) -> Option<usize> {
        match (&self.finite, &self.kind, self.group.kind()) {
            (Some(f), _, _) => Some(self.group.order()? / f.members.len()),
            (None, QuotientKind::Modulus(m), GroupKind::Heisenberg) => Some((m * m) as usize),
            (None, QuotientKind::Modulus(m), GroupKind::FreeAbelian(n)) => {
                Some((*m as usize).pow(*n as u32))
            }
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match (&self.kind, self.group.kind()) {
            (QuotientKind::Derived, GroupKind::Heisenberg) => {
                "N = H' = Z(H) = {(0,0,c)}; G/N = Z^2 via (a,b,c) -> (a,b)".into()
            }
            (QuotientKind::Derived, GroupKind::FreeAbelian(n)) => {
                format!("N = G' = {{0}}; G/N = Z^{n}")
            }
            (QuotientKind::Modulus(m), GroupKind::Heisenberg) => {
                format!("N = {{(a,b,c) : a = b = 0 mod {m}}}; G/N = (Z/{m})^2")
            }
            (QuotientKind::Modulus(m), GroupKind::FreeAbelian(n)) => {
                format!("N = ({m}Z)^{n}; G/N = (Z/{m})^{n}")
            }
            _ => format!(
                "N of order {}, index {}",
                self.members().map_or(0, |m| m.len()),
                self.index().unwrap_or(0)
            ),
        }
    }
}

fn finite_perms(group: &Group, elements: &[GroupElement]) -> Result<(usize, Vec<Vec<u8>>)> {
    let GroupKind::Permutation { degree, .. } = group.kind() else {
        return Err(Error::Spec(
            "explicit subgroups are supported for permutation groups only".into(),
        ));
    };
    let perms = elements
        .iter()
        .map(|g| match g {
            GroupElement::Perm(p) if group.contains(g) => Ok(p.clone()),
            _ => Err(group.foreign(g)),
        })
        .collect::<Result<_>>()?;
    Ok((*degree, perms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(a: i64, b: i64, c: i64) -> GroupElement {
        GroupElement::heisenberg(a, b, c)
    }

    #[test]
    fn heisenberg_keys_forget_the_centre() {
        let g = Arc::new(Group::heisenberg());
        let q = QuotientSpec::derived(&g).unwrap();
        assert_eq!(q.key(&h(3, -2, 17)), CosetKey::ints([3, -2]));
        assert_eq!(q.key(&h(0, 0, 9)), q.identity_key());
        assert!(q.contains(&h(0, 0, -4)));
        let k = q.compose(&q.key(&h(1, 2, 0)), &q.key(&h(-3, 1, 5)));
        assert_eq!(k, CosetKey::ints([-2, 3]));
    }

    #[test]
    fn modulus_keys_wrap() {
        let g = Arc::new(Group::free_abelian(2).unwrap());
        let q = QuotientSpec::modulus(&g, 3).unwrap();
        assert_eq!(
            q.key(&GroupElement::vector([4, -1])),
            CosetKey::ints([1, 2])
        );
        assert_eq!(
            q.compose(&CosetKey::ints([2, 2]), &CosetKey::ints([2, 1])),
            CosetKey::ints([1, 0])
        );
        assert_eq!(q.index(), Some(9));
        assert!(QuotientSpec::modulus(&g, 0).is_err());
    }

    #[test]
    fn sign_quotient_of_s4() {
        let g = Arc::new(Group::permutation("s4").unwrap());
        let q = QuotientSpec::derived(&g).unwrap();
        assert_eq!(q.members().unwrap().len(), 12);
        let t12 = GroupElement::perm_cycles(4, &[&[1, 2]]);
        let t34 = GroupElement::perm_cycles(4, &[&[3, 4]]);
        let c3 = GroupElement::perm_cycles(4, &[&[1, 2, 3]]);
        assert_eq!(q.key(&t12), q.key(&t34));
        assert_ne!(q.key(&t12), q.identity_key());
        assert_eq!(q.key(&c3), q.identity_key());
        // The odd coset's smallest member in one-line notation is (3 4).
        assert_eq!(q.key(&t12), CosetKey::Perm(vec![0, 1, 3, 2]));
        assert_eq!(q.compose(&q.key(&t12), &q.key(&t34)), q.identity_key());
        assert_eq!(q.index(), Some(2));
    }

    #[test]
    fn klein_four_in_s4_is_rejected() {
        let g = Arc::new(Group::permutation("s4").unwrap());
        let v4 = [
            GroupElement::perm_cycles(4, &[&[1, 2], &[3, 4]]),
            GroupElement::perm_cycles(4, &[&[1, 3], &[2, 4]]),
        ];
        let err = QuotientSpec::generated_by(&g, &v4).unwrap_err();
        let Error::NonAbelianQuotient {
            element,
            class,
            coset,
            escaping,
        } = err
        else {
            panic!("unexpected error {err:?}");
        };
        assert_eq!(element, "(1 2)");
        assert_eq!(class.split(", ").count(), 6);
        assert_eq!(coset.split(", ").count(), 4);
        assert_eq!(escaping.split(", ").count(), 4);
    }

    #[test]
    fn non_normal_subgroup_is_rejected() {
        let g = Arc::new(Group::permutation("s3").unwrap());
        let t = GroupElement::perm_cycles(3, &[&[1, 2]]);
        assert!(matches!(
            QuotientSpec::generated_by(&g, &[t]),
            Err(Error::NotNormal(_))
        ));
    }

    #[test]
    fn json_specs() {
        let g = Arc::new(Group::permutation("s4").unwrap());
        let q = QuotientSpec::from_json(
            &serde_json::json!({"kind": "subgroup", "generators": ["(1 2 3)", "(1 2)(3 4)"]}),
            &g,
        )
        .unwrap();
        assert_eq!(q.members().unwrap().len(), 12);
        assert!(
            QuotientSpec::from_json(&serde_json::json!({"kind": "modulus", "modulus": 2}), &g)
                .is_err()
        );
        assert!(QuotientSpec::from_json(&serde_json::json!({"kind": "bogus"}), &g).is_err());
        let key = q.key(&GroupElement::perm_cycles(4, &[&[1, 2]]));
        assert_eq!(key.to_json(), serde_json::json!("(3 4)"));
    }
}
