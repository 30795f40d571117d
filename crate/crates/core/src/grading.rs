//! The grading of the derivation algebra by an abelian quotient G/N.
//!
//! A derivation's character is supported on finitely many groupoid
//! components, and every conjugacy class lies in a single coset of N when
//! G/N is abelian. Grouping the components by coset splits each derivation
//! into finitely many homogeneous pieces, and brackets add degrees.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::AlgebraElement;
use crate::coeff::Coefficient;
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::group::{CosetKey, Group, GroupElement, GroupKind, QuotientSpec};
use crate::par::Execution;

/// A group with a normal subgroup N such that G/N is abelian and nontrivial.
#[derive(Clone, Debug)]
pub struct GradingSetup {
    quotient: QuotientSpec,
}

impl GradingSetup {
    /// Rejects quotients with a single coset: no generator may leave N.
    pub fn new(quotient: QuotientSpec) -> Result<Self> {
        let id = quotient.identity_key();
        if quotient.group().generators().all(|s| quotient.key(s) == id) {
            let group = quotient.group();
            let reason = if group.is_finite()
                && group.derived_subgroup().map(|d| d.len()) == group.order()
            {
                format!("{} is perfect, G = G'", group.selector())
            } else {
                format!("N = G for {}", quotient.describe())
            };
            return Err(Error::TrivialGrading(reason));
        }
        Ok(GradingSetup { quotient })
    }

    /// Grading by the abelianization, N = G′.
    pub fn derived(group: &Arc<Group>) -> Result<Self> {
        Self::new(QuotientSpec::derived(group)?)
    }

    pub fn group(&self) -> &Arc<Group> {
        self.quotient.group()
    }

    pub fn quotient(&self) -> &QuotientSpec {
        &self.quotient
    }

    pub fn key(&self, g: &GroupElement) -> CosetKey {
        self.quotient.key(g)
    }

    pub fn identity_key(&self) -> CosetKey {
        self.quotient.identity_key()
    }

    /// The degree `k + l` of a bracket of pieces of degrees `k` and `l`.
    pub fn compose_keys(&self, k: &CosetKey, l: &CosetKey) -> CosetKey {
        self.quotient.compose(k, l)
    }
}

/// Sources `s⁻¹k` of the arrows `(k, s)` carrying the generator images. Every
/// arrow in the character's support lies in the component of one of them.
fn generator_sources(d: &Derivation) -> impl Iterator<Item = GroupElement> + '_ {
    d.group().generators().zip(d.images()).flat_map(|(s, ds)| {
        let s_inv = s.inv();
        ds.terms().map(move |(k, _)| &s_inv * k).collect::<Vec<_>>()
    })
}

/// The finitely many cosets containing the support of `d`'s character.
pub fn support_cosets(d: &Derivation, setup: &GradingSetup) -> BTreeSet<CosetKey> {
    generator_sources(d).map(|g| setup.key(&g)).collect()
}

/// Canonical representatives of the conjugacy classes whose groupoid
/// components contain the support of `d`'s character.
pub fn support_classes(d: &Derivation) -> BTreeSet<GroupElement> {
    let group = d.group();
    generator_sources(d).map(|g| group.class_rep(&g)).collect()
}

/// The homogeneous piece of `d` of degree `key`: the character restricted to
/// arrows whose source lies in that coset.
pub fn project(d: &Derivation, key: &CosetKey, setup: &GradingSetup) -> Derivation {
    let group = d.group();
    let images = group
        .generators()
        .zip(d.images())
        .map(|(s, ds)| {
            let s_inv = s.inv();
            ds.filter(|k| setup.key(&(&s_inv * k)) == *key)
        })
        .collect();
    Derivation::from_images_unchecked(Arc::clone(group), images)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDecomposition {
    pub base: Derivation,
    /// Nonzero homogeneous pieces by degree.
    pub components: BTreeMap<CosetKey, Derivation>,
}

impl GradedDecomposition {
    pub fn keys(&self) -> impl Iterator<Item = &CosetKey> + '_ {
        self.components.keys()
    }

    /// Σ components, which equals `base`.
    pub fn sum(&self) -> Derivation {
        self.components
            .values()
            .fold(Derivation::zero(self.base.group()), |acc, d| {
                acc.add(d).expect("components share the base group")
            })
    }

    /// `{"base": <spec>, "components": [{"key": ..., "derivation": <spec>}, ...]}`
    /// with keys in ascending order.
    pub fn to_json(&self) -> Value {
        let components: Vec<Value> = self
            .components
            .iter()
            .map(|(k, d)| json!({"key": k.to_json(), "derivation": d.to_spec_json()}))
            .collect();
        json!({"base": self.base.to_spec_json(), "components": components})
    }

    pub fn from_json(value: &Value, setup: &GradingSetup) -> Result<Self> {
        let group = setup.group();
        let base = Derivation::from_spec_json(
            value
                .get("base")
                .ok_or_else(|| Error::Spec("decomposition is missing \"base\"".into()))?,
            group,
        )?;
        let mut components = BTreeMap::new();
        let items = value
            .get("components")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Spec("decomposition is missing \"components\"".into()))?;
        for item in items {
            let d = Derivation::from_spec_json(
                item.get("derivation")
                    .ok_or_else(|| Error::Spec("component is missing \"derivation\"".into()))?,
                group,
            )?;
            let keys = support_cosets(&d, setup);
            let key = match keys.len() {
                1 => keys.into_iter().next().expect("one key"),
                _ => return Err(Error::Spec("component is not homogeneous".into())),
            };
            if item.get("key") != Some(&key.to_json()) {
                return Err(Error::Spec(format!(
                    "component key does not match its support {key}"
                )));
            }
            components.insert(key, d);
        }
        Ok(GradedDecomposition { base, components })
    }
}

/// Splits `d` into its homogeneous pieces, projecting each degree in parallel.
pub fn decompose(d: &Derivation, setup: &GradingSetup) -> GradedDecomposition {
    decompose_with(d, setup, Execution::default())
}

pub fn decompose_with(
    d: &Derivation,
    setup: &GradingSetup,
    exec: Execution,
) -> GradedDecomposition {
    let keys: Vec<CosetKey> = support_cosets(d, setup).into_iter().collect();
    let pieces = exec.map_items(&keys, |k| project(d, k, setup));
    let components = keys
        .into_iter()
        .zip(pieces)
        .filter(|(_, p)| !p.is_zero())
        .collect();
    GradedDecomposition {
        base: d.clone(),
        components,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureEntry {
    pub left: CosetKey,
    pub right: CosetKey,
    pub expected: CosetKey,
    pub found: BTreeSet<CosetKey>,
    pub closed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub entries: Vec<ClosureEntry>,
}

impl ClosureReport {
    pub fn all_closed(&self) -> bool {
        self.entries.iter().all(|e| e.closed)
    }
}

/// For each pair of homogeneous pieces of `d` and `p`, checks that their
/// bracket is homogeneous of the summed degree.
pub fn check_bracket_closure(
    d: &Derivation,
    p: &Derivation,
    setup: &GradingSetup,
) -> Result<ClosureReport> {
    if d.group() != p.group() {
        return Err(Error::GroupMismatch {
            left: d.group().selector(),
            right: p.group().selector(),
        });
    }
    let left = decompose(d, setup);
    let right = decompose(p, setup);
    let mut entries = Vec::new();
    for (k, dk) in &left.components {
        for (l, pl) in &right.components {
            let expected = setup.compose_keys(k, l);
            let found = support_cosets(&dk.bracket(pl)?, setup);
            let closed = found.iter().all(|f| *f == expected);
            entries.push(ClosureEntry {
                left: k.clone(),
                right: l.clone(),
                expected,
                found,
                closed,
            });
        }
    }
    Ok(ClosureReport { entries })
}

/// Generators of the centre, described finitely.
pub fn center_generators(group: &Group) -> Vec<GroupElement> {
    match group.kind() {
        GroupKind::Heisenberg => vec![GroupElement::heisenberg(0, 0, 1)],
        GroupKind::FreeAbelian(_) => group.generators().cloned().collect(),
        GroupKind::Permutation { .. } => group.center().map(<[_]>::to_vec).unwrap_or_default(),
    }
}

/// `Z(G) ≤ G′`.
pub fn is_stem(group: &Group) -> bool {
    center_generators(group)
        .iter()
        .all(|z| group.in_derived_subgroup(z))
}

/// Degree of the central derivation `g ↦ τ(g)·gz`: every arrow `(gz, g)` in
/// its support has source `z`.
pub fn central_component_key(
    tau: &[Coefficient],
    z: &GroupElement,
    setup: &GradingSetup,
) -> Result<CosetKey> {
    Derivation::central(setup.group(), tau, z)?;
    Ok(setup.key(z))
}

#[derive(Clone, Debug, Serialize)]
pub struct ZDerReport {
    pub group: String,
    pub stem: bool,
    /// Number of basic central derivations `d_{τᵢ, z}` combined in the demo.
    pub central_derivations: usize,
    pub component_keys: Vec<CosetKey>,
    pub non_identity_keys: usize,
    /// Every component equals the sum of the basic central derivations of
    /// its degree, so each homogeneous piece is again central.
    pub components_are_central: bool,
}

/// Sums the basic central derivations `d_{eᵢ*, z}` over a generating set of
/// the centre and decomposes the result over G/G′.
pub fn zder_grading_demo(group: &Arc<Group>) -> Result<ZDerReport> {
    let setup = GradingSetup::derived(group)?;
    let rank = group.abelian_rank();
    let mut basic = Vec::new();
    for z in center_generators(group).iter().filter(|z| !z.is_identity()) {
        for i in 0..rank {
            let tau: Vec<Coefficient> = (0..rank)
                .map(|j| Coefficient::from_int(i64::from(i == j)))
                .collect();
            basic.push((setup.key(z), Derivation::central(group, &tau, z)?));
        }
    }
    let total = basic
        .iter()
        .try_fold(Derivation::zero(group), |acc, (_, d)| acc.add(d))?;
    let decomposition = decompose(&total, &setup);
    let mut components_are_central = true;
    for (k, piece) in &decomposition.components {
        let expected = basic
            .iter()
            .filter(|(key, _)| key == k)
            .try_fold(Derivation::zero(group), |acc, (_, d)| acc.add(d))?;
        components_are_central &= *piece == expected;
    }
    let id = setup.identity_key();
    let component_keys: Vec<CosetKey> = decomposition.keys().cloned().collect();
    Ok(ZDerReport {
        group: group.selector(),
        stem: is_stem(group),
        central_derivations: basic.len(),
        non_identity_keys: component_keys.iter().filter(|k| **k != id).count(),
        component_keys,
        components_are_central,
    })
}

#[derive(Clone, Debug)]
pub struct InnerGradedDecomposition {
    pub decomposition: GradedDecomposition,
    /// Per degree, the part of `Σ aᵢ·yᵢ` whose elements lie in that coset.
    pub witnesses: BTreeMap<CosetKey, AlgebraElement>,
    /// Each component is the inner derivation of its witness.
    pub certified: bool,
}

/// Decomposes the inner derivation of `Σ aᵢ·yᵢ` and certifies that each
/// homogeneous piece is inner, with the coset-wise part of the sum as witness.
pub fn inner_graded_decomposition(
    terms: &[(Coefficient, GroupElement)],
    setup: &GradingSetup,
) -> Result<InnerGradedDecomposition> {
    let group = setup.group();
    let w = AlgebraElement::try_from_terms(terms.iter().cloned())?;
    let d = Derivation::inner(group, &w)?;
    let decomposition = decompose(&d, setup);
    let mut witnesses: BTreeMap<CosetKey, AlgebraElement> = BTreeMap::new();
    for (g, c) in w.terms() {
        witnesses
            .entry(setup.key(g))
            .or_default()
            .add_term(c.clone(), g.clone());
    }
    let certified = decomposition.components.iter().all(|(k, piece)| {
        witnesses
            .get(k)
            .is_some_and(|wk| piece.is_inner_witness(wk))
    }) && witnesses.iter().all(|(k, wk)| {
        // Witnesses of degrees without a component must give the zero derivation.
        decomposition.components.contains_key(k)
            || Derivation::inner(group, wk).is_ok_and(|d| d.is_zero())
    });
    witnesses.retain(|k, _| decomposition.components.contains_key(k));
    Ok(InnerGradedDecomposition {
        decomposition,
        witnesses,
        certified,
    })
}
