//! Concrete group kernels: the discrete Heisenberg group, free abelian groups
//! ℤⁿ and finite permutation groups. Every element is stored in normal form,
//! so equality of payloads is equality in the group.

mod groupoid;
pub(crate) mod perm;
mod quotient;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Mul;

use num_integer::Integer;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub use groupoid::Arrow;
pub use quotient::{CosetKey, QuotientKind, QuotientSpec};

/// A group element in normal form.
///
/// The derived `Ord` is the fixed total order used for sorting terms of
/// algebra elements and for choosing canonical representatives.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    /// The unitriangular matrix `[[1, a, c], [0, 1, b], [0, 0, 1]]`.
    Heisenberg { a: i64, b: i64, c: i64 },
    /// A vector of ℤⁿ, written additively.
    Vector(Vec<i64>),
    /// A permutation in 0-based one-line notation.
    Perm(Vec<u8>),
}

/// Which ambient group an element lives in; elements of different shapes
/// never multiply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Heisenberg,
    Vector(usize),
    Perm(usize),
}

impl GroupElement {
    pub fn heisenberg(a: i64, b: i64, c: i64) -> Self {
        GroupElement::Heisenberg { a, b, c }
    }

    pub fn vector(v: impl Into<Vec<i64>>) -> Self {
        GroupElement::Vector(v.into())
    }

    /// A permutation from 1-based one-line notation. Panics if `images` is not
    /// a bijection of `{1..n}`; use [`Group::parse_element`] for untrusted input.
    pub fn perm_one_line(images: &[u8]) -> Self {
        let p: Vec<u8> = images.iter().map(|&i| i - 1).collect();
        assert!(perm::is_bijection(&p), "not a permutation: {images:?}");
        GroupElement::Perm(p)
    }

    /// A permutation of degree `n` from 1-based cycles.
    pub fn perm_cycles(n: usize, cycles: &[&[u8]]) -> Self {
        GroupElement::Perm(perm::from_cycles(n, cycles))
    }

    pub fn shape(&self) -> Shape {
        match self {
            GroupElement::Heisenberg { .. } => Shape::Heisenberg,
            GroupElement::Vector(v) => Shape::Vector(v.len()),
            GroupElement::Perm(p) => Shape::Perm(p.len()),
        }
    }

    /// The identity of the ambient group this element lives in.
    pub fn identity_like(&self) -> Self {
        match self {
            GroupElement::Heisenberg { .. } => GroupElement::heisenberg(0, 0, 0),
            GroupElement::Vector(v) => GroupElement::Vector(vec![0; v.len()]),
            GroupElement::Perm(p) => GroupElement::Perm(perm::identity(p.len())),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Heisenberg { a, b, c } => *a == 0 && *b == 0 && *c == 0,
            GroupElement::Vector(v) => v.iter().all(|&x| x == 0),
            GroupElement::Perm(p) => p.iter().enumerate().all(|(i, &x)| i == x as usize),
        }
    }

    pub fn try_mul(&self, other: &GroupElement) -> Result<GroupElement> {
        match (self, other) {
            (
                GroupElement::Heisenberg { a, b, c },
                GroupElement::Heisenberg { a: x, b: y, c: z },
            ) => Ok(GroupElement::Heisenberg {
                a: a + x,
                b: b + y,
                c: c + z + a * y,
            }),
            (GroupElement::Vector(u), GroupElement::Vector(v)) if u.len() == v.len() => Ok(
                GroupElement::Vector(u.iter().zip(v).map(|(x, y)| x + y).collect()),
            ),
            (GroupElement::Perm(p), GroupElement::Perm(q)) if p.len() == q.len() => {
                Ok(GroupElement::Perm(perm::compose(p, q)))
            }
            _ => Err(Error::GroupMismatch {
                left: self.to_string(),
                right: other.to_string(),
            }),
        }
    }

    pub fn inv(&self) -> GroupElement {
        match self {
            GroupElement::Heisenberg { a, b, c } => GroupElement::Heisenberg {
                a: -a,
                b: -b,
                c: a * b - c,
            },
            GroupElement::Vector(v) => GroupElement::Vector(v.iter().map(|x| -x).collect()),
            GroupElement::Perm(p) => GroupElement::Perm(perm::inverse(p)),
        }
    }

    /// `gⁿ` for any integer `n`.
    pub fn pow(&self, n: i64) -> GroupElement {
        match self {
            // xⁿ has a closed form in both infinite kernels.
            GroupElement::Heisenberg { a, b, c } => GroupElement::Heisenberg {
                a: a * n,
                b: b * n,
                c: c * n + a * b * (n * (n - 1) / 2),
            },
            GroupElement::Vector(v) => GroupElement::Vector(v.iter().map(|x| x * n).collect()),
            GroupElement::Perm(_) => {
                let base = if n < 0 { self.inv() } else { self.clone() };
                let mut acc = self.identity_like();
                for _ in 0..n.unsigned_abs() {
                    acc = &acc * &base;
                }
                acc
            }
        }
    }

    /// `t·a·t⁻¹` where `self` is `t`.
    pub fn conjugate(&self, a: &GroupElement) -> Result<GroupElement> {
        self.try_mul(a)?.try_mul(&self.inv())
    }

    /// `g h g⁻¹ h⁻¹`.
    pub fn commutator(&self, h: &GroupElement) -> Result<GroupElement> {
        self.try_mul(h)?.try_mul(&self.inv())?.try_mul(&h.inv())
    }

    pub fn commutes_with(&self, h: &GroupElement) -> Result<bool> {
        Ok(self.try_mul(h)? == h.try_mul(self)?)
    }

    /// JSON payload: Heisenberg `[a,b,c]`, ℤⁿ `[x1..xn]`, permutations as 1-based
    /// one-line arrays.
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("element serialization is infallible")
    }
}

impl Mul for &GroupElement {
    type Output = GroupElement;

    /// Panics when the operands belong to different groups; see
    /// [`GroupElement::try_mul`].
    fn mul(self, rhs: &GroupElement) -> GroupElement {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Heisenberg { a, b, c } => write!(f, "({a},{b},{c})"),
            GroupElement::Vector(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            GroupElement::Perm(p) => f.write_str(&perm::cycle_string(p)),
        }
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GroupElement::Heisenberg { a, b, c } => [a, b, c].serialize(serializer),
            GroupElement::Vector(v) => v.serialize(serializer),
            GroupElement::Perm(p) => {
                let mut seq = serializer.serialize_seq(Some(p.len()))?;
                for &i in p {
                    seq.serialize_element(&(i as u32 + 1))?;
                }
                seq.end()
            }
        }
    }
}

/// One exponentiated letter of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Syllable {
    pub letter: usize,
    pub exp: i64,
}

impl Syllable {
    pub fn new(letter: usize, exp: i64) -> Self {
        Syllable { letter, exp }
    }
}

/// A letter of a kernel's word alphabet. The first letters are the
/// generators; later ones are shorthands defined by words in earlier letters
/// (for example the central commutator `z = [x, y]` of the Heisenberg group).
#[derive(Clone, Debug)]
pub struct Letter {
    pub name: String,
    pub element: GroupElement,
    /// The letter commutes with every group element.
    pub central: bool,
    pub definition: Option<Vec<Syllable>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Heisenberg,
    FreeAbelian(usize),
    Permutation { name: String, degree: usize },
}

#[derive(Clone, Debug)]
struct FiniteData {
    words: BTreeMap<GroupElement, Vec<usize>>,
    center: Vec<GroupElement>,
    derived: BTreeSet<GroupElement>,
}

/// A supported group together with its generating set, word alphabet and
/// relator data.
#[derive(Clone, Debug)]
pub struct Group {
    kind: GroupKind,
    letters: Vec<Letter>,
    num_generators: usize,
    finite: Option<FiniteData>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Group {}

const MAX_PERM_DEGREE: usize = 7;

impl Group {
    /// The discrete Heisenberg group with generators `x = (1,0,0)`, `y = (0,1,0)`.
    pub fn heisenberg() -> Self {
        let x = GroupElement::heisenberg(1, 0, 0);
        let y = GroupElement::heisenberg(0, 1, 0);
        let z = GroupElement::heisenberg(0, 0, 1);
        let letters = vec![
            Letter {
                name: "x".into(),
                element: x,
                central: false,
                definition: None,
            },
            Letter {
                name: "y".into(),
                element: y,
                central: false,
                definition: None,
            },
            Letter {
                name: "z".into(),
                element: z,
                central: true,
                definition: Some(vec![
                    Syllable::new(0, 1),
                    Syllable::new(1, 1),
                    Syllable::new(0, -1),
                    Syllable::new(1, -1),
                ]),
            },
        ];
        Group {
            kind: GroupKind::Heisenberg,
            letters,
            num_generators: 2,
            finite: None,
        }
    }

    pub fn free_abelian(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnknownGroup("zn:0".into()));
        }
        let letters = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                Letter {
                    name: format!("e{}", i + 1),
                    element: GroupElement::Vector(v),
                    central: true,
                    definition: None,
                }
            })
            .collect();
        Ok(Group {
            kind: GroupKind::FreeAbelian(n),
            letters,
            num_generators: n,
            finite: None,
        })
    }

    /// Finite permutation groups by name: `s<n>` (symmetric), `a<n>`
    /// (alternating), `d<n>` (dihedral on an n-gon), `c<n>` (cyclic), with
    /// degree at most 7.
    pub fn permutation(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownGroup(format!("perm:{name}"));
        let (family, degree) = name.split_at(1.min(name.len()));
        let n: usize = degree.parse().map_err(|_| unknown())?;
        if !(1..=MAX_PERM_DEGREE).contains(&n) {
            return Err(unknown());
        }
        let full_cycle: Vec<u8> = (1..=n as u8).collect();
        let gens: Vec<Vec<u8>> = match family {
            "s" if n >= 2 => vec![
                perm::from_cycles(n, &[&[1, 2]]),
                perm::from_cycles(n, &[&full_cycle]),
            ],
            "a" if n >= 3 => {
                let mut gens = vec![perm::from_cycles(n, &[&[1, 2, 3]])];
                if n > 3 {
                    if n % 2 == 1 {
                        gens.push(perm::from_cycles(n, &[&full_cycle]));
                    } else {
                        let tail: Vec<u8> = (2..=n as u8).collect();
                        gens.push(perm::from_cycles(n, &[&tail]));
                    }
                }
                gens
            }
            "d" if n >= 3 => {
                let pairs: Vec<[u8; 2]> = (1..=n as u8 / 2)
                    .map(|i| [i + 1, n as u8 + 1 - i])
                    .filter(|[p, q]| p < q)
                    .collect();
                let refl: Vec<&[u8]> = pairs.iter().map(|p| p.as_slice()).collect();
                vec![
                    perm::from_cycles(n, &[&full_cycle]),
                    perm::from_cycles(n, &refl),
                ]
            }
            "c" if n >= 2 => vec![perm::from_cycles(n, &[&full_cycle])],
            _ => return Err(unknown()),
        };
        Ok(Self::from_permutations(name, n, gens))
    }

    fn from_permutations(name: &str, degree: usize, gens: Vec<Vec<u8>>) -> Self {
        let words = perm::enumerate_with_words(degree, &gens);
        let elements: Vec<&Vec<u8>> = words.keys().collect();
        let center: Vec<GroupElement> = elements
            .iter()
            .filter(|g| {
                gens.iter()
                    .all(|s| perm::compose(g, s) == perm::compose(s, g))
            })
            .map(|g| GroupElement::Perm((*g).clone()))
            .collect();
        // G' is the normal closure of the commutators of generators.
        let mut commutators = Vec::new();
        for s in &gens {
            for t in &gens {
                let c = perm::compose(
                    &perm::compose(&perm::compose(s, t), &perm::inverse(s)),
                    &perm::inverse(t),
                );
                for g in &elements {
                    commutators.push(perm::compose(&perm::compose(g, &c), &perm::inverse(g)));
                }
            }
        }
        let commutators: BTreeSet<Vec<u8>> = commutators.into_iter().collect();
        let derived = perm::subgroup_generated(degree, &commutators)
            .into_iter()
            .map(GroupElement::Perm)
            .collect();
        let letters = gens
            .iter()
            .enumerate()
            .map(|(i, g)| Letter {
                name: format!("g{}", i + 1),
                element: GroupElement::Perm(g.clone()),
                central: false,
                definition: None,
            })
            .collect();
        let words = words
            .into_iter()
            .map(|(g, w)| (GroupElement::Perm(g), w))
            .collect();
        Group {
            kind: GroupKind::Permutation {
                name: name.to_string(),
                degree,
            },
            num_generators: gens.len(),
            letters,
            finite: Some(FiniteData {
                words,
                center,
                derived,
            }),
        }
    }

    /// Parses a selector: `heisenberg`, `zn:<n>` or `perm:<name>`.
    pub fn from_selector(selector: &str) -> Result<Self> {
        let s = selector.trim();
        if s == "heisenberg" {
            return Ok(Group::heisenberg());
        }
        if let Some(n) = s.strip_prefix("zn:") {
            let n = n
                .parse()
                .map_err(|_| Error::UnknownGroup(selector.to_string()))?;
            return Group::free_abelian(n);
        }
        if let Some(name) = s.strip_prefix("perm:") {
            return Group::permutation(name);
        }
        Err(Error::UnknownGroup(selector.to_string()))
    }

    pub fn selector(&self) -> String {
        match &self.kind {
            GroupKind::Heisenberg => "heisenberg".into(),
            GroupKind::FreeAbelian(n) => format!("zn:{n}"),
            GroupKind::Permutation { name, .. } => format!("perm:{name}"),
        }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn identity(&self) -> GroupElement {
        match &self.kind {
            GroupKind::Heisenberg => GroupElement::heisenberg(0, 0, 0),
            GroupKind::FreeAbelian(n) => GroupElement::Vector(vec![0; *n]),
            GroupKind::Permutation { degree, .. } => GroupElement::Perm(perm::identity(*degree)),
        }
    }

    pub fn shape(&self) -> Shape {
        match &self.kind {
            GroupKind::Heisenberg => Shape::Heisenberg,
            GroupKind::FreeAbelian(n) => Shape::Vector(*n),
            GroupKind::Permutation { degree, .. } => Shape::Perm(*degree),
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.shape() == self.shape() && self.finite.as_ref().is_none_or(|f| f.words.contains_key(g))
    }

    pub fn is_finite(&self) -> bool {
        self.finite.is_some()
    }

    /// All elements in ascending order, for finite groups.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        self.finite
            .as_ref()
            .map(|f| f.words.keys().cloned().collect())
    }

    pub fn order(&self) -> Option<usize> {
        self.finite.as_ref().map(|f| f.words.len())
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn generators(&self) -> impl Iterator<Item = &GroupElement> + '_ {
        self.letters[..self.num_generators]
            .iter()
            .map(|l| &l.element)
    }

    pub fn generator_names(&self) -> impl Iterator<Item = &str> + '_ {
        self.letters[..self.num_generators]
            .iter()
            .map(|l| l.name.as_str())
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generator_names().position(|n| n == name)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// A word for `g` in the letter alphabet.
    pub fn word(&self, g: &GroupElement) -> Result<Vec<Syllable>> {
        if !self.contains(g) {
            return Err(self.foreign(g));
        }
        Ok(match (g, &self.finite) {
            (GroupElement::Heisenberg { a, b, c }, _) => {
                // (a,b,c) = x^a y^b z^(c - ab)
                [(0, *a), (1, *b), (2, c - a * b)]
                    .into_iter()
                    .filter(|&(_, e)| e != 0)
                    .map(|(l, e)| Syllable::new(l, e))
                    .collect()
            }
            (GroupElement::Vector(v), _) => v
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(l, &e)| Syllable::new(l, e))
                .collect(),
            (GroupElement::Perm(_), Some(f)) => {
                f.words[g].iter().map(|&l| Syllable::new(l, 1)).collect()
            }
            (GroupElement::Perm(_), None) => unreachable!("permutation kernels are finite"),
        })
    }

    /// Evaluates a word in the letter alphabet.
    pub fn eval_word(&self, word: &[Syllable]) -> GroupElement {
        word.iter().fold(self.identity(), |acc, s| {
            &acc * &self.letters[s.letter].element.pow(s.exp)
        })
    }

    /// Defining relators whose images under a derivation must vanish, for the
    /// infinite kernels. Finite kernels are validated against the full
    /// multiplication table instead, so this is empty for them.
    pub fn relators(&self) -> Vec<Vec<Syllable>> {
        let comm = |p: Vec<Syllable>, q: Vec<Syllable>| -> Vec<Syllable> {
            let inv = |w: &[Syllable]| -> Vec<Syllable> {
                w.iter()
                    .rev()
                    .map(|s| Syllable::new(s.letter, -s.exp))
                    .collect()
            };
            let mut out = p.clone();
            out.extend(q.iter().copied());
            out.extend(inv(&p));
            out.extend(inv(&q));
            out
        };
        match &self.kind {
            GroupKind::Heisenberg => {
                let x = vec![Syllable::new(0, 1)];
                let y = vec![Syllable::new(1, 1)];
                let z = comm(x.clone(), y.clone());
                vec![comm(x, z.clone()), comm(y, z)]
            }
            GroupKind::FreeAbelian(n) => {
                let mut rels = Vec::new();
                for i in 0..*n {
                    for j in i + 1..*n {
                        rels.push(comm(vec![Syllable::new(i, 1)], vec![Syllable::new(j, 1)]));
                    }
                }
                rels
            }
            GroupKind::Permutation { .. } => Vec::new(),
        }
    }

    pub(crate) fn foreign(&self, g: &GroupElement) -> Error {
        Error::GroupMismatch {
            left: g.to_string(),
            right: self.selector(),
        }
    }

    /// Parses an element from its JSON payload. Permutations may also be given
    /// in cycle notation, e.g. `"(1 2)(3 4)"`.
    pub fn parse_element(&self, value: &Value) -> Result<GroupElement> {
        let bad = |reason: String| Error::InvalidElement {
            group: self.selector(),
            reason,
        };
        let ints = |v: &Value| -> Result<Vec<i64>> {
            v.as_array()
                .ok_or_else(|| bad(format!("expected an integer array, got {v}")))?
                .iter()
                .map(|x| {
                    x.as_i64()
                        .ok_or_else(|| bad(format!("non-integer entry {x}")))
                })
                .collect()
        };
        let g = match &self.kind {
            GroupKind::Heisenberg => {
                let v = ints(value)?;
                match v.as_slice() {
                    [a, b, c] => GroupElement::heisenberg(*a, *b, *c),
                    _ => return Err(bad(format!("expected [a,b,c], got {value}"))),
                }
            }
            GroupKind::FreeAbelian(n) => {
                let v = ints(value)?;
                if v.len() != *n {
                    return Err(bad(format!("expected {n} entries, got {value}")));
                }
                GroupElement::Vector(v)
            }
            GroupKind::Permutation { degree, .. } => {
                let p = if let Some(s) = value.as_str() {
                    perm::parse_cycles(*degree, s).map_err(bad)?
                } else {
                    let v = ints(value)?;
                    if v.len() != *degree || v.iter().any(|&i| i < 1 || i > *degree as i64) {
                        return Err(bad(format!(
                            "expected a permutation of 1..{degree}, got {value}"
                        )));
                    }
                    let p: Vec<u8> = v.iter().map(|&i| (i - 1) as u8).collect();
                    if !perm::is_bijection(&p) {
                        return Err(bad(format!("not a bijection: {value}")));
                    }
                    p
                };
                GroupElement::Perm(p)
            }
        };
        if !self.contains(&g) {
            return Err(bad(format!("{g} is not in the group")));
        }
        Ok(g)
    }

    pub fn is_central(&self, z: &GroupElement) -> bool {
        match z {
            GroupElement::Heisenberg { a, b, .. } => *a == 0 && *b == 0,
            GroupElement::Vector(_) => true,
            GroupElement::Perm(_) => self
                .generators()
                .all(|s| s.commutes_with(z).unwrap_or(false)),
        }
    }

    /// Whether `a` and `b` are conjugate in this group.
    ///
    /// Heisenberg: `(a,b,c)` conjugates to `(a,b,c + αb − βa)` under
    /// `(α,β,γ)`, so the class of a non-central element is
    /// `{(a,b,c') : c' ≡ c mod gcd(a,b)}` and central elements are singletons.
    /// Permutation groups are searched over every conjugator in the group.
    pub fn is_conjugate(&self, a: &GroupElement, b: &GroupElement) -> bool {
        match (a, b) {
            (GroupElement::Perm(_), GroupElement::Perm(_)) => {
                let Some(f) = &self.finite else { return false };
                f.words
                    .keys()
                    .any(|t| t.conjugate(a).map(|c| &c == b).unwrap_or(false))
            }
            _ => self.class_rep(a) == self.class_rep(b),
        }
    }

    /// Canonical representative of the conjugacy class of `g`: the smallest
    /// class member in the fixed element order (Heisenberg: `c` reduced into
    /// `[0, gcd(a,b))`).
    pub fn class_rep(&self, g: &GroupElement) -> GroupElement {
        match g {
            GroupElement::Heisenberg { a, b, c } => {
                let d = a.gcd(b);
                if d == 0 {
                    g.clone()
                } else {
                    GroupElement::heisenberg(*a, *b, c.rem_euclid(d))
                }
            }
            GroupElement::Vector(_) => g.clone(),
            GroupElement::Perm(_) => self
                .conjugacy_class(g)
                .into_iter()
                .next()
                .unwrap_or_else(|| g.clone()),
        }
    }

    /// The full conjugacy class, for finite groups; `{g}` for ℤⁿ. Empty for
    /// non-central Heisenberg elements, whose classes are infinite.
    pub fn conjugacy_class(&self, g: &GroupElement) -> BTreeSet<GroupElement> {
        match (&self.finite, g) {
            (Some(f), _) => f.words.keys().filter_map(|t| t.conjugate(g).ok()).collect(),
            (None, GroupElement::Heisenberg { a: 0, b: 0, .. })
            | (None, GroupElement::Vector(_)) => BTreeSet::from([g.clone()]),
            (None, _) => BTreeSet::new(),
        }
    }

    /// Membership in the commutator subgroup G′.
    pub fn in_derived_subgroup(&self, g: &GroupElement) -> bool {
        match g {
            // H′ is the c-axis.
            GroupElement::Heisenberg { a, b, .. } => *a == 0 && *b == 0,
            GroupElement::Vector(v) => v.iter().all(|&x| x == 0),
            GroupElement::Perm(_) => self.finite.as_ref().is_some_and(|f| f.derived.contains(g)),
        }
    }

    /// The commutator subgroup, enumerated; finite groups only.
    pub fn derived_subgroup(&self) -> Option<&BTreeSet<GroupElement>> {
        self.finite.as_ref().map(|f| &f.derived)
    }

    /// The centre, enumerated; finite groups only.
    pub fn center(&self) -> Option<&[GroupElement]> {
        self.finite.as_ref().map(|f| f.center.as_slice())
    }

    pub fn describe_center(&self) -> String {
        match &self.kind {
            GroupKind::Heisenberg => "{(0,0,c) : c in Z} (the c-axis, infinite cyclic)".into(),
            GroupKind::FreeAbelian(n) => format!("the whole group Z^{n}"),
            GroupKind::Permutation { .. } => describe_set(self.center().unwrap_or(&[])),
        }
    }

    pub fn describe_derived(&self) -> String {
        match &self.kind {
            GroupKind::Heisenberg => {
                "{(0,0,c) : c in Z} (equal to the centre, generated by z = [x,y])".into()
            }
            GroupKind::FreeAbelian(_) => "trivial subgroup {0}".into(),
            GroupKind::Permutation { .. } => {
                let d: Vec<GroupElement> = self
                    .derived_subgroup()
                    .map(|s| s.iter().cloned().collect())
                    .unwrap_or_default();
                describe_set(&d)
            }
        }
    }

    /// Rank of the free part of the abelianization G/G′, i.e. the number of
    /// values a homomorphism `G → (ℂ,+)` is determined by.
    pub fn abelian_rank(&self) -> usize {
        match &self.kind {
            GroupKind::Heisenberg => 2,
            GroupKind::FreeAbelian(n) => *n,
            // Homomorphisms from a finite group into a torsion-free group vanish.
            GroupKind::Permutation { .. } => 0,
        }
    }

    /// Coordinates of `g` in the free part of G/G′.
    pub fn abelian_coords(&self, g: &GroupElement) -> Vec<i64> {
        match g {
            GroupElement::Heisenberg { a, b, .. } => vec![*a, *b],
            GroupElement::Vector(v) => v.clone(),
            GroupElement::Perm(_) => Vec::new(),
        }
    }
}

fn describe_set(elems: &[GroupElement]) -> String {
    const LIMIT: usize = 24;
    let mut parts: Vec<String> = elems.iter().take(LIMIT).map(|g| g.to_string()).collect();
    if elems.len() > LIMIT {
        parts.push("...".into());
    }
    format!("order {}: {{{}}}", elems.len(), parts.join(", "))
}
