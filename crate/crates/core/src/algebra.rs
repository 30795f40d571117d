//! Sparse exact arithmetic in the group algebra ℂ[G], restricted to
//! Gaussian-rational coefficients.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::Value;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement, Shape};

/// A finite formal sum `Σ cᵢ·gᵢ`. Zero coefficients are never stored and
/// terms are ordered by the group-element order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<GroupElement, Coefficient>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    /// `1·g`.
    pub fn basis(g: GroupElement) -> Self {
        Self::term(Coefficient::one(), g)
    }

    pub fn term(c: Coefficient, g: GroupElement) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(g, c);
        }
        AlgebraElement { terms }
    }

    /// Sums the given terms; repeated elements are merged and zeros dropped.
    /// Panics if the terms mix groups; see [`AlgebraElement::try_from_terms`].
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Coefficient, GroupElement)>,
    {
        Self::try_from_terms(terms).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Coefficient, GroupElement)>,
    {
        let mut out = AlgebraElement::zero();
        let mut shape: Option<(Shape, GroupElement)> = None;
        for (c, g) in terms {
            match &shape {
                Some((s, first)) if *s != g.shape() => {
                    return Err(Error::GroupMismatch {
                        left: first.to_string(),
                        right: g.to_string(),
                    })
                }
                None => shape = Some((g.shape(), g.clone())),
                _ => {}
            }
            out.add_term(c, g);
        }
        Ok(out)
    }

    /// Adds `c·g` in place, keeping the canonical form.
    pub fn add_term(&mut self, c: Coefficient, g: GroupElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Coefficient, other: &AlgebraElement) {
        if c.is_zero() {
            return;
        }
        for (g, d) in &other.terms {
            self.add_term(c * d, g.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &Coefficient)> + '_ {
        self.terms.iter()
    }

    pub fn support(&self) -> BTreeSet<GroupElement> {
        self.terms.keys().cloned().collect()
    }

    /// Coefficient of `g`; zero when `g` is not in the support.
    pub fn coefficient_of(&self, g: &GroupElement) -> Coefficient {
        self.terms.get(g).cloned().unwrap_or_else(Coefficient::zero)
    }

    fn shape(&self) -> Option<Shape> {
        self.terms.keys().next().map(GroupElement::shape)
    }

    fn check_compatible(&self, other: &AlgebraElement) -> Result<()> {
        match (self.terms.keys().next(), other.terms.keys().next()) {
            (Some(a), Some(b)) if a.shape() != b.shape() => Err(Error::GroupMismatch {
                left: a.to_string(),
                right: b.to_string(),
            }),
            _ => Ok(()),
        }
    }

    /// Whether every term lies in `group`.
    pub fn belongs_to(&self, group: &Group) -> bool {
        self.shape().is_none_or(|s| s == group.shape())
            && self.terms.keys().all(|g| group.contains(g))
    }

    pub fn try_add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_scaled(&Coefficient::one(), other);
        Ok(out)
    }

    pub fn try_sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_scaled(&-Coefficient::one(), other);
        Ok(out)
    }

    pub fn scale(&self, c: &Coefficient) -> AlgebraElement {
        if c.is_zero() {
            return AlgebraElement::zero();
        }
        AlgebraElement {
            terms: self.terms.iter().map(|(g, d)| (g.clone(), c * d)).collect(),
        }
    }

    /// Convolution product, the bilinear extension of the group product.
    pub fn try_mul(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_compatible(other)?;
        let mut out = AlgebraElement::zero();
        for (g, c) in &self.terms {
            for (h, d) in &other.terms {
                out.add_term(c * d, g * h);
            }
        }
        Ok(out)
    }

    /// `x·y − y·x`.
    pub fn try_commutator(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn commutator(&self, other: &AlgebraElement) -> AlgebraElement {
        self.try_commutator(other).unwrap_or_else(|e| panic!("{e}"))
    }

    /// `g·x`. Translation is a bijection on the support, so no merging is needed.
    pub fn left_translate(&self, g: &GroupElement) -> AlgebraElement {
        AlgebraElement {
            terms: self.terms.iter().map(|(h, c)| (g * h, c.clone())).collect(),
        }
    }

    /// `x·g`.
    pub fn right_translate(&self, g: &GroupElement) -> AlgebraElement {
        AlgebraElement {
            terms: self.terms.iter().map(|(h, c)| (h * g, c.clone())).collect(),
        }
    }

    /// `g·x·h` in one pass.
    pub fn sandwich(&self, g: &GroupElement, h: &GroupElement) -> AlgebraElement {
        AlgebraElement {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (&(g * k) * h, c.clone()))
                .collect(),
        }
    }

    /// The sub-sum of the terms whose element satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&GroupElement) -> bool) -> AlgebraElement {
        AlgebraElement {
            terms: self
                .terms
                .iter()
                .filter(|(g, _)| keep(g))
                .map(|(g, c)| (g.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sum of coefficients (the augmentation map ℂ[G] → ℂ).
    pub fn augmentation(&self) -> Coefficient {
        self.terms
            .values()
            .fold(Coefficient::zero(), |acc, c| acc + c.clone())
    }

    /// JSON form: `[[coefficient, element], ...]` in element order.
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("algebra serialization is infallible")
    }

    pub fn from_json(value: &Value, group: &Group) -> Result<AlgebraElement> {
        let items = value.as_array().ok_or_else(|| {
            Error::Spec(format!(
                "algebra element must be an array of [coefficient, element] pairs, got {value}"
            ))
        })?;
        let mut out = AlgebraElement::zero();
        for item in items {
            let pair = item.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                Error::Spec(format!("expected [coefficient, element], got {item}"))
            })?;
            let c: Coefficient = serde_json::from_value(pair[0].clone())
                .map_err(|e| Error::Spec(format!("coefficient {}: {e}", pair[0])))?;
            out.add_term(c, group.parse_element(&pair[1])?);
        }
        Ok(out)
    }
}

impl Serialize for AlgebraElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (g, c) in &self.terms {
            seq.serialize_element(&(c, g))?;
        }
        seq.end()
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            let s = c.to_string();
            let needs_parens = s.contains(['+', 'i']) || (s.contains('-') && !s.starts_with('-'));
            let s = if needs_parens { format!("({s})") } else { s };
            match (i, s.strip_prefix('-')) {
                (0, _) => write!(f, "{s}·{g}")?,
                (_, Some(rest)) => write!(f, " - {rest}·{g}")?,
                (_, None) => write!(f, " + {s}·{g}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Operator forms panic on mixed groups; the `try_*` methods report them.

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(&-Coefficient::one())
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        -&self
    }
}
