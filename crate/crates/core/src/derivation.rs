//! Derivations of ℂ[G] and their characters on the adjoint-action groupoid.
//!
//! A derivation is stored as its images on the generators; the Leibniz rule
//! determines it everywhere else. The character `χ(k, x)` is read off as the
//! coefficient of `k` in `d(x)`, so characters are always a derived view and
//! local finiteness holds automatically.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::algebra::AlgebraElement;
use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::group::{Arrow, Group, GroupElement, Syllable};

#[derive(Clone)]
pub struct Derivation {
    group: Arc<Group>,
    /// `d(s)` for each generator `s`.
    images: Vec<AlgebraElement>,
    /// `d(ℓ)` for every letter of the word alphabet, generators first.
    letter_images: Vec<AlgebraElement>,
}

impl PartialEq for Derivation {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.images == other.images
    }
}

impl Eq for Derivation {}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (name, img) in self.group.generator_names().zip(&self.images) {
            m.entry(&name, img);
        }
        m.finish()
    }
}

impl Derivation {
    /// Builds a derivation from generator images that are already known to
    /// extend consistently.
    pub(crate) fn from_images_unchecked(group: Arc<Group>, images: Vec<AlgebraElement>) -> Self {
        debug_assert_eq!(images.len(), group.num_generators());
        let mut d = Derivation {
            letter_images: images.clone(),
            images,
            group,
        };
        for letter in &d.group.letters()[d.images.len()..] {
            let def = letter
                .definition
                .as_ref()
                .expect("non-generator letters carry a definition");
            let img = d.apply_word(def);
            d.letter_images.push(img);
        }
        d
    }

    pub fn zero(group: &Arc<Group>) -> Self {
        Self::from_images_unchecked(
            Arc::clone(group),
            vec![AlgebraElement::zero(); group.num_generators()],
        )
    }

    /// A derivation from a user-supplied generator table. The table is
    /// rejected unless it extends to a well-defined derivation: defining
    /// relators must map to zero (infinite kernels), or the Leibniz rule must
    /// hold on the whole multiplication table (finite kernels).
    pub fn from_table(group: &Arc<Group>, images: Vec<AlgebraElement>) -> Result<Self> {
        if images.len() != group.num_generators() {
            return Err(Error::InvalidTable(format!(
                "expected {} generator images, got {}",
                group.num_generators(),
                images.len()
            )));
        }
        if let Some(bad) = images.iter().find(|x| !x.belongs_to(group)) {
            return Err(Error::InvalidTable(format!(
                "image {bad} has terms outside {}",
                group.selector()
            )));
        }
        let d = Self::from_images_unchecked(Arc::clone(group), images);
        d.check_well_defined()?;
        Ok(d)
    }

    fn check_well_defined(&self) -> Result<()> {
        for rel in self.group.relators() {
            let img = self.apply_word(&rel);
            if !img.is_zero() {
                let word: Vec<String> = rel
                    .iter()
                    .map(|s| format!("{}^{}", self.group.letters()[s.letter].name, s.exp))
                    .collect();
                return Err(Error::InvalidTable(format!(
                    "relator {} maps to {img}, not 0",
                    word.join(" ")
                )));
            }
        }
        if let Some(elements) = self.group.elements() {
            let table: BTreeMap<&GroupElement, AlgebraElement> = elements
                .iter()
                .map(|g| (g, self.apply_element(g)))
                .collect();
            for g in &elements {
                for (s, ds) in self.group.generators().zip(&self.images) {
                    let lhs = &table[&(g * s)];
                    let mut rhs = table[g].right_translate(s);
                    rhs.add_scaled(&Coefficient::one(), &ds.left_translate(g));
                    if *lhs != rhs {
                        return Err(Error::InvalidTable(format!(
                            "Leibniz rule fails on {g}·{s}: {lhs} != {rhs}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The inner derivation `x ↦ xa − ax`.
    pub fn inner(group: &Arc<Group>, a: &AlgebraElement) -> Result<Self> {
        if !a.belongs_to(group) {
            return Err(Error::GroupMismatch {
                left: a.to_string(),
                right: group.selector(),
            });
        }
        let images = group.generators().map(|s| a.basis_commutator(s)).collect();
        Ok(Self::from_images_unchecked(Arc::clone(group), images))
    }

    /// The central derivation `g ↦ τ(g)·gz`. `tau` gives the homomorphism
    /// `τ: G → (ℂ,+)` on the free abelianized basis (`x, y` for Heisenberg,
    /// the standard basis for ℤⁿ, empty for finite groups).
    pub fn central(group: &Arc<Group>, tau: &[Coefficient], z: &GroupElement) -> Result<Self> {
        if !group.contains(z) {
            return Err(group.foreign(z));
        }
        if !group.is_central(z) {
            return Err(Error::NotCentral(z.to_string()));
        }
        if tau.len() != group.abelian_rank() {
            return Err(Error::TauArity {
                expected: group.abelian_rank(),
                got: tau.len(),
            });
        }
        let images = group
            .generators()
            .map(|s| AlgebraElement::term(tau_value(group, tau, s), s * z))
            .collect();
        Ok(Self::from_images_unchecked(Arc::clone(group), images))
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn images(&self) -> &[AlgebraElement] {
        &self.images
    }

    pub fn image(&self, generator: usize) -> &AlgebraElement {
        &self.images[generator]
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(AlgebraElement::is_zero)
    }

    fn check_same_group(&self, other: &Derivation) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch {
                left: self.group.selector(),
                right: other.group.selector(),
            });
        }
        Ok(())
    }

    fn zip_images(
        &self,
        other: &Derivation,
        f: impl Fn(&AlgebraElement, &AlgebraElement) -> AlgebraElement,
    ) -> Result<Derivation> {
        self.check_same_group(other)?;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Self::from_images_unchecked(Arc::clone(&self.group), images))
    }

    pub fn add(&self, other: &Derivation) -> Result<Derivation> {
        self.zip_images(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Derivation) -> Result<Derivation> {
        self.zip_images(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Coefficient) -> Derivation {
        let images = self.images.iter().map(|a| a.scale(c)).collect();
        Self::from_images_unchecked(Arc::clone(&self.group), images)
    }

    /// `[d, ∂] = d∘∂ − ∂∘d`, computed on generators.
    pub fn bracket(&self, other: &Derivation) -> Result<Derivation> {
        self.check_same_group(other)?;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(ds, ps)| &self.apply(ps) - &other.apply(ds))
            .collect();
        Ok(Self::from_images_unchecked(Arc::clone(&self.group), images))
    }

    /// `d(sⁿ)` for a single letter.
    fn apply_power(
        &self,
        letter: usize,
        n: i64,
        out: &mut AlgebraElement,
        left: &GroupElement,
        right: &GroupElement,
    ) {
        if n == 0 {
            return;
        }
        let info = &self.group.letters()[letter];
        let ds = &self.letter_images[letter];
        if info.central {
            // s commutes with everything, so d(sⁿ) = n·sⁿ⁻¹·d(s).
            let l = left * &info.element.pow(n - 1);
            out.add_scaled(&Coefficient::from_int(n), &ds.sandwich(&l, right));
            return;
        }
        if n > 0 {
            // Σᵢ sⁱ d(s) sⁿ⁻¹⁻ⁱ
            for i in 0..n {
                let l = left * &info.element.pow(i);
                let r = &info.element.pow(n - 1 - i) * right;
                out.add_scaled(&Coefficient::one(), &ds.sandwich(&l, &r));
            }
        } else {
            // t = s⁻¹ with d(t) = −t·d(s)·t; then Σᵢ tⁱ d(t) t^(|n|−1−i).
            let t = info.element.inv();
            let m = -n;
            for i in 0..m {
                let l = &(left * &t.pow(i)) * &t;
                let r = &(&t * &t.pow(m - 1 - i)) * right;
                out.add_scaled(&-Coefficient::one(), &ds.sandwich(&l, &r));
            }
        }
    }

    /// Leibniz expansion `Σᵢ w₁…wᵢ₋₁ · d(wᵢ) · wᵢ₊₁…wₙ` of a word.
    pub fn apply_word(&self, word: &[Syllable]) -> AlgebraElement {
        let letters = self.group.letters();
        let pieces: Vec<GroupElement> = word
            .iter()
            .map(|s| letters[s.letter].element.pow(s.exp))
            .collect();
        let mut suffix = vec![self.group.identity(); pieces.len() + 1];
        for i in (0..pieces.len()).rev() {
            suffix[i] = &pieces[i] * &suffix[i + 1];
        }
        let mut out = AlgebraElement::zero();
        let mut prefix = self.group.identity();
        for (i, s) in word.iter().enumerate() {
            self.apply_power(s.letter, s.exp, &mut out, &prefix, &suffix[i + 1]);
            prefix = &prefix * &pieces[i];
        }
        out
    }

    /// `d(g)` for a basis element. Panics if `g` is not in the group.
    pub fn apply_element(&self, g: &GroupElement) -> AlgebraElement {
        let word = self.group.word(g).unwrap_or_else(|e| panic!("{e}"));
        self.apply_word(&word)
    }

    /// `d(x)`, extended linearly.
    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (g, c) in x.terms() {
            out.add_scaled(c, &self.apply_element(g));
        }
        out
    }

    pub fn try_apply(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        if !x.belongs_to(&self.group) {
            return Err(Error::GroupMismatch {
                left: x.to_string(),
                right: self.group.selector(),
            });
        }
        Ok(self.apply(x))
    }

    /// `χ(k, x)`: the coefficient of `k` in `d(x)` for the arrow `(k, x)`.
    pub fn character(&self, arrow: &Arrow) -> Coefficient {
        self.apply_element(&arrow.v).coefficient_of(&arrow.u)
    }

    /// `d(xy) = d(x)·y + x·d(y)`, checked exactly.
    pub fn verify_leibniz(&self, x: &AlgebraElement, y: &AlgebraElement) -> bool {
        let lhs = self.apply(&(x * y));
        let rhs = &(&self.apply(x) * y) + &(x * &self.apply(y));
        lhs == rhs
    }

    /// `χ(φ∘ψ) = χ(φ) + χ(ψ)` for composable arrows.
    pub fn verify_char_composition(&self, phi: &Arrow, psi: &Arrow) -> Result<bool> {
        let composite = phi.compose(psi)?;
        Ok(self.character(&composite) == &self.character(phi) + &self.character(psi))
    }

    /// Whether `d = [·, w]`, i.e. `d(s) = s·w − w·s` on every generator.
    pub fn is_inner_witness(&self, w: &AlgebraElement) -> bool {
        w.belongs_to(&self.group)
            && self
                .group
                .generators()
                .zip(&self.images)
                .all(|(s, ds)| w.basis_commutator(s) == *ds)
    }

    /// Searches for `w` supported on `candidates` with `d = [·, w]` by solving
    /// the linear system exactly. `None` means no witness exists on that
    /// support; it says nothing about larger supports.
    pub fn find_inner_witness(&self, candidates: &[GroupElement]) -> Option<AlgebraElement> {
        let candidates: Vec<&GroupElement> = candidates
            .iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let columns: Vec<Vec<AlgebraElement>> = candidates
            .iter()
            .map(|c| {
                let w = AlgebraElement::basis((*c).clone());
                self.group
                    .generators()
                    .map(|s| w.basis_commutator(s))
                    .collect()
            })
            .collect();
        // One equation per (generator, element) pair that can be nonzero.
        let mut rows: BTreeSet<(usize, GroupElement)> = BTreeSet::new();
        for (i, ds) in self.images.iter().enumerate() {
            rows.extend(ds.support().into_iter().map(|g| (i, g)));
            for col in &columns {
                rows.extend(col[i].support().into_iter().map(|g| (i, g)));
            }
        }
        let matrix: Vec<Vec<Coefficient>> = rows
            .iter()
            .map(|(i, g)| {
                columns
                    .iter()
                    .map(|col| col[*i].coefficient_of(g))
                    .collect()
            })
            .collect();
        let rhs: Vec<Coefficient> = rows
            .iter()
            .map(|(i, g)| self.images[*i].coefficient_of(g))
            .collect();
        let solution = solve_linear(matrix, rhs, candidates.len())?;
        Some(AlgebraElement::from_terms(
            solution.into_iter().zip(candidates.into_iter().cloned()),
        ))
    }

    /// Derivation spec JSON in table form.
    pub fn to_spec_json(&self) -> Value {
        let mut images = Map::new();
        for (name, img) in self.group.generator_names().zip(&self.images) {
            images.insert(name.to_string(), img.to_json());
        }
        json!({
            "group": self.group.selector(),
            "kind": "table",
            "images": images,
        })
    }

    /// Parses a derivation spec:
    /// `{"group": ..., "kind": "inner"|"central"|"table", "a": ..., "tau": [...], "z": ..., "images": {...}}`.
    pub fn from_spec_json(value: &Value, group: &Arc<Group>) -> Result<Derivation> {
        let obj = value.as_object().ok_or_else(|| {
            Error::Spec(format!("derivation spec must be an object, got {value}"))
        })?;
        let field = |name: &str| -> Result<&Value> {
            obj.get(name)
                .ok_or_else(|| Error::Spec(format!("derivation spec is missing {name:?}")))
        };
        let allowed: &[&str] = match obj.get("kind").and_then(Value::as_str) {
            Some("inner") => &["group", "kind", "a"],
            Some("central") => &["group", "kind", "tau", "z"],
            Some("table") => &["group", "kind", "images"],
            Some("zero") => &["group", "kind"],
            other => {
                return Err(Error::Spec(format!(
                    "derivation kind must be inner, central, table or zero, got {other:?}"
                )))
            }
        };
        if let Some(extra) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::Spec(format!(
                "unexpected field {extra:?} in derivation spec"
            )));
        }
        if let Some(g) = obj.get("group") {
            let sel = g.as_str().unwrap_or_default();
            if Group::from_selector(sel).ok().as_ref() != Some(group.as_ref()) {
                return Err(Error::GroupMismatch {
                    left: g.to_string(),
                    right: group.selector(),
                });
            }
        }
        match obj["kind"].as_str() {
            Some("inner") => {
                Derivation::inner(group, &AlgebraElement::from_json(field("a")?, group)?)
            }
            Some("central") => {
                let tau: Vec<Coefficient> = serde_json::from_value(field("tau")?.clone())
                    .map_err(|e| Error::Spec(format!("tau: {e}")))?;
                let z = group.parse_element(field("z")?)?;
                Derivation::central(group, &tau, &z)
            }
            Some("table") => {
                let raw = field("images")?.as_object().ok_or_else(|| {
                    Error::Spec("images must map generator names to algebra elements".into())
                })?;
                let mut images = vec![AlgebraElement::zero(); group.num_generators()];
                for (name, img) in raw {
                    let idx = group.generator_index(name).ok_or_else(|| {
                        Error::Spec(format!(
                            "unknown generator {name:?}; generators are {:?}",
                            group.generator_names().collect::<Vec<_>>()
                        ))
                    })?;
                    images[idx] = AlgebraElement::from_json(img, group)?;
                }
                Derivation::from_table(group, images)
            }
            _ => Ok(Derivation::zero(group)),
        }
    }
}

impl AlgebraElement {
    /// `s·w − w·s`, the image of the generator `s` under `[·, w]`.
    fn basis_commutator(&self, s: &GroupElement) -> AlgebraElement {
        let mut out = self.left_translate(s);
        out.add_scaled(&-Coefficient::one(), &self.right_translate(s));
        out
    }
}

/// `τ(g)` for the homomorphism with values `tau` on the abelianized basis.
pub(crate) fn tau_value(group: &Group, tau: &[Coefficient], g: &GroupElement) -> Coefficient {
    group
        .abelian_coords(g)
        .into_iter()
        .zip(tau)
        .fold(Coefficient::zero(), |acc, (k, t)| {
            acc + &Coefficient::from_int(k) * t
        })
}

/// The character of the inner derivation `[·, a]` as an indicator formula:
/// `[a = S(φ)] − [a = T(φ)]`. When source and target both equal `a` the two
/// indicators cancel.
pub fn char_inner_formula(a: &GroupElement, arrow: &Arrow) -> Coefficient {
    let s = i64::from(arrow.source() == *a);
    let t = i64::from(arrow.target() == *a);
    Coefficient::from_int(s - t)
}

/// The character of `[d, ∂]` evaluated by the matrix-product formula
/// `Σₖ α(a,k)β(k,b) − β(a,k)α(k,b)` at the arrow `(a, b)`.
///
/// Only `k` in the supports of `d(b)` and `∂(b)` can contribute, since each
/// summand carries a right factor `β(k,b)` or `α(k,b)`.
pub fn char_bracket_value(d: &Derivation, p: &Derivation, arrow: &Arrow) -> Result<Coefficient> {
    d.check_same_group(p)?;
    let (a, b) = (&arrow.u, &arrow.v);
    let db = d.apply_element(b);
    let pb = p.apply_element(b);
    let ks: BTreeSet<&GroupElement> = db.terms().chain(pb.terms()).map(|(k, _)| k).collect();
    let mut total = Coefficient::zero();
    for k in ks {
        let beta_kb = pb.coefficient_of(k);
        if !beta_kb.is_zero() {
            total += &(&d.apply_element(k).coefficient_of(a) * &beta_kb);
        }
        let alpha_kb = db.coefficient_of(k);
        if !alpha_kb.is_zero() {
            total -= &(&p.apply_element(k).coefficient_of(a) * &alpha_kb);
        }
    }
    Ok(total)
}

/// Exact Gaussian elimination; returns one solution of `matrix · x = rhs`
/// with free variables set to zero, or `None` when inconsistent.
fn solve_linear(
    mut matrix: Vec<Vec<Coefficient>>,
    mut rhs: Vec<Coefficient>,
    cols: usize,
) -> Option<Vec<Coefficient>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..matrix.len()).find(|&r| !matrix[r][col].is_zero()) else {
            continue;
        };
        matrix.swap(row, p);
        rhs.swap(row, p);
        let inv = matrix[row][col].inv()?;
        for c in col..cols {
            matrix[row][c] = &matrix[row][c] * &inv;
        }
        rhs[row] = &rhs[row] * &inv;
        for r in 0..matrix.len() {
            if r == row || matrix[r][col].is_zero() {
                continue;
            }
            let factor = matrix[r][col].clone();
            for c in col..cols {
                let delta = &factor * &matrix[row][c];
                matrix[r][c] -= &delta;
            }
            let delta = &factor * &rhs[row];
            rhs[r] -= &delta;
        }
        pivots.push((row, col));
        row += 1;
    }
    if rhs[row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![Coefficient::zero(); cols];
    for (r, c) in pivots {
        x[c] = rhs[r].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(a: i64, b: i64, c: i64) -> GroupElement {
        GroupElement::heisenberg(a, b, c)
    }

    fn c(n: i64) -> Coefficient {
        Coefficient::from_int(n)
    }

    fn heis() -> Arc<Group> {
        Arc::new(Group::heisenberg())
    }

    fn basis(g: GroupElement) -> AlgebraElement {
        AlgebraElement::basis(g)
    }

    #[test]
    fn inner_images() {
        let g = heis();
        let d = Derivation::inner(&g, &basis(h(1, 0, 0))).unwrap();
        assert_eq!(
            d.image(1),
            &AlgebraElement::from_terms([(c(1), h(1, 1, 0)), (c(-1), h(1, 1, 1))])
        );
        assert!(Derivation::inner(&g, &basis(h(0, 0, 0))).unwrap().is_zero());
        let z2 = Arc::new(Group::free_abelian(2).unwrap());
        let a = AlgebraElement::from_terms([
            (c(3), GroupElement::vector([1, 2])),
            (c(1), GroupElement::vector([0, -1])),
        ]);
        assert!(Derivation::inner(&z2, &a).unwrap().is_zero());
    }

    #[test]
    fn central_images() {
        let g = heis();
        let d = Derivation::central(&g, &[c(2), c(3)], &h(0, 0, 1)).unwrap();
        assert_eq!(
            d.apply_element(&h(1, 0, 0)),
            AlgebraElement::term(c(2), h(1, 0, 1))
        );
        assert_eq!(
            d.apply_element(&h(1, 1, 0)),
            AlgebraElement::term(c(5), h(1, 1, 1))
        );
        assert!(Derivation::central(&g, &[c(0), c(0)], &h(0, 0, 1))
            .unwrap()
            .is_zero());
        assert_eq!(
            Derivation::central(&g, &[c(1), c(1)], &h(1, 0, 0)).unwrap_err(),
            Error::NotCentral("(1,0,0)".into())
        );
        assert_eq!(
            Derivation::central(&g, &[c(1)], &h(0, 0, 1)).unwrap_err(),
            Error::TauArity {
                expected: 2,
                got: 1
            }
        );
        let z2 = Arc::new(Group::free_abelian(2).unwrap());
        let d = Derivation::central(&z2, &[c(1), c(0)], &GroupElement::vector([0, 1])).unwrap();
        assert_eq!(
            d.apply_element(&GroupElement::vector([1, 0])),
            AlgebraElement::basis(GroupElement::vector([1, 1]))
        );
    }

    #[test]
    fn central_formula_on_every_box_element() {
        let g = heis();
        let z = h(0, 0, 2);
        let d = Derivation::central(&g, &[c(2), c(-3)], &z).unwrap();
        for a in -2..=2 {
            for b in -2..=2 {
                for cc in -3..=3 {
                    let e = h(a, b, cc);
                    let want = AlgebraElement::term(c(2 * a - 3 * b), &e * &z);
                    assert_eq!(d.apply_element(&e), want, "{e}");
                }
            }
        }
    }

    #[test]
    fn apply_basics() {
        let g = heis();
        let a = basis(h(1, -1, 2));
        let d = Derivation::inner(&g, &a).unwrap();
        for e in [h(2, 3, -1), h(-1, 0, 4), h(0, 0, 3)] {
            let x = basis(e);
            assert_eq!(d.apply(&x), &(&x * &a) - &(&a * &x));
        }
        assert!(d.apply(&basis(h(0, 0, 0))).is_zero());
    }

    #[test]
    fn characters_of_inner_derivation() {
        let g = heis();
        let a = h(1, 0, 0);
        let d = Derivation::inner(&g, &basis(a.clone())).unwrap();
        let source_case = Arrow::new(h(1, 1, 0), h(0, 1, 0));
        assert_eq!(source_case.source(), a);
        assert_eq!(d.character(&source_case), c(1));
        // T(φ) = a forces u = a·v.
        let target_case = Arrow::new(&a * &h(0, 1, 0), h(0, 1, 0));
        assert_eq!(target_case.u, h(1, 1, 1));
        assert_eq!(target_case.target(), a);
        assert_eq!(d.character(&target_case), c(-1));
        assert_eq!(d.character(&Arrow::new(h(5, 5, 5), h(0, 1, 0))), c(0));
    }

    #[test]
    fn inner_formula_cases() {
        let a = h(1, 0, 0);
        assert_eq!(
            char_inner_formula(&a, &Arrow::new(h(1, 1, 0), h(0, 1, 0))),
            c(1)
        );
        // v = (2,0,0) commutes with a: S = T = a.
        let both = Arrow::new(h(3, 0, 0), h(2, 0, 0));
        assert_eq!(both.source(), a);
        assert_eq!(both.target(), a);
        assert_eq!(char_inner_formula(&a, &both), c(0));
        let g = heis();
        let d = Derivation::inner(&g, &basis(a.clone())).unwrap();
        assert!(d.apply_element(&h(2, 0, 0)).is_zero());
        assert_eq!(
            char_inner_formula(&a, &Arrow::new(h(0, 3, 0), h(0, 1, 0))),
            c(0)
        );
    }

    #[test]
    fn linear_structure() {
        let g = heis();
        let a = basis(h(1, 0, 0));
        let d = Derivation::inner(&g, &a).unwrap();
        assert!(d.add(&d.scale(&c(-1))).unwrap().is_zero());
        assert_eq!(
            d.scale(&c(2)),
            Derivation::inner(&g, &a.scale(&c(2))).unwrap()
        );
        let z2 = Arc::new(Group::free_abelian(2).unwrap());
        assert!(d.add(&Derivation::zero(&z2)).is_err());
    }

    #[test]
    fn bracket_of_inner_derivations() {
        let g = heis();
        let da = Derivation::inner(&g, &basis(h(1, 0, 0))).unwrap();
        let db = Derivation::inner(&g, &basis(h(0, 1, 0))).unwrap();
        let br = da.bracket(&db).unwrap();
        let w = AlgebraElement::from_terms([(c(1), h(1, 1, 0)), (c(-1), h(1, 1, 1))]);
        assert_eq!(br, Derivation::inner(&g, &w).unwrap());
        assert!(da.bracket(&da).unwrap().is_zero());
        assert!(da.bracket(&Derivation::zero(&g)).unwrap().is_zero());

        let arrow = Arrow::new(h(2, 1, 1), h(1, 0, 0));
        assert_eq!(
            br.apply_element(&h(1, 0, 0)),
            AlgebraElement::from_terms([
                (c(2), h(2, 1, 1)),
                (c(-1), h(2, 1, 2)),
                (c(-1), h(2, 1, 0))
            ])
        );
        assert_eq!(br.character(&arrow), c(2));
        assert_eq!(char_bracket_value(&da, &db, &arrow).unwrap(), c(2));
        assert_eq!(
            char_bracket_value(&da, &Derivation::zero(&g), &arrow).unwrap(),
            c(0)
        );
    }

    #[test]
    fn leibniz_and_composition() {
        let g = heis();
        let d = Derivation::central(&g, &[c(1), c(-2)], &h(0, 0, 3))
            .unwrap()
            .add(&Derivation::inner(&g, &basis(h(1, 2, 0))).unwrap())
            .unwrap();
        let x = AlgebraElement::from_terms([(c(1), h(1, 0, 0)), (c(2), h(0, -1, 3))]);
        let y = AlgebraElement::from_terms([(c(-1), h(2, 1, 0)), (Coefficient::i(), h(0, 0, 1))]);
        assert!(d.verify_leibniz(&x, &y));
        let v1 = h(0, 1, 0);
        let psi = Arrow::new(h(1, 1, 0), v1.clone());
        let v2 = h(1, -1, 2);
        let phi = Arrow::new(&(&v2 * &psi.u) * &v1.inv(), v2);
        assert!(d.verify_char_composition(&phi, &psi).unwrap());
        assert!(d.verify_char_composition(&psi, &psi).is_err());
    }

    #[test]
    fn corrupted_table_is_rejected() {
        let g = heis();
        let d = Derivation::inner(&g, &basis(h(1, 0, 0))).unwrap();
        let mut images = d.images().to_vec();
        images[0].add_term(c(1), h(0, 0, 0));
        let err = Derivation::from_table(&g, images).unwrap_err();
        assert!(matches!(err, Error::InvalidTable(_)), "{err}");
        assert!(Derivation::from_table(&g, d.images().to_vec()).is_ok());
        assert!(Derivation::from_table(&g, vec![AlgebraElement::zero()]).is_err());
    }

    #[test]
    fn finite_tables_are_checked_on_the_full_table() {
        let g = Arc::new(Group::permutation("s3").unwrap());
        let w = basis(GroupElement::perm_cycles(3, &[&[1, 2, 3]]));
        let d = Derivation::inner(&g, &w).unwrap();
        assert!(Derivation::from_table(&g, d.images().to_vec()).is_ok());
        let mut bad = d.images().to_vec();
        bad[0] = basis(g.identity());
        assert!(Derivation::from_table(&g, bad).is_err());
    }

    #[test]
    fn inner_witnesses() {
        let g = heis();
        let w = AlgebraElement::from_terms([(c(2), h(1, 0, 0)), (c(-1), h(0, 1, 1))]);
        let d = Derivation::inner(&g, &w).unwrap();
        assert!(d.is_inner_witness(&w));
        assert!(Derivation::zero(&g).is_inner_witness(&basis(h(0, 0, 0))));
        let found = d
            .find_inner_witness(&[h(1, 0, 0), h(0, 1, 1), h(2, 2, 2), h(0, 0, 0)])
            .unwrap();
        assert!(d.is_inner_witness(&found));

        let central = Derivation::central(&g, &[c(2), c(3)], &h(0, 0, 1)).unwrap();
        let mut candidates = Vec::new();
        for a in -1..=1 {
            for b in -1..=1 {
                for cc in -1..=1 {
                    candidates.push(h(a, b, cc));
                }
            }
        }
        assert!(central.find_inner_witness(&candidates).is_none());
        assert!(!central.is_inner_witness(&AlgebraElement::zero()));
    }

    #[test]
    fn spec_json() {
        let g = heis();
        let d = Derivation::from_spec_json(
            &json!({"group": "heisenberg", "kind": "inner", "a": [[1, [1, 0, 0]]]}),
            &g,
        )
        .unwrap();
        assert_eq!(d, Derivation::inner(&g, &basis(h(1, 0, 0))).unwrap());
        let table = d.to_spec_json();
        assert_eq!(Derivation::from_spec_json(&table, &g).unwrap(), d);
        let central = Derivation::from_spec_json(
            &json!({"group": "heisenberg", "kind": "central", "tau": [2, 3], "z": [0, 0, 1]}),
            &g,
        )
        .unwrap();
        assert_eq!(
            central,
            Derivation::central(&g, &[c(2), c(3)], &h(0, 0, 1)).unwrap()
        );
        assert!(Derivation::from_spec_json(&json!({"group": "zn:2", "kind": "zero"}), &g).is_err());
        assert!(Derivation::from_spec_json(&json!({"kind": "inner"}), &g).is_err());
        assert!(
            Derivation::from_spec_json(&json!({"kind": "table", "images": {"w": []}}), &g).is_err()
        );
        assert!(
            Derivation::from_spec_json(&json!({"kind": "inner", "a": [], "tau": []}), &g).is_err()
        );
    }
}
