//! Seeded property suites over random derivations.
//!
//! Each suite counts individual exact checks. Samples are drawn from
//! independent per-index streams, so reports do not depend on the
//! [`Execution`] strategy or the thread count.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::derivation::{char_bracket_value, char_inner_formula, Derivation};
use crate::grading::{
    check_bracket_closure, decompose, inner_graded_decomposition, support_cosets, GradingSetup,
};
use crate::group::{Arrow, Group, GroupElement};
use crate::par::Execution;
use crate::sampling::{
    random_algebra_element, random_arrow, random_coefficient, random_derivation, random_element,
    random_word_element, sample_rng,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Derivations (or derivation pairs) per property.
    pub samples: usize,
    /// Word length bound for sampled group elements.
    pub word_len: usize,
    /// Arrows per derivation in the character suites.
    pub arrows: usize,
    /// Word pairs per derivation in the Leibniz checks.
    pub word_pairs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            samples: 50,
            word_len: 5,
            arrows: 40,
            word_pairs: 40,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl PropertyReport {
    fn collect(name: &str, outcomes: Vec<Outcome>) -> Self {
        let mut report = PropertyReport {
            name: name.to_string(),
            ..Default::default()
        };
        for o in outcomes {
            report.passed += o.passed;
            report.failed += o.failed;
            if report.first_failure.is_none() {
                report.first_failure = o.first_failure;
            }
        }
        report
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Tally for one sample.
#[derive(Default)]
struct Outcome {
    passed: usize,
    failed: usize,
    first_failure: Option<String>,
}

impl Outcome {
    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub group: String,
    pub quotient: String,
    pub seed: u64,
    pub budget: Budget,
    pub properties: Vec<PropertyReport>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(PropertyReport::ok)
    }
}

/// Random inputs plus optional fixed derivations that are used first.
#[derive(Clone, Debug)]
pub struct Suite<'a> {
    pub setup: &'a GradingSetup,
    pub fixtures: &'a [Derivation],
    pub budget: Budget,
    pub seed: u64,
    pub exec: Execution,
}

// Stream ids keep the properties' samples independent of each other.
const LEIBNIZ: u64 = 1;
const CHAR_COMPOSITION: u64 = 2;
const BRACKET_EQUIVALENCE: u64 = 3;
const CLOSURE: u64 = 4;
const DIRECT_SUM: u64 = 5;
const SUPPORT: u64 = 6;
const IDEAL: u64 = 7;
const INNER_GRADING: u64 = 8;
const INNER_FORMULA: u64 = 9;

impl Suite<'_> {
    fn group(&self) -> &Arc<Group> {
        self.setup.group()
    }

    fn derivation<R: Rng>(&self, i: usize, rng: &mut R) -> Derivation {
        match self.fixtures.get(i) {
            Some(d) => d.clone(),
            None => random_derivation(rng, self.group()),
        }
    }

    fn pair<R: Rng>(&self, i: usize, rng: &mut R) -> (Derivation, Derivation) {
        let n = self.fixtures.len();
        if i < n * n {
            (self.fixtures[i / n].clone(), self.fixtures[i % n].clone())
        } else {
            (
                random_derivation(rng, self.group()),
                random_derivation(rng, self.group()),
            )
        }
    }

    fn run<F>(&self, name: &str, stream: u64, count: usize, f: F) -> PropertyReport
    where
        F: Fn(usize, &mut rand_chacha::ChaCha8Rng) -> Outcome + Sync + Send,
    {
        let outcomes = self.exec.map(count, |i| {
            let mut rng = sample_rng(self.seed, stream, i as u64);
            f(i, &mut rng)
        });
        PropertyReport::collect(name, outcomes)
    }

    fn single_count(&self) -> usize {
        self.budget.samples.max(self.fixtures.len())
    }

    fn pair_count(&self) -> usize {
        self.budget
            .samples
            .max(self.fixtures.len() * self.fixtures.len())
    }

    /// `d(xy) = d(x)y + x d(y)` on random word pairs.
    pub fn leibniz(&self) -> PropertyReport {
        self.run("leibniz", LEIBNIZ, self.single_count(), |i, rng| {
            let d = self.derivation(i, rng);
            let mut out = Outcome::default();
            leibniz_pairs(&d, self.budget, rng, &mut out);
            out
        })
    }

    /// `χ(φ∘ψ) = χ(φ) + χ(ψ)` on random composable pairs.
    pub fn char_composition(&self) -> PropertyReport {
        self.run(
            "char-composition",
            CHAR_COMPOSITION,
            self.single_count(),
            |i, rng| {
                let d = self.derivation(i, rng);
                let group = self.group();
                let mut out = Outcome::default();
                for _ in 0..self.budget.arrows {
                    let psi = random_arrow(rng, &[&d], group, self.budget.word_len);
                    // φ = (v₂·T(ψ), v₂) has source T(ψ).
                    let v2 = random_word_element(rng, group, self.budget.word_len);
                    let phi = Arrow::new(&v2 * &psi.target(), v2);
                    let ok = d.verify_char_composition(&phi, &psi).unwrap_or(false);
                    out.record(ok, || format!("{phi:?} after {psi:?}"));
                }
                out
            },
        )
    }

    /// The matrix-product bracket character equals the character of the
    /// commutator of operators.
    pub fn bracket_equivalence(&self) -> PropertyReport {
        self.run(
            "bracket-equivalence",
            BRACKET_EQUIVALENCE,
            self.pair_count(),
            |i, rng| {
                let (d, p) = self.pair(i, rng);
                let mut out = Outcome::default();
                let bracket = match d.bracket(&p) {
                    Ok(b) => b,
                    Err(e) => {
                        out.record(false, || e.to_string());
                        return out;
                    }
                };
                for _ in 0..self.budget.arrows {
                    let arrow =
                        random_arrow(rng, &[&d, &p, &bracket], self.group(), self.budget.word_len);
                    let direct = bracket.character(&arrow);
                    let ok = char_bracket_value(&d, &p, &arrow).is_ok_and(|v| v == direct);
                    out.record(ok, || format!("arrow {arrow:?}"));
                }
                out
            },
        )
    }

    /// Brackets of homogeneous pieces are homogeneous of the summed degree.
    pub fn closure(&self) -> PropertyReport {
        self.run("closure", CLOSURE, self.pair_count(), |i, rng| {
            let (d, p) = self.pair(i, rng);
            let mut out = Outcome::default();
            match check_bracket_closure(&d, &p, self.setup) {
                Ok(report) => {
                    for e in report.entries {
                        out.record(e.closed, || {
                            format!(
                                "[{}, {}] expected {} found {:?}",
                                e.left, e.right, e.expected, e.found
                            )
                        });
                    }
                }
                Err(e) => out.record(false, || e.to_string()),
            }
            out
        })
    }

    /// Components sum back to the input, have disjoint single-key supports
    /// and each satisfies Leibniz. One check per derivation.
    pub fn direct_sum(&self) -> PropertyReport {
        self.run("direct-sum", DIRECT_SUM, self.single_count(), |i, rng| {
            let d = self.derivation(i, rng);
            let dec = decompose(&d, self.setup);
            let mut out = Outcome::default();
            let sums = dec.sum() == d;
            let homogeneous = dec
                .components
                .iter()
                .all(|(k, c)| support_cosets(c, self.setup) == BTreeSet::from([k.clone()]));
            let mut leibniz = Outcome::default();
            for c in dec.components.values() {
                leibniz_pairs(c, self.budget, rng, &mut leibniz);
            }
            out.record(sums && homogeneous && leibniz.failed == 0, || {
                format!(
                    "sum exact: {sums}, keys disjoint: {homogeneous}, leibniz: {}",
                    leibniz.first_failure.as_deref().unwrap_or("ok")
                )
            });
            out
        })
    }

    /// Every nonzero character value sits over a coset in `support_cosets`.
    pub fn support_soundness(&self) -> PropertyReport {
        self.run(
            "support-soundness",
            SUPPORT,
            self.single_count(),
            |i, rng| {
                let d = self.derivation(i, rng);
                let keys = support_cosets(&d, self.setup);
                let mut out = Outcome::default();
                for _ in 0..self.budget.arrows {
                    let arrow = random_arrow(rng, &[&d], self.group(), self.budget.word_len);
                    let ok = d.character(&arrow).is_zero()
                        || keys.contains(&self.setup.key(&arrow.source()));
                    out.record(ok, || format!("arrow {arrow:?}"));
                }
                out
            },
        )
    }

    /// `[∂, [·, a]] = [·, ∂(a)]`.
    pub fn ideal(&self) -> PropertyReport {
        self.run("ideal", IDEAL, self.single_count(), |i, rng| {
            let p = self.derivation(i, rng);
            let a = random_algebra_element(rng, self.group(), 3, 2);
            let mut out = Outcome::default();
            let lhs = Derivation::inner(self.group(), &a).and_then(|da| p.bracket(&da));
            let rhs = Derivation::inner(self.group(), &p.apply(&a));
            let ok = matches!((&lhs, &rhs), (Ok(l), Ok(r)) if l == r);
            out.record(ok, || format!("a = {a}"));
            out
        })
    }

    /// Every homogeneous piece of a random inner derivation is inner, with
    /// the coset-wise part of its generating sum as witness.
    pub fn inner_grading(&self) -> PropertyReport {
        self.run(
            "inner-grading",
            INNER_GRADING,
            self.budget.samples,
            |_, rng| {
                let n = rng.random_range(1..=4);
                let terms: Vec<_> = (0..n)
                    .map(|_| {
                        (
                            random_coefficient(rng),
                            random_element(rng, self.group(), 2),
                        )
                    })
                    .collect();
                let mut out = Outcome::default();
                let ok = inner_graded_decomposition(&terms, self.setup).is_ok_and(|r| r.certified);
                out.record(ok, || format!("{terms:?}"));
                out
            },
        )
    }

    /// The five properties reported by the command-line `verify`.
    pub fn standard(&self) -> VerifyReport {
        VerifyReport {
            group: self.group().selector(),
            quotient: self.setup.quotient().describe(),
            seed: self.seed,
            budget: self.budget,
            properties: vec![
                self.leibniz(),
                self.char_composition(),
                self.bracket_equivalence(),
                self.closure(),
                self.direct_sum(),
            ],
        }
    }
}

fn leibniz_pairs<R: Rng>(d: &Derivation, budget: Budget, rng: &mut R, out: &mut Outcome) {
    let group = d.group();
    for _ in 0..budget.word_pairs {
        let x = random_word_element(rng, group, budget.word_len);
        let y = random_word_element(rng, group, budget.word_len);
        let ok = d.verify_leibniz(
            &AlgebraElement::basis(x.clone()),
            &AlgebraElement::basis(y.clone()),
        );
        out.record(ok, || format!("x = {x}, y = {y}"));
    }
}

/// Inner-derivation characters against the indicator formula, for every `a`
/// in the Heisenberg box `|a|,|b|,|c| ≤ radius`: all arrows `(u, s)` with `s`
/// a generator and `u` in the support of `[s, a]`, plus `off_support` random
/// arrows per `a`. Also checks that arrows with `S = T = a` evaluate to 0.
pub fn inner_formula_exhaustive(
    radius: i64,
    off_support: usize,
    seed: u64,
    exec: Execution,
) -> PropertyReport {
    let group = Arc::new(Group::heisenberg());
    let side = (2 * radius + 1) as usize;
    let total = side * side * side;
    let coord = |n: usize| n as i64 - radius;
    let outcomes = exec.map(total, |idx| {
        let a = GroupElement::heisenberg(
            coord(idx / (side * side)),
            coord(idx / side % side),
            coord(idx % side),
        );
        let da =
            Derivation::inner(&group, &AlgebraElement::basis(a.clone())).expect("element of H");
        let mut rng = sample_rng(seed, INNER_FORMULA, idx as u64);
        let mut out = Outcome::default();
        let check = |arrow: Arrow, out: &mut Outcome| {
            let ok = da.character(&arrow) == char_inner_formula(&a, &arrow);
            out.record(ok, || format!("a = {a}, arrow {arrow:?}"));
        };
        for s in group.generators() {
            for u in da.apply_element(s).support() {
                check(Arrow::new(u, s.clone()), &mut out);
            }
        }
        for _ in 0..off_support {
            let arrow = Arrow::new(
                random_element(&mut rng, &group, 3),
                random_word_element(&mut rng, &group, 4),
            );
            check(arrow, &mut out);
        }
        // S = T = a: take v commuting with a, u = a·v.
        for v in commuting_sample(&a) {
            let arrow = Arrow::new(&a * &v, v.clone());
            let overlap = arrow.source() == a && arrow.target() == a;
            let ok = overlap
                && char_inner_formula(&a, &arrow).is_zero()
                && da.character(&arrow).is_zero()
                && da.apply_element(&v).is_zero();
            out.record(ok, || format!("overlap at a = {a}, v = {v}"));
        }
        out
    });
    PropertyReport::collect("inner-formula", outcomes)
}

/// A few elements of the Heisenberg group commuting with `a`: the centre and
/// powers of `a` itself.
fn commuting_sample(a: &GroupElement) -> Vec<GroupElement> {
    let mut out = vec![
        GroupElement::heisenberg(0, 0, 1),
        GroupElement::heisenberg(0, 0, -2),
    ];
    if !a.is_identity() {
        out.push(a.clone());
        out.push(a.pow(2));
    }
    out
}

/// Heisenberg and ℤ² suites graded by the abelianization, the settings the
/// acceptance checks run over.
pub fn default_setups() -> Vec<GradingSetup> {
    ["heisenberg", "zn:2"]
        .into_iter()
        .map(|s| {
            let group = Arc::new(Group::from_selector(s).expect("known selector"));
            GradingSetup::derived(&group).expect("nontrivial abelianization")
        })
        .collect()
}
