//! Seeded random elements, derivations and arrows for the verification
//! suites.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::AlgebraElement;
use crate::coeff::Coefficient;
use crate::derivation::Derivation;
use crate::group::{Arrow, Group, GroupElement, GroupKind};

/// Independent generator for sample `index` of stream `stream`.
pub fn sample_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    // splitmix64 finalizer over the three inputs
    let mut x = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 31;
    ChaCha8Rng::seed_from_u64(x)
}

/// Small nonzero scalars: mostly integers, sometimes fractions or Gaussian.
pub fn random_coefficient<R: Rng>(rng: &mut R) -> Coefficient {
    let mut n = 0;
    while n == 0 {
        n = rng.random_range(-3..=3);
    }
    match rng.random_range(0..8) {
        0 => Coefficient::from_ratio(n, rng.random_range(2..=3)),
        1 => Coefficient::from_parts(n, 1, rng.random_range(-2..=2), 1),
        _ => Coefficient::from_int(n),
    }
}

/// Uniform in the box `|a|,|b|,|c| ≤ radius` (Heisenberg, ℤⁿ) or uniform over
/// the group (finite kernels).
pub fn random_element<R: Rng>(rng: &mut R, group: &Group, radius: i64) -> GroupElement {
    let mut coord = || rng.random_range(-radius..=radius);
    match group.kind() {
        GroupKind::Heisenberg => GroupElement::heisenberg(coord(), coord(), coord()),
        GroupKind::FreeAbelian(n) => GroupElement::Vector((0..*n).map(|_| coord()).collect()),
        GroupKind::Permutation { .. } => {
            let elements = group.elements().unwrap_or_default();
            elements
                .choose(rng)
                .cloned()
                .unwrap_or_else(|| group.identity())
        }
    }
}

/// A product of at most `max_len` random generators and their inverses.
pub fn random_word_element<R: Rng>(rng: &mut R, group: &Group, max_len: usize) -> GroupElement {
    let gens: Vec<&GroupElement> = group.generators().collect();
    let len = rng.random_range(0..=max_len);
    (0..len).fold(group.identity(), |acc, _| {
        let s = gens[rng.random_range(0..gens.len())];
        if rng.random_bool(0.5) {
            &acc * s
        } else {
            &acc * &s.inv()
        }
    })
}

pub fn random_algebra_element<R: Rng>(
    rng: &mut R,
    group: &Group,
    max_terms: usize,
    radius: i64,
) -> AlgebraElement {
    let n = rng.random_range(1..=max_terms.max(1));
    AlgebraElement::from_terms(
        (0..n).map(|_| (random_coefficient(rng), random_element(rng, group, radius))),
    )
}

fn random_central_element<R: Rng>(rng: &mut R, group: &Group) -> GroupElement {
    match group.kind() {
        GroupKind::Heisenberg => GroupElement::heisenberg(0, 0, rng.random_range(-2..=2)),
        GroupKind::FreeAbelian(_) => random_element(rng, group, 2),
        GroupKind::Permutation { .. } => group
            .center()
            .and_then(|c| c.choose(rng).cloned())
            .unwrap_or_else(|| group.identity()),
    }
}

pub fn random_inner<R: Rng>(rng: &mut R, group: &Arc<Group>) -> Derivation {
    let a = random_algebra_element(rng, group, 3, 2);
    Derivation::inner(group, &a).expect("sampled element lies in the group")
}

pub fn random_central<R: Rng>(rng: &mut R, group: &Arc<Group>) -> Derivation {
    let tau: Vec<Coefficient> = (0..group.abelian_rank())
        .map(|_| {
            if rng.random_bool(0.25) {
                Coefficient::from_int(0)
            } else {
                random_coefficient(rng)
            }
        })
        .collect();
    let z = random_central_element(rng, group);
    Derivation::central(group, &tau, &z).expect("sampled element is central")
}

/// A derivation built through the validated table constructor. For ℤⁿ any
/// images are admissible; for the other kernels the table is taken from a
/// random combination of inner and central derivations and then revalidated.
pub fn random_table<R: Rng>(rng: &mut R, group: &Arc<Group>) -> Derivation {
    let images = match group.kind() {
        GroupKind::FreeAbelian(_) => (0..group.num_generators())
            .map(|_| {
                if rng.random_bool(0.2) {
                    AlgebraElement::zero()
                } else {
                    random_algebra_element(rng, group, 3, 2)
                }
            })
            .collect(),
        _ => {
            let d = random_inner(rng, group)
                .add(&random_central(rng, group))
                .expect("same group");
            d.images().to_vec()
        }
    };
    Derivation::from_table(group, images).expect("sampled table is a derivation")
}

/// A random mix of one to three inner, central and table derivations.
pub fn random_derivation<R: Rng>(rng: &mut R, group: &Arc<Group>) -> Derivation {
    let parts = rng.random_range(1..=3);
    let mut d = Derivation::zero(group);
    for _ in 0..parts {
        let piece = match rng.random_range(0..3) {
            0 => random_inner(rng, group),
            1 => random_central(rng, group),
            _ => random_table(rng, group),
        };
        d = d.add(&piece).expect("same group");
    }
    d
}

/// An arrow `(u, v)` with `v` a random word of length at most `word_len`.
/// Half the time `u` is drawn from the support of `d(v)` so that the
/// character is likely nonzero; otherwise it is a random element.
pub fn random_arrow<R: Rng>(
    rng: &mut R,
    derivations: &[&Derivation],
    group: &Group,
    word_len: usize,
) -> Arrow {
    let v = random_word_element(rng, group, word_len);
    if rng.random_bool(0.5) {
        let mut support = Vec::new();
        for d in derivations {
            support.extend(d.apply_element(&v).support());
        }
        if let Some(u) = support.choose(rng) {
            return Arrow::new(u.clone(), v);
        }
    }
    let u = random_element(rng, group, 3);
    Arrow::new(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let g = Arc::new(Group::heisenberg());
        let a = random_derivation(&mut sample_rng(7, 1, 3), &g);
        let b = random_derivation(&mut sample_rng(7, 1, 3), &g);
        assert_eq!(a, b);
        let x = random_element(&mut sample_rng(7, 1, 4), &g, 5);
        let y = random_element(&mut sample_rng(7, 2, 4), &g, 5);
        let z = random_element(&mut sample_rng(8, 1, 4), &g, 5);
        assert!(x != y || x != z);
    }

    #[test]
    fn sampled_derivations_are_valid_tables() {
        for sel in ["heisenberg", "zn:2", "perm:s3"] {
            let g = Arc::new(Group::from_selector(sel).unwrap());
            for i in 0..10 {
                let d = random_derivation(&mut sample_rng(1, 0, i), &g);
                assert!(
                    Derivation::from_table(&g, d.images().to_vec()).is_ok(),
                    "{sel}"
                );
            }
        }
    }
}
