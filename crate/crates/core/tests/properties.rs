use std::sync::Arc;

use dergrade_core::grading::{decompose, support_cosets, GradingSetup};
use dergrade_core::group::QuotientSpec;
use dergrade_core::sampling::{
    random_algebra_element, random_derivation, random_element, random_word_element, sample_rng,
};
use dergrade_core::{AlgebraElement, Arrow, Coefficient, Derivation, Group, GroupElement};
use num_traits::Zero;
use proptest::prelude::*;

const SELECTORS: [&str; 4] = ["heisenberg", "zn:2", "zn:3", "perm:s3"];

fn group(sel: &str) -> Arc<Group> {
    Arc::new(Group::from_selector(sel).unwrap())
}

fn heis() -> impl Strategy<Value = GroupElement> {
    (-4i64..=4, -4i64..=4, -6i64..=6).prop_map(|(a, b, c)| GroupElement::heisenberg(a, b, c))
}

fn selector() -> impl Strategy<Value = &'static str> {
    prop::sample::select(SELECTORS.to_vec())
}

fn coefficient() -> impl Strategy<Value = Coefficient> {
    (-5i64..=5, 1i64..=4, -3i64..=3, 1i64..=3)
        .prop_map(|(a, b, c, d)| Coefficient::from_parts(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coefficient_field_axioms(a in coefficient(), b in coefficient(), c in coefficient()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if let Some(inv) = a.inv() {
            prop_assert_eq!(&a * &inv, Coefficient::from_int(1));
        }
        let json = serde_json::to_value(&a).unwrap();
        prop_assert_eq!(serde_json::from_value::<Coefficient>(json).unwrap(), a);
    }

    #[test]
    fn heisenberg_group_axioms(x in heis(), y in heis(), z in heis(), n in -5i64..=5) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert!((&x * &x.inv()).is_identity());
        prop_assert_eq!(x.pow(n + 1), &x.pow(n) * &x);
    }

    #[test]
    fn conjugation_preserves_coset_keys(sel in selector(), seed in any::<u64>()) {
        let g = group(sel);
        let q = QuotientSpec::derived(&g).unwrap();
        let mut rng = sample_rng(seed, 0, 0);
        let a = random_element(&mut rng, &g, 4);
        let t = random_element(&mut rng, &g, 4);
        prop_assert_eq!(q.key(&(&(&t * &a) * &t.inv())), q.key(&a));
    }

    #[test]
    fn coset_keys_compose(sel in selector(), m in 0i64..=4, seed in any::<u64>()) {
        let g = group(sel);
        let q = if m >= 2 && !g.is_finite() {
            QuotientSpec::modulus(&g, m).unwrap()
        } else {
            QuotientSpec::derived(&g).unwrap()
        };
        let mut rng = sample_rng(seed, 0, 1);
        let x = random_element(&mut rng, &g, 4);
        let y = random_element(&mut rng, &g, 4);
        prop_assert_eq!(q.key(&(&x * &y)), q.compose(&q.key(&x), &q.key(&y)));
        prop_assert_eq!(q.key(&g.identity()), q.identity_key());
    }

    #[test]
    fn group_algebra_ring_axioms(sel in selector(), seed in any::<u64>()) {
        let g = group(sel);
        let mut rng = sample_rng(seed, 0, 2);
        let [x, y, z] = [0, 1, 2].map(|_| random_algebra_element(&mut rng, &g, 3, 2));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
        prop_assert!((&x - &x).is_zero());
        prop_assert_eq!(AlgebraElement::from_json(&x.to_json(), &g).unwrap(), x);
    }

    #[test]
    fn derivations_satisfy_leibniz_on_words(sel in selector(), seed in any::<u64>()) {
        let g = group(sel);
        let mut rng = sample_rng(seed, 0, 3);
        let d = random_derivation(&mut rng, &g);
        for _ in 0..8 {
            let x = random_word_element(&mut rng, &g, 6);
            let y = random_word_element(&mut rng, &g, 6);
            prop_assert!(d.verify_leibniz(&AlgebraElement::basis(x), &AlgebraElement::basis(y)));
        }
        let x = random_algebra_element(&mut rng, &g, 3, 2);
        let y = random_algebra_element(&mut rng, &g, 3, 2);
        prop_assert!(d.verify_leibniz(&x, &y));
    }

    #[test]
    fn identity_and_inverse_images(sel in selector(), seed in any::<u64>()) {
        let g = group(sel);
        let mut rng = sample_rng(seed, 0, 4);
        let d = random_derivation(&mut rng, &g);
        prop_assert!(d.apply_element(&g.identity()).is_zero());
        let x = random_element(&mut rng, &g, 4);
        let xi = x.inv();
        let expected = d.apply_element(&x).sandwich(&xi, &xi).scale(&Coefficient::from_int(-1));
        prop_assert_eq!(d.apply_element(&xi), expected);
    }

    #[test]
    fn characters_are_additive(sel in selector(), seed in any::<u64>()) {
        let g = group(sel);
        let mut rng = sample_rng(seed, 0, 5);
        let d = random_derivation(&mut rng, &g);
        let p = random_derivation(&mut rng, &g);
        let c = Coefficient::from_ratio(3, 2);
        let sum = d.add(&p.scale(&c)).unwrap();
        for _ in 0..8 {
            let v = random_word_element(&mut rng, &g, 4);
            let u = d.apply_element(&v).support().into_iter().next().unwrap_or_else(|| random_element(&mut rng, &g, 3));
            let arrow = Arrow::new(u, v);
            prop_assert_eq!(sum.character(&arrow), &d.character(&arrow) + &(&c * &p.character(&arrow)));
        }
    }

    #[test]
    fn characters_add_along_composition(sel in selector(), seed in any::<u64>()) {
        let g = group(sel);
        let mut rng = sample_rng(seed, 0, 6);
        let d = random_derivation(&mut rng, &g);
        let psi = Arrow::new(random_element(&mut rng, &g, 3), random_word_element(&mut rng, &g, 4));
        let v2 = random_word_element(&mut rng, &g, 4);
        let phi = Arrow::new(&v2 * &psi.target(), v2);
        prop_assert!(d.verify_char_composition(&phi, &psi).unwrap());
        let id = Arrow::identity_at(psi.target());
        prop_assert!(d.character(&id).is_zero());
    }

    #[test]
    fn bracket_is_a_lie_bracket(sel in selector(), seed in any::<u64>()) {
        let g = group(sel);
        let mut rng = sample_rng(seed, 0, 7);
        let [a, b, c] = [0, 1, 2].map(|_| random_derivation(&mut rng, &g));
        let jacobi = a.bracket(&b.bracket(&c).unwrap()).unwrap()
            .add(&b.bracket(&c.bracket(&a).unwrap()).unwrap()).unwrap()
            .add(&c.bracket(&a.bracket(&b).unwrap()).unwrap()).unwrap();
        prop_assert!(jacobi.is_zero());
        prop_assert!(a.bracket(&a).unwrap().is_zero());
        prop_assert_eq!(a.bracket(&b).unwrap(), b.bracket(&a).unwrap().scale(&Coefficient::from_int(-1)));
    }

    #[test]
    fn inner_derivations_form_an_ideal(sel in selector(), seed in any::<u64>()) {
        let g = group(sel);
        let mut rng = sample_rng(seed, 0, 8);
        let p = random_derivation(&mut rng, &g);
        let a = random_algebra_element(&mut rng, &g, 3, 2);
        let lhs = p.bracket(&Derivation::inner(&g, &a).unwrap()).unwrap();
        prop_assert_eq!(lhs, Derivation::inner(&g, &p.apply(&a)).unwrap());
    }

    #[test]
    fn decomposition_is_a_direct_sum(sel in selector(), seed in any::<u64>()) {
        let g = group(sel);
        let Ok(setup) = GradingSetup::derived(&g) else { return Ok(()) };
        let mut rng = sample_rng(seed, 0, 9);
        let d = random_derivation(&mut rng, &g);
        let dec = decompose(&d, &setup);
        prop_assert_eq!(dec.sum(), d.clone());
        for (k, c) in &dec.components {
            prop_assert!(!c.is_zero());
            prop_assert_eq!(support_cosets(c, &setup).into_iter().collect::<Vec<_>>(), vec![k.clone()]);
            prop_assert!(Derivation::from_table(&g, c.images().to_vec()).is_ok());
        }
        let json = dec.to_json();
        prop_assert_eq!(dergrade_core::GradedDecomposition::from_json(&json, &setup).unwrap(), dec);
    }

    #[test]
    fn derivation_specs_round_trip(sel in selector(), seed in any::<u64>()) {
        let g = group(sel);
        let mut rng = sample_rng(seed, 0, 10);
        let d = random_derivation(&mut rng, &g);
        let text = serde_json::to_string(&d.to_spec_json()).unwrap();
        let back = Derivation::from_spec_json(&serde_json::from_str(&text).unwrap(), &g).unwrap();
        prop_assert_eq!(back, d);
    }
}
