//! Library results against independent reimplementations: integer matrices
//! for the Heisenberg group, permutations as functions, brute-force
//! conjugator search, and full sums over a box for bracket characters.

use std::collections::BTreeSet;
use std::sync::Arc;

use dergrade_core::grading::{project, support_cosets, GradingSetup};
use dergrade_core::group::QuotientSpec;
use dergrade_core::sampling::{random_derivation, random_element, sample_rng};
use dergrade_core::{
    char_bracket_value, AlgebraElement, Arrow, Coefficient, CosetKey, Derivation, Group,
    GroupElement,
};

type Mat = [[i64; 3]; 3];

fn to_mat(g: &GroupElement) -> Mat {
    let GroupElement::Heisenberg { a, b, c } = *g else {
        panic!("not in H")
    };
    [[1, a, c], [0, 1, b], [0, 0, 1]]
}

fn from_mat(m: &Mat) -> GroupElement {
    assert_eq!(
        (m[1][0], m[2][0], m[2][1], m[0][0], m[1][1], m[2][2]),
        (0, 0, 0, 1, 1, 1)
    );
    GroupElement::heisenberg(m[0][1], m[1][2], m[0][2])
}

fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    let mut out = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| x[i][k] * y[k][j]).sum();
        }
    }
    out
}

fn h(a: i64, b: i64, c: i64) -> GroupElement {
    GroupElement::heisenberg(a, b, c)
}

fn cint(n: i64) -> Coefficient {
    Coefficient::from_int(n)
}

fn heisenberg_box(r: i64) -> Vec<GroupElement> {
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                out.push(h(a, b, c));
            }
        }
    }
    out
}

#[test]
fn heisenberg_product_matches_unitriangular_matrices() {
    let elems = heisenberg_box(2);
    for x in &elems {
        for y in elems.iter().step_by(7) {
            assert_eq!(
                x * y,
                from_mat(&mat_mul(&to_mat(x), &to_mat(y))),
                "{x} * {y}"
            );
        }
        assert!(from_mat(&mat_mul(&to_mat(x), &to_mat(&x.inv()))).is_identity());
        let mut cube = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        for _ in 0..3 {
            cube = mat_mul(&cube, &to_mat(x));
        }
        assert_eq!(x.pow(3), from_mat(&cube));
        let m = to_mat(x);
        let inv = to_mat(&x.inv());
        let mut inv3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        for _ in 0..3 {
            inv3 = mat_mul(&inv3, &inv);
        }
        assert_eq!(x.pow(-3), from_mat(&inv3), "{m:?}");
    }
}

#[test]
fn heisenberg_conjugacy_against_conjugator_search() {
    let group = Group::heisenberg();
    let conjugators = heisenberg_box(5);
    let elems = heisenberg_box(2);
    for x in &elems {
        let orbit: BTreeSet<GroupElement> =
            conjugators.iter().map(|t| &(t * x) * &t.inv()).collect();
        for y in &elems {
            assert_eq!(group.is_conjugate(x, y), orbit.contains(y), "{x} ~ {y}");
        }
    }
}

#[test]
fn permutation_products_match_function_composition() {
    let group = Group::permutation("s4").unwrap();
    let elems = group.elements().unwrap();
    assert_eq!(elems.len(), 24);
    let as_fn = |g: &GroupElement| -> Vec<u8> {
        match g {
            GroupElement::Perm(p) => p.clone(),
            _ => unreachable!(),
        }
    };
    for p in &elems {
        for q in &elems {
            let (fp, fq) = (as_fn(p), as_fn(q));
            // p·q applies q first.
            let expected: Vec<u8> = (0..4).map(|i| fp[fq[i] as usize]).collect();
            assert_eq!(as_fn(&(p * q)), expected);
        }
    }
}

#[test]
fn arrow_endpoints_are_conjugate_on_s4() {
    let group = Group::permutation("s4").unwrap();
    let elems = group.elements().unwrap();
    for u in &elems {
        for v in &elems {
            let arrow = Arrow::new(u.clone(), v.clone());
            let (s, t) = (arrow.source(), arrow.target());
            let witnessed = elems.iter().any(|g| &(g * &s) * &g.inv() == t);
            assert!(witnessed, "{arrow:?}");
            assert!(group.is_conjugate(&s, &t));
        }
    }
}

#[test]
fn arrow_endpoints_are_conjugate_on_heisenberg() {
    let group = Group::heisenberg();
    for i in 0..1000 {
        let mut rng = sample_rng(42, 0, i);
        let arrow = Arrow::new(
            random_element(&mut rng, &group, 6),
            random_element(&mut rng, &group, 6),
        );
        let (s, t) = (arrow.source(), arrow.target());
        // v conjugates the source to the target.
        assert_eq!(&(&arrow.v * &s) * &arrow.v.inv(), t);
        assert!(group.is_conjugate(&s, &t));
    }
}

#[test]
fn s4_mod_a4_keys_follow_parity() {
    let group = Arc::new(Group::permutation("s4").unwrap());
    let a4 = [
        GroupElement::perm_cycles(4, &[&[1, 2, 3]]),
        GroupElement::perm_cycles(4, &[&[2, 3, 4]]),
    ];
    let q = QuotientSpec::generated_by(&group, &a4).unwrap();
    let odd_key = q.key(&GroupElement::perm_cycles(4, &[&[1, 2]]));
    for g in group.elements().unwrap() {
        let GroupElement::Perm(p) = &g else {
            unreachable!()
        };
        let inversions = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        let expected = if inversions % 2 == 0 {
            q.identity_key()
        } else {
            odd_key.clone()
        };
        assert_eq!(q.key(&g), expected, "{g}");
    }
    assert_eq!(odd_key.to_string(), "(3 4)");
}

#[test]
fn inner_and_central_images_match_direct_formulas() {
    let group = Arc::new(Group::heisenberg());
    for i in 0..40 {
        let mut rng = sample_rng(5, 1, i);
        let a = AlgebraElement::from_terms(
            (0..3).map(|_| (cint(2), random_element(&mut rng, &group, 2))),
        );
        let d = Derivation::inner(&group, &a).unwrap();
        let g = random_element(&mut rng, &group, 4);
        let x = AlgebraElement::basis(g.clone());
        assert_eq!(d.apply_element(&g), &(&x * &a) - &(&a * &x));
    }
    let tau = [cint(2), cint(3)];
    let z = h(0, 0, 1);
    let d = Derivation::central(&group, &tau, &z).unwrap();
    for g in heisenberg_box(2) {
        let GroupElement::Heisenberg { a, b, .. } = g else {
            unreachable!()
        };
        let expected = AlgebraElement::term(cint(2 * a + 3 * b), &g * &z);
        assert_eq!(d.apply_element(&g), expected, "{g}");
    }
}

#[test]
fn bracket_matches_operator_commutator() {
    for sel in ["heisenberg", "zn:2", "perm:s3"] {
        let group = Arc::new(Group::from_selector(sel).unwrap());
        for i in 0..20 {
            let mut rng = sample_rng(9, 2, i);
            let d = random_derivation(&mut rng, &group);
            let p = random_derivation(&mut rng, &group);
            let bracket = d.bracket(&p).unwrap();
            for _ in 0..5 {
                let x = AlgebraElement::basis(random_element(&mut rng, &group, 3));
                let direct = &d.apply(&p.apply(&x)) - &p.apply(&d.apply(&x));
                assert_eq!(bracket.apply(&x), direct, "{sel}");
            }
        }
    }
}

#[test]
fn char_bracket_support_reduction_matches_full_box_sum() {
    let group = Arc::new(Group::heisenberg());
    let a = Derivation::inner(&group, &AlgebraElement::basis(h(1, 0, 0))).unwrap();
    let b = Derivation::inner(&group, &AlgebraElement::basis(h(0, 1, 0))).unwrap();
    let c = Derivation::central(&group, &[cint(1), cint(-2)], &h(0, 0, 1)).unwrap();
    let pairs = [(&a, &b), (&b, &c), (&a, &c)];
    let box_elems = heisenberg_box(3);
    for (d, p) in pairs {
        for arrow_u in [h(2, 1, 1), h(1, 1, 0), h(1, 2, 2), h(0, 0, 1)] {
            for arrow_v in [h(1, 0, 0), h(0, 1, 0), h(1, 1, 0)] {
                let arrow = Arrow::new(arrow_u.clone(), arrow_v.clone());
                let mut full = Coefficient::from_int(0);
                for k in &box_elems {
                    let alpha_ak = d.character(&Arrow::new(arrow_u.clone(), k.clone()));
                    let beta_kb = p.character(&Arrow::new(k.clone(), arrow_v.clone()));
                    let beta_ak = p.character(&Arrow::new(arrow_u.clone(), k.clone()));
                    let alpha_kb = d.character(&Arrow::new(k.clone(), arrow_v.clone()));
                    full += &(&alpha_ak * &beta_kb);
                    full -= &(&beta_ak * &alpha_kb);
                }
                assert_eq!(char_bracket_value(d, p, &arrow).unwrap(), full, "{arrow:?}");
            }
        }
    }
    let arrow = Arrow::new(h(2, 1, 1), h(1, 0, 0));
    assert_eq!(char_bracket_value(&a, &b, &arrow).unwrap(), cint(2));
}

#[test]
fn projection_matches_filtered_character() {
    let group = Arc::new(Group::heisenberg());
    let setup = GradingSetup::derived(&group).unwrap();
    for i in 0..20 {
        let mut rng = sample_rng(13, 3, i);
        let d = random_derivation(&mut rng, &group);
        for key in support_cosets(&d, &setup) {
            let piece = project(&d, &key, &setup);
            for _ in 0..20 {
                let v = random_element(&mut rng, &group, 2);
                for (u, c) in d.apply_element(&v).terms() {
                    let arrow = Arrow::new(u.clone(), v.clone());
                    let expected = if setup.key(&arrow.source()) == key {
                        c.clone()
                    } else {
                        cint(0)
                    };
                    assert_eq!(piece.character(&arrow), expected);
                }
            }
        }
    }
}

#[test]
fn derived_keys_of_heisenberg_are_the_first_two_coordinates() {
    let group = Arc::new(Group::heisenberg());
    let q = QuotientSpec::derived(&group).unwrap();
    for g in heisenberg_box(2) {
        let GroupElement::Heisenberg { a, b, .. } = g else {
            unreachable!()
        };
        assert_eq!(q.key(&g), CosetKey::ints([a, b]));
    }
}
