mod common;

use hyperdr::cech::{
    b_prev, dr_basis, gamma, r_identity_holds, refine_sextuple, rho, sextuple_validate,
};
use hyperdr::coordring::Automorphism;
use hyperdr::curve::CurveModel;
use hyperdr::equivariant::{
    action_dr, action_h1, action_h1_by_duality, family_polynomial, splitting_decide,
    verify_no_split, verify_splitting, SplitResult,
};
use hyperdr::gfield::make_field;
use hyperdr::linalg::Matrix;
use hyperdr::places::{Base, Valuation};
use hyperdr::polylab::{binom, Poly};
use proptest::prelude::*;

use common::*;

fn bases(c: &CurveModel) -> Vec<Base> {
    let k = c.field();
    vec![
        Base::Infinity,
        Base::Finite(k.zero()),
        Base::Finite(k.one()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn leibniz_rule(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let c = random_curve(&mut rng);
        let u = random_laurent_element(&c, 2, &mut rng);
        let v = random_laurent_element(&c, 2, &mut rng);
        let lhs = (&u * &v).exterior_d();
        let rhs = &u.exterior_d().mul_fn(&v) + &v.exterior_d().mul_fn(&u);
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ord_is_a_valuation(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let c = random_curve(&mut rng);
        let u = random_laurent_element(&c, 2, &mut rng);
        let v = random_laurent_element(&c, 2, &mut rng);
        for base in bases(&c) {
            for pl in c.places_over(base).unwrap().iter() {
                let (ou, ov) = (pl.ord(&u).unwrap(), pl.ord(&v).unwrap());
                let ouv = pl.ord(&(&u * &v)).unwrap();
                match (ou, ov) {
                    (Valuation::Finite(a), Valuation::Finite(b)) => {
                        prop_assert_eq!(ouv, Valuation::Finite(a + b))
                    }
                    _ => prop_assert_eq!(ouv, Valuation::Infinity),
                }
                prop_assert!(pl.ord(&(&u + &v)).unwrap() >= ou.min(ov));
            }
        }
    }

    #[test]
    fn residues_of_exact_differentials_vanish(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let c = random_curve(&mut rng);
        let u = random_laurent_element(&c, 3, &mut rng);
        let du = u.exterior_d();
        for base in bases(&c) {
            for pl in c.places_over(base).unwrap().iter() {
                prop_assert!(pl.residue(&du).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn pullback_commutes_with_d(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let c = random_curve(&mut rng);
        let u = random_laurent_element(&c, 2, &mut rng);
        let s = Automorphism::involution();
        prop_assert_eq!(s.pullback(&u).exterior_d(), s.pullback_diff(&u.exterior_d()));
        prop_assert_eq!(s.pullback(&s.pullback(&u)), u);
    }

    #[test]
    fn local_equations_and_ramification(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let c = random_curve(&mut rng);
        for base in bases(&c) {
            let places = c.places_over(base).unwrap();
            prop_assert_eq!(places.iter().map(|p| p.e()).sum::<u32>(), 2);
            for pl in places.iter() {
                let r = pl.equation_residual(32);
                prop_assert!(r.coefficients().iter().all(|v| v.is_zero()));
            }
        }
    }

    #[test]
    fn genus_agrees_with_ramification_count(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let c = random_curve(&mut rng);
        if let Ok(g) = c.genus_oracle() {
            prop_assert_eq!(g, c.g());
        }
    }
}

#[test]
fn basis_validates_on_genus_four_over_extensions() {
    let mut rng = rng(41);
    for (p, m) in [(3, 2), (7, 2), (5, 1)] {
        for ramified in [false, true] {
            let c = random_odd(p, m, 4, ramified, &mut rng);
            for t in dr_basis(&c).unwrap() {
                assert!(
                    hyperdr::cech::triple_validate(&t).unwrap().all_pass(),
                    "{c:?}"
                );
            }
        }
    }
}

#[test]
fn sextuples_project_to_gamma() {
    let mut rng = rng(42);
    for n in 0..6 {
        let c = random_odd([3, 5, 7][n % 3], 1, 2 + n % 2, n % 2 == 0, &mut rng);
        let k = c.field();
        let a = loop {
            let a = random_fe(k, &mut rng);
            if !a.is_zero() {
                break a;
            }
        };
        for i in 1..=c.g() {
            let s = refine_sextuple(&c, a, i).unwrap();
            assert!(sextuple_validate(&s).unwrap().all_pass(), "{c:?} i={i}");
            assert_eq!(rho(&s), gamma(&c, i).unwrap());
        }
    }
}

#[test]
fn r_identity_for_all_small_genera() {
    let mut rng = rng(43);
    for g in 2..=6 {
        for p in [3u32, 5, 7, 11, 13] {
            let k = make_field(p, 1).unwrap();
            let c = random_odd(p, 1, g, true, &mut rng);
            let a = k.from_int(rng_range(&mut rng, 1, p as i64));
            for i in 1..=g {
                let s = refine_sextuple(&c, a, i).unwrap();
                assert!(r_identity_holds(&c, &s.r, a, i));
                // b_{i-1} = (-1)^{g-i} i binom(g, i) a^{g-i}
                let sign = if (g - i) % 2 == 0 { k.one() } else { -k.one() };
                let want = sign * k.from_int(i as i64) * binom(k, g, i) * a.pow((g - i) as u64);
                assert_eq!(b_prev(&c, a, i), want);
            }
        }
    }
}

fn rng_range(rng: &mut rand_pcg::Pcg64, lo: i64, hi: i64) -> i64 {
    use rand::Rng;
    rng.gen_range(lo..hi)
}

/// Odd-degree family members `y^2 = q(x^p - x)`.
fn family(p: u32, q: &[i64]) -> CurveModel {
    let k = make_field(p, 1).unwrap();
    CurveModel::odd(family_polynomial(&Poly::from_ints(k, q), k.one())).unwrap()
}

#[test]
fn translation_group_law_and_cross_checks() {
    for (p, q) in [
        (3u32, &[1i64, 2, 0, 1][..]),
        (5, &[0, 1]),
        (7, &[3, 1]),
        (5, &[1, 0, 0, 1]),
    ] {
        let c = family(p, q);
        let k = c.field();
        let tau = |a: i64| Automorphism::translation(&c, k.from_int(a), 1).unwrap();
        let m = |a: i64| action_dr(&c, &tau(a)).unwrap();
        let m1 = m(1);
        assert!(m1.lower_left().is_zero());
        assert_eq!(m1.m.mul(&m(2).m), m(3).m, "{c:?}");
        assert_eq!(m1.m.pow(p as u64), Matrix::identity(k, 2 * c.g()));
        for a in 1..p as i64 {
            let ma = m(a);
            assert_eq!(ma.c, action_h1(&c, &tau(a)).unwrap());
            assert_eq!(ma.c, action_h1_by_duality(&c, &tau(a)).unwrap());
            match splitting_decide(&ma) {
                SplitResult::NoSplit { combination, .. } => {
                    assert!(verify_no_split(&ma, &combination))
                }
                SplitResult::Splits { s } => panic!("{c:?} a={a} splits with {s:?}"),
            }
        }
    }
}

#[test]
fn sign_changed_translations_are_consistent() {
    let k = make_field(3, 1).unwrap();
    let c = CurveModel::odd(Poly::from_ints(k, &[2, 0, 1, 0, 1, 0, 1])).unwrap();
    for eps in [1, -1] {
        let t = Automorphism::translation(&c, k.one(), eps).unwrap();
        let m = action_dr(&c, &t).unwrap();
        assert!(m.lower_left().is_zero());
        if let SplitResult::Splits { s } = splitting_decide(&m) {
            assert!(verify_splitting(&m, &s));
        }
        assert_eq!(m.c, action_h1(&c, &t).unwrap());
    }
}

/// `deg div(dx) = 2g - 2` wherever the branch locus is rational, an
/// independent check on the orders of dx above infinity.
#[test]
fn canonical_degree_of_dx() {
    let mut rng = rng(44);
    let mut checked = 0;
    while checked < 12 {
        let c = random_curve(&mut rng);
        let branch = c.branch_polynomial().clone();
        let roots = branch.rational_roots();
        if roots.iter().map(|(_, m)| *m as i64).sum::<i64>() != branch.deg() {
            continue;
        }
        let mut total = 0;
        let bases = roots
            .iter()
            .map(|&(r, _)| Base::Finite(r))
            .chain(std::iter::once(Base::Infinity));
        for base in bases {
            for pl in c.places_over(base).unwrap().iter() {
                total += pl.ord_dx().unwrap();
            }
        }
        assert_eq!(total, 2 * c.g() as i64 - 2, "{c:?}");
        if !c.is_char_two() && c.infinity_branch() {
            assert_eq!(
                c.places_over(Base::Infinity).unwrap()[0].ord_dx().unwrap(),
                -3
            );
        }
        checked += 1;
    }
}
