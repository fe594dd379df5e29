//! Acceptance suite: one PASS/FAIL line per criterion, exact arithmetic.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use hyperdr::cech::{
    char_two_order_budget, dr_basis, dr_combination, dr_reduce, pairing_matrix, triple_validate,
    CechTriple, DrClass,
};
use hyperdr::coordring::{Automorphism, Differential, RingElement};
use hyperdr::curve::CurveModel;
use hyperdr::equivariant::{
    action_dr, family_scan, random_family_polys, splitting_decide, verify_splitting, SplitResult,
    Verdict,
};
use hyperdr::gfield::{make_field, Fe};
use hyperdr::linalg::Matrix;
use hyperdr::places::Base;
use hyperdr::polylab::{Poly, RationalFn};

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn x022() -> CurveModel {
    let k = make_field(3, 1).unwrap();
    CurveModel::odd(Poly::from_ints(k, &[2, 0, 1, 0, 1, 0, 1])).unwrap()
}

/// `num / (den y) dx`, built from the displayed formulas.
fn over_y(c: &CurveModel, num: &[i64], den: &[i64]) -> Differential {
    let k = c.field();
    let r = RationalFn::new(Poly::from_ints(k, num), Poly::from_ints(k, den)).unwrap();
    let inv_y = RingElement::y(c).inv().unwrap();
    Differential::new(inv_y.mul_rational(&r))
}

fn y_over(c: &CurveModel, den: &[i64]) -> RingElement {
    let k = c.field();
    let r = RationalFn::new(Poly::one(k), Poly::from_ints(k, den)).unwrap();
    RingElement::y_times(c, r)
}

fn ints(c: &CurveModel, v: &[i64]) -> Vec<Fe> {
    v.iter().map(|&n| c.field().from_int(n)).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let c = x022();
    let zero = RingElement::zero(&c);
    let lambda0 = over_y(&c, &[1], &[1]);
    let lambda1 = over_y(&c, &[0, 1], &[1]);
    let expected = [
        CechTriple::new(lambda0.clone(), lambda0, zero.clone()),
        CechTriple::new(lambda1.clone(), lambda1, zero),
        CechTriple::new(
            over_y(&c, &[1], &[0, 0, 1]),
            over_y(&c, &[0, 0, 2, 0, 1], &[1]),
            y_over(&c, &[0, 1]),
        ),
        CechTriple::new(
            // (x^2 + 1) / (2 x^3 y) = 2 (x^2 + 1) / (x^3 y) over F_3
            over_y(&c, &[2, 0, 2], &[0, 0, 0, 1]),
            over_y(&c, &[0, 0, 0, 2], &[1]),
            y_over(&c, &[0, 0, 1]),
        ),
    ];
    let basis = dr_basis(&c).map_err(|e| e.to_string())?;
    for (n, (got, want)) in basis.iter().zip(&expected).enumerate() {
        check(got == want, || format!("basis element {n} differs"))?;
    }
    let tau = Automorphism::translation(&c, c.field().one(), 1).map_err(|e| e.to_string())?;
    let m = action_dr(&c, &tau).map_err(|e| e.to_string())?;
    // columns in the order lambda0, lambda1, gamma1, gamma2
    check(m.m.column(2) == ints(&c, &[0, 2, 1, 2]), || {
        format!("tau* gamma1 = {:?}", m.m.column(2))
    })?;
    check(m.m.column(3) == ints(&c, &[2, 0, 0, 1]), || {
        format!("tau* gamma2 = {:?}", m.m.column(3))
    })?;
    let s = match splitting_decide(&m) {
        SplitResult::Splits { s } => s,
        other => return Err(format!("expected a splitting, got {other:?}")),
    };
    check(
        s == Matrix::from_ints(c.field(), &[&[0, 0], &[0, 1]]),
        || format!("S = {s:?}"),
    )?;
    check(verify_splitting(&m, &s), || {
        "S does not solve the system".into()
    })?;
    let took = start.elapsed();
    check(took < Duration::from_secs(5), || format!("took {took:?}"))?;
    Ok(format!("basis, action and S reproduced in {:.2?}", took))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rows = 0;
    for (p, deg) in [(3u32, 3usize), (3, 5), (5, 1), (5, 3), (7, 1)] {
        let k = make_field(p, 1).unwrap();
        let quarter = k.from_int(4).inv().unwrap();
        let qs = random_family_polys(p, deg, 5, 1000 + p as u64 * 10 + deg as u64)
            .map_err(|e| e.to_string())?;
        for a in [1, 2] {
            let a = k.from_int(a);
            for row in family_scan(&qs, a) {
                check(row.error.is_none(), || {
                    format!("{:?}: {:?}", row.q, row.error)
                })?;
                check(row.verdict == Some(Verdict::NoSplit), || {
                    format!("p={p} q={} a={a}: {:?}", row.q, row.verdict)
                })?;
                check(row.c_last == Some(a * quarter), || {
                    format!("p={p} q={} a={a}: c_last={:?}", row.q, row.c_last)
                })?;
                rows += 1;
            }
        }
    }
    let took = start.elapsed();
    check(took < Duration::from_secs(120), || format!("took {took:?}"))?;
    Ok(format!(
        "{rows} family members, all non-split with c_(g-1) = a/4, in {took:.2?}"
    ))
}

fn sigma_curves() -> Vec<CurveModel> {
    let mut rng = rng(3);
    let mut out = Vec::new();
    for n in 0..25 {
        let p = if n % 2 == 0 { 3 } else { 5 };
        let m = if p == 3 { 1 + (n / 2) as u32 % 2 } else { 1 };
        out.push(random_odd(p, m, 2 + n % 2, n % 3 == 0, &mut rng));
    }
    for n in 0..25 {
        out.push(random_char_two(
            1 + (n % 2) as u32,
            2 + (n / 2) % 2,
            n % 3 != 0,
            &mut rng,
        ));
    }
    out
}

fn criterion_3() -> Outcome {
    for c in sigma_curves() {
        let m = action_dr(&c, &Automorphism::involution()).map_err(|e| e.to_string())?;
        let id = Matrix::identity(c.field(), 2 * c.g());
        let want = if c.is_char_two() {
            id
        } else {
            id.scale(-c.field().one())
        };
        check(m.m == want, || format!("{c:?}: M(sigma) = {:?}", m.m))?;
    }
    Ok("M(sigma) = -I on 25 odd-characteristic curves and I on 25 characteristic-2 curves".into())
}

fn criterion_4() -> Outcome {
    let mut rng = rng(4);
    let mut curves = Vec::new();
    for n in 0..52 {
        let ramified = n % 2 == 0;
        let c = match n % 4 {
            0 | 1 => random_char_two(1 + (n / 4) as u32 % 2, 2 + (n / 8) % 2, ramified, &mut rng),
            2 => random_odd(
                3,
                1 + (n / 4) as u32 % 2,
                2 + (n / 8) % 3,
                ramified,
                &mut rng,
            ),
            _ => random_odd([5, 7][(n / 4) % 2], 1, 2 + (n / 8) % 2, ramified, &mut rng),
        };
        curves.push(c);
    }
    let mut budgets = 0;
    for c in &curves {
        for (n, t) in dr_basis(c).map_err(|e| e.to_string())?.iter().enumerate() {
            let r = triple_validate(t).map_err(|e| e.to_string())?;
            check(r.all_pass(), || format!("{c:?}, triple {n}: {r:?}"))?;
        }
        if c.is_char_two() {
            for b in char_two_order_budget(c).map_err(|e| e.to_string())? {
                check(b.consistent && b.total == 0, || format!("{c:?}: {b:?}"))?;
                budgets += 1;
            }
        }
    }
    let ramified = curves.iter().filter(|c| c.infinity_branch()).count();
    check(ramified > 0 && ramified < curves.len(), || {
        "branch cases not both covered".into()
    })?;
    Ok(format!(
        "{} curves ({ramified} ramified at infinity) validated; {budgets} order counts sum to 0",
        curves.len()
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = rng(5);
    for ramified in [false, true] {
        for n in 0..10 {
            let c = random_char_two(1 + (n % 2) as u32, 2 + n % 2, ramified, &mut rng);
            let g = c.g() as i64;
            let d = c.d().unwrap() as i64;
            let places = c.places_over(Base::Infinity).map_err(|e| e.to_string())?;
            check(places.len() == if ramified { 1 } else { 2 }, || {
                format!("{c:?}")
            })?;
            let want = if ramified { 2 * (g - 1 - d) } else { -2 };
            for pl in places.iter() {
                let got = pl.ord_dx().map_err(|e| e.to_string())?;
                check(got == want, || {
                    format!("{c:?}: ord dx = {got}, want {want}")
                })?;
            }
        }
    }
    let mut bounds = 0;
    for c in sigma_curves() {
        let g = c.g() as i64;
        let y = RingElement::y(&c);
        for pl in c
            .places_over(Base::Infinity)
            .map_err(|e| e.to_string())?
            .iter()
        {
            let bound = if pl.e() == 2 { -2 * (g + 1) } else { -(g + 1) };
            let ord = pl.ord(&y).map_err(|e| e.to_string())?;
            check(ord.at_least(bound), || {
                format!("{c:?}: ord y = {ord:?} < {bound}")
            })?;
            bounds += 1;
        }
    }
    Ok(format!(
        "ord dx exact on 20 characteristic-2 curves; {bounds} pole bounds on y hold"
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = rng(6);
    let mut trials = 0;
    for _ in 0..10 {
        let c = random_curve(&mut rng);
        let k = c.field();
        let g = c.g();
        for _ in 0..50 {
            let cls = DrClass {
                lambda: (0..g).map(|_| random_fe(k, &mut rng)).collect(),
                gamma: (0..g).map(|_| random_fe(k, &mut rng)).collect(),
            };
            let f0 = random_u0(&c, 3, &mut rng);
            let finf = random_uinf(&c, 3, &mut rng);
            let t = dr_combination(&c, &cls)
                .map_err(|e| e.to_string())?
                .add(&CechTriple::coboundary(&f0, &finf));
            let red = dr_reduce(&t).map_err(|e| format!("{c:?}: {e}"))?;
            check(red.class == cls, || {
                format!("{c:?}: {:?} != {cls:?}", red.class)
            })?;
            trials += 1;
        }
    }
    Ok(format!("{trials} round trips over 10 curves"))
}

fn criterion_7() -> Outcome {
    let k = make_field(3, 1).unwrap();
    let start =
        CurveModel::odd(Poly::from_ints(k, &[1, 0, 2, 1, 2, 0, 1])).map_err(|e| e.to_string())?;
    let out = start
        .transform_shift(-k.one())
        .and_then(|c| c.transform_reciprocal())
        .map_err(|e| e.to_string())?;
    let want = Poly::from_ints(k, &[2, 0, 1, 0, 1, 0, 1]);
    check(*out.f() == want, || format!("got {}", out.f()))?;
    Ok(format!("x^6+2x^4+x^3+2x^2+1 -> {}", out.f()))
}

fn criterion_8() -> Outcome {
    let mut rng = rng(8);
    for n in 0..12 {
        let c = if n % 2 == 0 {
            random_char_two(1 + (n / 2) as u32 % 2, 2 + n % 3 % 2, n % 4 == 0, &mut rng)
        } else {
            random_curve(&mut rng)
        };
        let rows = pairing_matrix(&c).map_err(|e| e.to_string())?;
        for (j, row) in rows.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                check((i == j) != v.is_zero(), || {
                    format!("{c:?}: entry ({j},{i}) = {v}")
                })?;
            }
        }
    }
    Ok("pairing matrix diagonal with nonzero diagonal on 12 curves".into())
}

fn criterion_9() -> Outcome {
    let mut rng = rng(9);
    let mut count = 0;
    let mut nonzero_local = 0;
    while count < 100 {
        let c = random_curve(&mut rng);
        let k = c.field();
        for _ in 0..10 {
            let e = random_laurent_element(&c, 2 + c.g() as i64, &mut rng);
            let w = Differential::from_canonical(&e);
            let at0 = w
                .residue_sum(Base::Finite(k.zero()))
                .map_err(|e| e.to_string())?;
            let atinf = w.residue_sum(Base::Infinity).map_err(|e| e.to_string())?;
            check((at0 + atinf).is_zero(), || {
                format!("{c:?}: {at0} + {atinf} != 0")
            })?;
            if !at0.is_zero() {
                nonzero_local += 1;
            }
            count += 1;
        }
    }
    check(nonzero_local > 0, || {
        "every residue vanished; the test is vacuous".into()
    })?;
    Ok(format!(
        "{count} elements, {nonzero_local} with nonzero residue above 0, all sums 0"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("example reproduction", criterion_1),
        ("family scan", criterion_2),
        ("involution acts by sign", criterion_3),
        ("basis validity", criterion_4),
        ("orders above infinity", criterion_5),
        ("reduction round trip", criterion_6),
        ("model transform chain", criterion_7),
        ("serre pairing", criterion_8),
        ("residue theorem", criterion_9),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", n + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
