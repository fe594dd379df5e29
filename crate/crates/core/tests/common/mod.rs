#![allow(dead_code)]

use hyperdr::coordring::RingElement;
use hyperdr::curve::CurveModel;
use hyperdr::gfield::{make_field, Fe, Field};
use hyperdr::polylab::{Poly, RationalFn};
use rand::Rng;
use rand_pcg::Pcg64;

pub fn rng(seed: u64) -> Pcg64 {
    Pcg64::new(seed as u128, 0xa02b_dbf7_bb3c_0a7a_c28f_a16a_64ab_f96d)
}

pub fn random_fe(k: Field, rng: &mut Pcg64) -> Fe {
    k.element(rng.gen_range(0..k.order()))
}

pub fn random_poly(k: Field, deg: usize, rng: &mut Pcg64) -> Poly {
    Poly::new(k, (0..=deg).map(|_| random_fe(k, rng)).collect())
}

pub fn random_monic(k: Field, deg: usize, rng: &mut Pcg64) -> Poly {
    let mut c: Vec<Fe> = (0..deg).map(|_| random_fe(k, rng)).collect();
    c.push(k.one());
    Poly::new(k, c)
}

/// `y^2 = f` with `deg f = 2g + 1` when `ramified`, else `2g + 2`.
pub fn random_odd(p: u32, m: u32, g: usize, ramified: bool, rng: &mut Pcg64) -> CurveModel {
    let k = make_field(p, m).unwrap();
    let deg = 2 * g + if ramified { 1 } else { 2 };
    loop {
        if let Ok(c) = CurveModel::odd(random_monic(k, deg, rng)) {
            return c;
        }
    }
}

/// `y^2 + h y = f` with `deg h <= g` and `deg f = 2g + 1` when `ramified`,
/// else `deg h = g + 1`.
pub fn random_char_two(m: u32, g: usize, ramified: bool, rng: &mut Pcg64) -> CurveModel {
    let k = make_field(2, m).unwrap();
    loop {
        let (h, f) = if ramified {
            let d = rng.gen_range(1..=g);
            (random_monic(k, d, rng), random_monic(k, 2 * g + 1, rng))
        } else {
            let df = rng.gen_range(0..=2 * g + 2);
            (random_monic(k, g + 1, rng), random_poly(k, df, rng))
        };
        if let Ok(c) = CurveModel::char_two(h, f) {
            if c.g() == g {
                return c;
            }
        }
    }
}

/// A random valid curve over a field drawn from the supported range.
pub fn random_curve(rng: &mut Pcg64) -> CurveModel {
    let g = rng.gen_range(2..=3);
    let ramified = rng.gen_bool(0.5);
    match rng.gen_range(0..4) {
        0 => random_char_two(rng.gen_range(1..=2), g, ramified, rng),
        1 => random_odd(3, rng.gen_range(1..=2), g, ramified, rng),
        2 => random_odd(5, 1, g, ramified, rng),
        _ => random_odd(7, 1, g, ramified, rng),
    }
}

/// `sum_k c_k x^k` over `lo..=hi`.
pub fn random_laurent(k: Field, lo: i64, hi: i64, rng: &mut Pcg64) -> RationalFn {
    let mut acc = RationalFn::zero(k);
    for e in lo..=hi {
        acc = &acc + &RationalFn::x_pow(k, e).scale(random_fe(k, rng));
    }
    acc
}

/// Random element of `k[x^{-1}] + k[x^{-1}] y / x^{g+1}`, regular on `U_0`.
pub fn random_u0(c: &CurveModel, span: i64, rng: &mut Pcg64) -> RingElement {
    let k = c.field();
    let g = c.g() as i64;
    RingElement::new(
        c,
        random_laurent(k, -span, 0, rng),
        random_laurent(k, -span - g - 1, -g - 1, rng),
    )
}

/// Random element of `k[x, y]`.
pub fn random_uinf(c: &CurveModel, deg: usize, rng: &mut Pcg64) -> RingElement {
    let k = c.field();
    RingElement::new(
        c,
        RationalFn::from_poly(random_poly(k, deg, rng)),
        RationalFn::from_poly(random_poly(k, deg, rng)),
    )
}

/// Random element of `k[x^{+-1}, y]`.
pub fn random_laurent_element(c: &CurveModel, span: i64, rng: &mut Pcg64) -> RingElement {
    let k = c.field();
    RingElement::new(
        c,
        random_laurent(k, -span, span, rng),
        random_laurent(k, -span, span, rng),
    )
}
