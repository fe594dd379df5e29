//! Čech representatives for `H^0(Omega)`, `H^1(O)` and `H^1_dR` on the
//! cover `{U_0, U_inf}` and its refinement `{U_0, U_a, U_inf}`.
//!
//! `U_b` is the complement of the fibre over `b`. A de-Rham class is a
//! triple `(w0, winf, f)` with `w0` regular on `U_0`, `winf` regular on
//! `U_inf`, `f` regular on the overlap and `df = w0 - winf`, taken modulo
//! coboundaries `(df0, dfinf, f0 - finf)`.

use crate::coordring::{Differential, RingElement};
use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::gfield::Fe;
use crate::places::{self, Base, Chart};
use crate::polylab::{binom, LaurentPoly, Poly, RationalFn};

/// `x^j omega_can` for `j = 0..g`.
pub fn h0_basis(c: &CurveModel) -> Vec<Differential> {
    let k = c.field();
    (0..c.g())
        .map(|j| {
            Differential::from_canonical(&RingElement::from_poly(c, Poly::monomial(k.one(), j)))
        })
        .collect()
}

/// Coordinates of a global differential in [`h0_basis`].
pub fn h0_coords(w: &Differential) -> Result<Vec<Fe>> {
    let c = w.curve();
    let ratio = w.ratio_to_canonical();
    if !ratio.b().is_zero() {
        return Err(Error::NotInSpan);
    }
    let p = ratio.a().as_poly().ok_or(Error::NotInSpan)?;
    if p.deg() >= c.g() as i64 {
        return Err(Error::NotInSpan);
    }
    Ok((0..c.g()).map(|j| p.coeff(j)).collect())
}

/// Coordinates of a class in `H^1(O)` with respect to `[y / x^i]`, `i = 1..g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Class {
    pub coords: Vec<Fe>,
}

/// `e = sum c_i y/x^i + (f0 - finf)` with `f0` regular on `U_0` and `finf`
/// regular on `U_inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Reduction {
    pub class: H1Class,
    pub f0: RingElement,
    pub finf: RingElement,
}

fn laurent_pieces(l: &LaurentPoly, keep: impl Fn(i64) -> bool) -> RationalFn {
    l.filter(keep).to_rational()
}

/// Splits a function on `U_0 cap U_inf` into its class and a coboundary.
pub fn h1_reduce(e: &RingElement) -> Result<H1Reduction> {
    let c = e.curve();
    let g = c.g() as i64;
    let a = e.a().as_laurent().ok_or(Error::NotLaurent)?;
    let b = e.b().as_laurent().ok_or(Error::NotLaurent)?;
    let coords = (1..=g).map(|i| b.coeff(-i)).collect();
    let f0 = RingElement::new(
        c,
        laurent_pieces(&a, |k| k <= 0),
        laurent_pieces(&b, |k| k <= -(g + 1)),
    );
    let finf = -RingElement::new(
        c,
        laurent_pieces(&a, |k| k > 0),
        laurent_pieces(&b, |k| k >= 0),
    );
    Ok(H1Reduction {
        class: H1Class { coords },
        f0,
        finf,
    })
}

/// The function `sum c_i y / x^i`.
pub fn h1_representative(c: &CurveModel, cls: &H1Class) -> RingElement {
    let k = c.field();
    let mut b = RationalFn::zero(k);
    for (n, &ci) in cls.coords.iter().enumerate() {
        b = &b + &RationalFn::x_pow(k, -(n as i64 + 1)).scale(ci);
    }
    RingElement::y_times(c, b)
}

/// A Čech triple `(w0, winf, f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechTriple {
    pub w0: Differential,
    pub winf: Differential,
    pub f: RingElement,
}

impl CechTriple {
    pub fn new(w0: Differential, winf: Differential, f: RingElement) -> CechTriple {
        CechTriple { w0, winf, f }
    }

    pub fn zero(c: &CurveModel) -> CechTriple {
        CechTriple::new(
            Differential::zero(c),
            Differential::zero(c),
            RingElement::zero(c),
        )
    }

    pub fn curve(&self) -> &CurveModel {
        self.f.curve()
    }

    /// `(df0, dfinf, f0 - finf)`.
    pub fn coboundary(f0: &RingElement, finf: &RingElement) -> CechTriple {
        CechTriple::new(f0.exterior_d(), finf.exterior_d(), f0 - finf)
    }

    /// `(w, w, 0)` for a global differential.
    pub fn from_global(w: &Differential) -> CechTriple {
        CechTriple::new(w.clone(), w.clone(), RingElement::zero(w.curve()))
    }

    pub fn add(&self, o: &CechTriple) -> CechTriple {
        CechTriple::new(&self.w0 + &o.w0, &self.winf + &o.winf, &self.f + &o.f)
    }

    pub fn sub(&self, o: &CechTriple) -> CechTriple {
        CechTriple::new(&self.w0 - &o.w0, &self.winf - &o.winf, &self.f - &o.f)
    }

    pub fn scale(&self, k: Fe) -> CechTriple {
        CechTriple::new(self.w0.scale(k), self.winf.scale(k), self.f.scale(k))
    }

    /// Whether `df = w0 - winf` holds exactly.
    pub fn identity_holds(&self) -> bool {
        self.f.exterior_d() == &self.w0 - &self.winf
    }
}

/// Outcome of the four checks on a triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleReport {
    pub identity: bool,
    pub w0_regular: bool,
    pub winf_regular: bool,
    pub f_regular: bool,
}

impl TripleReport {
    pub fn all_pass(&self) -> bool {
        self.identity && self.w0_regular && self.winf_regular && self.f_regular
    }
}

/// Validates a triple on the cover `{U_0, U_inf}`.
pub fn triple_validate(t: &CechTriple) -> Result<TripleReport> {
    triple_validate_on(t, t.curve().field().zero())
}

/// Validates a triple on the cover `{U_a, U_inf}`.
pub fn triple_validate_on(t: &CechTriple, a: Fe) -> Result<TripleReport> {
    let ua = Chart::ua(a);
    let uinf = Chart::uinf();
    Ok(TripleReport {
        identity: t.identity_holds(),
        w0_regular: t.w0.regular_on(&ua)?,
        winf_regular: t.winf.regular_on(&uinf)?,
        f_regular: t.f.regular_on(&ua.intersect(&uinf))?,
    })
}

/// `x^i omega_can` as the triple `lambda_i`.
pub fn lambda(c: &CurveModel, i: usize) -> Result<CechTriple> {
    if i >= c.g() {
        return Err(Error::IndexOutOfRange { i, g: c.g() });
    }
    let k = c.field();
    let w = Differential::from_canonical(&RingElement::from_poly(c, Poly::monomial(k.one(), i)));
    Ok(CechTriple::from_global(&w))
}

/// The triple `gamma_i`, `1 <= i <= g`.
pub fn gamma(c: &CurveModel, i: usize) -> Result<CechTriple> {
    let s = c.s_polynomials(i)?;
    let k = c.field();
    let xi1 = RationalFn::x_pow(k, -(i as i64 + 1));
    let f = RingElement::y_times(c, RationalFn::x_pow(k, -(i as i64)));
    let part = |p: &[Poly; 2]| {
        RingElement::new(
            c,
            &RationalFn::from_poly(p[0].clone()) * &xi1,
            &RationalFn::from_poly(p[1].clone()) * &xi1,
        )
    };
    let (w0, winf) = match c.h() {
        None => {
            let half = k.from_int(2).inv().expect("odd characteristic");
            (
                Differential::from_canonical(&part(&s.psi).scale(half)),
                Differential::from_canonical(&part(&s.phi).scale(-half)),
            )
        }
        Some(_) => (
            Differential::from_canonical(&part(&s.psi)),
            Differential::from_canonical(&part(&s.phi)),
        ),
    };
    Ok(CechTriple::new(w0, winf, f))
}

/// `lambda_0..lambda_{g-1}, gamma_1..gamma_g`.
pub fn dr_basis(c: &CurveModel) -> Result<Vec<CechTriple>> {
    let g = c.g();
    let mut out = Vec::with_capacity(2 * g);
    for i in 0..g {
        out.push(lambda(c, i)?);
    }
    for i in 1..=g {
        out.push(gamma(c, i)?);
    }
    Ok(out)
}

/// Coordinates in the basis `lambda_0..lambda_{g-1}, gamma_1..gamma_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrClass {
    pub lambda: Vec<Fe>,
    pub gamma: Vec<Fe>,
}

impl DrClass {
    /// `lambda` coordinates followed by `gamma` coordinates.
    pub fn flat(&self) -> Vec<Fe> {
        self.lambda
            .iter()
            .chain(self.gamma.iter())
            .copied()
            .collect()
    }
}

/// `t = sum d_j lambda_j + sum c_i gamma_i + coboundary(f0, finf)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrReduction {
    pub class: DrClass,
    pub f0: RingElement,
    pub finf: RingElement,
}

/// `sum d_j lambda_j + sum c_i gamma_i`.
pub fn dr_combination(c: &CurveModel, cls: &DrClass) -> Result<CechTriple> {
    let mut acc = CechTriple::zero(c);
    for (j, &d) in cls.lambda.iter().enumerate() {
        if !d.is_zero() {
            acc = acc.add(&lambda(c, j)?.scale(d));
        }
    }
    for (i, &ci) in cls.gamma.iter().enumerate() {
        if !ci.is_zero() {
            acc = acc.add(&gamma(c, i + 1)?.scale(ci));
        }
    }
    Ok(acc)
}

/// Coordinates of a triple on `{U_0, U_inf}`.
///
/// The third entry fixes the `gamma` part and a coboundary; what remains has
/// zero third entry, so its two differentials glue to a global one whose
/// quotient by `omega_can` gives the `lambda` part. Every step is exact, so
/// invalid input is rejected rather than approximated.
pub fn dr_reduce(t: &CechTriple) -> Result<DrReduction> {
    let c = t.curve();
    let h1 = h1_reduce(&t.f)?;
    let partial = DrClass {
        lambda: vec![c.field().zero(); c.g()],
        gamma: h1.class.coords.clone(),
    };
    let rest = t
        .sub(&dr_combination(c, &partial)?)
        .sub(&CechTriple::coboundary(&h1.f0, &h1.finf));
    debug_assert!(rest.f.is_zero());
    if rest.w0 != rest.winf {
        return Err(Error::IdentityFails);
    }
    let lambda = h0_coords(&rest.w0)?;
    Ok(DrReduction {
        class: DrClass {
            lambda,
            gamma: partial.gamma,
        },
        f0: h1.f0,
        finf: h1.finf,
    })
}

/// A representative on `{U_0, U_a, U_inf}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechSextuple {
    pub a: Fe,
    pub i: usize,
    pub w0: Differential,
    pub wa: Differential,
    pub winf: Differential,
    pub f0a: RingElement,
    pub f0inf: RingElement,
    pub fainf: RingElement,
    /// `(x - a)^g` truncated to degree `i - 1`.
    pub r: Poly,
    /// `(x - a)^g - r`.
    pub t: Poly,
    /// Coefficient of `x^{i-1}` in `g (x - a)^{g-1}`.
    pub b_prev: Fe,
}

/// `(-1)^{g-i} i binom(g, i) a^{g-i}`.
pub fn b_prev(c: &CurveModel, a: Fe, i: usize) -> Fe {
    let k = c.field();
    let g = c.g();
    let sign = if (g - i).is_multiple_of(2) {
        k.one()
    } else {
        -k.one()
    };
    sign * k.from_int(i as i64) * binom(k, g, i) * a.pow((g - i) as u64)
}

/// Lifts `gamma_i` to the refined cover with the additional chart `U_a`.
pub fn refine_sextuple(c: &CurveModel, a: Fe, i: usize) -> Result<CechSextuple> {
    if c.is_char_two() {
        return Err(Error::CharTwoUnsupported);
    }
    if a.field() != c.field() {
        return Err(Error::FieldMismatch);
    }
    if a.is_zero() {
        return Err(Error::ZeroShift);
    }
    let g = c.g();
    let k = c.field();
    let base = gamma(c, i)?;
    let s = c.s_polynomials(i)?;
    let xa = Poly::linear(a);
    let gpoly = xa.pow(g as u32);
    let (r, t) = gpoly.split_at(i - 1);
    let bp = b_prev(c, a, i);
    // [(psi t - phi r)(x - a) - 2 f a b_{i-1} x^i] / (2 x^{i+1} (x - a)^{g+1}) * dx / y
    let two = k.from_int(2);
    let num = &(&(&(&s.psi[0] * &t) - &(&s.phi[0] * &r)) * &xa)
        - &(c.f() * &Poly::monomial(two * a * bp, i));
    let den = &Poly::monomial(two, i + 1) * &xa.pow(g as u32 + 1);
    let wa =
        Differential::from_canonical(&RingElement::from_rational(c, RationalFn::new(num, den)?));
    let over = |p: &Poly| {
        RingElement::y_times(
            c,
            RationalFn::new(p.clone(), &Poly::monomial(k.one(), i) * &gpoly).expect("nonzero"),
        )
    };
    Ok(CechSextuple {
        a,
        i,
        w0: base.w0,
        wa,
        winf: base.winf,
        f0a: over(&r),
        f0inf: base.f,
        fainf: over(&t),
        r,
        t,
        b_prev: bp,
    })
}

/// `(w0, winf, f0inf)`.
pub fn rho(s: &CechSextuple) -> CechTriple {
    CechTriple::new(s.w0.clone(), s.winf.clone(), s.f0inf.clone())
}

/// `(wa, winf, fainf)`, a triple on `{U_a, U_inf}`.
pub fn rho_prime(s: &CechSextuple) -> CechTriple {
    CechTriple::new(s.wa.clone(), s.winf.clone(), s.fainf.clone())
}

/// Outcome of the checks on a sextuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SextupleReport {
    pub cocycle: bool,
    pub d_0a: bool,
    pub d_0inf: bool,
    pub d_ainf: bool,
    pub regular: [bool; 6],
    /// `r'(x)(x - a) - g r(x) = a b_{i-1} x^{i-1}`.
    pub r_identity: bool,
}

impl SextupleReport {
    pub fn all_pass(&self) -> bool {
        self.cocycle
            && self.d_0a
            && self.d_0inf
            && self.d_ainf
            && self.regular.iter().all(|&b| b)
            && self.r_identity
    }
}

/// `r'(x)(x - a) - g r(x) == a b_{i-1} x^{i-1}`.
pub fn r_identity_holds(c: &CurveModel, r: &Poly, a: Fe, i: usize) -> bool {
    let k = c.field();
    let lhs = &(&r.derivative() * &Poly::linear(a)) - &r.scale(k.from_int(c.g() as i64));
    lhs == Poly::monomial(a * b_prev(c, a, i), i - 1)
}

pub fn sextuple_validate(s: &CechSextuple) -> Result<SextupleReport> {
    let c = s.f0a.curve();
    let k = c.field();
    let u0 = Chart::u0(k);
    let ua = Chart::ua(s.a);
    let uinf = Chart::uinf();
    Ok(SextupleReport {
        cocycle: (&(&s.f0a - &s.f0inf) + &s.fainf).is_zero(),
        d_0a: s.f0a.exterior_d() == &s.w0 - &s.wa,
        d_0inf: s.f0inf.exterior_d() == &s.w0 - &s.winf,
        d_ainf: s.fainf.exterior_d() == &s.wa - &s.winf,
        regular: [
            s.w0.regular_on(&u0)?,
            s.wa.regular_on(&ua)?,
            s.winf.regular_on(&uinf)?,
            s.f0a.regular_on(&u0.intersect(&ua))?,
            s.f0inf.regular_on(&u0.intersect(&uinf))?,
            s.fainf.regular_on(&ua.intersect(&uinf))?,
        ],
        r_identity: r_identity_holds(c, &s.r, s.a, s.i),
    })
}

/// `<w, [F]>`: sum of residues of `F w` above 0.
pub fn serre_pairing(w: &Differential, cls: &H1Class) -> Result<Fe> {
    let c = w.curve();
    let f = h1_representative(c, cls);
    w.mul_fn(&f).residue_sum(Base::Finite(c.field().zero()))
}

/// Entry `(j, i)` is `<x^j omega_can, [y / x^{i+1}]>`.
pub fn pairing_matrix(c: &CurveModel) -> Result<Vec<Vec<Fe>>> {
    let g = c.g();
    let k = c.field();
    let basis = h0_basis(c);
    let mut rows = Vec::with_capacity(g);
    for w in &basis {
        let mut row = Vec::with_capacity(g);
        for i in 0..g {
            let mut coords = vec![k.zero(); g];
            coords[i] = k.one();
            row.push(serre_pairing(w, &H1Class { coords })?);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// One place's share of the order count showing that the `U_0` entry of a
/// characteristic-2 `gamma_i` is regular above infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderBudget {
    pub i: usize,
    pub label: u32,
    pub e: u32,
    /// Lower bounds for the orders of the 1- and y-coefficients of `psi_i`.
    pub psi_bounds: (i64, i64),
    pub y_bound: i64,
    pub ord_x_power: i64,
    pub ord_h_inv: i64,
    pub ord_dx: i64,
    /// `min{psi bounds with y} + ord_x_power + ord_h_inv + ord_dx`.
    pub total: i64,
    /// Measured orders satisfy every bound and the measured differential
    /// order is at least `total`.
    pub consistent: bool,
}

/// Order counts at each place above infinity for `gamma_1..gamma_g` on a
/// characteristic-2 curve.
pub fn char_two_order_budget(c: &CurveModel) -> Result<Vec<OrderBudget>> {
    let h = c.h().ok_or(Error::CharMismatch)?.clone();
    let k = c.field();
    let g = c.g() as i64;
    let d = h.deg();
    let y = RingElement::y(c);
    let mut out = Vec::new();
    for i in 1..=c.g() {
        let s = c.s_polynomials(i)?;
        let w0 = gamma(c, i)?.w0;
        let ii = i as i64;
        for pl in c.places_over(Base::Infinity)?.iter() {
            let e = pl.e() as i64;
            let ord_dx = pl.ord_dx()?;
            let psi_bounds = (-e * ii, -e * (ii - 1));
            let y_bound = -e * (g + 1);
            let ord_x_power = e * (ii + 1);
            let ord_h_inv = e * d;
            let total = psi_bounds.0.min(psi_bounds.1 + y_bound) + ord_x_power + ord_h_inv + ord_dx;
            let ord_of = |p: &Poly| -> Result<places::Valuation> {
                pl.ord(&RingElement::from_poly(c, p.clone()))
            };
            let hinv = RingElement::from_rational(c, RationalFn::new(Poly::one(k), h.clone())?);
            let xp = RingElement::from_rational(c, RationalFn::x_pow(k, -(ii + 1)));
            let consistent = ord_of(&s.psi[0])?.at_least(psi_bounds.0)
                && ord_of(&s.psi[1])?.at_least(psi_bounds.1)
                && pl.ord(&y)?.at_least(y_bound)
                && pl.ord(&xp)? == places::Valuation::Finite(ord_x_power)
                && pl.ord(&hinv)? == places::Valuation::Finite(ord_h_inv)
                && pl.ord_diff(&w0)?.at_least(total);
            out.push(OrderBudget {
                i,
                label: pl.label(),
                e: pl.e(),
                psi_bounds,
                y_bound,
                ord_x_power,
                ord_h_inv,
                ord_dx,
                total,
                consistent,
            });
        }
    }
    Ok(out)
}
