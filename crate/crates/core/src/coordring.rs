//! The function field `k(x) + k(x) y`, differentials `c dx` and
//! automorphism pullbacks.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::gfield::Fe;
use crate::places::{self, Base, Chart};
use crate::polylab::{forward_binop, Poly, RationalFn};

/// `a(x) + b(x) y` on a fixed curve.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    curve: CurveModel,
    a: RationalFn,
    b: RationalFn,
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) + ({:?}) y", self.a, self.b)
    }
}

impl RingElement {
    pub fn new(curve: &CurveModel, a: RationalFn, b: RationalFn) -> RingElement {
        RingElement {
            curve: curve.clone(),
            a,
            b,
        }
    }

    pub fn zero(curve: &CurveModel) -> RingElement {
        let k = curve.field();
        RingElement::new(curve, RationalFn::zero(k), RationalFn::zero(k))
    }

    pub fn one(curve: &CurveModel) -> RingElement {
        RingElement::from_rational(curve, RationalFn::one(curve.field()))
    }

    pub fn constant(curve: &CurveModel, c: Fe) -> RingElement {
        RingElement::from_rational(curve, RationalFn::constant(c))
    }

    pub fn x(curve: &CurveModel) -> RingElement {
        RingElement::from_poly(curve, Poly::x(curve.field()))
    }

    pub fn y(curve: &CurveModel) -> RingElement {
        let k = curve.field();
        RingElement::new(curve, RationalFn::zero(k), RationalFn::one(k))
    }

    pub fn from_rational(curve: &CurveModel, a: RationalFn) -> RingElement {
        RingElement::new(curve, a, RationalFn::zero(curve.field()))
    }

    pub fn from_poly(curve: &CurveModel, a: Poly) -> RingElement {
        RingElement::from_rational(curve, RationalFn::from_poly(a))
    }

    /// `b(x) y`.
    pub fn y_times(curve: &CurveModel, b: RationalFn) -> RingElement {
        RingElement::new(curve, RationalFn::zero(curve.field()), b)
    }

    /// Reduces `sum_k c_k y^k` to `a + b y` using the curve relation.
    pub fn normal_form(curve: &CurveModel, powers: &[RationalFn]) -> RingElement {
        let y = RingElement::y(curve);
        let mut acc = RingElement::zero(curve);
        for c in powers.iter().rev() {
            acc = &(&acc * &y) + &RingElement::from_rational(curve, c.clone());
        }
        acc
    }

    pub fn curve(&self) -> &CurveModel {
        &self.curve
    }

    pub fn a(&self) -> &RationalFn {
        &self.a
    }

    pub fn b(&self) -> &RationalFn {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, c: Fe) -> RingElement {
        RingElement::new(&self.curve, self.a.scale(c), self.b.scale(c))
    }

    /// Multiplication by a function of x.
    pub fn mul_rational(&self, r: &RationalFn) -> RingElement {
        RingElement::new(&self.curve, &self.a * r, &self.b * r)
    }

    /// Image under the hyperelliptic involution.
    pub fn conjugate(&self) -> RingElement {
        match self.curve.h() {
            None => RingElement::new(&self.curve, self.a.clone(), -&self.b),
            Some(h) => RingElement::new(
                &self.curve,
                &self.a + &(&self.b * &RationalFn::from_poly(h.clone())),
                self.b.clone(),
            ),
        }
    }

    /// `z * conjugate(z)`, a function of x.
    pub fn norm(&self) -> RationalFn {
        let f = RationalFn::from_poly(self.curve.f().clone());
        let aa = &self.a * &self.a;
        let bbf = &(&self.b * &self.b) * &f;
        match self.curve.h() {
            None => &aa - &bbf,
            Some(h) => {
                let abh = &(&self.a * &self.b) * &RationalFn::from_poly(h.clone());
                &(&aa + &abh) + &bbf
            }
        }
    }

    pub fn inv(&self) -> Result<RingElement> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conjugate().mul_rational(&n.inv()?))
    }

    pub fn div(&self, other: &RingElement) -> Result<RingElement> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> RingElement {
        let mut acc = RingElement::one(&self.curve);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `x -> x + c` in both coordinates, leaving y alone.
    pub fn shift_x(&self, c: Fe) -> RingElement {
        RingElement::new(&self.curve, self.a.shift(c), self.b.shift(c))
    }

    /// `d(a + b y)` in dx-normal form.
    pub fn exterior_d(&self) -> Differential {
        let c = &self.curve;
        let f = RationalFn::from_poly(c.f().clone());
        let df = RationalFn::from_poly(c.f().derivative());
        let da = self.a.derivative();
        let db = self.b.derivative();
        let coeff = match c.h() {
            None => {
                // dy = f' y / (2 f) dx
                let two = c.field().from_int(2);
                let ratio = df.div(&f.scale(two)).expect("f is nonzero");
                RingElement::new(c, da, &db + &(&self.b * &ratio))
            }
            Some(h) => {
                // h dy = (f' + h' y) dx
                let hr = RationalFn::from_poly(h.clone());
                let dh = RationalFn::from_poly(h.derivative());
                let b_over_h = self.b.div(&hr).expect("h is nonzero");
                RingElement::new(c, &da + &(&b_over_h * &df), &db + &(&b_over_h * &dh))
            }
        };
        Differential::new(coeff)
    }

    /// `O(U_infinity) = k[x, y]`.
    pub fn in_u_inf(&self) -> bool {
        self.a.is_poly() && self.b.is_poly()
    }

    /// `O(U_0)` is generated by `1/x` and `y / x^{g+1}`.
    pub fn in_u0(&self) -> bool {
        let k = self.curve.field();
        let g = self.curve.g() as i64;
        self.a.is_poly_in_inverse_x()
            && (&self.b * &RationalFn::x_pow(k, g + 1)).is_poly_in_inverse_x()
    }

    /// `O(U_0 cap U_infinity) = k[x, 1/x, y]`.
    pub fn in_u0_inf(&self) -> bool {
        self.a.as_laurent().is_some() && self.b.as_laurent().is_some()
    }

    /// `O(U_a)`: the `U_0` test after `x -> x + a`.
    pub fn in_ua(&self, a: Fe) -> bool {
        self.shift_x(a).in_u0()
    }

    /// Regularity through local valuations; agrees with the algebraic tests.
    pub fn regular_on(&self, chart: &Chart) -> Result<bool> {
        places::regular_on(self, chart)
    }
}

impl Add<&RingElement> for &RingElement {
    type Output = RingElement;
    fn add(self, o: &RingElement) -> RingElement {
        RingElement::new(&self.curve, &self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub<&RingElement> for &RingElement {
    type Output = RingElement;
    fn sub(self, o: &RingElement) -> RingElement {
        RingElement::new(&self.curve, &self.a - &o.a, &self.b - &o.b)
    }
}

impl Mul<&RingElement> for &RingElement {
    type Output = RingElement;
    fn mul(self, o: &RingElement) -> RingElement {
        let f = RationalFn::from_poly(self.curve.f().clone());
        let bb = &self.b * &o.b;
        let a = &(&self.a * &o.a) + &(&bb * &f);
        let mut b = &(&self.a * &o.b) + &(&self.b * &o.a);
        if let Some(h) = self.curve.h() {
            b = &b + &(&bb * &RationalFn::from_poly(h.clone()));
        }
        RingElement::new(&self.curve, a, b)
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::new(&self.curve, -&self.a, -&self.b)
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

forward_binop!(Add, add, RingElement);
forward_binop!(Sub, sub, RingElement);
forward_binop!(Mul, mul, RingElement);

/// The differential `coeff dx`.
#[derive(Clone, PartialEq, Eq)]
pub struct Differential {
    coeff: RingElement,
}

impl fmt::Debug for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}] dx", self.coeff)
    }
}

impl Differential {
    pub fn new(coeff: RingElement) -> Differential {
        Differential { coeff }
    }

    pub fn zero(curve: &CurveModel) -> Differential {
        Differential::new(RingElement::zero(curve))
    }

    /// `dx / y` in odd characteristic, `dx / h` in characteristic 2.
    pub fn canonical(curve: &CurveModel) -> Differential {
        let k = curve.field();
        let coeff = match curve.h() {
            None => RingElement::y_times(
                curve,
                RationalFn::new(Poly::one(k), curve.f().clone()).expect("f is nonzero"),
            ),
            Some(h) => RingElement::from_rational(
                curve,
                RationalFn::new(Poly::one(k), h.clone()).expect("h is nonzero"),
            ),
        };
        Differential::new(coeff)
    }

    /// `e * omega_can`.
    pub fn from_canonical(e: &RingElement) -> Differential {
        Differential::new(e * &Differential::canonical(e.curve()).coeff)
    }

    pub fn curve(&self) -> &CurveModel {
        self.coeff.curve()
    }

    pub fn coeff(&self) -> &RingElement {
        &self.coeff
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn scale(&self, c: Fe) -> Differential {
        Differential::new(self.coeff.scale(c))
    }

    /// `e * self`.
    pub fn mul_fn(&self, e: &RingElement) -> Differential {
        Differential::new(&self.coeff * e)
    }

    /// The function `self / omega_can`.
    pub fn ratio_to_canonical(&self) -> RingElement {
        let c = self.curve();
        match c.h() {
            None => &self.coeff * &RingElement::y(c),
            Some(h) => self.coeff.mul_rational(&RationalFn::from_poly(h.clone())),
        }
    }

    pub fn regular_on(&self, chart: &Chart) -> Result<bool> {
        places::regular_diff_on(self, chart)
    }

    /// Sum of residues over the places above `base`.
    pub fn residue_sum(&self, base: Base) -> Result<Fe> {
        places::residue_sum(self, base)
    }
}

impl Add<&Differential> for &Differential {
    type Output = Differential;
    fn add(self, o: &Differential) -> Differential {
        Differential::new(&self.coeff + &o.coeff)
    }
}

impl Sub<&Differential> for &Differential {
    type Output = Differential;
    fn sub(self, o: &Differential) -> Differential {
        Differential::new(&self.coeff - &o.coeff)
    }
}

impl Neg for &Differential {
    type Output = Differential;
    fn neg(self) -> Differential {
        Differential::new(-&self.coeff)
    }
}

impl Neg for Differential {
    type Output = Differential;
    fn neg(self) -> Differential {
        -&self
    }
}

forward_binop!(Add, add, Differential);
forward_binop!(Sub, sub, Differential);

/// An automorphism `x -> x + a, y -> eps y`, or the hyperelliptic involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Automorphism {
    Involution,
    Translation { a: Fe, eps: Fe },
}

impl Automorphism {
    /// `x -> x + a`, `y -> eps y`, checked against the curve.
    pub fn translation(curve: &CurveModel, a: Fe, eps: i64) -> Result<Automorphism> {
        let k = curve.field();
        if a.field() != k {
            return Err(Error::FieldMismatch);
        }
        if eps != 1 && eps != -1 {
            return Err(Error::InvalidAutomorphism(format!(
                "sign {eps} is not +1 or -1"
            )));
        }
        if curve.f().shift(a) != *curve.f() {
            return Err(Error::InvalidAutomorphism(
                "f(x + a) differs from f(x)".into(),
            ));
        }
        if let Some(h) = curve.h() {
            if h.shift(a) != *h {
                return Err(Error::InvalidAutomorphism(
                    "h(x + a) differs from h(x)".into(),
                ));
            }
        }
        Ok(Automorphism::Translation {
            a,
            eps: k.from_int(eps),
        })
    }

    pub fn involution() -> Automorphism {
        Automorphism::Involution
    }

    /// The shift `a`, zero for the involution.
    pub fn shift(&self, curve: &CurveModel) -> Fe {
        match self {
            Automorphism::Involution => curve.field().zero(),
            Automorphism::Translation { a, .. } => *a,
        }
    }

    pub fn pullback(&self, e: &RingElement) -> RingElement {
        match self {
            Automorphism::Involution => e.conjugate(),
            Automorphism::Translation { a, eps } => {
                let s = e.shift_x(*a);
                RingElement::new(e.curve(), s.a, s.b.scale(*eps))
            }
        }
    }

    /// Pullback of `c dx`; `x -> x + a` leaves dx unchanged.
    pub fn pullback_diff(&self, w: &Differential) -> Differential {
        Differential::new(self.pullback(w.coeff()))
    }

    /// `tau_a` composed with `tau_b` pulls back as `tau_{a+b}`.
    pub fn compose(&self, other: &Automorphism, curve: &CurveModel) -> Automorphism {
        let one = curve.field().one();
        let parts = |t: &Automorphism| match t {
            Automorphism::Involution => (curve.field().zero(), -one),
            Automorphism::Translation { a, eps } => (*a, *eps),
        };
        let (a1, e1) = parts(self);
        let (a2, e2) = parts(other);
        if curve.is_char_two()
            && (matches!(self, Automorphism::Involution)
                || matches!(other, Automorphism::Involution))
        {
            // y -> y + h is not a sign change; only sigma o sigma = id is needed
            if self == other {
                return Automorphism::Translation {
                    a: curve.field().zero(),
                    eps: one,
                };
            }
            panic!(
                "composition of sigma with a translation is not a translation in characteristic 2"
            );
        }
        Automorphism::Translation {
            a: a1 + a2,
            eps: e1 * e2,
        }
    }
}
