//! Dense polynomials, Laurent polynomials and reduced rational functions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::gfield::{Embedding, Fe, Field};

/// Dense univariate polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "x")?,
                1 => write!(f, "{c}*x")?,
                _ if c.is_one() => write!(f, "x^{k}")?,
                _ => write!(f, "{c}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    /// Builds a polynomial, dropping trailing zeros.
    pub fn new(field: Field, mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        Poly { field, coeffs }
    }

    /// Polynomial from integer coefficients in the prime subfield.
    pub fn from_ints(field: Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: Field) -> Poly {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: Fe) -> Poly {
        Poly::new(c.field(), vec![c])
    }

    pub fn x(field: Field) -> Poly {
        Poly::monomial(field.one(), 1)
    }

    /// `c * x^k`.
    pub fn monomial(c: Fe, k: usize) -> Poly {
        let field = c.field();
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        Poly::new(field, coeffs)
    }

    /// `x - c`.
    pub fn linear(c: Fe) -> Poly {
        Poly::new(c.field(), vec![-c, c.field().one()])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Fe {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to -1.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> Fe {
        self.coeffs
            .last()
            .copied()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    /// Exponent of the largest power of x dividing the polynomial.
    pub fn ord0(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: Fe) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.lc().inv() {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    /// Multiplication by `x^k`.
    pub fn shl(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly::new(self.field, coeffs)
    }

    /// Exact division by `x^k`; the low terms must vanish.
    pub fn shr(&self, k: usize) -> Poly {
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_zero()));
        Poly::new(self.field, self.coeffs.iter().skip(k).copied().collect())
    }

    pub fn eval(&self, x: Fe) -> Fe {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * self.field.from_int(k as i64))
            .collect();
        Poly::new(self.field, coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut result = Poly::one(self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.lc().inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(self.field), self.clone());
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k] * lead_inv;
            if c.is_zero() {
                continue;
            }
            quot[k - dd] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                rem[k - dd + j] -= c * dj;
            }
        }
        rem.truncate(dd);
        (Poly::new(self.field, quot), Poly::new(self.field, rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Division known to be exact.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `f(g(x))`.
    pub fn compose(&self, g: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(self.field), |acc, &c| {
                &(&acc * g) + &Poly::constant(c)
            })
    }

    /// `f(x + c)`, by repeated synthetic division.
    pub fn shift(&self, c: Fe) -> Poly {
        if c.is_zero() || self.is_constant() {
            return self.clone();
        }
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = a[j + 1] * c;
                a[j] += t;
            }
        }
        Poly::new(self.field, a)
    }

    /// `(f^{<=m}, f^{>m})`.
    pub fn split_at(&self, m: usize) -> (Poly, Poly) {
        let cut = (m + 1).min(self.coeffs.len());
        let low = Poly::new(self.field, self.coeffs[..cut].to_vec());
        let mut high = vec![self.field.zero(); cut];
        high.extend_from_slice(&self.coeffs[cut..]);
        (low, Poly::new(self.field, high))
    }

    /// `a_0^{-1} x^s f(1/x)` with `s = deg f`.
    pub fn reciprocal(&self) -> Result<Poly> {
        let a0 = self.coeff(0);
        let inv = a0.inv().ok_or(Error::ZeroConstantTerm)?;
        let rev: Vec<Fe> = self.coeffs.iter().rev().map(|&c| c * inv).collect();
        Ok(Poly::new(self.field, rev))
    }

    /// Reverses the coefficient list with respect to degree `n >= deg`, i.e. `x^n f(1/x)`.
    pub fn reverse(&self, n: usize) -> Poly {
        assert!(
            self.deg() <= n as i64,
            "reversal degree below polynomial degree"
        );
        let mut c = self.coeffs.clone();
        c.resize(n + 1, self.field.zero());
        c.reverse();
        Poly::new(self.field, c)
    }

    /// The polynomial `q` with `f(x) = q(x^p - a^{p-1} x)`, if it exists.
    pub fn additive_decompose(&self, a: Fe) -> Result<Option<Poly>> {
        if a.is_zero() {
            return Err(Error::ZeroShift);
        }
        let p = self.field.p() as usize;
        let z = additive_polynomial(a);
        let mut rest = self.clone();
        let mut q = Vec::new();
        while !rest.is_zero() {
            let (quot, rem) = rest.divrem(&z);
            if !rem.is_constant() {
                return Ok(None);
            }
            q.push(rem.coeff(0));
            rest = quot;
            if q.len() > self.coeffs.len() / p + 1 {
                unreachable!("quotient degrees strictly decrease");
            }
        }
        Ok(Some(Poly::new(self.field, q)))
    }

    /// Whether `gcd(f, f')` is a nonzero constant and `f' != 0`.
    pub fn squarefree_check(&self) -> Result<bool> {
        if self.is_constant() {
            return Err(Error::ConstantInput);
        }
        let d = self.derivative();
        if d.is_zero() {
            return Ok(false);
        }
        Ok(self.gcd(&d).is_one())
    }

    /// Roots lying in the coefficient field, with multiplicity, by exhaustive evaluation.
    pub fn rational_roots(&self) -> Vec<(Fe, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let mut rest = self.clone();
        for c in self.field.elements() {
            if rest.is_constant() {
                break;
            }
            let mut mult = 0;
            while !rest.is_constant() && rest.eval(c).is_zero() {
                rest = rest.div_exact(&Poly::linear(c));
                mult += 1;
            }
            if mult > 0 {
                out.push((c, mult));
            }
        }
        out
    }

    /// Multiplicity of `c` as a root.
    pub fn multiplicity(&self, c: Fe) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        self.shift(c).ord0().unwrap_or(0)
    }

    /// The factor left after removing all roots in the coefficient field.
    pub fn strip_rational_roots(&self) -> Poly {
        let mut rest = self.clone();
        for (c, m) in self.rational_roots() {
            for _ in 0..m {
                rest = rest.div_exact(&Poly::linear(c));
            }
        }
        rest
    }

    /// Coefficients pushed through a field embedding.
    pub fn map(&self, emb: &Embedding) -> Poly {
        Poly::new(
            emb.target(),
            self.coeffs.iter().map(|&c| emb.apply(c)).collect(),
        )
    }
}

/// `x^p - a^{p-1} x`.
pub fn additive_polynomial(a: Fe) -> Poly {
    let field = a.field();
    let p = field.p() as usize;
    &Poly::monomial(field.one(), p) - &Poly::monomial(a.pow(p as u64 - 1), 1)
}

/// Binomial coefficient `n choose k` as an element of the prime subfield.
pub fn binom(field: Field, n: usize, k: usize) -> Fe {
    if k > n {
        return field.zero();
    }
    let p = field.p() as u64;
    // Lucas: product of digit binomials
    let (mut n, mut k) = (n as u64, k as u64);
    let mut acc = field.one();
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return field.zero();
        }
        let mut b = 1u64;
        for j in 0..kd {
            b = b * (nd - j) / (j + 1);
        }
        acc *= field.from_int((b % p) as i64);
        n /= p;
        k /= p;
    }
    acc
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $t:ty) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                (&self).$m(rhs)
            }
        }
        impl $tr<$t> for &$t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                self.$m(&rhs)
            }
        }
    };
}
pub(crate) use forward_binop;

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Poly::new(self.field, coeffs)
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Poly::new(self.field, coeffs)
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(self.field, out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

forward_binop!(Add, add, Poly);
forward_binop!(Sub, sub, Poly);
forward_binop!(Mul, mul, Poly);

/// Laurent polynomial `sum c_k x^{lo + k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    field: Field,
    lo: i64,
    coeffs: Vec<Fe>,
}

impl LaurentPoly {
    pub fn new(field: Field, lo: i64, coeffs: Vec<Fe>) -> LaurentPoly {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..lead);
        let lo = if coeffs.is_empty() {
            0
        } else {
            lo + lead as i64
        };
        LaurentPoly { field, lo, coeffs }
    }

    pub fn zero(field: Field) -> LaurentPoly {
        LaurentPoly {
            field,
            lo: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest exponent present (`None` for zero).
    pub fn hi(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.lo + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, e: i64) -> Fe {
        if e < self.lo {
            return self.field.zero();
        }
        self.coeffs
            .get((e - self.lo) as usize)
            .copied()
            .unwrap_or_else(|| self.field.zero())
    }

    /// `(exponent, coefficient)` pairs of nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Fe)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, &c)| (self.lo + k as i64, c))
    }

    /// Keeps the terms whose exponent satisfies the predicate.
    pub fn filter(&self, keep: impl Fn(i64) -> bool) -> LaurentPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                if keep(self.lo + k as i64) {
                    c
                } else {
                    self.field.zero()
                }
            })
            .collect();
        LaurentPoly::new(self.field, self.lo, coeffs)
    }

    pub fn from_poly(p: &Poly) -> LaurentPoly {
        LaurentPoly::new(p.field(), 0, p.coeffs().to_vec())
    }

    pub fn to_rational(&self) -> RationalFn {
        if self.is_zero() {
            return RationalFn::zero(self.field);
        }
        let num = Poly::new(self.field, self.coeffs.clone());
        if self.lo >= 0 {
            RationalFn::from_poly(num.shl(self.lo as usize))
        } else {
            RationalFn::new(num, Poly::monomial(self.field.one(), (-self.lo) as usize))
                .expect("monomial denominator")
        }
    }
}

/// Reduced fraction `num / den`, den monic and coprime to num.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<RationalFn> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = num.field();
        if num.is_zero() {
            return Ok(RationalFn::zero(field));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        let lc = den.lc();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero");
            num = num.scale(inv);
            den = den.scale(inv);
        }
        Ok(RationalFn { num, den })
    }

    pub fn zero(field: Field) -> RationalFn {
        RationalFn {
            num: Poly::zero(field),
            den: Poly::one(field),
        }
    }

    pub fn one(field: Field) -> RationalFn {
        RationalFn::from_poly(Poly::one(field))
    }

    pub fn constant(c: Fe) -> RationalFn {
        RationalFn::from_poly(Poly::constant(c))
    }

    pub fn from_poly(p: Poly) -> RationalFn {
        let field = p.field();
        RationalFn {
            num: p,
            den: Poly::one(field),
        }
    }

    /// `x^k` for any integer k.
    pub fn x_pow(field: Field, k: i64) -> RationalFn {
        if k >= 0 {
            RationalFn::from_poly(Poly::monomial(field.one(), k as usize))
        } else {
            RationalFn {
                num: Poly::one(field),
                den: Poly::monomial(field.one(), (-k) as usize),
            }
        }
    }

    pub fn field(&self) -> Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_poly().then_some(&self.num)
    }

    /// The Laurent expansion when the denominator is a power of x.
    pub fn as_laurent(&self) -> Option<LaurentPoly> {
        let k = self.den.degree().expect("nonzero denominator");
        if self.den != Poly::monomial(self.field().one(), k) {
            return None;
        }
        Some(LaurentPoly::new(
            self.field(),
            -(k as i64),
            self.num.coeffs().to_vec(),
        ))
    }

    /// Whether the function is a polynomial in `1/x`.
    pub fn is_poly_in_inverse_x(&self) -> bool {
        match self.as_laurent() {
            Some(l) => l.hi().is_none_or(|h| h <= 0),
            None => false,
        }
    }

    pub fn inv(&self) -> Result<RationalFn> {
        RationalFn::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: Fe) -> RationalFn {
        if c.is_zero() {
            return RationalFn::zero(self.field());
        }
        RationalFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// `r(x + c)`.
    pub fn shift(&self, c: Fe) -> RationalFn {
        RationalFn::new(self.num.shift(c), self.den.shift(c)).expect("shift keeps den nonzero")
    }

    pub fn derivative(&self) -> RationalFn {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RationalFn::new(num, &self.den * &self.den).expect("nonzero")
    }

    pub fn div(&self, other: &RationalFn) -> Result<RationalFn> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> RationalFn {
        RationalFn {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn map(&self, emb: &Embedding) -> RationalFn {
        RationalFn {
            num: self.num.map(emb),
            den: self.den.map(emb),
        }
    }

    /// Value at a point where the denominator does not vanish.
    pub fn eval(&self, x: Fe) -> Option<Fe> {
        self.den.eval(x).inv().map(|i| self.num.eval(x) * i)
    }
}

impl Add<&RationalFn> for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFn::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFn::new(num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl Sub<&RationalFn> for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        self + &(-rhs)
    }
}

impl Mul<&RationalFn> for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        if self.is_zero() || rhs.is_zero() {
            return RationalFn::zero(self.field());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFn::from_poly(&self.num * &rhs.num);
        }
        RationalFn::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        -&self
    }
}

forward_binop!(Add, add, RationalFn);
forward_binop!(Sub, sub, RationalFn);
forward_binop!(Mul, mul, RationalFn);

impl From<Poly> for RationalFn {
    fn from(p: Poly) -> RationalFn {
        RationalFn::from_poly(p)
    }
}
