//! Places of the curve, local expansions and valuations.
//!
//! Each place above a base point `b` carries a parametrisation
//! `x = b + X(t)`, `y = Y(t)` by power series in a local uniformizer `t`.
//! Places above infinity are the places above `t = 0` of the transformed
//! model in `t = 1/x` and `Y = y t^{g+1}`, pulled back by `x = 1/X` and
//! `y = Y X^{-(g+1)}`.
//!
//! Four expansion cases occur:
//!
//! * odd p, `F(b) != 0`: `X = t` and `Y = sqrt(F(b + t))`;
//! * odd p, `F(b) = 0`: `Y = t` and `X` solves `F(b + X) = t^2`;
//! * p = 2, `H(b) != 0`: `X = t` and `Y` solves `Y^2 + H Y = F` term by term;
//! * p = 2, `H(b) = 0`: `Y = r + t` with `r^2 = F(b)` and `X` solves the model
//!   equation by Newton iteration, which converges because `H'(b) r + F'(b)`
//!   is nonzero on a smooth model.
//!
//! When the leading coefficient of `Y` lies outside the coefficient field the
//! place is computed over the quadratic extension.
//!
//! Working precision starts at `8 (g + 2 + max(deg f, 2 deg h))` terms and
//! doubles up to 4096 terms.

use std::fmt;
use std::sync::{Arc, RwLock};

use crate::coordring::{Differential, RingElement};
use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::gfield::{artin_schreier_root, extend_quadratic, square_root, Embedding, Fe, Field};
use crate::polylab::{Poly, RationalFn};

/// Precision ceiling for series computations.
pub const MAX_PRECISION: usize = 4096;

/// A point of the projective line over the coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    Finite(Fe),
    Infinity,
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Finite(c) => write!(f, "{c}"),
            Base::Infinity => write!(f, "inf"),
        }
    }
}

/// Order of vanishing, with `Infinity` for the zero element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn at_least(self, k: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= k,
            Valuation::Infinity => true,
        }
    }
}

/// Truncated Laurent series `sum c_k t^{start + k} + O(t^{start + len})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    field: Field,
    start: i64,
    c: Vec<Fe>,
}

impl Series {
    pub fn new(field: Field, start: i64, c: Vec<Fe>) -> Series {
        Series { field, start, c }
    }

    /// The series known to be zero up to `O(t^prec)`.
    pub fn unknown(field: Field, prec: i64) -> Series {
        Series {
            field,
            start: prec,
            c: Vec::new(),
        }
    }

    /// Polynomial in t, truncated to exponents below `n`.
    pub fn from_poly(p: &Poly, n: usize) -> Series {
        let field = p.field();
        let c = (0..n).map(|k| p.coeff(k)).collect();
        Series { field, start: 0, c }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Exponent bound of the error term.
    pub fn prec(&self) -> i64 {
        self.start + self.c.len() as i64
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn coefficients(&self) -> &[Fe] {
        &self.c
    }

    /// Drops leading zero coefficients.
    pub fn normalized(&self) -> Series {
        let lead = self.c.iter().take_while(|c| c.is_zero()).count();
        Series {
            field: self.field,
            start: self.start + lead as i64,
            c: self.c[lead..].to_vec(),
        }
    }

    /// Exact valuation, or `None` if every known coefficient vanishes.
    pub fn valuation(&self) -> Option<i64> {
        self.c
            .iter()
            .position(|c| !c.is_zero())
            .map(|k| self.start + k as i64)
    }

    /// Coefficient of `t^e`, or `None` past the known precision.
    pub fn coeff(&self, e: i64) -> Option<Fe> {
        if e >= self.prec() {
            return None;
        }
        if e < self.start {
            return Some(self.field.zero());
        }
        Some(self.c[(e - self.start) as usize])
    }

    /// Keeps only exponents below `prec`.
    pub fn truncate(&self, prec: i64) -> Series {
        if prec >= self.prec() {
            return self.clone();
        }
        if prec <= self.start {
            return Series::unknown(self.field, prec);
        }
        Series {
            field: self.field,
            start: self.start,
            c: self.c[..(prec - self.start) as usize].to_vec(),
        }
    }

    pub fn add(&self, o: &Series) -> Series {
        let prec = self.prec().min(o.prec());
        let start = self.start.min(o.start);
        if prec <= start {
            return Series::unknown(self.field, prec);
        }
        let c = (start..prec)
            .map(|e| {
                self.coeff(e).expect("within precision") + o.coeff(e).expect("within precision")
            })
            .collect();
        Series {
            field: self.field,
            start,
            c,
        }
    }

    pub fn neg(&self) -> Series {
        Series {
            field: self.field,
            start: self.start,
            c: self.c.iter().map(|&c| -c).collect(),
        }
    }

    pub fn sub(&self, o: &Series) -> Series {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: Fe) -> Series {
        Series {
            field: self.field,
            start: self.start,
            c: self.c.iter().map(|&c| c * k).collect(),
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift_exp(&self, k: i64) -> Series {
        Series {
            field: self.field,
            start: self.start + k,
            c: self.c.clone(),
        }
    }

    pub fn mul(&self, o: &Series) -> Series {
        let a = self.normalized();
        let b = o.normalized();
        let start = a.start + b.start;
        let len = a.c.len().min(b.c.len());
        let mut c = vec![self.field.zero(); len];
        for (i, &ai) in a.c.iter().take(len).enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, &bj) in b.c.iter().take(len - i).enumerate() {
                c[i + j] += ai * bj;
            }
        }
        Series {
            field: self.field,
            start,
            c,
        }
    }

    /// Multiplicative inverse; `None` if no coefficient is known to be nonzero.
    pub fn inv(&self) -> Option<Series> {
        let a = self.normalized();
        let a0inv = a.c.first()?.inv()?;
        let n = a.c.len();
        let mut b = vec![self.field.zero(); n];
        b[0] = a0inv;
        for k in 1..n {
            let mut s = self.field.zero();
            for j in 1..=k {
                s += a.c[j] * b[k - j];
            }
            b[k] = -s * a0inv;
        }
        Some(Series {
            field: self.field,
            start: -a.start,
            c: b,
        })
    }

    pub fn pow(&self, e: u32) -> Series {
        let mut result = Series::new(self.field, 0, vec![self.field.one(); 1 + self.c.len()]);
        // the constant 1 with enough precision
        for c in result.c.iter_mut().skip(1) {
            *c = self.field.zero();
        }
        let mut base = self.normalized();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `d/dt`.
    pub fn derivative(&self) -> Series {
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(k, &c)| c * self.field.from_int(self.start + k as i64))
            .collect();
        Series {
            field: self.field,
            start: self.start - 1,
            c,
        }
    }

    /// `p(u)` for a series `u` with positive valuation, to precision `prec(u)`.
    pub fn compose_poly(p: &Poly, u: &Series) -> Series {
        let n = u.prec().max(0);
        let mut acc = Series::unknown(u.field, n);
        acc.start = 0;
        acc.c = vec![u.field.zero(); n as usize];
        for &coef in p.coeffs().iter().rev() {
            acc = acc.mul_trunc(u, n);
            if n > 0 {
                acc.c[0] += coef;
            }
        }
        acc
    }

    /// Product of two power series truncated to `O(t^n)`, both with start 0.
    fn mul_trunc(&self, o: &Series, n: i64) -> Series {
        let n = n as usize;
        let mut c = vec![self.field.zero(); n];
        for (i, &ai) in self.c.iter().enumerate().take(n) {
            if ai.is_zero() {
                continue;
            }
            let off = i as i64 + self.start;
            for (j, &bj) in o.c.iter().enumerate() {
                let e = off + j as i64 + o.start;
                if e >= n as i64 {
                    break;
                }
                if e >= 0 {
                    c[e as usize] += ai * bj;
                }
            }
        }
        Series {
            field: self.field,
            start: 0,
            c,
        }
    }

    pub fn map(&self, emb: &Embedding) -> Series {
        Series {
            field: emb.target(),
            start: self.start,
            c: self.c.iter().map(|&c| emb.apply(c)).collect(),
        }
    }
}

/// Square root of a power series with nonzero constant term, given the root
/// of the constant term (odd characteristic).
fn series_sqrt(target: &Series, y0: Fe) -> Series {
    let field = target.field;
    let n = target.c.len();
    let inv2y0 = (y0 + y0).inv().expect("odd characteristic, nonzero root");
    let mut y = vec![field.zero(); n];
    y[0] = y0;
    for k in 1..n {
        let mut s = target.c[k];
        for i in 1..k {
            s -= y[i] * y[k - i];
        }
        y[k] = s * inv2y0;
    }
    Series::new(field, 0, y)
}

/// Solves `Y^2 + H Y = F` in characteristic 2 with prescribed `Y(0)`.
fn artin_schreier_series(hs: &Series, fs: &Series, y0: Fe) -> Series {
    let field = hs.field;
    let n = fs.c.len();
    let h0inv = hs.c[0].inv().expect("unramified place");
    let mut y = vec![field.zero(); n];
    y[0] = y0;
    for k in 1..n {
        let mut s = fs.c[k];
        if k % 2 == 0 {
            s += y[k / 2] * y[k / 2];
        }
        for i in 1..=k.min(hs.c.len() - 1) {
            s += hs.c[i] * y[k - i];
        }
        y[k] = s * h0inv;
    }
    Series::new(field, 0, y)
}

/// Newton iteration for `phi(u) = 0` with `u = O(t^2)`.
fn newton(u0: Series, n: usize, phi: impl Fn(&Series, i64) -> (Series, Series)) -> Series {
    let mut u = u0;
    let mut prec = 3i64;
    while prec < n as i64 {
        let target = (2 * prec).min(n as i64);
        let u_t = extend_to(&u, target);
        let (val, der) = phi(&u_t, target);
        let step = val.mul(&der.inv().expect("unit derivative"));
        u = extend_to(&u_t.sub(&step), target);
        prec = target;
    }
    extend_to(&u, n as i64)
}

/// Pads a power series with zeros so that its precision is `n`.
fn extend_to(u: &Series, n: i64) -> Series {
    let mut c = vec![u.field.zero(); n as usize];
    for e in u.start.max(0)..u.prec().min(n) {
        c[e as usize] = u.coeff(e).expect("known");
    }
    Series::new(u.field, 0, c)
}

#[derive(Clone, Debug)]
enum Branch {
    /// `X = t`, `Y(0) = y0`.
    Unramified { y0: Fe },
    /// Odd p: `Y = t`.
    RamifiedOdd,
    /// p = 2: `Y = r + t`.
    RamifiedTwo { r: Fe },
}

#[derive(Clone, Debug)]
struct Expansion {
    n: usize,
    /// `x - b` (finite base) or `1/x` (infinity) as a series in t.
    x: Series,
    y: Series,
    x_is_t: bool,
}

struct PlaceInner {
    base: Base,
    e: u32,
    label: u32,
    field: Field,
    emb: Embedding,
    g: usize,
    n0: usize,
    /// Local model over the place field, in the local coordinate.
    lf: Poly,
    lh: Option<Poly>,
    b: Fe,
    branch: Branch,
    cache: RwLock<Option<Arc<Expansion>>>,
}

/// A place of the curve with its local parametrisation.
#[derive(Clone)]
pub struct Place(Arc<PlaceInner>);

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Place(base={}, e={}, label={}, field={:?})",
            self.0.base, self.0.e, self.0.label, self.0.field
        )
    }
}

/// Initial working precision for a curve.
pub fn initial_precision(c: &CurveModel) -> usize {
    let df = c.f().deg().max(0) as usize;
    let dh = c.h().map(|h| h.deg().max(0) as usize).unwrap_or(0);
    8 * (c.g() + 2 + df.max(2 * dh))
}

pub(crate) fn compute_places(c: &CurveModel, base: Base) -> Result<Vec<Place>> {
    let k = c.field();
    let (lh, lf, b) = match base {
        Base::Finite(b) => {
            if b.field() != k {
                return Err(Error::FieldMismatch);
            }
            (c.h().cloned(), c.f().clone(), b)
        }
        Base::Infinity => {
            let (h, f) = c.at_infinity();
            (h, f, k.zero())
        }
    };
    let make = |e: u32, label: u32, emb: Embedding, branch: Branch| {
        let field = emb.target();
        Place(Arc::new(PlaceInner {
            base,
            e,
            label,
            field,
            g: c.g(),
            n0: initial_precision(c),
            lf: lf.map(&emb),
            lh: lh.as_ref().map(|h| h.map(&emb)),
            b: emb.apply(b),
            branch,
            emb,
            cache: RwLock::new(None),
        }))
    };
    let fb = lf.eval(b);
    let ordered = |emb: Embedding, y0: Fe, y1: Fe| {
        let (lo, hi) = if y0.lex_cmp(&y1).is_le() {
            (y0, y1)
        } else {
            (y1, y0)
        };
        vec![
            make(1, 0, emb.clone(), Branch::Unramified { y0: lo }),
            make(1, 1, emb, Branch::Unramified { y0: hi }),
        ]
    };
    match &lh {
        None => {
            if fb.is_zero() {
                return Ok(vec![make(
                    2,
                    0,
                    Embedding::identity(k),
                    Branch::RamifiedOdd,
                )]);
            }
            let (emb, r) = match square_root(fb) {
                Some(r) => (Embedding::identity(k), r),
                None => {
                    let ext = extend_quadratic(k, fb)?;
                    (ext.embedding, ext.root)
                }
            };
            Ok(ordered(emb, r, -r))
        }
        Some(h) => {
            let hb = h.eval(b);
            if hb.is_zero() {
                let r = square_root(fb).expect("characteristic 2 is perfect");
                return Ok(vec![make(
                    2,
                    0,
                    Embedding::identity(k),
                    Branch::RamifiedTwo { r },
                )]);
            }
            let c0 = fb / (hb * hb);
            let (emb, v) = match artin_schreier_root(c0) {
                Some(v) => (Embedding::identity(k), v),
                None => {
                    let ext = extend_quadratic(k, c0)?;
                    (ext.embedding, ext.root)
                }
            };
            let hb = emb.apply(hb);
            let w = hb * v;
            Ok(ordered(emb, w, w + hb))
        }
    }
}

impl Place {
    pub fn base(&self) -> Base {
        self.0.base
    }

    /// Ramification index of `x` at the place.
    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn label(&self) -> u32 {
        self.0.label
    }

    /// Field over which the expansion is defined.
    pub fn field(&self) -> Field {
        self.0.field
    }

    /// Embedding of the curve's field into [`Place::field`].
    pub fn embedding(&self) -> &Embedding {
        &self.0.emb
    }

    pub fn is_infinite(&self) -> bool {
        self.0.base == Base::Infinity
    }

    fn expansion(&self, n: usize) -> Arc<Expansion> {
        if let Some(ex) = self.0.cache.read().expect("expansion cache").as_ref() {
            if ex.n >= n {
                return ex.clone();
            }
        }
        let ex = Arc::new(self.compute_expansion(n));
        let mut slot = self.0.cache.write().expect("expansion cache");
        match slot.as_ref() {
            Some(old) if old.n >= n => old.clone(),
            _ => {
                *slot = Some(ex.clone());
                ex
            }
        }
    }

    fn compute_expansion(&self, n: usize) -> Expansion {
        let p = &self.0;
        let field = p.field;
        let fb = p.lf.shift(p.b);
        let t = Series::from_poly(&Poly::x(field), n);
        let (x, y, x_is_t) = match &p.branch {
            Branch::Unramified { y0 } => {
                let fs = Series::from_poly(&fb, n);
                let y = match &p.lh {
                    None => series_sqrt(&fs, *y0),
                    Some(h) => {
                        artin_schreier_series(&Series::from_poly(&h.shift(p.b), n), &fs, *y0)
                    }
                };
                (t, y, true)
            }
            Branch::RamifiedOdd => {
                let d = fb.derivative();
                let t2 = t.mul_trunc(&t, n as i64);
                let u0 = Series::new(
                    field,
                    0,
                    vec![
                        field.zero(),
                        field.zero(),
                        d.coeff(0).inv().expect("simple root"),
                    ],
                );
                let u = newton(u0, n, |u, prec| {
                    let val = Series::compose_poly(&fb, u).sub(&t2.truncate(prec));
                    (val, Series::compose_poly(&d, u))
                });
                (u, t, false)
            }
            Branch::RamifiedTwo { r } => {
                let hb = p.lh.as_ref().expect("char 2 model").shift(p.b);
                let dh = hb.derivative();
                let df = fb.derivative();
                let r = *r;
                let y = Series::new(field, 0, {
                    let mut c = vec![field.zero(); n];
                    c[0] = r;
                    if n > 1 {
                        c[1] = field.one();
                    }
                    c
                });
                let g0 = dh.coeff(0) * r + df.coeff(0);
                let u0 = Series::new(
                    field,
                    0,
                    vec![field.zero(), field.zero(), g0.inv().expect("smooth model")],
                );
                let y2 = y.mul_trunc(&y, n as i64);
                let u = newton(u0, n, |u, prec| {
                    let yt = y.truncate(prec);
                    let val = y2
                        .truncate(prec)
                        .add(&Series::compose_poly(&hb, u).mul_trunc(&yt, prec))
                        .add(&Series::compose_poly(&fb, u));
                    let der = Series::compose_poly(&dh, u)
                        .mul_trunc(&yt, prec)
                        .add(&Series::compose_poly(&df, u));
                    (val, der)
                });
                (u, y, false)
            }
        };
        Expansion { n, x, y, x_is_t }
    }

    /// Residual of the local model equation at precision `n`; zero on success.
    pub fn equation_residual(&self, n: usize) -> Series {
        let ex = self.expansion(n);
        let p = &self.0;
        let fb = p.lf.shift(p.b);
        let yy = ex.y.mul_trunc(&ex.y, n as i64);
        let fx = Series::compose_poly(&fb, &ex.x);
        match &p.lh {
            None => yy.sub(&fx),
            Some(h) => {
                let hx = Series::compose_poly(&h.shift(p.b), &ex.x);
                yy.add(&hx.mul_trunc(&ex.y, n as i64)).add(&fx)
            }
        }
    }

    /// Series of a polynomial in x with coefficients in the curve's field.
    fn poly_series(&self, q: &Poly, ex: &Expansion) -> Series {
        let p = &self.0;
        let n = ex.n;
        let q = q.map(&p.emb);
        match p.base {
            Base::Finite(_) => {
                let shifted = q.shift(p.b);
                let v = shifted.ord0().expect("nonzero polynomial");
                let rest = shifted.shr(v);
                if ex.x_is_t {
                    return Series::from_poly(&rest, n).shift_exp(v as i64);
                }
                let unit = Series::compose_poly(&rest, &ex.x);
                ex.x.normalized().pow(v as u32).mul(&unit)
            }
            Base::Infinity => {
                let d = q.degree().expect("nonzero polynomial");
                let rev = q.reverse(d);
                if ex.x_is_t {
                    return Series::from_poly(&rev, n).shift_exp(-(d as i64));
                }
                let unit = Series::compose_poly(&rev, &ex.x);
                let xinv = ex.x.inv().expect("uniformizer power");
                xinv.pow(d as u32).mul(&unit)
            }
        }
    }

    fn rat_series(&self, r: &RationalFn, ex: &Expansion) -> Series {
        let num = self.poly_series(r.num(), ex);
        if r.den().is_one() {
            return num;
        }
        let den = self.poly_series(r.den(), ex);
        num.mul(&den.inv().expect("exact valuation"))
    }

    fn y_series(&self, ex: &Expansion) -> Series {
        match self.0.base {
            Base::Finite(_) => ex.y.clone(),
            Base::Infinity => {
                let xinv = ex.x.inv().expect("uniformizer power");
                ex.y.mul(&xinv.pow(self.0.g as u32 + 1))
            }
        }
    }

    /// `dx/dt`.
    fn dx_series(&self, ex: &Expansion) -> Series {
        let dx = ex.x.derivative();
        match self.0.base {
            Base::Finite(_) => dx,
            Base::Infinity => {
                let xinv = ex.x.inv().expect("uniformizer power");
                dx.mul(&xinv.pow(2)).neg()
            }
        }
    }

    fn element_series(&self, e: &RingElement, ex: &Expansion) -> Series {
        let mut acc: Option<Series> = None;
        if !e.a().is_zero() {
            acc = Some(self.rat_series(e.a(), ex));
        }
        if !e.b().is_zero() {
            let by = self.rat_series(e.b(), ex).mul(&self.y_series(ex));
            acc = Some(match acc {
                Some(a) => a.add(&by),
                None => by,
            });
        }
        acc.unwrap_or_else(|| Series::unknown(self.0.field, i64::MAX / 4))
    }

    /// Runs `f` at increasing precision until it returns a value.
    fn with_precision<T>(&self, f: impl Fn(&Expansion) -> Option<T>) -> Result<T> {
        let mut n = self.0.n0.max(8);
        loop {
            let ex = self.expansion(n);
            if let Some(v) = f(&ex) {
                return Ok(v);
            }
            n *= 2;
            if n > MAX_PRECISION {
                return Err(Error::PrecisionOverflow { attempted: n });
            }
        }
    }

    /// Laurent expansion of a function to at least `terms` known coefficients.
    pub fn expand(&self, e: &RingElement, terms: usize) -> Result<Series> {
        self.with_precision(|ex| {
            let s = self.element_series(e, ex).normalized();
            (s.c.len() >= terms).then_some(s)
        })
    }

    pub fn ord(&self, e: &RingElement) -> Result<Valuation> {
        if e.is_zero() {
            return Ok(Valuation::Infinity);
        }
        self.with_precision(|ex| {
            self.element_series(e, ex)
                .valuation()
                .map(Valuation::Finite)
        })
    }

    pub fn ord_dx(&self) -> Result<i64> {
        self.with_precision(|ex| self.dx_series(ex).valuation())
    }

    pub fn ord_diff(&self, w: &Differential) -> Result<Valuation> {
        match self.ord(w.coeff())? {
            Valuation::Infinity => Ok(Valuation::Infinity),
            Valuation::Finite(v) => Ok(Valuation::Finite(v + self.ord_dx()?)),
        }
    }

    /// Coefficient of `t^{-1} dt`, in the place field.
    pub fn residue(&self, w: &Differential) -> Result<Fe> {
        if w.coeff().is_zero() {
            return Ok(self.0.field.zero());
        }
        self.with_precision(|ex| {
            let s = self.element_series(w.coeff(), ex).mul(&self.dx_series(ex));
            s.coeff(-1)
        })
    }

    /// `d_P = ord_P(dx) - e_P ord_b(dx)` with `ord_b(dx) = -2` at infinity.
    pub fn different_exponent(&self) -> Result<i64> {
        let base_ord = if self.is_infinite() { -2 } else { 0 };
        Ok(self.ord_dx()? - self.0.e as i64 * base_ord)
    }

    /// Leading coefficient of the local expansion of y.
    pub fn leading_y(&self) -> Fe {
        match self.0.branch {
            Branch::Unramified { y0 } => y0,
            Branch::RamifiedOdd => self.0.field.zero(),
            Branch::RamifiedTwo { r } => r,
        }
    }
}

/// An open set `X minus pi^{-1}(removed)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    removed: Vec<Base>,
}

impl Chart {
    pub fn new(removed: Vec<Base>) -> Chart {
        Chart { removed }
    }

    /// `U_0`.
    pub fn u0(field: Field) -> Chart {
        Chart::new(vec![Base::Finite(field.zero())])
    }

    /// `U_infinity`.
    pub fn uinf() -> Chart {
        Chart::new(vec![Base::Infinity])
    }

    /// `U_a`.
    pub fn ua(a: Fe) -> Chart {
        Chart::new(vec![Base::Finite(a)])
    }

    /// The whole curve.
    pub fn all() -> Chart {
        Chart::new(Vec::new())
    }

    pub fn intersect(&self, other: &Chart) -> Chart {
        let mut removed = self.removed.clone();
        for b in &other.removed {
            if !removed.contains(b) {
                removed.push(*b);
            }
        }
        Chart { removed }
    }

    pub fn removed(&self) -> &[Base] {
        &self.removed
    }

    pub fn contains(&self, b: Base) -> bool {
        !self.removed.contains(&b)
    }
}

/// Candidate pole locations of `a + b y`: rational roots of the
/// denominators, plus whether a denominator has a factor without rational
/// roots.
fn pole_candidates(e: &RingElement) -> (Vec<Fe>, bool) {
    let mut roots: Vec<Fe> = Vec::new();
    let mut irrational = false;
    for r in [e.a(), e.b()] {
        if r.is_zero() {
            continue;
        }
        for (c, _) in r.den().rational_roots() {
            if !roots.contains(&c) {
                roots.push(c);
            }
        }
        if !r.den().strip_rational_roots().is_constant() {
            irrational = true;
        }
    }
    (roots, irrational)
}

/// Whether a function has no poles on the chart.
///
/// Points above rational bases are checked through place valuations. At
/// closed points of higher degree, `{1, y}` is a local integral basis of the
/// smooth affine model, so `a + b y` is regular there exactly when `a` and
/// `b` are.
pub fn regular_on(e: &RingElement, chart: &Chart) -> Result<bool> {
    let (roots, irrational) = pole_candidates(e);
    if irrational {
        return Ok(false);
    }
    let c = e.curve();
    let bases = roots
        .into_iter()
        .map(Base::Finite)
        .chain(std::iter::once(Base::Infinity));
    for base in bases {
        if !chart.contains(base) {
            continue;
        }
        for pl in c.places_over(base)?.iter() {
            if !pl.ord(e)?.at_least(0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether a differential has no poles on the chart.
///
/// At finite points the canonical differential is regular and nowhere
/// vanishing, so the test reduces to the function `w / omega_can`.
pub fn regular_diff_on(w: &Differential, chart: &Chart) -> Result<bool> {
    let c = w.curve();
    let ratio = w.ratio_to_canonical();
    let (roots, irrational) = pole_candidates(&ratio);
    if irrational {
        return Ok(false);
    }
    let bases = roots
        .into_iter()
        .map(Base::Finite)
        .chain(std::iter::once(Base::Infinity));
    for base in bases {
        if !chart.contains(base) {
            continue;
        }
        for pl in c.places_over(base)?.iter() {
            if !pl.ord_diff(w)?.at_least(0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Sum of residues over all places above a base, mapped back to the curve's
/// field when it lies there.
pub fn residue_sum(w: &Differential, base: Base) -> Result<Fe> {
    let c = w.curve();
    let places = c.places_over(base)?;
    let mut total: Option<Fe> = None;
    for pl in places.iter() {
        let r = pl.residue(w)?;
        total = Some(match total {
            Some(t) => t + r,
            None => r,
        });
    }
    let total = total.expect("at least one place above every base");
    let emb = places[0].embedding();
    emb.preimage(total)
        .ok_or_else(|| Error::Invalid("residue sum outside the coefficient field".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfield::make_field;

    fn x5mx() -> CurveModel {
        let k = make_field(5, 1).unwrap();
        CurveModel::odd(Poly::from_ints(k, &[0, -1, 0, 0, 0, 1])).unwrap()
    }

    fn x022() -> CurveModel {
        let k = make_field(3, 1).unwrap();
        CurveModel::odd(Poly::from_ints(k, &[2, 0, 1, 0, 1, 0, 1])).unwrap()
    }

    #[test]
    fn ramified_infinity_orders() {
        let c = x5mx();
        let pl = c.places_over(Base::Infinity).unwrap();
        assert_eq!(pl.len(), 1);
        assert_eq!(pl[0].e(), 2);
        let x = RingElement::x(&c);
        let y = RingElement::y(&c);
        assert_eq!(pl[0].ord(&x).unwrap(), Valuation::Finite(-2));
        assert_eq!(pl[0].ord(&y).unwrap(), Valuation::Finite(-5));
        assert_eq!(pl[0].ord_dx().unwrap(), -3);
        assert_eq!(
            pl[0].ord(&RingElement::one(&c)).unwrap(),
            Valuation::Finite(0)
        );
    }

    #[test]
    fn unramified_infinity_orders() {
        // t^6 f(1/t) has constant term 1, a square in F_3
        let c = x022();
        let pl = c.places_over(Base::Infinity).unwrap();
        assert_eq!(pl.len(), 2);
        let y = RingElement::y(&c);
        for p in pl.iter() {
            assert_eq!(p.e(), 1);
            assert_eq!(p.field().order(), 3);
            assert_eq!(p.ord(&y).unwrap(), Valuation::Finite(-3));
            assert_eq!(p.ord_dx().unwrap(), -2);
        }
        assert_eq!((pl[0].label(), pl[1].label()), (0, 1));
        assert_eq!(pl[0].leading_y(), c.field().one());
        assert_eq!(pl[1].leading_y(), -c.field().one());
    }

    #[test]
    fn non_square_base_extends_field() {
        // f(0) = 2 is not a square in F_3
        let c = x022();
        let k = c.field();
        let pl = c.places_over(Base::Finite(k.zero())).unwrap();
        assert_eq!(pl.len(), 2);
        let y = RingElement::y(&c);
        for p in pl.iter() {
            assert_eq!(p.field().order(), 9);
            assert_eq!(p.ord(&y).unwrap(), Valuation::Finite(0));
            let r = p.leading_y();
            assert_eq!(r * r, p.embedding().apply(k.from_int(2)));
        }
        assert!(pl[0].leading_y().lex_cmp(&pl[1].leading_y()).is_lt());
        // y/x and its conjugate have swapped expansions at the two places
        let e = &y * &RingElement::from_rational(&c, RationalFn::x_pow(k, -1));
        let s0 = pl[0].expand(&e, 12).unwrap();
        let s1 = pl[1].expand(&e.conjugate(), 12).unwrap();
        assert_eq!(s0.truncate(10), s1.truncate(10));
    }

    #[test]
    fn local_equations_hold() {
        let k2 = make_field(2, 1).unwrap();
        let curves = [
            x5mx(),
            x022(),
            CurveModel::char_two(
                Poly::from_ints(k2, &[0, 1, 1]),
                Poly::from_ints(k2, &[1, 0, 0, 0, 0, 1]),
            )
            .unwrap(),
        ];
        for c in &curves {
            let k = c.field();
            let bases = k
                .elements()
                .map(Base::Finite)
                .chain(std::iter::once(Base::Infinity));
            for base in bases {
                let pls = c.places_over(base).unwrap();
                assert_eq!(pls.iter().map(|p| p.e()).sum::<u32>(), 2);
                for p in pls.iter() {
                    let r = p.equation_residual(64);
                    assert!(r.valuation().is_none(), "{c:?} {p:?}");
                    assert_eq!(r.prec(), 64);
                }
            }
        }
    }

    #[test]
    fn char_two_infinity_dx_orders() {
        let k2 = make_field(2, 1).unwrap();
        // d = g + 1: unramified at infinity
        let c = CurveModel::char_two(
            Poly::from_ints(k2, &[1, 1, 0, 1]),
            Poly::from_ints(k2, &[0, 0, 0, 0, 0, 1]),
        )
        .unwrap();
        for p in c.places_over(Base::Infinity).unwrap().iter() {
            assert_eq!(p.e(), 1);
            assert_eq!(p.ord_dx().unwrap(), -2);
        }
        // d = 1 < g + 1: ramified, ord dx = 2(g - 1 - d)
        let c = CurveModel::char_two(
            Poly::from_ints(k2, &[1, 1]),
            Poly::from_ints(k2, &[1, 0, 0, 0, 0, 1]),
        )
        .unwrap();
        let pl = c.places_over(Base::Infinity).unwrap();
        assert_eq!(pl.len(), 1);
        let (g, d) = (c.g() as i64, 1);
        assert_eq!(pl[0].ord_dx().unwrap(), 2 * (g - 1 - d));
    }

    #[test]
    fn residue_of_exact_differential_vanishes() {
        let c = x5mx();
        let k = c.field();
        let yx = &RingElement::y(&c) * &RingElement::from_rational(&c, RationalFn::x_pow(k, -1));
        let dw = yx.exterior_d();
        for base in [Base::Finite(k.zero()), Base::Infinity] {
            for p in c.places_over(base).unwrap().iter() {
                assert_eq!(p.residue(&dw).unwrap(), p.field().zero());
            }
        }
    }

    #[test]
    fn series_inverse_and_valuation() {
        let k = make_field(7, 1).unwrap();
        let s = Series::new(k, -2, vec![k.from_int(3), k.one(), k.from_int(5), k.zero()]);
        let inv = s.inv().unwrap();
        let prod = s.mul(&inv);
        assert_eq!(prod.valuation(), Some(0));
        assert_eq!(prod.coeff(0), Some(k.one()));
        for e in 1..prod.prec() {
            assert_eq!(prod.coeff(e), Some(k.zero()));
        }
        assert_eq!(Series::unknown(k, 5).valuation(), None);
    }
}
