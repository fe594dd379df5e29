//! Finite fields `F_{p^m}` with table-driven arithmetic.
//!
//! A field is described by its characteristic `p`, its degree `m` and a monic
//! irreducible modulus over `F_p`. Elements are encoded as the integer
//! `c_0 + c_1 p + ... + c_{m-1} p^{m-1}` of their coefficient list in the
//! power basis of the generator. Multiplication and addition go through
//! discrete-log, antilog and Zech tables, so every field is capped at 2^16
//! elements.
//!
//! Fields are interned: building the same field twice returns the same
//! handle, and elements compare equal only if their fields are identical.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

const NONE: u32 = u32::MAX;

/// Characteristic, degree and modulus of a finite field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldDesc {
    pub p: u32,
    pub m: u32,
    /// Monic irreducible polynomial over `F_p`, ascending, length `m + 1`.
    pub modulus: Vec<u32>,
}

struct FieldData {
    desc: FieldDesc,
    q: u32,
    /// `exp[k] = g^k` for a fixed primitive element g.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[n] = log(1 + g^n)`, or `NONE` when `1 + g^n = 0`.
    zech: Vec<u32>,
    neg_one_log: u32,
}

/// Handle to an interned finite field.
#[derive(Clone, Copy)]
pub struct Field(&'static FieldData);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.desc.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}{:?}", self.p(), self.m(), self.0.desc.modulus)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// ---- small dense polynomials over F_p, used only while building tables ----

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

fn prem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p) as u64;
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = r[r.len() - 1] as u64 * lead_inv % p as u64;
        for (k, &bk) in b.iter().enumerate() {
            let t = (c * bk as u64) % p as u64;
            r[shift + k] = ((r[shift + k] as u64 + p as u64 - t) % p as u64) as u32;
        }
        r = trim(r);
    }
    r
}

fn pmul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|v| v as u32).collect())
}

fn pgcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = prem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    if m == 1 {
        return true;
    }
    // x^(p^k) mod modulus for k = 1..m/2; each gcd with x^(p^k) - x must be 1
    let mut xpk = vec![0, 1];
    for _ in 1..=m / 2 {
        // raise to the p-th power
        let mut result = vec![1u32];
        let mut base = xpk.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                result = prem(&pmul(&result, &base, p), modulus, p);
            }
            base = prem(&pmul(&base, &base, p), modulus, p);
            e >>= 1;
        }
        xpk = result;
        let mut diff = xpk.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = pgcd(&trim(diff), modulus, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// The lexicographically smallest monic irreducible polynomial of degree `m`
/// over `F_p`, comparing ascending coefficient lists from the constant term.
fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    if m == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(m);
    for n in 0..count {
        let mut coeffs = vec![0u32; m as usize + 1];
        let mut rest = n;
        // c_0 is the most significant digit so the scan is lexicographic
        for i in (0..m as usize).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[m as usize] = 1;
        if coeffs[0] != 0 && is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

fn digits_of(v: u32, p: u32, m: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(m as usize);
    let mut rest = v;
    for _ in 0..m {
        out.push(rest % p);
        rest /= p;
    }
    out
}

fn encode(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

fn build(desc: FieldDesc) -> FieldData {
    let p = desc.p;
    let m = desc.m;
    let q = p.pow(m);
    let mul_slow = |a: u32, b: u32| -> u32 {
        let prod = pmul(&trim(digits_of(a, p, m)), &trim(digits_of(b, p, m)), p);
        let mut r = prem(&prod, &desc.modulus, p);
        r.resize(m as usize, 0);
        encode(&r, p)
    };
    let mut exp = Vec::new();
    if q == 2 {
        exp.push(1);
    } else {
        for cand in 2..q {
            let mut powers = Vec::with_capacity(q as usize - 1);
            let mut cur = 1u32;
            loop {
                powers.push(cur);
                cur = mul_slow(cur, cand);
                if cur == 1 {
                    break;
                }
            }
            if powers.len() == q as usize - 1 {
                exp = powers;
                break;
            }
        }
    }
    let mut log = vec![NONE; q as usize];
    for (k, &v) in exp.iter().enumerate() {
        log[v as usize] = k as u32;
    }
    let zech = exp
        .iter()
        .map(|&v| {
            let mut d = digits_of(v, p, m);
            d[0] = (d[0] + 1) % p;
            let s = encode(&d, p);
            if s == 0 {
                NONE
            } else {
                log[s as usize]
            }
        })
        .collect();
    let neg_one_log = if p == 2 { 0 } else { (q - 1) / 2 };
    FieldData {
        desc,
        q,
        exp,
        log,
        zech,
        neg_one_log,
    }
}

fn registry() -> &'static Mutex<HashMap<FieldDesc, &'static FieldData>> {
    static REG: OnceLock<Mutex<HashMap<FieldDesc, &'static FieldData>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

fn intern(desc: FieldDesc) -> Field {
    let mut reg = registry().lock().expect("field registry poisoned");
    if let Some(&data) = reg.get(&desc) {
        return Field(data);
    }
    let data: &'static FieldData = Box::leak(Box::new(build(desc.clone())));
    reg.insert(desc, data);
    Field(data)
}

/// Builds `F_{p^m}` with the lexicographically smallest irreducible modulus.
pub fn make_field(p: u32, m: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if m == 0 {
        return Err(Error::Invalid("extension degree must be at least 1".into()));
    }
    if (p as u64)
        .checked_pow(m)
        .is_none_or(|q| q > MAX_FIELD_ORDER)
    {
        return Err(Error::FieldTooLarge { p, m });
    }
    let modulus = smallest_irreducible(p, m);
    Ok(intern(FieldDesc { p, m, modulus }))
}

/// Builds a field from an explicit modulus, verifying irreducibility.
pub fn field_with_modulus(p: u32, modulus: &[u32]) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    let modulus: Vec<u32> = modulus.iter().map(|c| c % p).collect();
    let m = modulus.len().saturating_sub(1) as u32;
    if m == 0 || modulus[m as usize] != 1 {
        return Err(Error::Invalid(
            "modulus must be monic of degree >= 1".into(),
        ));
    }
    if (p as u64)
        .checked_pow(m)
        .is_none_or(|q| q > MAX_FIELD_ORDER)
    {
        return Err(Error::FieldTooLarge { p, m });
    }
    if m == 1 && modulus != [0, 1] {
        return Err(Error::Invalid("prime fields use the modulus x".into()));
    }
    if !is_irreducible(&modulus, p) {
        return Err(Error::Invalid("modulus is reducible".into()));
    }
    Ok(intern(FieldDesc { p, m, modulus }))
}

impl Field {
    pub fn desc(&self) -> &FieldDesc {
        &self.0.desc
    }

    pub fn p(&self) -> u32 {
        self.0.desc.p
    }

    pub fn m(&self) -> u32 {
        self.0.desc.m
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.desc.m == 1
    }

    pub fn zero(&self) -> Fe {
        Fe { field: *self, v: 0 }
    }

    pub fn one(&self) -> Fe {
        Fe { field: *self, v: 1 }
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        let p = self.p() as i64;
        Fe {
            field: *self,
            v: n.rem_euclid(p) as u32,
        }
    }

    /// Element from its ascending coefficient list (reduced mod p, padded).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<Fe> {
        if coeffs.len() > self.m() as usize {
            return Err(Error::Invalid(format!(
                "element has {} coefficients but the field has degree {}",
                coeffs.len(),
                self.m()
            )));
        }
        let p = self.p() as i64;
        let digits: Vec<u32> = coeffs.iter().map(|c| c.rem_euclid(p) as u32).collect();
        Ok(Fe {
            field: *self,
            v: encode(&digits, self.p()),
        })
    }

    /// Element from its integer encoding.
    pub fn element(&self, raw: u32) -> Fe {
        assert!(raw < self.0.q, "raw encoding out of range");
        Fe {
            field: *self,
            v: raw,
        }
    }

    /// The class of the modulus variable.
    pub fn generator(&self) -> Fe {
        if self.m() == 1 {
            self.zero()
        } else {
            Fe {
                field: *self,
                v: self.p(),
            }
        }
    }

    /// All elements, in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + 'static {
        let field = *self;
        (0..self.0.q).map(move |v| Fe { field, v })
    }

    #[inline]
    fn add_raw(&self, a: u32, b: u32) -> u32 {
        let d = self.0;
        if d.desc.m == 1 {
            let s = a + b;
            return if s >= d.desc.p { s - d.desc.p } else { s };
        }
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let n = d.q - 1;
        let la = d.log[a as usize];
        let lb = d.log[b as usize];
        let diff = if lb >= la { lb - la } else { lb + n - la };
        let z = d.zech[diff as usize];
        if z == NONE {
            0
        } else {
            d.exp[((la as u64 + z as u64) % n as u64) as usize]
        }
    }

    #[inline]
    fn neg_raw(&self, a: u32) -> u32 {
        let d = self.0;
        if a == 0 {
            return 0;
        }
        if d.desc.m == 1 {
            return d.desc.p - a;
        }
        if d.desc.p == 2 {
            return a;
        }
        let n = d.q - 1;
        d.exp[((d.log[a as usize] + d.neg_one_log) % n) as usize]
    }

    #[inline]
    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let d = self.0;
        if a == 0 || b == 0 {
            return 0;
        }
        if d.desc.m == 1 {
            return ((a as u64 * b as u64) % d.desc.p as u64) as u32;
        }
        let n = d.q - 1;
        let s = d.log[a as usize] + d.log[b as usize];
        d.exp[(if s >= n { s - n } else { s }) as usize]
    }

    fn inv_raw(&self, a: u32) -> Option<u32> {
        let d = self.0;
        if a == 0 {
            return None;
        }
        let n = d.q - 1;
        let la = d.log[a as usize];
        Some(d.exp[((n - la) % n) as usize])
    }
}

/// Element of a finite field.
#[derive(Clone, Copy)]
pub struct Fe {
    field: Field,
    v: u32,
}

impl PartialEq for Fe {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && self.field == other.field
    }
}

impl Eq for Fe {}

impl Hash for Fe {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.v.hash(state);
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.m() == 1 {
            write!(f, "{}", self.v)
        } else {
            write!(f, "{:?}", self.coeffs())
        }
    }
}

impl Fe {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn raw(&self) -> u32 {
        self.v
    }

    pub fn is_zero(&self) -> bool {
        self.v == 0
    }

    pub fn is_one(&self) -> bool {
        self.v == 1
    }

    /// Ascending coefficient list in the power basis of the generator.
    pub fn coeffs(&self) -> Vec<u32> {
        digits_of(self.v, self.field.p(), self.field.m())
    }

    /// Lexicographic order of coefficient lists, constant term first.
    pub fn lex_cmp(&self, other: &Fe) -> Ordering {
        self.coeffs().cmp(&other.coeffs())
    }

    pub fn inv(&self) -> Option<Fe> {
        self.field.inv_raw(self.v).map(|v| Fe {
            field: self.field,
            v,
        })
    }

    pub fn pow(&self, mut e: u64) -> Fe {
        let mut result = self.field.one();
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                result *= base;
            }
            base *= base;
            e >>= 1;
        }
        result
    }

    /// `x -> x^p`.
    pub fn frobenius(&self) -> Fe {
        self.pow(self.field.p() as u64)
    }

    /// Whether the element lies in the prime subfield.
    pub fn in_prime_field(&self) -> bool {
        self.v < self.field.p()
    }

    pub fn is_square(&self) -> bool {
        if self.v == 0 || self.field.p() == 2 {
            return true;
        }
        self.field.0.log[self.v as usize].is_multiple_of(2)
    }

    #[inline]
    fn check(&self, other: &Fe) {
        debug_assert!(
            self.field == other.field,
            "mixing elements of different fields"
        );
    }
}

impl Add for Fe {
    type Output = Fe;
    #[inline]
    fn add(self, rhs: Fe) -> Fe {
        self.check(&rhs);
        Fe {
            field: self.field,
            v: self.field.add_raw(self.v, rhs.v),
        }
    }
}

impl Sub for Fe {
    type Output = Fe;
    #[inline]
    fn sub(self, rhs: Fe) -> Fe {
        self.check(&rhs);
        Fe {
            field: self.field,
            v: self.field.add_raw(self.v, self.field.neg_raw(rhs.v)),
        }
    }
}

impl Mul for Fe {
    type Output = Fe;
    #[inline]
    fn mul(self, rhs: Fe) -> Fe {
        self.check(&rhs);
        Fe {
            field: self.field,
            v: self.field.mul_raw(self.v, rhs.v),
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Fe {
    type Output = Fe;
    /// Panics on division by zero.
    fn div(self, rhs: Fe) -> Fe {
        self * rhs.inv().expect("division by zero field element")
    }
}

impl Neg for Fe {
    type Output = Fe;
    #[inline]
    fn neg(self) -> Fe {
        Fe {
            field: self.field,
            v: self.field.neg_raw(self.v),
        }
    }
}

impl AddAssign for Fe {
    fn add_assign(&mut self, rhs: Fe) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fe {
    fn sub_assign(&mut self, rhs: Fe) {
        *self = *self - rhs;
    }
}

impl MulAssign for Fe {
    fn mul_assign(&mut self, rhs: Fe) {
        *self = *self * rhs;
    }
}

fn lex_min(a: Fe, b: Fe) -> Fe {
    if a.lex_cmp(&b) == Ordering::Greater {
        b
    } else {
        a
    }
}

/// A square root of `e` in its own field, if one exists.
///
/// In characteristic 2 the root is `e^(2^(m-1))`. For odd `p` the two roots
/// `±r` are resolved by lexicographic order of their coefficient lists.
pub fn square_root(e: Fe) -> Option<Fe> {
    let field = e.field;
    if e.is_zero() {
        return Some(e);
    }
    if field.p() == 2 {
        return Some(e.pow(1u64 << (field.m() - 1)));
    }
    let l = field.0.log[e.v as usize];
    if !l.is_multiple_of(2) {
        return None;
    }
    let r = field.element(field.0.exp[(l / 2) as usize]);
    Some(lex_min(r, -r))
}

/// A root of `w^2 + w = c` in characteristic 2, lexicographically smaller of
/// the pair `{w, w + 1}`.
pub fn artin_schreier_root(c: Fe) -> Option<Fe> {
    let field = c.field;
    assert_eq!(
        field.p(),
        2,
        "Artin-Schreier roots are a characteristic 2 notion"
    );
    field
        .elements()
        .find(|w| *w * *w + *w == c)
        .map(|w| lex_min(w, w + field.one()))
}

/// Field embedding given by a table of images.
#[derive(Clone)]
pub struct Embedding {
    from: Field,
    to: Field,
    image: Arc<Vec<u32>>,
    preimage: Arc<HashMap<u32, u32>>,
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Embedding({:?} -> {:?})", self.from, self.to)
    }
}

impl Embedding {
    pub fn identity(field: Field) -> Embedding {
        let image: Vec<u32> = (0..field.order()).collect();
        let preimage = image.iter().map(|&v| (v, v)).collect();
        Embedding {
            from: field,
            to: field,
            image: Arc::new(image),
            preimage: Arc::new(preimage),
        }
    }

    /// The embedding sending the generator of `from` to `gen_image`.
    fn from_generator(from: Field, to: Field, gen_image: Fe) -> Embedding {
        let p = from.p();
        let m = from.m();
        let mut powers = vec![to.one()];
        for k in 1..m as usize {
            powers.push(powers[k - 1] * gen_image);
        }
        let image: Vec<u32> = (0..from.order())
            .map(|v| {
                digits_of(v, p, m)
                    .iter()
                    .zip(&powers)
                    .fold(to.zero(), |acc, (&d, &pw)| acc + to.from_int(d as i64) * pw)
                    .v
            })
            .collect();
        let preimage = image
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        Embedding {
            from,
            to,
            image: Arc::new(image),
            preimage: Arc::new(preimage),
        }
    }

    pub fn source(&self) -> Field {
        self.from
    }

    pub fn target(&self) -> Field {
        self.to
    }

    pub fn is_identity(&self) -> bool {
        self.from == self.to
    }

    pub fn apply(&self, e: Fe) -> Fe {
        assert!(
            e.field == self.from,
            "embedding applied to a foreign element"
        );
        Fe {
            field: self.to,
            v: self.image[e.v as usize],
        }
    }

    /// Inverse image of an element of the target, if it lies in the source.
    pub fn preimage(&self, e: Fe) -> Option<Fe> {
        assert!(e.field == self.to, "preimage of a foreign element");
        self.preimage.get(&e.v).map(|&v| Fe {
            field: self.from,
            v,
        })
    }
}

/// A quadratic extension with its embedding and the adjoined root.
#[derive(Clone, Debug)]
pub struct QuadraticExtension {
    pub field: Field,
    pub embedding: Embedding,
    pub root: Fe,
}

/// Adjoins a root of `w^2 = e` (odd `p`) or `w^2 + w = e` (`p = 2`).
pub fn extend_quadratic(field: Field, e: Fe) -> Result<QuadraticExtension> {
    if e.field != field {
        return Err(Error::FieldMismatch);
    }
    let has_root = if field.p() == 2 {
        artin_schreier_root(e).is_some()
    } else {
        e.is_square()
    };
    if has_root {
        return Err(Error::NotNeeded);
    }
    let big = make_field(field.p(), 2 * field.m())?;
    let embedding = embedding_into(field, big);
    let image = embedding.apply(e);
    let root = if field.p() == 2 {
        artin_schreier_root(image)
    } else {
        square_root(image)
    }
    .expect("a quadratic extension contains the root");
    Ok(QuadraticExtension {
        field: big,
        embedding,
        root,
    })
}

/// The embedding of `small` into `big` that sends the generator of `small` to
/// the lexicographically smallest root of its modulus in `big`.
pub fn embedding_into(small: Field, big: Field) -> Embedding {
    assert_eq!(small.p(), big.p());
    assert_eq!(big.m() % small.m(), 0, "degree must divide");
    if small == big {
        return Embedding::identity(small);
    }
    if small.m() == 1 {
        return Embedding::from_generator(small, big, big.zero());
    }
    let modulus: Vec<Fe> = small
        .desc()
        .modulus
        .iter()
        .map(|&c| big.from_int(c as i64))
        .collect();
    let root = big
        .elements()
        .filter(|z| {
            modulus
                .iter()
                .rev()
                .fold(big.zero(), |acc, &c| acc * *z + c)
                .is_zero()
        })
        .min_by(|a, b| a.lex_cmp(b))
        .expect("modulus splits in an extension of divisible degree");
    Embedding::from_generator(small, big, root)
}
