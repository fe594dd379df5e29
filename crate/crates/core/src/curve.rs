//! Hyperelliptic models `y^2 = f(x)` (odd characteristic) and
//! `y^2 - h(x) y = f(x)` (characteristic 2), with genus and the
//! polynomials `s_i`, `psi_i`, `phi_i` used by the de-Rham basis.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::gfield::{Fe, Field};
use crate::places::{self, Base, Place};
use crate::polylab::Poly;

/// The defining polynomials of a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Odd { f: Poly },
    CharTwo { h: Poly, f: Poly },
}

struct CurveInner {
    field: Field,
    kind: ModelKind,
    g: usize,
    infinity_branch: bool,
    places: RwLock<HashMap<Base, Arc<Vec<Place>>>>,
}

/// A validated hyperelliptic model of genus at least 2.
///
/// Cloning is cheap; clones share the cache of computed places.
#[derive(Clone)]
pub struct CurveModel(Arc<CurveInner>);

impl PartialEq for CurveModel {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field && self.0.kind == other.0.kind)
    }
}

impl Eq for CurveModel {}

impl fmt::Debug for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            ModelKind::Odd { f: poly } => write!(f, "y^2 = {poly} over {:?}", self.0.field),
            ModelKind::CharTwo { h, f: poly } => {
                write!(f, "y^2 + ({h}) y = {poly} over {:?}", self.0.field)
            }
        }
    }
}

/// `s_i` split at degree `i`. Index 0 holds the coefficient of 1 and index 1
/// the coefficient of y (zero in odd characteristic).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SPolys {
    pub i: usize,
    pub s: [Poly; 2],
    pub psi: [Poly; 2],
    pub phi: [Poly; 2],
}

fn genus_from_degree(d: usize) -> i64 {
    (d as i64 + 1) / 2 - 1
}

/// Validates a model and derives its genus.
pub fn validate(field: Field, kind: ModelKind, declared_g: Option<usize>) -> Result<CurveModel> {
    let (g, infinity_branch) = match &kind {
        ModelKind::Odd { f } => {
            if field.p() == 2 {
                return Err(Error::CharMismatch);
            }
            if f.field() != field {
                return Err(Error::FieldMismatch);
            }
            let deg = f
                .degree()
                .filter(|&d| d >= 1)
                .ok_or_else(|| Error::BadDegree("f must be nonconstant".into()))?;
            if !f.is_monic() {
                return Err(Error::NotMonic);
            }
            let g = genus_from_degree(deg);
            if g < 2 {
                return Err(Error::GenusTooSmall(g));
            }
            if !f.squarefree_check()? {
                return Err(Error::NotSquarefree);
            }
            (g as usize, deg % 2 == 1)
        }
        ModelKind::CharTwo { h, f } => {
            if field.p() != 2 {
                return Err(Error::CharMismatch);
            }
            if h.field() != field || f.field() != field {
                return Err(Error::FieldMismatch);
            }
            let d = h
                .degree()
                .ok_or_else(|| Error::BadDegree("h must be nonzero".into()))?;
            let df = f.degree().unwrap_or(0);
            let g = genus_from_degree((2 * d).max(df));
            if g < 2 {
                return Err(Error::GenusTooSmall(g));
            }
            let g = g as usize;
            let disc = &(&h.derivative().pow(2) * f) + &f.derivative().pow(2);
            if !disc.gcd(h).is_one() {
                return Err(Error::CommonRoots);
            }
            let (hh, ff) = infinity_model(h, f, g);
            if hh.coeff(0).is_zero() {
                let test = &(&hh.derivative().pow(2) * &ff) + &ff.derivative().pow(2);
                if test.coeff(0).is_zero() {
                    return Err(Error::SingularAtInfinity);
                }
            }
            (g, d < g + 1)
        }
    };
    if let Some(declared) = declared_g {
        if declared != g {
            return Err(Error::GenusMismatch {
                declared,
                derived: g,
            });
        }
    }
    Ok(CurveModel(Arc::new(CurveInner {
        field,
        kind,
        g,
        infinity_branch,
        places: RwLock::new(HashMap::new()),
    })))
}

/// `(t^{g+1} h(1/t), t^{2g+2} f(1/t))`.
fn infinity_model(h: &Poly, f: &Poly, g: usize) -> (Poly, Poly) {
    (h.reverse(g + 1), f.reverse(2 * g + 2))
}

impl CurveModel {
    /// Odd-characteristic model `y^2 = f`.
    pub fn odd(f: Poly) -> Result<CurveModel> {
        validate(f.field(), ModelKind::Odd { f }, None)
    }

    /// Characteristic-2 model `y^2 + h y = f`.
    pub fn char_two(h: Poly, f: Poly) -> Result<CurveModel> {
        validate(h.field(), ModelKind::CharTwo { h, f }, None)
    }

    pub fn field(&self) -> Field {
        self.0.field
    }

    pub fn kind(&self) -> &ModelKind {
        &self.0.kind
    }

    pub fn g(&self) -> usize {
        self.0.g
    }

    pub fn infinity_branch(&self) -> bool {
        self.0.infinity_branch
    }

    pub fn is_char_two(&self) -> bool {
        matches!(self.0.kind, ModelKind::CharTwo { .. })
    }

    pub fn f(&self) -> &Poly {
        match &self.0.kind {
            ModelKind::Odd { f } | ModelKind::CharTwo { f, .. } => f,
        }
    }

    pub fn h(&self) -> Option<&Poly> {
        match &self.0.kind {
            ModelKind::Odd { .. } => None,
            ModelKind::CharTwo { h, .. } => Some(h),
        }
    }

    /// Degree of h (characteristic 2 only).
    pub fn d(&self) -> Option<usize> {
        self.h().and_then(|h| h.degree())
    }

    /// Defining polynomials of the model at infinity, in `t = 1/x` and
    /// `Y = y t^{g+1}`.
    pub fn at_infinity(&self) -> (Option<Poly>, Poly) {
        let g = self.g();
        let ff = self.f().reverse(2 * g + 2);
        (self.h().map(|h| h.reverse(g + 1)), ff)
    }

    /// The polynomial whose roots are the finite branch points.
    pub fn branch_polynomial(&self) -> &Poly {
        self.h().unwrap_or_else(|| self.f())
    }

    pub fn s_polynomials(&self, i: usize) -> Result<SPolys> {
        let g = self.g();
        if i == 0 || i > g {
            return Err(Error::IndexOutOfRange { i, g });
        }
        let field = self.field();
        let x = Poly::x(field);
        let f = self.f();
        let ii = field.from_int(i as i64);
        let s = match self.h() {
            None => [
                &(&x * &f.derivative()) - &f.scale(ii + ii),
                Poly::zero(field),
            ],
            Some(h) => [&x * &f.derivative(), &(&x * &h.derivative()) + &h.scale(ii)],
        };
        let (p0, q0) = s[0].split_at(i);
        let (p1, q1) = s[1].split_at(i);
        Ok(SPolys {
            i,
            s,
            psi: [p0, p1],
            phi: [q0, q1],
        })
    }

    /// The model with `f` replaced by `f(x + a)` (and `h` by `h(x + a)`).
    pub fn transform_shift(&self, a: Fe) -> Result<CurveModel> {
        let kind = match &self.0.kind {
            ModelKind::Odd { f } => ModelKind::Odd { f: f.shift(a) },
            ModelKind::CharTwo { h, f } => ModelKind::CharTwo {
                h: h.shift(a),
                f: f.shift(a),
            },
        };
        validate(self.field(), kind, Some(self.g()))
    }

    /// The model `y^2 = f^*(x)` with `f^* = a_0^{-1} x^{deg f} f(1/x)`.
    pub fn transform_reciprocal(&self) -> Result<CurveModel> {
        let f = match &self.0.kind {
            ModelKind::Odd { f } => f,
            ModelKind::CharTwo { .. } => return Err(Error::CharTwoUnsupported),
        };
        if f.coeff(0).is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        if f.deg() % 2 != 0 {
            return Err(Error::OddDegreeReciprocal);
        }
        validate(
            self.field(),
            ModelKind::Odd { f: f.reciprocal()? },
            Some(self.g()),
        )
    }

    /// Places above a base point, computed once and cached.
    pub fn places_over(&self, base: Base) -> Result<Arc<Vec<Place>>> {
        if let Some(found) = self.0.places.read().expect("place cache").get(&base) {
            return Ok(found.clone());
        }
        let computed = Arc::new(places::compute_places(self, base)?);
        let mut cache = self.0.places.write().expect("place cache");
        Ok(cache.entry(base).or_insert(computed).clone())
    }

    /// Genus from Riemann-Hurwitz: `2g - 2 = -4 + sum d_P` over the branch
    /// places, with `d_P` read off the local expansion of dx.
    pub fn genus_oracle(&self) -> Result<usize> {
        let branch = self.branch_polynomial();
        let roots = branch.rational_roots();
        let split: usize = roots.iter().map(|(_, m)| m).sum();
        if split as i64 != branch.deg() {
            return Err(Error::NonSplitBranchLocus);
        }
        let mut total: i64 = -4;
        let bases = roots
            .iter()
            .map(|&(r, _)| Base::Finite(r))
            .chain(std::iter::once(Base::Infinity));
        for base in bases {
            for pl in self.places_over(base)?.iter() {
                total += pl.different_exponent()?;
            }
        }
        if total < 2 || total % 2 != 0 {
            return Err(Error::Invalid(format!("odd ramification total {total}")));
        }
        Ok((total as usize + 2) / 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfield::make_field;

    fn x022() -> CurveModel {
        let k = make_field(3, 1).unwrap();
        CurveModel::odd(Poly::from_ints(k, &[2, 0, 1, 0, 1, 0, 1])).unwrap()
    }

    #[test]
    fn validate_examples() {
        let c = x022();
        assert_eq!(c.g(), 2);
        assert!(!c.infinity_branch());
        let k5 = make_field(5, 1).unwrap();
        let c = CurveModel::odd(Poly::from_ints(k5, &[0, -1, 0, 0, 0, 1])).unwrap();
        assert_eq!(c.g(), 2);
        assert!(c.infinity_branch());
        let k3 = make_field(3, 1).unwrap();
        assert!(matches!(
            CurveModel::odd(Poly::from_ints(k3, &[0, 0, 1])),
            Err(Error::GenusTooSmall(0))
        ));
    }

    #[test]
    fn validate_rejections() {
        let k3 = make_field(3, 1).unwrap();
        let k2 = make_field(2, 1).unwrap();
        // (x^3 - x)^2 is not squarefree
        let sq = Poly::from_ints(k3, &[0, -1, 0, 1]).pow(2);
        assert_eq!(CurveModel::odd(sq).unwrap_err(), Error::NotSquarefree);
        assert_eq!(
            CurveModel::odd(Poly::from_ints(k3, &[1, 0, 0, 0, 0, 2])).unwrap_err(),
            Error::NotMonic
        );
        assert_eq!(
            validate(
                k2,
                ModelKind::Odd {
                    f: Poly::from_ints(k2, &[1, 1, 0, 0, 0, 1])
                },
                None
            )
            .unwrap_err(),
            Error::CharMismatch
        );
        // h = x^2, f = x^5: h'^2 f + f'^2 = x^8 shares the root 0 with h
        let h = Poly::from_ints(k2, &[0, 0, 1]);
        let f = Poly::from_ints(k2, &[0, 0, 0, 0, 0, 1]);
        assert_eq!(CurveModel::char_two(h, f).unwrap_err(), Error::CommonRoots);
        let f = Poly::from_ints(k3, &[1, 2, 0, 0, 0, 1]);
        assert_eq!(
            validate(k3, ModelKind::Odd { f }, Some(3)).unwrap_err(),
            Error::GenusMismatch {
                declared: 3,
                derived: 2
            }
        );
    }

    #[test]
    fn char_two_genus_and_branch_flag() {
        let k2 = make_field(2, 1).unwrap();
        let c = CurveModel::char_two(
            Poly::from_ints(k2, &[1, 1, 0, 1]),
            Poly::from_ints(k2, &[0, 0, 0, 0, 0, 1]),
        )
        .unwrap();
        assert_eq!((c.g(), c.d(), c.infinity_branch()), (2, Some(3), false));
        let c = CurveModel::char_two(
            Poly::from_ints(k2, &[1, 1]),
            Poly::from_ints(k2, &[1, 0, 0, 0, 0, 1]),
        )
        .unwrap();
        assert_eq!((c.g(), c.d(), c.infinity_branch()), (2, Some(1), true));
    }

    #[test]
    fn s_polynomials_example() {
        let c = x022();
        let k = c.field();
        let s2 = c.s_polynomials(2).unwrap();
        assert_eq!(s2.s[0], Poly::from_ints(k, &[1, 0, 1, 0, 0, 0, 2]));
        assert_eq!(s2.psi[0], Poly::from_ints(k, &[1, 0, 1]));
        assert_eq!(s2.phi[0], Poly::from_ints(k, &[0, 0, 0, 0, 0, 0, 2]));
        let s1 = c.s_polynomials(1).unwrap();
        assert_eq!(s1.psi[0], Poly::from_ints(k, &[2]));
        assert_eq!(s1.phi[0], Poly::from_ints(k, &[0, 0, 0, 0, 2, 0, 1]));
        assert!(matches!(
            c.s_polynomials(3),
            Err(Error::IndexOutOfRange { i: 3, g: 2 })
        ));
    }

    #[test]
    fn s_polynomials_char_two_recomputed() {
        let k2 = make_field(2, 1).unwrap();
        let h = Poly::from_ints(k2, &[1, 1, 0, 1]);
        let f = Poly::from_ints(k2, &[0, 0, 0, 0, 0, 1]);
        let c = CurveModel::char_two(h.clone(), f.clone()).unwrap();
        let x = Poly::x(k2);
        for i in 1..=c.g() {
            let sp = c.s_polynomials(i).unwrap();
            let ii = k2.from_int(i as i64);
            assert_eq!(sp.s[0], &x * &f.derivative());
            assert_eq!(sp.s[1], &(&x * &h.derivative()) + &h.scale(ii));
            for j in 0..2 {
                assert_eq!(&sp.psi[j] + &sp.phi[j], sp.s[j]);
                assert!(sp.psi[j].deg() <= i as i64);
                assert!(sp.phi[j].ord0().is_none_or(|o| o > i));
            }
        }
    }

    #[test]
    fn s_g_leading_terms_for_odd_degree() {
        let k5 = make_field(5, 1).unwrap();
        let c = CurveModel::odd(Poly::from_ints(k5, &[1, 3, 0, 2, 4, 1])).unwrap();
        let g = c.g();
        let s = &c.s_polynomials(g).unwrap().s[0];
        assert_eq!(s.coeff(2 * g + 1), k5.one());
        assert_eq!(s.coeff(2 * g), k5.zero());
    }

    #[test]
    fn remark_chain() {
        let k = make_field(3, 1).unwrap();
        let c = CurveModel::odd(Poly::from_ints(k, &[1, 0, 2, 1, 2, 0, 1])).unwrap();
        let shifted = c.transform_shift(k.from_int(-1)).unwrap();
        assert_eq!(shifted.f(), &Poly::from_ints(k, &[2, 0, 2, 0, 2, 0, 1]));
        let rec = shifted.transform_reciprocal().unwrap();
        assert_eq!(rec.f(), x022().f());
        assert_eq!(c.transform_shift(k.zero()).unwrap(), c);
        let k5 = make_field(5, 1).unwrap();
        let odd = CurveModel::odd(Poly::from_ints(k5, &[1, 3, 0, 2, 4, 1])).unwrap();
        assert_eq!(
            odd.transform_reciprocal().unwrap_err(),
            Error::OddDegreeReciprocal
        );
        let zc = CurveModel::odd(Poly::from_ints(k5, &[0, -1, 0, 0, 0, 1])).unwrap();
        assert_eq!(
            zc.transform_reciprocal().unwrap_err(),
            Error::ZeroConstantTerm
        );
    }

    #[test]
    fn genus_oracle_examples() {
        let k5 = make_field(5, 1).unwrap();
        let c = CurveModel::odd(Poly::from_ints(k5, &[0, -1, 0, 0, 0, 1])).unwrap();
        assert_eq!(c.genus_oracle().unwrap(), 2);
        assert_eq!(
            x022().genus_oracle().unwrap_err(),
            Error::NonSplitBranchLocus
        );
        // over F_9 the same polynomial splits
        let k9 = make_field(3, 2).unwrap();
        let f9 = Poly::from_ints(k9, &[2, 0, 1, 0, 1, 0, 1]);
        if f9.rational_roots().len() == 6 {
            assert_eq!(CurveModel::odd(f9).unwrap().genus_oracle().unwrap(), 2);
        }
    }

    #[test]
    fn genus_oracle_char_two_ramified_infinity() {
        // h = x^2 + x over F_2 splits; d = 2 < g + 1 = 3
        let k2 = make_field(2, 1).unwrap();
        let c = CurveModel::char_two(
            Poly::from_ints(k2, &[0, 1, 1]),
            Poly::from_ints(k2, &[1, 0, 0, 0, 0, 1]),
        )
        .unwrap();
        assert_eq!((c.g(), c.d()), (2, Some(2)));
        assert_eq!(c.genus_oracle().unwrap(), 2);
        let inf = c.places_over(Base::Infinity).unwrap();
        assert_eq!(inf.len(), 1);
        let g = c.g() as i64;
        let d = 2;
        assert_eq!(inf[0].different_exponent().unwrap(), 2 * (g + 1 - d));
    }
}
