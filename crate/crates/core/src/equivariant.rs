//! Automorphism actions on `H^0(Omega)`, `H^1(O)` and `H^1_dR`, and the
//! equivariant splitting question for `0 -> H^0(Omega) -> H^1_dR -> H^1(O) -> 0`.
//!
//! Matrices act on coordinate columns: column `j` holds the coordinates of
//! the pullback of basis element `j`. On `H^1_dR` the basis is
//! `lambda_0..lambda_{g-1}, gamma_1..gamma_g`, so the action has the block
//! shape `[[A, B], [0, C]]`.

use rand::Rng;
use rand_pcg::Pcg32;
use rayon::prelude::*;

use crate::cech::{self, dr_reduce, h0_basis, h0_coords, h1_reduce, CechTriple, H1Class};
use crate::coordring::{Automorphism, Differential, RingElement};
use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::gfield::{make_field, Fe};
use crate::linalg::{solve, verify_inconsistency, Matrix, Solution};
use crate::places::Base;
use crate::polylab::{Poly, RationalFn};

/// Stream constant of the seeded generator used by [`random_family_polys`];
/// it fixes the LCG increment at 1442695040888963407.
pub const SCAN_STREAM: u64 = 0x0a02_bdbf_7bb3_c0a7;

fn check_field(c: &CurveModel, t: &Automorphism) -> Result<()> {
    match t {
        Automorphism::Involution => Ok(()),
        Automorphism::Translation { a, .. } if a.field() != c.field() => Err(Error::FieldMismatch),
        Automorphism::Translation { a, eps } => {
            let eps = if eps.is_one() { 1 } else { -1 };
            Automorphism::translation(c, *a, eps).map(|_| ())
        }
    }
}

/// Action on `H^0(Omega)` in the basis `x^j omega_can`.
pub fn action_h0(c: &CurveModel, t: &Automorphism) -> Result<Matrix> {
    check_field(c, t)?;
    let cols = h0_basis(c)
        .iter()
        .map(|w| h0_coords(&t.pullback_diff(w)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(c.field(), c.g(), &cols))
}

/// `t^*` applied entrywise.
pub fn pullback_triple(t: &Automorphism, tr: &CechTriple) -> CechTriple {
    CechTriple::new(
        t.pullback_diff(&tr.w0),
        t.pullback_diff(&tr.winf),
        t.pullback(&tr.f),
    )
}

fn nonzero_shift(c: &CurveModel, t: &Automorphism) -> Option<Fe> {
    let a = t.shift(c);
    (!a.is_zero()).then_some(a)
}

/// The function `t_i(x) y / (x^i (x - a)^g)` on `U_a cap U_inf` representing
/// `[y / x^i]` on the cover `{U_a, U_inf}`.
fn refined_h1_function(c: &CurveModel, a: Fe, i: usize) -> RingElement {
    let k = c.field();
    let gp = Poly::linear(a).pow(c.g() as u32);
    let (_, t) = gp.split_at(i - 1);
    let den = &Poly::monomial(k.one(), i) * &gp;
    RingElement::y_times(c, RationalFn::new(t, den).expect("nonzero denominator"))
}

/// Action on `H^1(O)` in the basis `[y / x^i]`.
pub fn action_h1(c: &CurveModel, t: &Automorphism) -> Result<Matrix> {
    check_field(c, t)?;
    let k = c.field();
    let g = c.g();
    let mut cols = Vec::with_capacity(g);
    for i in 1..=g {
        let f = match nonzero_shift(c, t) {
            None => RingElement::y_times(c, RationalFn::x_pow(k, -(i as i64))),
            Some(_) if c.is_char_two() => return Err(Error::CharTwoUnsupported),
            Some(a) => refined_h1_function(c, a, i),
        };
        cols.push(h1_reduce(&t.pullback(&f))?.class.coords);
    }
    Ok(Matrix::from_columns(k, g, &cols))
}

fn inverse(t: &Automorphism) -> Automorphism {
    match t {
        Automorphism::Involution => Automorphism::Involution,
        Automorphism::Translation { a, eps } => Automorphism::Translation { a: -*a, eps: *eps },
    }
}

/// Action on `H^1(O)` read off through Serre duality: with
/// `P[j][k] = <omega_j, [y/x^k]>` and `Q[j][i] = <(t^{-1})^* omega_j, [y/x^i]>`,
/// invariance of the pairing gives `P C = Q`.
pub fn action_h1_by_duality(c: &CurveModel, t: &Automorphism) -> Result<Matrix> {
    check_field(c, t)?;
    let k = c.field();
    let g = c.g();
    let zero = Base::Finite(k.zero());
    let tinv = inverse(t);
    let basis = h0_basis(c);
    let unit = |i: usize| {
        let mut coords = vec![k.zero(); g];
        coords[i] = k.one();
        H1Class { coords }
    };
    let pairing = |w: &Differential, i: usize| -> Result<Fe> {
        w.mul_fn(&cech::h1_representative(c, &unit(i)))
            .residue_sum(zero)
    };
    let mut p = Matrix::zeros(k, g, g);
    let mut q = Matrix::zeros(k, g, g);
    for (j, w) in basis.iter().enumerate() {
        let pw = tinv.pullback_diff(w);
        for i in 0..g {
            p.set(j, i, pairing(w, i)?);
            q.set(j, i, pairing(&pw, i)?);
        }
    }
    let mut cols = Vec::with_capacity(g);
    for i in 0..g {
        match solve(&p, &q.column(i)) {
            Solution::Solved(v) => cols.push(v),
            Solution::Inconsistent { .. } => {
                return Err(Error::Invalid("Serre pairing is degenerate".into()))
            }
        }
    }
    Ok(Matrix::from_columns(k, g, &cols))
}

/// The blocks of an action on `H^1_dR`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionMatrices {
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
    pub m: Matrix,
}

impl ActionMatrices {
    pub fn from_full(m: Matrix) -> ActionMatrices {
        let g = m.rows() / 2;
        ActionMatrices {
            a: m.block(0, 0, g, g),
            b: m.block(0, g, g, g),
            c: m.block(g, g, g, g),
            m,
        }
    }

    pub fn g(&self) -> usize {
        self.a.rows()
    }

    /// The lower-left block, zero for every automorphism.
    pub fn lower_left(&self) -> Matrix {
        let g = self.g();
        self.m.block(g, 0, g, g)
    }
}

/// Pullback of `gamma_i` as a triple on `{U_0, U_inf}`.
///
/// For a nonzero shift `a` the representative is first moved to the cover
/// `{U_a, U_inf}` through the refined sextuple, since `x -> x + a` carries
/// that cover onto `{U_0, U_inf}`.
pub fn pulled_gamma(c: &CurveModel, t: &Automorphism, i: usize) -> Result<CechTriple> {
    match nonzero_shift(c, t) {
        None => Ok(pullback_triple(t, &cech::gamma(c, i)?)),
        Some(a) => {
            let nu = cech::refine_sextuple(c, a, i)?;
            Ok(pullback_triple(t, &cech::rho_prime(&nu)))
        }
    }
}

/// Action on `H^1_dR`.
pub fn action_dr(c: &CurveModel, t: &Automorphism) -> Result<ActionMatrices> {
    check_field(c, t)?;
    if c.is_char_two() && nonzero_shift(c, t).is_some() {
        return Err(Error::CharTwoUnsupported);
    }
    let g = c.g();
    let mut cols = Vec::with_capacity(2 * g);
    for j in 0..g {
        let pulled = pullback_triple(t, &cech::lambda(c, j)?);
        cols.push(dr_reduce(&pulled)?.class.flat());
    }
    for i in 1..=g {
        cols.push(dr_reduce(&pulled_gamma(c, t, i)?)?.class.flat());
    }
    Ok(ActionMatrices::from_full(Matrix::from_columns(
        c.field(),
        2 * g,
        &cols,
    )))
}

/// The `lambda` part `(c_0, .., c_{g-1})` of `tau^* gamma_g` for
/// `tau: x -> x + a, y -> y`.
pub fn c_coefficients(c: &CurveModel, a: Fe) -> Result<Vec<Fe>> {
    if c.is_char_two() {
        return Err(Error::CharTwoUnsupported);
    }
    let tau = Automorphism::translation(c, a, 1)?;
    if a.is_zero() {
        return Err(Error::ZeroShift);
    }
    Ok(dr_reduce(&pulled_gamma(c, &tau, c.g())?)?.class.lambda)
}

/// `-g a / 2`, the value of `c_{g-1}` forced by comparing top coefficients
/// when `deg f = 2g + 1`; `None` for even degree.
pub fn predicted_last_c(c: &CurveModel, a: Fe) -> Option<Fe> {
    if c.is_char_two() || c.f().deg() != 2 * c.g() as i64 + 1 {
        return None;
    }
    let k = c.field();
    Some(-(k.from_int(c.g() as i64) * a) / k.from_int(2))
}

/// Outcome of the splitting test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitResult {
    /// `s(gamma_bar_j) = gamma_j + sum_i S[i][j] lambda_i` is equivariant.
    Splits { s: Matrix },
    /// `combination` weights the equations `(A S + B - S C)[i][j] = 0`,
    /// indexed `i g + j`, into `0 = value`.
    NoSplit { combination: Vec<Fe>, value: Fe },
}

/// The linear system `A S - S C = -B` in the unknowns `S[k][l]`, indexed
/// `k g + l`.
pub fn sylvester_system(m: &ActionMatrices) -> (Matrix, Vec<Fe>) {
    let g = m.g();
    let k = m.a.field();
    let mut l = Matrix::zeros(k, g * g, g * g);
    let mut rhs = vec![k.zero(); g * g];
    for i in 0..g {
        for j in 0..g {
            let row = i * g + j;
            for kk in 0..g {
                let v = l.get(row, kk * g + j) + m.a.get(i, kk);
                l.set(row, kk * g + j, v);
            }
            for ll in 0..g {
                let v = l.get(row, i * g + ll) - m.c.get(ll, j);
                l.set(row, i * g + ll, v);
            }
            rhs[row] = -m.b.get(i, j);
        }
    }
    (l, rhs)
}

/// Decides whether the Hodge-de-Rham sequence splits equivariantly for the
/// group generated by the automorphism with action `m`.
pub fn splitting_decide(m: &ActionMatrices) -> SplitResult {
    let g = m.g();
    let (l, rhs) = sylvester_system(m);
    match solve(&l, &rhs) {
        Solution::Solved(u) => {
            let rows: Vec<Vec<Fe>> = u.chunks(g).map(|r| r.to_vec()).collect();
            SplitResult::Splits {
                s: if g == 0 {
                    Matrix::zeros(m.a.field(), 0, 0)
                } else {
                    Matrix::from_rows(m.a.field(), &rows)
                },
            }
        }
        Solution::Inconsistent { combination, value } => {
            SplitResult::NoSplit { combination, value }
        }
    }
}

/// Checks `M [S; I] = [S; I] C` and `p o s = id`.
pub fn verify_splitting(m: &ActionMatrices, s: &Matrix) -> bool {
    let k = m.a.field();
    let g = m.g();
    let id = Matrix::identity(k, g);
    let mut section = Matrix::zeros(k, 2 * g, g);
    for i in 0..g {
        for j in 0..g {
            section.set(i, j, s.get(i, j));
            section.set(g + i, j, id.get(i, j));
        }
    }
    m.m.mul(&section) == section.mul(&m.c)
        && section.block(g, 0, g, g) == id
        && m.a.mul(s).add(&m.b) == s.mul(&m.c)
}

/// Checks a `NoSplit` certificate against the system.
pub fn verify_no_split(m: &ActionMatrices, combination: &[Fe]) -> bool {
    let (l, rhs) = sylvester_system(m);
    verify_inconsistency(&l, &rhs, combination)
}

/// Checks `sigma^* gamma_i - gamma_i = coboundary(h^{<=i}/x^i, h^{>i}/x^i)`
/// on a characteristic-2 curve.
pub fn sigma_coboundary_holds(c: &CurveModel, i: usize) -> Result<bool> {
    let h = c.h().ok_or(Error::CharMismatch)?;
    let k = c.field();
    let g = cech::gamma(c, i)?;
    let diff = pullback_triple(&Automorphism::Involution, &g).sub(&g);
    let (lo, hi) = h.split_at(i);
    let xi = RationalFn::x_pow(k, -(i as i64));
    let f0 = RingElement::from_rational(c, &RationalFn::from_poly(lo) * &xi);
    let finf = RingElement::from_rational(c, &RationalFn::from_poly(hi) * &xi);
    Ok(diff == CechTriple::coboundary(&f0, &finf))
}

/// Verdict of one family member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Splits,
    NoSplit,
}

/// One row of a family scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub q: Poly,
    pub g: Option<usize>,
    pub c_last: Option<Fe>,
    pub verdict: Option<Verdict>,
    pub error: Option<Error>,
}

/// `q(x^p - a^{p-1} x)`.
pub fn family_polynomial(q: &Poly, a: Fe) -> Poly {
    let k = q.field();
    let p = k.p() as usize;
    let inner = &Poly::monomial(k.one(), p) - &Poly::monomial(a.pow(p as u64 - 1), 1);
    q.compose(&inner)
}

fn scan_one(q: &Poly, a: Fe) -> ScanRow {
    let mut row = ScanRow {
        q: q.clone(),
        g: None,
        c_last: None,
        verdict: None,
        error: None,
    };
    let run = |row: &mut ScanRow| -> Result<()> {
        let c = CurveModel::odd(family_polynomial(q, a))?;
        row.g = Some(c.g());
        let tau = Automorphism::translation(&c, a, 1)?;
        let m = action_dr(&c, &tau)?;
        row.c_last = m.b.column(c.g() - 1).last().copied();
        row.verdict = Some(match splitting_decide(&m) {
            SplitResult::Splits { .. } => Verdict::Splits,
            SplitResult::NoSplit { .. } => Verdict::NoSplit,
        });
        Ok(())
    };
    if let Err(e) = run(&mut row) {
        row.error = Some(e);
    }
    row
}

/// Runs the splitting test on `y^2 = q(x^p - a^{p-1} x)` for each `q`, in
/// parallel; rows come back in input order.
pub fn family_scan(qs: &[Poly], a: Fe) -> Vec<ScanRow> {
    qs.par_iter().map(|q| scan_one(q, a)).collect()
}

/// Distinct random monic squarefree polynomials of degree `deg` over `F_p`,
/// drawn from a PCG32 generator (64-bit LCG state) seeded with `seed`.
pub fn random_family_polys(p: u32, deg: usize, count: usize, seed: u64) -> Result<Vec<Poly>> {
    let k = make_field(p, 1)?;
    let mut rng = Pcg32::new(seed, SCAN_STREAM);
    let mut out: Vec<Poly> = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > 1000 * (count + 1) {
            return Err(Error::Invalid(format!(
                "could not find {count} distinct squarefree polynomials of degree {deg} over F_{p}"
            )));
        }
        let mut coeffs: Vec<Fe> = (0..deg)
            .map(|_| k.from_int(rng.gen_range(0..p as i64)))
            .collect();
        coeffs.push(k.one());
        let q = Poly::new(k, coeffs);
        if q.squarefree_check()? && !out.contains(&q) {
            out.push(q);
        }
    }
    Ok(out)
}
