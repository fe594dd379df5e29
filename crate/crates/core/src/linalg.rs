//! Dense matrices over a finite field and exact linear solving.

use std::fmt;

use crate::gfield::{Fe, Field};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix whose column `j` is `cols[j]`.
    pub fn from_columns(field: Field, rows: usize, cols: &[Vec<Fe>]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_rows(field: Field, rows: &[Vec<Fe>]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row length");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Matrix {
        let rows: Vec<Vec<Fe>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_int(v)).collect())
            .collect();
        Matrix::from_rows(field, &rows)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<Fe> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<Fe> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        m
    }

    /// `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(a.field, a.rows + c.rows, a.cols + b.cols);
        for (blk, r0, c0) in [
            (a, 0, 0),
            (b, 0, a.cols),
            (c, a.rows, 0),
            (d, a.rows, a.cols),
        ] {
            for i in 0..blk.rows {
                for j in 0..blk.cols {
                    m.set(r0 + i, c0 + j, blk.get(i, j));
                }
            }
        }
        m
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j));
            }
        }
        m
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m = Matrix::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = m.get(i, j) + a * o.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, k: Fe) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v * k).collect(),
        }
    }

    fn zip(&self, o: &Matrix, f: impl Fn(Fe, Fe) -> Fe) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (o.rows, o.cols),
            "dimension mismatch"
        );
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn pow(&self, e: u64) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn apply(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(self.field.zero(), |acc, j| acc + self.get(i, j) * v[j]))
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(piv) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(rank, piv);
            let inv = m.get(rank, col).inv().expect("nonzero pivot");
            for r in 0..m.rows {
                if r != rank && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col) * inv;
                    m.row_axpy(r, rank, -factor);
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `row[dst] += k * row[src]`.
    fn row_axpy(&mut self, dst: usize, src: usize, k: Fe) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + k * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    fn row_scale(&mut self, r: usize, k: Fe) {
        for j in 0..self.cols {
            let v = self.get(r, j) * k;
            self.set(r, j, v);
        }
    }
}

/// Either a solution of `L u = rhs` or a combination of equations that
/// proves there is none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// Free variables are set to zero.
    Solved(Vec<Fe>),
    /// `y` with `y^T L = 0` and `y^T rhs != 0`.
    Inconsistent { combination: Vec<Fe>, value: Fe },
}

/// Gaussian elimination on `[L | rhs | I]`; the identity block records how
/// each reduced row arises from the original equations.
pub fn solve(l: &Matrix, rhs: &[Fe]) -> Solution {
    let field = l.field;
    let (n, m) = (l.rows, l.cols);
    assert_eq!(rhs.len(), n, "right-hand side length");
    let mut aug = Matrix::zeros(field, n, m + 1 + n);
    for (i, &b) in rhs.iter().enumerate() {
        for j in 0..m {
            aug.set(i, j, l.get(i, j));
        }
        aug.set(i, m, b);
        aug.set(i, m + 1 + i, field.one());
    }
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..m {
        let Some(piv) = (rank..n).find(|&r| !aug.get(r, col).is_zero()) else {
            continue;
        };
        aug.swap_rows(rank, piv);
        let inv = aug.get(rank, col).inv().expect("nonzero pivot");
        aug.row_scale(rank, inv);
        for r in 0..n {
            if r != rank && !aug.get(r, col).is_zero() {
                let factor = aug.get(r, col);
                aug.row_axpy(r, rank, -factor);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    for r in rank..n {
        let value = aug.get(r, m);
        if !value.is_zero() {
            let combination = (0..n).map(|i| aug.get(r, m + 1 + i)).collect();
            return Solution::Inconsistent { combination, value };
        }
    }
    let mut u = vec![field.zero(); m];
    for (r, &col) in pivots.iter().enumerate() {
        u[col] = aug.get(r, m);
    }
    Solution::Solved(u)
}

/// Checks an inconsistency witness against the original system.
pub fn verify_inconsistency(l: &Matrix, rhs: &[Fe], combination: &[Fe]) -> bool {
    let field = l.field;
    let row = l.transpose().apply(combination);
    let value = rhs
        .iter()
        .zip(combination)
        .fold(field.zero(), |acc, (&b, &y)| acc + b * y);
    row.iter().all(|v| v.is_zero()) && !value.is_zero()
}
