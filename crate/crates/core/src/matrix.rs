//! Dense matrices over a ring backend.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{domain, indeterminate, Result};
use crate::valuation::{RingConfig, RingElem, RingKind, Val, ValInfo};

/// Largest size for the exponential division-free determinant.
const DIVISION_FREE_MAX: usize = 12;

#[derive(Clone, Debug)]
pub struct Matrix {
    cfg: RingConfig,
    rows: usize,
    cols: usize,
    data: Vec<RingElem>,
}

impl Matrix {
    pub fn zeros(cfg: RingConfig, rows: usize, cols: usize) -> Self {
        Matrix { cfg, rows, cols, data: vec![RingElem::zero(cfg); rows * cols] }
    }

    pub fn identity(cfg: RingConfig, n: usize) -> Self {
        let mut m = Matrix::zeros(cfg, n, n);
        for i in 0..n {
            m[(i, i)] = RingElem::one(cfg);
        }
        m
    }

    pub fn from_rows(cfg: RingConfig, rows: Vec<Vec<RingElem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(domain("ragged matrix"));
        }
        Ok(Matrix { cfg, rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(cfg: RingConfig, rows: &[Vec<i64>]) -> Self {
        let r = rows.iter().map(|row| row.iter().map(|&x| RingElem::from_i64(cfg, x)).collect()).collect();
        Matrix::from_rows(cfg, r).expect("rectangular literal")
    }

    pub fn diagonal(cfg: RingConfig, d: &[RingElem]) -> Self {
        let mut m = Matrix::zeros(cfg, d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn from_columns(cfg: RingConfig, rows: usize, cols: &[Vec<RingElem>]) -> Self {
        let mut m = Matrix::zeros(cfg, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn config(&self) -> RingConfig {
        self.cfg
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<RingElem> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<RingElem> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[RingElem]) {
        for (i, x) in col.iter().enumerate() {
            self[(i, j)] = x.clone();
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cfg, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.cfg, self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = RingElem::zero(self.cfg);
                for k in 0..self.cols {
                    acc = &acc + &(&self[(i, k)] * &o[(k, j)]);
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert!(self.rows == o.rows && self.cols == o.cols);
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        Matrix { cfg: self.cfg, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, a: &RingElem) -> Matrix {
        let data = self.data.iter().map(|x| x * a).collect();
        Matrix { cfg: self.cfg, rows: self.rows, cols: self.cols, data }
    }

    /// `T^t G T`.
    pub fn congruence(&self, t: &Matrix) -> Matrix {
        t.transpose().mul(self).mul(t)
    }

    /// Submatrix on the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.cfg, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn entries(&self) -> &[RingElem] {
        &self.data
    }

    /// Every entry zero at its precision.
    pub fn is_zero_at_prec(&self) -> bool {
        self.data.iter().all(|x| x.is_zero_at_prec())
    }

    /// Entrywise equality at the combined precision.
    pub fn approx_eq(&self, o: &Matrix) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.sub(o).is_zero_at_prec()
    }

    /// Smallest precision among entries.
    pub fn known_to(&self) -> Val {
        self.data.iter().map(|x| x.known_to()).min().unwrap_or(Val::Inf)
    }

    /// Every entry has valuation `> g`.
    pub fn entries_val_gt(&self, g: Val) -> Result<bool> {
        for x in &self.data {
            if !x.val_gt(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every entry has valuation `>= g`.
    pub fn entries_val_ge(&self, g: Val) -> Result<bool> {
        for x in &self.data {
            if !x.val_ge(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Determinant. Gaussian elimination with least-valuation pivots, except in the
    /// Laurent backend, where dividing by a non-monomial unit truncates a u-series and
    /// a later exact cancellation would leave the valuation undetermined.
    pub fn det(&self) -> RingElem {
        assert!(self.is_square());
        let n = self.rows;
        if matches!(self.cfg.kind, RingKind::Laurent2 { .. }) && n <= DIVISION_FREE_MAX {
            return self.det_division_free();
        }
        let mut a = self.clone();
        let mut det = RingElem::one(self.cfg);
        for k in 0..n {
            let mut best: Option<(Val, usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if let ValInfo::Exact(v) = a[(i, j)].val_info() {
                        if best.is_none_or(|(bv, _, _)| v < bv) {
                            best = Some((v, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                // Remaining block is zero at precision: multiply in its size.
                let mut low = a[(k, k)].clone();
                for i in k..n {
                    for j in k..n {
                        if a[(i, j)].known_to() < low.known_to() {
                            low = a[(i, j)].clone();
                        }
                    }
                }
                for _ in k..n {
                    det = &det * &low;
                }
                return det;
            };
            if pi != k {
                a.swap_rows(pi, k);
                det = -det;
            }
            if pj != k {
                a.swap_cols(pj, k);
                det = -det;
            }
            let piv = a[(k, k)].clone();
            det = &det * &piv;
            for i in k + 1..n {
                let f = a[(i, k)].checked_div(&piv).expect("pivot is nonzero");
                for j in k..n {
                    let delta = &f * &a[(k, j)];
                    a[(i, j)] = &a[(i, j)] - &delta;
                }
            }
        }
        det
    }

    /// Row-by-row cofactor expansion, memoized on the set of used columns.
    fn det_division_free(&self) -> RingElem {
        let n = self.rows;
        // minors[mask] = det of rows n-|mask|.. against the columns in mask.
        let mut minors: Vec<Option<RingElem>> = vec![None; 1 << n];
        minors[0] = Some(RingElem::one(self.cfg));
        for mask in 1usize..(1 << n) {
            let row = n - mask.count_ones() as usize;
            let mut acc = RingElem::zero(self.cfg);
            let mut sign_neg = false;
            for c in 0..n {
                if mask & (1 << c) == 0 {
                    continue;
                }
                let term = &self[(row, c)] * minors[mask & !(1 << c)].as_ref().expect("smaller mask done");
                acc = if sign_neg { &acc - &term } else { &acc + &term };
                sign_neg = !sign_neg;
            }
            minors[mask] = Some(acc);
        }
        minors[(1 << n) - 1].take().expect("full mask")
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// Inverse over `R`; the determinant must be a unit.
    pub fn inverse(&self) -> Result<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let d = self.det();
        if d.is_zero_at_prec() {
            return Err(indeterminate("determinant is zero at precision"));
        }
        if !d.is_unit()? {
            return Err(domain("determinant is not a unit"));
        }
        let mut a = self.clone();
        let mut inv = Matrix::identity(self.cfg, n);
        for k in 0..n {
            let pivot_row = (k..n)
                .find(|&i| a[(i, k)].is_unit().unwrap_or(false))
                .ok_or_else(|| indeterminate("no unit pivot in column"))?;
            a.swap_rows(pivot_row, k);
            inv.swap_rows(pivot_row, k);
            let piv_inv = a[(k, k)].inverse()?;
            for j in 0..n {
                a[(k, j)] = &a[(k, j)] * &piv_inv;
                inv[(k, j)] = &inv[(k, j)] * &piv_inv;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    let da = &f * &a[(k, j)];
                    a[(i, j)] = &a[(i, j)] - &da;
                    let di = &f * &inv[(k, j)];
                    inv[(i, j)] = &inv[(i, j)] - &di;
                }
            }
        }
        Ok(inv)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = RingElem;
    fn index(&self, (i, j): (usize, usize)) -> &RingElem {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RingElem {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `x^t G y`.
pub fn bilinear(g: &Matrix, x: &[RingElem], y: &[RingElem]) -> RingElem {
    let cfg = g.config();
    let mut acc = RingElem::zero(cfg);
    for i in 0..g.rows() {
        for j in 0..g.cols() {
            acc = &acc + &(&(&x[i] * &g[(i, j)]) * &y[j]);
        }
    }
    acc
}

/// `a x + b y` on coordinate vectors.
pub fn combine(a: &RingElem, x: &[RingElem], b: &RingElem, y: &[RingElem]) -> Vec<RingElem> {
    x.iter().zip(y).map(|(xi, yi)| &(a * xi) + &(b * yi)).collect()
}
