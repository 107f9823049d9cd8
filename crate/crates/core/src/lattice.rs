//! Lattices presented by symmetric Gram matrices.

use std::fmt;

use crate::error::{domain, indeterminate, Result};
use crate::matrix::Matrix;
use crate::valuation::{RingConfig, RingElem, Val, ValInfo};

/// Free lattice with a non-degenerate symmetric bilinear form, in coordinates.
#[derive(Clone, Debug)]
pub struct GramLattice {
    ring: RingConfig,
    gram: Matrix,
}

/// Minimum valuation over `items`, with the index of the first entry attaining it.
///
/// Entries that are zero at precision only count if their lower bound could
/// undercut the minimum, in which case the answer is indeterminate.
pub(crate) fn min_valuation<'a>(items: impl IntoIterator<Item = &'a RingElem>) -> Result<(Val, usize)> {
    let mut best: Option<(Val, usize)> = None;
    let mut floor = Val::Inf;
    for (k, x) in items.into_iter().enumerate() {
        match x.val_info() {
            ValInfo::Exact(v) => {
                if best.is_none_or(|(b, _)| v < b) {
                    best = Some((v, k));
                }
            }
            ValInfo::AtLeast(v) => floor = floor.min(v),
        }
    }
    match best {
        Some((v, k)) if v < floor => Ok((v, k)),
        Some((v, _)) => Err(indeterminate(format!("minimum valuation {v} not certified against entries known to {floor}"))),
        None => Err(indeterminate("all entries are zero at precision")),
    }
}

impl GramLattice {
    /// Validates symmetry and non-degeneracy.
    pub fn new(gram: Matrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(domain("Gram matrix must be square"));
        }
        let n = gram.rows();
        for i in 0..n {
            for j in i + 1..n {
                if !gram[(i, j)].approx_eq(&gram[(j, i)]) {
                    return Err(domain(format!("Gram matrix is not symmetric at ({i},{j})")));
                }
            }
        }
        let lat = GramLattice { ring: gram.config(), gram };
        if n > 0 && lat.det().is_zero_at_prec() {
            return Err(indeterminate("determinant is zero at working precision"));
        }
        Ok(lat)
    }

    /// Skips validation; for internal constructions that are symmetric by design.
    pub(crate) fn from_trusted(gram: Matrix) -> Self {
        GramLattice { ring: gram.config(), gram }
    }

    pub fn from_i64(ring: RingConfig, rows: &[Vec<i64>]) -> Result<Self> {
        GramLattice::new(Matrix::from_i64(ring, rows))
    }

    pub fn diagonal(ring: RingConfig, d: &[RingElem]) -> Result<Self> {
        GramLattice::new(Matrix::diagonal(ring, d))
    }

    pub fn diagonal_i64(ring: RingConfig, d: &[i64]) -> Result<Self> {
        let d: Vec<RingElem> = d.iter().map(|&x| RingElem::from_i64(ring, x)).collect();
        GramLattice::diagonal(ring, &d)
    }

    pub fn empty(ring: RingConfig) -> Self {
        GramLattice { ring, gram: Matrix::zeros(ring, 0, 0) }
    }

    pub fn ring(&self) -> RingConfig {
        self.ring
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> &RingElem {
        &self.gram[(i, j)]
    }

    pub fn det(&self) -> RingElem {
        if self.rank() == 0 {
            return RingElem::one(self.ring);
        }
        self.gram.det()
    }

    /// `min v(x, y)`, attained on a Gram entry.
    pub fn lattice_valuation(&self) -> Result<Val> {
        if self.rank() == 0 {
            return Ok(Val::Inf);
        }
        Ok(min_valuation(self.gram.entries())?.0)
    }

    pub fn is_unimodular(&self) -> Result<bool> {
        Ok(self.det().valuation()? == self.ring.zero_val())
    }

    /// Form multiplied by `a`.
    pub fn rescale(&self, a: &RingElem) -> Result<GramLattice> {
        if a.is_zero_at_prec() {
            return Err(domain("rescaling by zero"));
        }
        Ok(GramLattice { ring: self.ring, gram: self.gram.scale(a) })
    }

    /// Orthogonal direct sum (block diagonal Gram).
    pub fn direct_sum(&self, other: &GramLattice) -> Result<GramLattice> {
        self.ring.same_ring(&other.ring)?;
        let (n, m) = (self.rank(), other.rank());
        let mut g = Matrix::zeros(self.ring, n + m, n + m);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = self.gram[(i, j)].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                g[(n + i, n + j)] = other.gram[(i, j)].clone();
            }
        }
        Ok(GramLattice { ring: self.ring, gram: g })
    }

    /// Gram matrix in the basis given by the columns of `t`; `det t` must be a unit.
    pub fn change_basis(&self, t: &Matrix) -> Result<GramLattice> {
        if t.rows() != self.rank() || !t.is_square() {
            return Err(domain("basis change has the wrong shape"));
        }
        let d = t.det();
        match d.val_info() {
            ValInfo::Exact(v) if v == self.ring.zero_val() => {}
            ValInfo::Exact(v) => return Err(domain(format!("det T has valuation {v}, not a unit"))),
            ValInfo::AtLeast(_) => return Err(domain("det T is zero at precision")),
        }
        Ok(GramLattice { ring: self.ring, gram: self.gram.congruence(t) })
    }

    /// Sublattice spanned by the listed basis vectors.
    pub fn sub_lattice(&self, idx: &[usize]) -> GramLattice {
        GramLattice { ring: self.ring, gram: self.gram.select(idx, idx) }
    }

    /// Same Gram entries at equal precision.
    pub fn approx_eq(&self, other: &GramLattice) -> bool {
        self.ring.kind == other.ring.kind && self.gram.approx_eq(&other.gram)
    }

    pub fn check_same_ring(&self, other: &GramLattice) -> Result<()> {
        self.ring.same_ring(&other.ring)
    }
}

impl fmt::Display for GramLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.gram, self.ring.name())
    }
}
