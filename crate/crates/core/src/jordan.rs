//! Jordan splittings and orthogonal bases of their components.

use crate::error::{domain, Error, Result};
use crate::lattice::{min_valuation, GramLattice};
use crate::matrix::Matrix;
use crate::valuation::{RingConfig, RingElem, RingKind, Val};

/// A uni-valued component `L(sigma)` of a decomposition.
#[derive(Clone, Debug)]
pub struct JordanBlock {
    pub scale_valuation: Val,
    /// `L`: the block's Gram divided by `sigma(scale_valuation)`.
    pub unimodular_gram: GramLattice,
    /// Columns: the block's basis in the ambient coordinates.
    pub transition: Matrix,
    /// Sizes (1 or 2) of the orthogonal summands along the block's basis.
    pub pieces: Vec<usize>,
}

impl JordanBlock {
    pub fn rank(&self) -> usize {
        self.unimodular_gram.rank()
    }

    pub fn ring(&self) -> RingConfig {
        self.unimodular_gram.ring()
    }

    /// `sigma * L`, the Gram of the block inside the ambient lattice.
    pub fn gram(&self) -> Result<Matrix> {
        let s = RingElem::sigma(self.ring(), self.scale_valuation)?;
        Ok(self.unimodular_gram.gram().scale(&s))
    }

    /// Only rank-1 summands.
    pub fn is_diagonal(&self) -> bool {
        self.pieces.iter().all(|&p| p == 1)
    }
}

/// Orthogonal sum of uni-valued blocks with strictly increasing valuations.
#[derive(Clone, Debug)]
pub struct JordanDecomposition {
    pub blocks: Vec<JordanBlock>,
    /// Concatenated block bases (columns), in the ambient coordinates.
    pub transition: Matrix,
}

impl JordanDecomposition {
    pub fn valuations(&self) -> Vec<Val> {
        self.blocks.iter().map(|b| b.scale_valuation).collect()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.rank()).collect()
    }

    /// Valuation of the last block.
    pub fn top_valuation(&self) -> Option<Val> {
        self.blocks.last().map(|b| b.scale_valuation)
    }
}

/// Complement vectors are rescaled by unit factors instead of dividing by them in
/// the Laurent backend, where dividing by a non-monomial unit costs exactness.
fn divide_by_units(cfg: RingConfig) -> bool {
    !matches!(cfg.kind, RingKind::Laurent2 { .. })
}

/// One step of the greedy splitting inside a working basis.
struct Work<'a> {
    ambient: &'a Matrix,
    basis: Matrix,
    gram: Matrix,
}

impl<'a> Work<'a> {
    fn new(ambient: &'a Matrix) -> Self {
        let n = ambient.rows();
        Work { ambient, basis: Matrix::identity(ambient.config(), n), gram: ambient.clone() }
    }

    fn cfg(&self) -> RingConfig {
        self.ambient.config()
    }

    fn refresh(&mut self) {
        self.gram = self.ambient.congruence(&self.basis);
    }

    fn col(&self, j: usize) -> Vec<RingElem> {
        self.basis.column(j)
    }

    fn set_col(&mut self, j: usize, v: Vec<RingElem>) {
        self.basis.set_column(j, &v);
    }

    /// Minimal-valuation entry on `rest`: a diagonal position if possible, else the
    /// lowest off-diagonal pair.
    fn pick(&self, rest: &[usize]) -> Result<(Val, usize, Option<usize>)> {
        let entries: Vec<&RingElem> = rest.iter().flat_map(|&i| rest.iter().map(move |&j| (i, j))).map(|(i, j)| &self.gram[(i, j)]).collect();
        let (v, _) = min_valuation(entries)?;
        for &i in rest {
            if let crate::valuation::ValInfo::Exact(w) = self.gram[(i, i)].val_info() {
                if w == v {
                    return Ok((v, i, None));
                }
            }
        }
        for (a, &i) in rest.iter().enumerate() {
            for &j in &rest[a + 1..] {
                if let crate::valuation::ValInfo::Exact(w) = self.gram[(i, j)].val_info() {
                    if w == v {
                        return Ok((v, i, Some(j)));
                    }
                }
            }
        }
        unreachable!("minimum is attained on some entry")
    }

    /// Makes every vector in `others` orthogonal to the piece spanned by `piece`.
    fn orthogonalize(&mut self, v: Val, piece: &[usize], others: &[usize]) -> Result<()> {
        let cfg = self.cfg();
        let sigma = RingElem::sigma(cfg, v)?;
        let divide = divide_by_units(cfg);
        match *piece {
            [i] => {
                let unit = self.gram[(i, i)].checked_div(&sigma)?;
                let xi = self.col(i);
                for &k in others {
                    let c = self.gram[(i, k)].checked_div(&sigma)?;
                    let xk = self.col(k);
                    let new: Vec<RingElem> = if divide {
                        let f = c.checked_div(&unit)?;
                        xk.iter().zip(&xi).map(|(a, b)| a - &(&f * b)).collect()
                    } else {
                        xk.iter().zip(&xi).map(|(a, b)| &(&unit * a) - &(&c * b)).collect()
                    };
                    self.set_col(k, new);
                }
            }
            [i, j] => {
                let s2 = sigma.square();
                let (gii, gjj, gij) = (self.gram[(i, i)].clone(), self.gram[(j, j)].clone(), self.gram[(i, j)].clone());
                let d = (&(&gii * &gjj) - &gij.square()).checked_div(&s2)?;
                let (xi, xj) = (self.col(i), self.col(j));
                for &k in others {
                    let (gik, gjk) = (&self.gram[(i, k)], &self.gram[(j, k)]);
                    let ci = (&(&gjj * gik) - &(&gij * gjk)).checked_div(&s2)?;
                    let cj = (&(&gii * gjk) - &(&gij * gik)).checked_div(&s2)?;
                    let xk = self.col(k);
                    let new: Vec<RingElem> = if divide {
                        let (fi, fj) = (ci.checked_div(&d)?, cj.checked_div(&d)?);
                        (0..xk.len()).map(|r| &(&xk[r] - &(&fi * &xi[r])) - &(&fj * &xj[r])).collect()
                    } else {
                        (0..xk.len()).map(|r| &(&(&d * &xk[r]) - &(&ci * &xi[r])) - &(&cj * &xj[r])).collect()
                    };
                    self.set_col(k, new);
                }
            }
            _ => unreachable!(),
        }
        self.refresh();
        Ok(())
    }

    /// Splits `rest` into orthogonal pieces of rank 1 and 2, in discovery order.
    ///
    /// With `sum_trick`, an off-diagonal minimum is first turned into a diagonal
    /// one through `x + y` (valid when 2 is a unit).
    fn greedy(&mut self, mut rest: Vec<usize>, sum_trick: bool) -> Result<Vec<(Val, Vec<usize>)>> {
        let mut pieces = Vec::new();
        while !rest.is_empty() {
            let (v, i, j) = self.pick(&rest)?;
            let piece = match j {
                None => vec![i],
                Some(j) if sum_trick => {
                    let sum: Vec<RingElem> = self.col(i).iter().zip(self.col(j)).map(|(a, b)| a + &b).collect();
                    self.set_col(i, sum);
                    self.refresh();
                    if self.gram[(i, i)].valuation()? != v {
                        return Err(domain("x + y does not have minimal norm valuation"));
                    }
                    vec![i]
                }
                Some(j) => vec![i, j],
            };
            rest.retain(|k| !piece.contains(k));
            self.orthogonalize(v, &piece, &rest)?;
            pieces.push((v, piece));
        }
        Ok(pieces)
    }
}

/// Decides the Cramer divisibility criterion for the sublattice on `idx`.
pub fn can_split(m: &GramLattice, idx: &[usize]) -> Result<bool> {
    let g = m.gram();
    let a = g.select(idx, idx);
    let det_a = a.det();
    if det_a.is_zero_at_prec() {
        return Err(domain("selected sublattice is degenerate"));
    }
    let va = det_a.valuation()?;
    for x in 0..m.rank() {
        for i in 0..idx.len() {
            let mut ax = a.clone();
            for (c, &e) in idx.iter().enumerate() {
                ax[(i, c)] = g[(x, e)].clone();
            }
            if !ax.det().val_ge(va)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Result of [`split_off`].
#[derive(Clone, Debug)]
pub struct Split {
    pub sub: GramLattice,
    pub complement: GramLattice,
    /// Columns spanning the sublattice (ambient coordinates).
    pub sub_basis: Matrix,
    /// Columns spanning the orthogonal complement.
    pub complement_basis: Matrix,
}

/// `M = N + N^perp` for the sublattice `N` on `idx`, via Cramer coefficients.
pub fn split_off(m: &GramLattice, idx: &[usize]) -> Result<Split> {
    if !can_split(m, idx)? {
        return Err(Error::Split("det A does not divide every det A_{i,x}".into()));
    }
    let cfg = m.ring();
    let n = m.rank();
    let g = m.gram();
    let a = g.select(idx, idx);
    let det_a = a.det();
    let mut comp_cols = Vec::new();
    for x in (0..n).filter(|k| !idx.contains(k)) {
        let mut col: Vec<RingElem> = (0..n).map(|r| if r == x { RingElem::one(cfg) } else { RingElem::zero(cfg) }).collect();
        for i in 0..idx.len() {
            let mut ax = a.clone();
            for (c, &e) in idx.iter().enumerate() {
                ax[(i, c)] = g[(x, e)].clone();
            }
            let coef = ax.det().checked_div(&det_a)?;
            col[idx[i]] = &col[idx[i]] - &coef;
        }
        comp_cols.push(col);
    }
    let sub_cols: Vec<Vec<RingElem>> = idx
        .iter()
        .map(|&k| (0..n).map(|r| if r == k { RingElem::one(cfg) } else { RingElem::zero(cfg) }).collect())
        .collect();
    let sub_basis = Matrix::from_columns(cfg, n, &sub_cols);
    let complement_basis = Matrix::from_columns(cfg, n, &comp_cols);
    Ok(Split {
        sub: GramLattice::from_trusted(g.congruence(&sub_basis)),
        complement: GramLattice::from_trusted(g.congruence(&complement_basis)),
        sub_basis,
        complement_basis,
    })
}

fn block_from(work: &Work, v: Val, cols: &[usize], pieces: Vec<usize>) -> Result<JordanBlock> {
    let cfg = work.cfg();
    let sigma = RingElem::sigma(cfg, v)?;
    let mut u = work.gram.select(cols, cols);
    for i in 0..cols.len() {
        for j in 0..cols.len() {
            u[(i, j)] = u[(i, j)].checked_div(&sigma)?;
        }
    }
    let n = work.basis.rows();
    let all: Vec<usize> = (0..n).collect();
    Ok(JordanBlock {
        scale_valuation: v,
        unimodular_gram: GramLattice::from_trusted(u),
        transition: work.basis.select(&all, cols),
        pieces,
    })
}

/// Greedy Jordan splitting: split off a minimal entry (diagonal preferred, then
/// the lowest index), recurse, and merge equal valuations in discovery order.
pub fn jordan_decompose(m: &GramLattice) -> Result<JordanDecomposition> {
    let cfg = m.ring();
    let n = m.rank();
    let mut work = Work::new(m.gram());
    let pieces = work.greedy((0..n).collect(), false)?;
    let mut groups: Vec<(Val, Vec<usize>, Vec<usize>)> = Vec::new();
    for (v, piece) in pieces {
        match groups.last_mut() {
            Some((w, cols, sizes)) if *w == v => {
                sizes.push(piece.len());
                cols.extend(piece);
            }
            Some((w, _, _)) if *w > v => return Err(domain("splitting produced a decreasing valuation")),
            _ => groups.push((v, piece.clone(), vec![piece.len()])),
        }
    }
    let mut blocks = Vec::new();
    let mut order = Vec::new();
    for (v, cols, sizes) in &groups {
        blocks.push(block_from(&work, *v, cols, sizes.clone())?);
        order.extend(cols.iter().copied());
    }
    let all: Vec<usize> = (0..n).collect();
    let transition = if n == 0 { Matrix::zeros(cfg, 0, 0) } else { work.basis.select(&all, &order) };
    Ok(JordanDecomposition { blocks, transition })
}

/// Orthogonal basis of a component when one exists; otherwise rank-2 summands
/// whose pairing dominates both norms.
pub fn diagonalize_component(b: &JordanBlock) -> Result<JordanBlock> {
    let cfg = b.ring();
    let r = b.rank();
    let u = b.unimodular_gram.gram();
    let mut work = Work::new(u);
    let two_unit = cfg.two_is_unit();
    let raw = work.greedy((0..r).collect(), two_unit)?;
    if raw.iter().any(|(v, _)| !v.is_zero()) {
        return Err(domain("component is not uni-valued"));
    }
    let mut pieces: Vec<Vec<usize>> = raw.into_iter().map(|(_, p)| p).collect();
    // Merge a rank-2 summand with a rank-1 summand into three orthogonal vectors.
    while let (Some(pi), Some(zi)) = (pieces.iter().position(|p| p.len() == 2), pieces.iter().position(|p| p.len() == 1)) {
        let (ix, iy, iz) = (pieces[pi][0], pieces[pi][1], pieces[zi][0]);
        let g = &work.gram;
        let (xx, yy, zz, xy) = (g[(ix, ix)].clone(), g[(iy, iy)].clone(), g[(iz, iz)].clone(), g[(ix, iy)].clone());
        let (x, y, z) = (work.col(ix), work.col(iy), work.col(iz));
        let one = RingElem::one(cfg);
        let a: Vec<RingElem> = (0..r).map(|k| &x[k] + &z[k]).collect();
        let bvec: Vec<RingElem> = (0..r).map(|k| &(&zz * &y[k]) - &(&xy * &z[k])).collect();
        let cx = &(&yy * &zz) + &xy.square();
        let cy = &xy * &(&xx + &zz);
        let cz = &(&xx * &yy) - &xy.square();
        let cvec: Vec<RingElem> = (0..r).map(|k| &(&(&cx * &x[k]) - &(&cy * &y[k])) - &(&cz * &z[k])).collect();
        let _ = one;
        work.set_col(ix, a);
        work.set_col(iy, bvec);
        work.set_col(iz, cvec);
        work.refresh();
        let (lo, hi) = if pi < zi { (pi, zi) } else { (zi, pi) };
        let merged = vec![vec![ix], vec![iy], vec![iz]];
        pieces.remove(hi);
        pieces.remove(lo);
        let at = lo.min(pieces.len());
        for (k, p) in merged.into_iter().enumerate() {
            pieces.insert(at + k, p);
        }
    }
    let cols: Vec<usize> = pieces.iter().flatten().copied().collect();
    let sizes: Vec<usize> = pieces.iter().map(|p| p.len()).collect();
    let local = block_from(&work, cfg.zero_val(), &cols, sizes)?;
    let transition = b.transition.mul(&local.transition);
    if !local.unimodular_gram.det().is_unit()? {
        return Err(domain("orthogonal basis lost unimodularity"));
    }
    Ok(JordanBlock { scale_valuation: b.scale_valuation, unimodular_gram: local.unimodular_gram, transition, pieces: local.pieces })
}

/// Jordan decomposition with every component passed through [`diagonalize_component`].
pub fn jordan_diagonalized(m: &GramLattice) -> Result<JordanDecomposition> {
    let d = jordan_decompose(m)?;
    let blocks = d.blocks.iter().map(diagonalize_component).collect::<Result<Vec<_>>>()?;
    let cfg = m.ring();
    let n = m.rank();
    let cols: Vec<Vec<RingElem>> = blocks.iter().flat_map(|b| (0..b.rank()).map(move |j| b.transition.column(j))).collect();
    Ok(JordanDecomposition { blocks, transition: Matrix::from_columns(cfg, n, &cols) })
}

/// Checks the structural claims of a decomposition against its lattice.
pub fn verify_decomposition(m: &GramLattice, d: &JordanDecomposition) -> Result<()> {
    let cfg = m.ring();
    for w in d.blocks.windows(2) {
        if w[0].scale_valuation >= w[1].scale_valuation {
            return Err(domain("block valuations are not strictly increasing"));
        }
    }
    let det = d.transition.det();
    if !det.is_unit()? {
        return Err(domain("transition is not invertible over R"));
    }
    let conj = m.gram().congruence(&d.transition);
    let mut start = 0;
    let n = m.rank();
    let mut owner = vec![0usize; n];
    for (bi, b) in d.blocks.iter().enumerate() {
        for k in 0..b.rank() {
            owner[start + k] = bi;
        }
        let expected = b.gram()?;
        for i in 0..b.rank() {
            for j in 0..b.rank() {
                if !conj[(start + i, start + j)].approx_eq(&expected[(i, j)]) {
                    return Err(domain("block Gram does not match the conjugated matrix"));
                }
            }
        }
        if !b.unimodular_gram.is_unimodular()? {
            return Err(domain("block is not uni-valued"));
        }
        start += b.rank();
    }
    for i in 0..n {
        for j in 0..n {
            if owner[i] != owner[j] && !conj[(i, j)].is_zero_at_prec() {
                return Err(domain("conjugated Gram is not block diagonal"));
            }
        }
    }
    let _ = cfg;
    Ok(())
}
