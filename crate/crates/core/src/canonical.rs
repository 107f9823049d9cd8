//! Jordan invariants, the "more canonical" partial order on presentations, and
//! the two rewrites that move a presentation up that order.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{domain, Error, Result};
use crate::hensel::{approximate_sqrt, artin_schreier_solve, in_r_as, solve_quadratic, sqrt_one_plus, Branch};
use crate::jordan::jordan_diagonalized;
use crate::lattice::GramLattice;
use crate::matrix::Matrix;
use crate::oracle::Quotient;
use crate::rank2::{arf_invariant, maximal_norm_search, normalize_rank2_with_basis};
use crate::valuation::{RingConfig, RingElem, RingKind, Val};

/// `v(x - 1)`, infinite when `x = 1` at precision.
fn closeness(x: &RingElem) -> Val {
    let d = x - &RingElem::one(x.config());
    if d.is_zero_at_prec() {
        Val::Inf
    } else {
        d.val_lower()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockInvariant {
    pub scale_valuation: Val,
    pub rank: usize,
    pub diagonalizable: bool,
    /// Distance to the neighbouring valuations (infinite for a single block).
    pub gap: Val,
    /// Nonzero norms of the block modulo `pi^(v + gap)`, as quotient indices,
    /// when that quotient is small enough to enumerate.
    pub small_norms: Option<BTreeSet<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanInvariants {
    pub blocks: Vec<BlockInvariant>,
}

pub fn jordan_invariants(m: &GramLattice) -> Result<JordanInvariants> {
    let d = jordan_diagonalized(m)?;
    let vals = d.valuations();
    let t = vals.len();
    let mut blocks = Vec::new();
    for (k, b) in d.blocks.iter().enumerate() {
        let left = (k > 0).then(|| vals[k] - vals[k - 1]);
        let right = (k + 1 < t).then(|| vals[k + 1] - vals[k]);
        let gap = match (left, right) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => Val::Inf,
        };
        let block_lattice = GramLattice::from_trusted(b.gram()?);
        let small_norms = small_norm_set(&block_lattice, b.scale_valuation, gap)?;
        blocks.push(BlockInvariant { scale_valuation: b.scale_valuation, rank: b.rank(), diagonalizable: b.is_diagonal(), gap, small_norms });
    }
    Ok(JordanInvariants { blocks })
}

/// Norm residues below `v + gap`; each coordinate only matters modulo `pi^gap`.
fn small_norm_set(block: &GramLattice, v: Val, gap: Val) -> Result<Option<BTreeSet<u32>>> {
    let cfg = block.ring();
    let (Val::Fin(v), Val::Fin(g)) = (v, gap) else { return Ok(None) };
    if matches!(cfg.kind, RingKind::Laurent2 { .. }) || v < 0 {
        return Ok(None);
    }
    let level = v + g;
    let (Ok(q), Ok(coords)) = (Quotient::new(cfg, level), Quotient::new(cfg, g)) else { return Ok(None) };
    let span = (coords.size() as u64).checked_pow(block.rank() as u32);
    if span.map_or(true, |s| s > 1 << 16) {
        return Ok(None);
    }
    // Enumerate coordinates modulo pi^gap through the smaller quotient.
    let n = block.rank();
    let mut out = BTreeSet::new();
    let total = span.expect("checked") as usize;
    let lifted: Vec<RingElem> = (0..coords.size() as u32).map(|i| coords.lift(i)).collect();
    for id in 0..total {
        let mut r = id;
        let v: Vec<RingElem> = (0..n)
            .map(|_| {
                let c = lifted[r % coords.size()].clone();
                r /= coords.size();
                c
            })
            .collect();
        let norm = crate::matrix::bilinear(block.gram(), &v, &v);
        let idx = q.reduce(&norm)?;
        if idx != 0 {
            out.insert(idx);
        }
    }
    Ok(Some(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockForm {
    /// Orthogonal basis, norms sorted closest to 1 first.
    Diagonal,
    /// Sum of `M_{alpha,beta}` pieces with maximal `beta`, Arf valuations decreasing.
    Rank2Sum,
}

#[derive(Clone, Debug)]
pub struct PresentedBlock {
    pub scale_valuation: Val,
    /// Gram of the block divided by `sigma`.
    pub unimodular: Matrix,
    pub form: BlockForm,
}

impl PresentedBlock {
    pub fn rank(&self) -> usize {
        self.unimodular.rows()
    }

    pub fn discriminant(&self) -> RingElem {
        self.unimodular.det()
    }
}

/// A Jordan decomposition in a chosen form, with its basis in input coordinates.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub ring: RingConfig,
    pub blocks: Vec<PresentedBlock>,
    /// Columns: basis vectors, block by block.
    pub basis: Matrix,
}

impl Presentation {
    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut o = vec![0];
        for b in &self.blocks {
            o.push(o.last().unwrap() + b.rank());
        }
        o
    }

    /// Block-diagonal Gram `diag(sigma_k U_k)`.
    pub fn gram(&self) -> Result<Matrix> {
        let n = self.rank();
        let mut g = Matrix::zeros(self.ring, n, n);
        let off = self.offsets();
        for (k, b) in self.blocks.iter().enumerate() {
            let s = RingElem::sigma(self.ring, b.scale_valuation)?;
            for i in 0..b.rank() {
                for j in 0..b.rank() {
                    g[(off[k] + i, off[k] + j)] = &s * &b.unimodular[(i, j)];
                }
            }
        }
        Ok(g)
    }

    pub fn lattice(&self) -> Result<GramLattice> {
        Ok(GramLattice::from_trusted(self.gram()?))
    }

    /// `basis^t G basis` equals the presented Gram.
    pub fn check(&self, m: &GramLattice) -> Result<()> {
        if !m.gram().congruence(&self.basis).approx_eq(&self.gram()?) {
            return Err(domain("presentation does not match its basis"));
        }
        if !self.basis.det().is_unit()? {
            return Err(domain("presentation basis is not invertible over R"));
        }
        Ok(())
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let body = match b.form {
                    BlockForm::Diagonal => (0..b.rank()).map(|i| b.unimodular[(i, i)].to_string()).collect::<Vec<_>>().join(", "),
                    BlockForm::Rank2Sum => (0..b.rank() / 2).map(|p| format!("M({}, {})", b.unimodular[(2 * p, 2 * p)], b.unimodular[(2 * p + 1, 2 * p + 1)])).collect::<Vec<_>>().join(", "),
                };
                format!("s{}·[{body}]", b.scale_valuation)
            })
            .collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// Re-forms one block in place: diagonal entries sorted by closeness to 1, or
/// rank-2 pieces normalized with maximal `beta` and sorted by Arf valuation.
fn normalize_block(ring: RingConfig, block: &mut PresentedBlock, basis: &mut Matrix, start: usize) -> Result<()> {
    let r = block.rank();
    let u = &block.unimodular;
    let is_diag = (0..r).all(|i| (0..r).all(|j| i == j || u[(i, j)].is_zero_at_prec()));
    let mut local = Matrix::identity(ring, r);
    if is_diag {
        block.form = BlockForm::Diagonal;
        let mut order: Vec<usize> = (0..r).collect();
        order.sort_by(|&a, &b| closeness(&u[(b, b)]).cmp(&closeness(&u[(a, a)])));
        local = local.select(&(0..r).collect::<Vec<_>>(), &order);
    } else {
        block.form = BlockForm::Rank2Sum;
        if r % 2 != 0 {
            return Err(domain("non-diagonal block of odd rank"));
        }
        let mut pieces = Vec::new();
        for p in 0..r / 2 {
            let idx = [2 * p, 2 * p + 1];
            let sub = GramLattice::from_trusted(u.select(&idx, &idx));
            let (form, nb) = normalize_rank2_with_basis(&sub)?;
            let max = maximal_norm_search(&form)?;
            // y' = (y + t x) / (1 + t alpha).
            let pair = &RingElem::one(ring) + &(&max.t * &form.alpha);
            let inv = pair.inverse()?;
            let x = nb.column(0);
            let y: Vec<RingElem> = (0..2).map(|i| &(&nb[(i, 1)] + &(&max.t * &x[i])) * &inv).collect();
            let arf = if ring.two_is_unit() { Val::Inf } else { arf_invariant(&max.form)?.0.valuation };
            pieces.push((arf, p, x, y));
        }
        pieces.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut cols = Vec::new();
        for (_, p, x, y) in &pieces {
            for v in [x, y] {
                let mut c = vec![RingElem::zero(ring); r];
                c[2 * p] = v[0].clone();
                c[2 * p + 1] = v[1].clone();
                cols.push(c);
            }
        }
        local = Matrix::from_columns(ring, r, &cols);
    }
    block.unimodular = block.unimodular.congruence(&local);
    let n = basis.rows();
    let cols: Vec<Vec<RingElem>> = (0..r)
        .map(|j| (0..n).map(|i| (0..r).fold(RingElem::zero(ring), |acc, k| &acc + &(&basis[(i, start + k)] * &local[(k, j)]))).collect())
        .collect();
    for (j, c) in cols.iter().enumerate() {
        basis.set_column(start + j, c);
    }
    Ok(())
}

fn normalize_all(p: &mut Presentation) -> Result<()> {
    let off = p.offsets();
    for k in 0..p.blocks.len() {
        normalize_block(p.ring, &mut p.blocks[k], &mut p.basis, off[k])?;
    }
    Ok(())
}

/// Presentation built from the diagonalized Jordan decomposition.
pub fn present(m: &GramLattice) -> Result<Presentation> {
    let d = jordan_diagonalized(m)?;
    let blocks = d
        .blocks
        .iter()
        .map(|b| PresentedBlock { scale_valuation: b.scale_valuation, unimodular: b.unimodular_gram.gram().clone(), form: BlockForm::Diagonal })
        .collect();
    let mut p = Presentation { ring: m.ring(), blocks, basis: d.transition.clone() };
    normalize_all(&mut p)?;
    Ok(p)
}

/// Outcome of [`canonical_compare`]; `Greater` means the first is more canonical.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Greater,
    Less,
    Equal,
    Incomparable,
}

fn lex(a: &[Val], b: &[Val]) -> Comparison {
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return Comparison::Greater;
        }
        if x < y {
            return Comparison::Less;
        }
    }
    Comparison::Incomparable
}

fn sorted_desc(mut v: Vec<Val>) -> Vec<Val> {
    v.sort_by(|a, b| b.cmp(a));
    v
}

fn piece_arf_valuations(b: &PresentedBlock, ring: RingConfig) -> Result<Vec<Val>> {
    if ring.two_is_unit() {
        return Ok(vec![Val::Inf; b.rank() / 2]);
    }
    (0..b.rank() / 2)
        .map(|p| {
            let idx = [2 * p, 2 * p + 1];
            let sub = GramLattice::from_trusted(b.unimodular.select(&idx, &idx));
            let (form, _) = normalize_rank2_with_basis(&sub)?;
            Ok(arf_invariant(&form)?.0.valuation)
        })
        .collect()
}

fn compare_blocks(a: &PresentedBlock, b: &PresentedBlock, ring: RingConfig) -> Result<Comparison> {
    if a.scale_valuation != b.scale_valuation || a.rank() != b.rank() {
        return Ok(Comparison::Incomparable);
    }
    if a.unimodular.approx_eq(&b.unimodular) {
        return Ok(Comparison::Equal);
    }
    let (da, db) = (closeness(&a.discriminant()), closeness(&b.discriminant()));
    if da != db {
        return Ok(if da > db { Comparison::Greater } else { Comparison::Less });
    }
    match (a.form, b.form) {
        (BlockForm::Diagonal, BlockForm::Diagonal) => {
            let na: Vec<Val> = sorted_desc((0..a.rank()).map(|i| closeness(&a.unimodular[(i, i)])).collect());
            let nb: Vec<Val> = sorted_desc((0..b.rank()).map(|i| closeness(&b.unimodular[(i, i)])).collect());
            let zero = ring.zero_val();
            let (ca, cb) = (na.iter().filter(|v| **v > zero).count(), nb.iter().filter(|v| **v > zero).count());
            if ca != cb {
                return Ok(if ca > cb { Comparison::Greater } else { Comparison::Less });
            }
            Ok(lex(&na, &nb))
        }
        (BlockForm::Rank2Sum, BlockForm::Rank2Sum) => {
            let (aa, ab) = (sorted_desc(piece_arf_valuations(a, ring)?), sorted_desc(piece_arf_valuations(b, ring)?));
            Ok(lex(&aa, &ab))
        }
        _ => Ok(Comparison::Incomparable),
    }
}

/// Lexicographic over blocks; the first differing block decides.
pub fn canonical_compare(a: &Presentation, b: &Presentation) -> Result<Comparison> {
    if a.blocks.len() != b.blocks.len() || a.ring.kind != b.ring.kind {
        return Ok(Comparison::Incomparable);
    }
    for (x, y) in a.blocks.iter().zip(&b.blocks) {
        match compare_blocks(x, y, a.ring)? {
            Comparison::Equal => continue,
            c => return Ok(c),
        }
    }
    Ok(Comparison::Equal)
}

/// New norms `1 + u`, `1 + w` of `(x + (1+r) t y)/(1+t)` and `(y - (1+s) t x)/(1+t)`.
pub fn rep1_transform(r: &RingElem, s: &RingElem, t: &RingElem) -> Result<(RingElem, RingElem)> {
    let cfg = r.config();
    let one = RingElem::one(cfg);
    let two = RingElem::from_i64(cfg, 2);
    if closeness(t) > cfg.zero_val() {
        return Err(domain("t lies in 1 + I_0: the rotated vectors are not primitive"));
    }
    let den = (&one + t).square();
    let t2 = t.square();
    let u = &(&(&(&t2 * &(&one + s)) * &(&r.square() + &(&two * r))) + r) - &(&two * t);
    let u = &u + &(s * &t2);
    let w = &(&(&(&t2 * &(&one + r)) * &(&s.square() + &(&two * s))) + s) - &(&two * t);
    let w = &w + &(r * &t2);
    Ok((u.checked_div(&den)?, w.checked_div(&den)?))
}

/// The `t` making `w = 0`, available when `v(r) + v(s) > 2 v(2)`.
pub fn rep1_optimal_t(r: &RingElem, s: &RingElem) -> Result<Option<RingElem>> {
    let cfg = r.config();
    if s.is_zero_at_prec() {
        return Ok(Some(RingElem::zero(cfg)));
    }
    let vr = r.val_lower();
    let vs = s.valuation()?;
    if vr + vs <= cfg.v2().times(2) {
        return Ok(None);
    }
    let one = RingElem::one(cfg);
    let two = RingElem::from_i64(cfg, 2);
    let a = &(&(&one + r) * &(&s.square() + &(&two * s))) + r;
    Ok(Some(solve_quadratic(&a, &-&two, s, Branch::Small)?))
}

/// Mixes a unimodular `m` with `l` (`v(l) > 0`) through basis vectors `i` of `m`
/// and `j` of `l`. Returns `(N, K, basis)`, the basis in `m ⊕ l` coordinates.
pub fn mix_transform(m: &GramLattice, l: &GramLattice, i: usize, j: usize, t: &RingElem) -> Result<(GramLattice, GramLattice, Matrix)> {
    m.check_same_ring(l)?;
    let cfg = m.ring();
    let (n, k) = (m.rank(), l.rank());
    if i >= n || j >= k {
        return Err(domain("basis index out of range"));
    }
    if !m.is_unimodular()? {
        return Err(domain("first lattice must be unimodular"));
    }
    if !l.gram().entries_val_gt(cfg.zero_val())? {
        return Err(domain("second lattice must have positive valuation"));
    }
    let r = &m.det() - &RingElem::one(cfg);
    if !r.val_gt(cfg.zero_val()).unwrap_or(true) {
        return Err(domain("discriminant is not in 1 + I_0"));
    }
    let (a, b) = (m.entry(i, i).clone(), l.entry(j, j).clone());
    let shift = &(&t.square() * &(&a * &b)) - &r;
    let ok = if r.is_zero_at_prec() { shift.is_zero_at_prec() } else { shift.is_zero_at_prec() || shift.val_gt(r.valuation()?)? };
    if !ok {
        return Err(domain("t^2 a b is not in r + I_v(r)"));
    }
    let mut basis = Matrix::identity(cfg, n + k);
    // z_p = x_p + t (x_p, x_i) y_j and w_q = y_q - t (y_q, y_j) x_i.
    for p in 0..n {
        basis[(n + j, p)] = t * m.entry(p, i);
    }
    for q in 0..k {
        basis[(i, n + q)] = -(t * l.entry(q, j));
    }
    let sum = m.direct_sum(l)?;
    let g = sum.gram().congruence(&basis);
    let all_n: Vec<usize> = (0..n).collect();
    let all_k: Vec<usize> = (n..n + k).collect();
    if !g.select(&all_n, &all_k).is_zero_at_prec() {
        return Err(domain("mixed blocks are not orthogonal"));
    }
    Ok((GramLattice::from_trusted(g.select(&all_n, &all_n)), GramLattice::from_trusted(g.select(&all_k, &all_k)), basis))
}

#[derive(Clone, Debug)]
pub struct TranscriptStep {
    pub description: String,
    pub presentation: Presentation,
}

#[derive(Clone, Debug)]
pub struct Canonicalization {
    pub presentation: Presentation,
    /// Accepted rewrites, each strictly more canonical than the previous one.
    pub transcript: Vec<TranscriptStep>,
}

/// Applies a local basis change to the columns of block `k`.
fn rebase_block(p: &Presentation, k: usize, local: &Matrix) -> Result<Presentation> {
    let mut q = p.clone();
    let off = p.offsets();
    let r = p.blocks[k].rank();
    let n = p.rank();
    for j in 0..r {
        let col: Vec<RingElem> = (0..n).map(|i| (0..r).fold(RingElem::zero(p.ring), |acc, c| &acc + &(&p.basis[(i, off[k] + c)] * &local[(c, j)]))).collect();
        q.basis.set_column(off[k] + j, &col);
    }
    q.blocks[k].unimodular = p.blocks[k].unimodular.congruence(local);
    normalize_block(q.ring, &mut q.blocks[k], &mut q.basis, off[k])?;
    Ok(q)
}

/// Unit `c` with `v(c^2 u - 1) > v(u - 1)`, if one exists.
fn rank1_improvement(u: &RingElem) -> Result<Option<RingElem>> {
    let cfg = u.config();
    let one = RingElem::one(cfg);
    let r = u - &one;
    if r.is_zero_at_prec() {
        return Ok(None);
    }
    let v = r.valuation()?;
    let v2 = cfg.v2();
    if v > v2.times(2) {
        let root = &one + &sqrt_one_plus(&r)?;
        return Ok(Some(root.inverse()?));
    }
    if v == v2.times(2) {
        let four = RingElem::from_i64(cfg, 4);
        let e = -(r.checked_div(&four)?);
        if !in_r_as(&e)? {
            return Ok(None);
        }
        // (1 - 2x)^2 (1 + r) = (1 + 4 rho(x))(1 + r) with rho(x) = -r/4.
        let x = artin_schreier_solve(&e)?;
        return Ok(Some(&one - &(&RingElem::from_i64(cfg, 2) * &x)));
    }
    if !v.is_even() || v.is_zero() {
        return Ok(None);
    }
    // Below 2 v(2) the cross term 2h is negligible: c = 1 + h with h^2 ~ r.
    Ok(approximate_sqrt(&r)?.map(|h| &one + &h))
}

/// Candidate rewrites of block `k`, most specific first.
fn candidates(p: &Presentation, k: usize) -> Result<Vec<(String, Presentation)>> {
    let ring = p.ring;
    let zero = ring.zero_val();
    let b = &p.blocks[k];
    let r = b.rank();
    let mut out = Vec::new();
    if b.form == BlockForm::Diagonal {
        for i in 0..r {
            for j in (i + 1)..r {
                let (ni, nj) = (&b.unimodular[(i, i)], &b.unimodular[(j, j)]);
                if closeness(ni) <= zero || closeness(nj) <= zero {
                    continue;
                }
                // r belongs to the norm closer to 1 only if v(s) >= v(r).
                let (xi, yi) = if closeness(ni) <= closeness(nj) { (i, j) } else { (j, i) };
                let one = RingElem::one(ring);
                let (rr, ss) = (&b.unimodular[(xi, xi)] - &one, &b.unimodular[(yi, yi)] - &one);
                let Some(t) = rep1_optimal_t(&rr, &ss)? else { continue };
                if t.is_zero_at_prec() {
                    continue;
                }
                let inv = (&one + &t).inverse()?;
                // Dividing x' by the rotation determinant leaves 1 + u = (1 + r)(1 + s).
                let det = (&one + &(&(&(&one + &rr) * &(&one + &ss)) * &t.square())).checked_div(&(&one + &t).square())?;
                let xs = &inv * &det.inverse()?;
                let mut local = Matrix::identity(ring, r);
                local[(xi, xi)] = xs.clone();
                local[(yi, xi)] = &(&(&one + &rr) * &t) * &xs;
                local[(xi, yi)] = -(&(&(&one + &ss) * &t) * &inv);
                local[(yi, yi)] = inv;
                out.push((format!("rotate norms {} and {} in block s{}", b.unimodular[(xi, xi)], b.unimodular[(yi, yi)], b.scale_valuation), rebase_block(p, k, &local)?));
            }
        }
        for i in 0..r {
            if let Some(c) = rank1_improvement(&b.unimodular[(i, i)])? {
                let mut local = Matrix::identity(ring, r);
                local[(i, i)] = c.clone();
                out.push((format!("rescale norm {} by {}^2 in block s{}", b.unimodular[(i, i)], c, b.scale_valuation), rebase_block(p, k, &local)?));
            }
        }
    }
    let disc = b.discriminant();
    let rr = &disc - &RingElem::one(ring);
    if rr.is_zero_at_prec() || !rr.val_gt(zero)? {
        return Ok(out);
    }
    let vr = rr.valuation()?;
    let off = p.offsets();
    for l in (k + 1)..p.blocks.len() {
        let bl = &p.blocks[l];
        let rel = RingElem::sigma(ring, bl.scale_valuation - b.scale_valuation)?;
        let ml = GramLattice::from_trusted(bl.unimodular.scale(&rel));
        let mk = GramLattice::from_trusted(b.unimodular.clone());
        for i in 0..r {
            for j in 0..bl.rank() {
                let (a, bb) = (mk.entry(i, i), ml.entry(j, j));
                if a.is_zero_at_prec() || bb.is_zero_at_prec() {
                    continue;
                }
                let d = vr - (a.valuation()? + bb.valuation()?);
                if d < zero || !d.is_even() {
                    continue;
                }
                let sigma = RingElem::sigma(ring, d.half())?;
                let Some(c) = approximate_sqrt(&rr.checked_div(&(&(a * bb) * &sigma.square()))?)? else { continue };
                let t = &sigma * &c;
                let Ok((n_new, k_new, local)) = mix_transform(&mk, &ml, i, j, &t) else { continue };
                let mut q = p.clone();
                let n = p.rank();
                let idx: Vec<usize> = (off[k]..off[k + 1]).chain(off[l]..off[l + 1]).collect();
                let size = idx.len();
                for c in 0..size {
                    let col: Vec<RingElem> = (0..n).map(|row| (0..size).fold(RingElem::zero(ring), |acc, e| &acc + &(&p.basis[(row, idx[e])] * &local[(e, c)]))).collect();
                    q.basis.set_column(idx[c], &col);
                }
                q.blocks[k].unimodular = n_new.gram().clone();
                let inv_rel = rel.inverse()?;
                q.blocks[l].unimodular = k_new.gram().scale(&inv_rel);
                normalize_block(ring, &mut q.blocks[k], &mut q.basis, off[k])?;
                normalize_block(ring, &mut q.blocks[l], &mut q.basis, off[l])?;
                out.push((format!("mix block s{} (vector {i}) with block s{} (vector {j}), t = {t}", b.scale_valuation, bl.scale_valuation), q));
            }
        }
    }
    Ok(out)
}

/// Greedy rewriting: lowest block first, first strictly improving rewrite wins.
pub fn canonicalize(m: &GramLattice) -> Result<Canonicalization> {
    let ring = m.ring();
    if !matches!(ring.kind, RingKind::TwoAdic | RingKind::Ramified2) {
        return Err(Error::UnsupportedRegime("canonicalization is implemented for two_adic and ramified2".into()));
    }
    let mut p = present(m)?;
    p.check(m)?;
    let mut transcript = Vec::new();
    let cap = match ring.precision {
        Val::Fin(n) => (n as usize + 1) * (m.rank() + 1) * 4,
        _ => 256,
    };
    for _ in 0..cap {
        let mut next = None;
        'blocks: for k in 0..p.blocks.len() {
            for (desc, q) in candidates(&p, k)? {
                if canonical_compare(&q, &p)? == Comparison::Greater {
                    next = Some((desc, q));
                    break 'blocks;
                }
            }
        }
        match next {
            Some((description, q)) => {
                q.check(m)?;
                transcript.push(TranscriptStep { description, presentation: q.clone() });
                p = q;
            }
            None => return Ok(Canonicalization { presentation: p, transcript }),
        }
    }
    Err(Error::IndeterminateValuation("canonicalization did not settle before the precision cap".into()))
}
