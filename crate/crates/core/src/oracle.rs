//! Brute-force ground truth over finite quotients `R / pi^k`.
//!
//! Quotients: `Z/p^k` (integer backends), `Z_2[pi]/pi^k` (ramified) and
//! `F_q[u]/u^k` (Laurent; the ideal generated by `u^k` contains every positive
//! t-power, so only the `t^0` coefficient survives).

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::isometry::{lift_isometry, lift_tolerance};
use crate::lattice::GramLattice;
use crate::matrix::Matrix;
use crate::valuation::{RingConfig, RingElem, RingKind, Val};

/// Largest quotient for which addition and multiplication are tabulated.
const TABLE_LIMIT: usize = 2048;
/// Largest `|R/pi^k|^n` for which vectors are enumerated.
pub const VECTOR_LIMIT: u64 = 1 << 22;
/// Candidate-check budget of one exhaustive search.
pub const SEARCH_BUDGET: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    /// `Z/m`.
    Cyclic { m: u32 },
    /// `a + b pi`, `a` mod `2^ka`, `b` mod `2^kb`.
    Ramified { ka: u32, kb: u32 },
    /// Digits base `q`, `k` of them.
    Poly { q: u32, k: u32 },
}

/// The finite ring `R / pi^k`, elements indexed `0..size`.
#[derive(Clone, Debug)]
pub struct Quotient {
    cfg: RingConfig,
    k: i64,
    size: usize,
    shape: Shape,
    residue_char: u32,
    add_t: Option<Vec<u16>>,
    mul_t: Option<Vec<u16>>,
}

impl Quotient {
    pub fn new(cfg: RingConfig, k: i64) -> Result<Self> {
        if k < 1 {
            return Err(domain("quotient level must be positive"));
        }
        let cap = match cfg.precision {
            Val::Fin(n) => n,
            Val::Pair(_, nu) => nu,
            Val::Inf => i64::MAX,
        };
        if k > cap {
            return Err(domain(format!("level {k} exceeds the element precision {cap}")));
        }
        let pow = |b: u64, e: i64| -> Result<u64> {
            b.checked_pow(e as u32).filter(|&x| x <= 1 << 24).ok_or_else(|| domain("quotient too large to enumerate"))
        };
        let (shape, size) = match cfg.kind {
            RingKind::Padic { p } => {
                let m = pow(p, k)?;
                (Shape::Cyclic { m: m as u32 }, m)
            }
            RingKind::TwoAdic => {
                let m = pow(2, k)?;
                (Shape::Cyclic { m: m as u32 }, m)
            }
            RingKind::Ramified2 => {
                let (ka, kb) = (((k + 1) / 2) as u32, (k / 2) as u32);
                (Shape::Ramified { ka, kb }, pow(2, k)?)
            }
            RingKind::Laurent2 { q } => (Shape::Poly { q: q as u32, k: k as u32 }, pow(q, k)?),
        };
        let mut out = Quotient { cfg, k, size: size as usize, shape, residue_char: cfg.residue_char() as u32, add_t: None, mul_t: None };
        if out.size <= TABLE_LIMIT {
            let n = out.size;
            let mut add_t = vec![0u16; n * n];
            let mut mul_t = vec![0u16; n * n];
            for a in 0..n as u32 {
                for b in 0..n as u32 {
                    add_t[a as usize * n + b as usize] = out.add_raw(a, b) as u16;
                    mul_t[a as usize * n + b as usize] = out.mul_raw(a, b) as u16;
                }
            }
            out.add_t = Some(add_t);
            out.mul_t = Some(mul_t);
        }
        Ok(out)
    }

    pub fn config(&self) -> RingConfig {
        self.cfg
    }

    pub fn level(&self) -> i64 {
        self.k
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn split_ram(&self, x: u32, ka: u32) -> (u64, u64) {
        ((x & ((1 << ka) - 1)) as u64, (x >> ka) as u64)
    }

    fn digits(&self, mut x: u32, q: u32, k: u32) -> Vec<u64> {
        (0..k)
            .map(|_| {
                let d = x % q;
                x /= q;
                d as u64
            })
            .collect()
    }

    fn undigits(&self, d: &[u64], q: u32) -> u32 {
        d.iter().rev().fold(0u64, |acc, &x| acc * q as u64 + x) as u32
    }

    fn add_raw(&self, a: u32, b: u32) -> u32 {
        match self.shape {
            Shape::Cyclic { m } => ((a as u64 + b as u64) % m as u64) as u32,
            Shape::Ramified { ka, kb } => {
                let (a0, a1) = self.split_ram(a, ka);
                let (b0, b1) = self.split_ram(b, ka);
                let c0 = (a0 + b0) & ((1 << ka) - 1);
                let c1 = (a1 + b1) & ((1u64 << kb) - 1);
                (c0 | (c1 << ka)) as u32
            }
            Shape::Poly { q, k } => {
                let (x, y) = (self.digits(a, q, k), self.digits(b, q, k));
                let z: Vec<u64> = x.iter().zip(&y).map(|(s, t)| (s + t) % q as u64).collect();
                self.undigits(&z, q)
            }
        }
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        match self.shape {
            Shape::Cyclic { m } => ((a as u64 * b as u64) % m as u64) as u32,
            Shape::Ramified { ka, kb } => {
                // (a0 + a1 pi)(b0 + b1 pi) = a0 b0 + 2 a1 b1 + (a0 b1 + a1 b0) pi.
                let (a0, a1) = self.split_ram(a, ka);
                let (b0, b1) = self.split_ram(b, ka);
                let c0 = (a0 * b0 + 2 * a1 * b1) & ((1 << ka) - 1);
                let c1 = (a0 * b1 + a1 * b0) & ((1u64 << kb) - 1);
                (c0 | (c1 << ka)) as u32
            }
            Shape::Poly { q, k } => {
                let (x, y) = (self.digits(a, q, k), self.digits(b, q, k));
                let mut z = vec![0u64; k as usize];
                for i in 0..k as usize {
                    for j in 0..k as usize - i {
                        z[i + j] = (z[i + j] + x[i] * y[j]) % q as u64;
                    }
                }
                self.undigits(&z, q)
            }
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add_t {
            Some(t) => t[a as usize * self.size + b as usize] as u32,
            None => self.add_raw(a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.mul_t {
            Some(t) => t[a as usize * self.size + b as usize] as u32,
            None => self.mul_raw(a, b),
        }
    }

    /// Image in the residue field `F_p` (all residue fields here are prime).
    #[inline]
    pub fn residue(&self, a: u32) -> u32 {
        match self.shape {
            Shape::Cyclic { .. } => a % self.residue_char,
            Shape::Ramified { .. } => a & 1,
            Shape::Poly { q, .. } => a % q,
        }
    }

    /// Valuation of a class (`None` for zero), in units of `v(pi)`.
    pub fn valuation(&self, a: u32) -> Option<i64> {
        if a == 0 {
            return None;
        }
        match self.shape {
            Shape::Cyclic { .. } => {
                let p = self.residue_char;
                let (mut x, mut v) = (a, 0);
                while x % p == 0 {
                    x /= p;
                    v += 1;
                }
                Some(v)
            }
            Shape::Ramified { ka, .. } => {
                let (a0, a1) = self.split_ram(a, ka);
                let va = if a0 == 0 { i64::MAX } else { 2 * a0.trailing_zeros() as i64 };
                let vb = if a1 == 0 { i64::MAX } else { 2 * a1.trailing_zeros() as i64 + 1 };
                Some(va.min(vb))
            }
            Shape::Poly { q, k } => self.digits(a, q, k).iter().position(|&d| d != 0).map(|i| i as i64),
        }
    }

    pub fn reduce(&self, x: &RingElem) -> Result<u32> {
        if x.config().kind != self.cfg.kind {
            return Err(Error::Config("ring mismatch".into()));
        }
        if !x.is_integral()? {
            return Err(domain("only elements of R have images in R/pi^k"));
        }
        let big_mod = |n: &BigInt, m: u64| -> u64 {
            let m = BigInt::from(m);
            (((n % &m) + &m) % &m).to_u64().expect("reduced")
        };
        match (self.shape, self.cfg.kind) {
            (Shape::Cyclic { .. }, _) => Ok(x.mod_pk(self.k)?.to_u32().expect("reduced")),
            (Shape::Ramified { ka, kb }, _) => {
                if x.known_to() < Val::Fin(self.k) {
                    return Err(Error::IndeterminateValuation(format!("element known only to {}", x.known_to())));
                }
                let ((a, b), den) = x.to_pair_fraction().expect("ramified");
                if den > 0 {
                    return Err(domain("element is not integral"));
                }
                Ok((big_mod(&a, 1 << ka) | (big_mod(&b, 1 << kb) << ka)) as u32)
            }
            (Shape::Poly { q, .. }, _) => {
                let d = x.laurent_low_digits(self.k)?;
                Ok(self.undigits(&d, q))
            }
        }
    }

    pub fn lift(&self, a: u32) -> RingElem {
        match self.shape {
            Shape::Cyclic { .. } => RingElem::from_i64(self.cfg, a as i64),
            Shape::Ramified { ka, .. } => {
                let (a0, a1) = self.split_ram(a, ka);
                RingElem::from_pair(self.cfg, &BigInt::from(a0), &BigInt::from(a1)).expect("ramified")
            }
            Shape::Poly { q, k } => {
                let terms: Vec<(i64, i64, i64)> = self.digits(a, q, k).iter().enumerate().filter(|(_, &d)| d != 0).map(|(j, &d)| (0, j as i64, d as i64)).collect();
                RingElem::from_terms(self.cfg, &terms).expect("laurent")
            }
        }
    }

    fn reduce_matrix(&self, m: &Matrix) -> Result<Vec<u32>> {
        m.entries().iter().map(|x| self.reduce(x)).collect()
    }
}

/// A lattice reduced modulo `pi^k`, with every vector bucketed by its norm.
#[derive(Clone, Debug)]
pub struct Prepared {
    n: usize,
    gram: Vec<u32>,
    /// Flattened coordinates of all `size^n` vectors.
    coords: Vec<u16>,
    buckets: Vec<Vec<u32>>,
    /// Number of vectors of each norm.
    counts: Vec<u64>,
}

impl Prepared {
    pub fn new(q: &Quotient, m: &GramLattice) -> Result<Self> {
        let n = m.rank();
        let size = q.size() as u64;
        let total = size.checked_pow(n as u32).filter(|&t| t <= VECTOR_LIMIT).ok_or_else(|| domain("vector space too large for the oracle"))?;
        let gram = q.reduce_matrix(m.gram())?;
        let mut coords = vec![0u16; total as usize * n];
        let mut buckets = vec![Vec::new(); q.size()];
        let mut counts = vec![0u64; q.size()];
        let mut v = vec![0u32; n];
        for id in 0..total as usize {
            let mut r = id;
            for c in v.iter_mut() {
                *c = (r % q.size()) as u32;
                r /= q.size();
            }
            for (i, &c) in v.iter().enumerate() {
                coords[id * n + i] = c as u16;
            }
            let norm = quad(q, &gram, n, &v);
            buckets[norm as usize].push(id as u32);
            counts[norm as usize] += 1;
        }
        Ok(Prepared { n, gram, coords, buckets, counts })
    }

    fn vector(&self, id: u32) -> &[u16] {
        &self.coords[id as usize * self.n..(id as usize + 1) * self.n]
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Number of vectors of each norm, indexed by quotient element.
    pub fn representation_counts(&self) -> &[u64] {
        &self.counts
    }
}

fn quad(q: &Quotient, g: &[u32], n: usize, v: &[u32]) -> u32 {
    let mut acc = 0;
    for i in 0..n {
        let mut row = 0;
        for j in 0..n {
            row = q.add(row, q.mul(g[i * n + j], v[j]));
        }
        acc = q.add(acc, q.mul(v[i], row));
    }
    acc
}

/// `g v`.
fn gram_times(q: &Quotient, g: &[u32], n: usize, v: &[u16]) -> Vec<u32> {
    (0..n).map(|i| (0..n).fold(0, |acc, j| q.add(acc, q.mul(g[i * n + j], v[j] as u32)))).collect()
}

fn dot(q: &Quotient, w: &[u32], v: &[u16]) -> u32 {
    w.iter().zip(v).fold(0, |acc, (&a, &b)| q.add(acc, q.mul(a, b as u32)))
}

/// Rank of residue vectors over `F_p`.
fn residue_rank(rows: &[Vec<u32>], p: u32) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect();
    let p = p as u64;
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] % p != 0) else { continue };
        m.swap(rank, piv);
        let inv = mod_inv(m[rank][c] % p, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] % p != 0 {
                let f = (m[r][c] % p) * inv % p;
                for cc in 0..cols {
                    m[r][cc] = (m[r][cc] + p * p - f * (m[rank][cc] % p)) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inv(a: u64, p: u64) -> u64 {
    (1..p).find(|x| a * x % p == 1).expect("unit")
}

/// Oracle verdict.
#[derive(Clone, Debug)]
pub enum OracleResult {
    /// `T` (columns in `M`-coordinates) with `T^t G_M T = G_N` modulo `pi^k`.
    Yes(Matrix),
    No(NoReason),
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoReason {
    Rank,
    /// The numbers of vectors of each norm differ.
    RepresentationNumbers,
    /// The pruned search tree was exhausted.
    Exhausted,
}

impl OracleResult {
    pub fn is_yes(&self) -> bool {
        matches!(self, OracleResult::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, OracleResult::No(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Full depth-first search within [`SEARCH_BUDGET`] candidate checks.
    Exhaustive,
    /// Random restarts, each with a small node budget.
    Randomized { trials: u32, seed: u64 },
}

struct Search<'a> {
    q: &'a Quotient,
    m: &'a Prepared,
    target: &'a [u32],
    work: AtomicU64,
    budget: u64,
    overflow: AtomicBool,
}

impl Search<'_> {
    fn tick(&self, k: u64) -> bool {
        let w = self.work.fetch_add(k, Ordering::Relaxed) + k;
        if w > self.budget {
            self.overflow.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    /// Extends `chosen` to a full witness.
    fn extend(&self, chosen: &mut Vec<u32>, order: Option<&mut ChaCha8Rng>) -> Option<Vec<u32>> {
        let n = self.m.n;
        let j = chosen.len();
        if j == n {
            return Some(chosen.clone());
        }
        let want = self.target[j * n + j];
        let pairings: Vec<(Vec<u32>, u32)> = (0..j).map(|i| (gram_times(self.q, &self.m.gram, n, self.m.vector(chosen[i])), self.target[i * n + j])).collect();
        let prev: Vec<Vec<u32>> = chosen.iter().map(|&id| self.m.vector(id).iter().map(|&c| self.q.residue(c as u32)).collect()).collect();
        let bucket = &self.m.buckets[want as usize];
        let mut ids: Vec<u32>;
        let mut rng = order;
        let list: &[u32] = match rng.as_deref_mut() {
            Some(r) => {
                ids = bucket.clone();
                ids.shuffle(r);
                &ids
            }
            None => bucket,
        };
        if !self.tick(list.len() as u64) {
            return None;
        }
        for &id in list {
            let v = self.m.vector(id);
            if !pairings.iter().all(|(w, t)| dot(self.q, w, v) == *t) {
                continue;
            }
            let mut rows = prev.clone();
            rows.push(v.iter().map(|&c| self.q.residue(c as u32)).collect());
            if residue_rank(&rows, self.q.residue_char) != j + 1 {
                continue;
            }
            chosen.push(id);
            if let Some(w) = self.extend(chosen, rng.as_deref_mut()) {
                return Some(w);
            }
            chosen.pop();
            if self.overflow.load(Ordering::Relaxed) {
                return None;
            }
        }
        None
    }
}

/// Isometry test between two prepared lattices over the same quotient.
pub fn isometric_prepared(q: &Quotient, m: &Prepared, n: &Prepared, mode: SearchMode) -> OracleResult {
    if m.n != n.n {
        return OracleResult::No(NoReason::Rank);
    }
    if m.counts != n.counts {
        return OracleResult::No(NoReason::RepresentationNumbers);
    }
    let dim = m.n;
    if dim == 0 {
        return OracleResult::Yes(Matrix::zeros(q.config(), 0, 0));
    }
    // Fill target columns of small scale first: their candidates are primitive and
    // constrain the rest through orthogonality, which prunes far better than
    // starting from a high-valuation norm with many imprimitive solutions.
    let order = search_order(q, m, &n.gram, dim);
    let target: Vec<u32> = (0..dim * dim).map(|x| n.gram[order[x / dim] * dim + order[x % dim]]).collect();
    let to_matrix = |ids: &[u32]| -> Matrix {
        let mut cols: Vec<Vec<RingElem>> = vec![Vec::new(); dim];
        for (pos, &id) in ids.iter().enumerate() {
            cols[order[pos]] = m.vector(id).iter().map(|&c| q.lift(c as u32)).collect();
        }
        Matrix::from_columns(q.config(), dim, &cols)
    };
    match mode {
        SearchMode::Exhaustive => {
            let s = Search { q, m, target: &target, work: AtomicU64::new(0), budget: SEARCH_BUDGET, overflow: AtomicBool::new(false) };
            let first = &m.buckets[target[0] as usize];
            let found = first.par_iter().find_map_any(|&id| {
                let v = m.vector(id);
                if v.iter().all(|&c| q.residue(c as u32) == 0) {
                    return None;
                }
                let mut chosen = vec![id];
                s.extend(&mut chosen, None)
            });
            match found {
                Some(ids) => OracleResult::Yes(to_matrix(&ids)),
                None if s.overflow.load(Ordering::Relaxed) => OracleResult::Unknown,
                None => OracleResult::No(NoReason::Exhausted),
            }
        }
        SearchMode::Randomized { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let s = Search { q, m, target: &target, work: AtomicU64::new(0), budget: 1 << 20, overflow: AtomicBool::new(false) };
                let mut chosen = Vec::new();
                if let Some(ids) = s.extend(&mut chosen, Some(&mut rng)) {
                    return OracleResult::Yes(to_matrix(&ids));
                }
            }
            OracleResult::Unknown
        }
    }
}

/// Target columns by least valuation in their Gram column, then by candidate count.
fn search_order(q: &Quotient, m: &Prepared, gram: &[u32], dim: usize) -> Vec<usize> {
    let val = |x: u32| -> Val { q.lift(x).valuation().unwrap_or(Val::Inf) };
    let mut keys: Vec<(Val, usize, usize)> = (0..dim)
        .map(|j| {
            let scale = (0..dim).map(|i| val(gram[i * dim + j])).min().unwrap_or(Val::Inf);
            (scale, m.buckets[gram[j * dim + j] as usize].len(), j)
        })
        .collect();
    keys.sort();
    keys.into_iter().map(|(_, _, j)| j).collect()
}

/// Searches `T` over `GL_n(R/pi^k)` with `T^t G_M T = G_N (mod pi^k)`.
pub fn oracle_isometric_mod(m: &GramLattice, n: &GramLattice, k: i64) -> Result<OracleResult> {
    m.check_same_ring(n)?;
    let q = Quotient::new(m.ring(), k)?;
    let (pm, pn) = (Prepared::new(&q, m)?, Prepared::new(&q, n)?);
    Ok(isometric_prepared(&q, &pm, &pn, SearchMode::Exhaustive))
}

/// Randomized variant: `Yes` or `Unknown`.
pub fn oracle_isometric_randomized(m: &GramLattice, n: &GramLattice, k: i64, trials: u32, seed: u64) -> Result<OracleResult> {
    m.check_same_ring(n)?;
    let q = Quotient::new(m.ring(), k)?;
    let (pm, pn) = (Prepared::new(&q, m)?, Prepared::new(&q, n)?);
    Ok(match isometric_prepared(&q, &pm, &pn, SearchMode::Randomized { trials, seed }) {
        OracleResult::No(_) => OracleResult::Unknown,
        r => r,
    })
}

/// Smallest level at which a congruence certifies an isometry onto `n`.
pub fn certifying_level(n: &GramLattice) -> Result<i64> {
    match lift_tolerance(n)? {
        Val::Fin(t) => Ok(t + 1),
        other => Err(domain(format!("certification needs a discrete valuation, got tolerance {other}"))),
    }
}

/// Promotes a witness found at a certifying level to an exact `psi` with
/// `psi^t G_M psi = G_N`.
pub fn certify(m: &GramLattice, n: &GramLattice, witness: &Matrix, k: i64) -> Result<Matrix> {
    if k < certifying_level(n)? {
        return Err(domain(format!("level {k} is below the certifying level {}", certifying_level(n)?)));
    }
    lift_isometry(n, m, witness)
}

/// Norms of primitive vectors modulo `pi^k`, as quotient indices.
pub fn oracle_norm_set(m: &GramLattice, k: i64) -> Result<BTreeSet<u32>> {
    let q = Quotient::new(m.ring(), k)?;
    let p = Prepared::new(&q, m)?;
    let mut out = BTreeSet::new();
    for (norm, ids) in p.buckets.iter().enumerate() {
        if ids.iter().any(|&id| p.vector(id).iter().any(|&c| q.residue(c as u32) != 0)) {
            out.insert(norm as u32);
        }
    }
    Ok(out)
}

/// Norms of all vectors modulo `pi^k` (including non-primitive ones).
pub fn all_norms_mod(q: &Quotient, m: &GramLattice) -> Result<BTreeSet<u32>> {
    let p = Prepared::new(q, m)?;
    Ok(p.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, _)| i as u32).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_arithmetic() {
        let r = RingConfig::ramified2(12).unwrap();
        let q = Quotient::new(r, 5).unwrap();
        assert_eq!(q.size(), 32);
        let pi = RingElem::from_pair(r, &0.into(), &1.into()).unwrap();
        let x = &pi + &RingElem::from_i64(r, 3);
        let y = &(&pi * &pi) + &RingElem::from_i64(r, 5);
        assert_eq!(q.mul(q.reduce(&x).unwrap(), q.reduce(&y).unwrap()), q.reduce(&(&x * &y)).unwrap());
        assert_eq!(q.valuation(q.reduce(&pi).unwrap()), Some(1));
        let l = RingConfig::laurent2(3, 3, 8).unwrap();
        let q = Quotient::new(l, 3).unwrap();
        let a = RingElem::from_terms(l, &[(0, 0, 2), (0, 1, 1), (1, -4, 1)]).unwrap();
        let b = RingElem::from_terms(l, &[(0, 0, 1), (0, 2, 2)]).unwrap();
        assert_eq!(q.mul(q.reduce(&a).unwrap(), q.reduce(&b).unwrap()), q.reduce(&(&a * &b)).unwrap());
        assert_eq!(q.lift(q.reduce(&b).unwrap()).to_string(), b.to_string());
    }

    #[test]
    fn odd_examples() {
        let c = RingConfig::padic(3, 10).unwrap();
        let d = |v: &[i64]| GramLattice::diagonal_i64(c, v).unwrap();
        let OracleResult::Yes(t) = oracle_isometric_mod(&d(&[1, 1]), &d(&[2, 2]), 3).unwrap() else { panic!("expected a witness") };
        let g = d(&[1, 1]).gram().congruence(&t);
        assert!(q3_eq(&g, d(&[2, 2]).gram(), 3));
        assert!(oracle_isometric_mod(&d(&[1, 1]), &d(&[1, 2]), 3).unwrap().is_no());
    }

    fn q3_eq(a: &Matrix, b: &Matrix, k: i64) -> bool {
        a.sub(b).entries_val_ge(Val::Fin(k)).unwrap()
    }

    #[test]
    fn two_adic_examples() {
        let c = RingConfig::two_adic(10).unwrap();
        let a = GramLattice::from_i64(c, &[vec![2, 1], vec![1, 2]]).unwrap();
        let h = GramLattice::from_i64(c, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(oracle_isometric_mod(&a, &h, 3).unwrap().is_no());
        assert!(oracle_isometric_mod(&a, &a, 3).unwrap().is_yes());
        let norms: Vec<u32> = oracle_norm_set(&a, 3).unwrap().into_iter().collect();
        assert_eq!(norms, vec![2, 6]);
        let one: Vec<u32> = oracle_norm_set(&GramLattice::diagonal_i64(c, &[1]).unwrap(), 2).unwrap().into_iter().collect();
        assert_eq!(one, vec![1]);
    }

    #[test]
    fn certification() {
        let c = RingConfig::two_adic(20).unwrap();
        let m = GramLattice::from_i64(c, &[vec![2, 1], vec![1, 2]]).unwrap();
        let n = GramLattice::from_i64(c, &[vec![2, 3], vec![3, 6]]).unwrap();
        let k = certifying_level(&n).unwrap();
        let OracleResult::Yes(t) = oracle_isometric_mod(&m, &n, k).unwrap() else { panic!("expected a witness") };
        let psi = certify(&m, &n, &t, k).unwrap();
        assert!(m.gram().congruence(&psi).approx_eq(n.gram()));
    }

    #[test]
    fn randomized_finds_witnesses() {
        let c = RingConfig::padic(5, 10).unwrap();
        let m = GramLattice::diagonal_i64(c, &[1, 1, 5]).unwrap();
        let n = GramLattice::diagonal_i64(c, &[2, 3, 5]).unwrap();
        assert!(oracle_isometric_randomized(&m, &n, 2, 20, 7).unwrap().is_yes());
    }
}
