//! Unimodular rank-2 lattices `M_{alpha,beta}` when 2 is not a unit: norm sets,
//! maximal norms, Arf invariants, minimal-norm classes and isomorphism.

use std::fmt;

use crate::classify_odd::isomorphic_odd;
use crate::error::{domain, Error, Result};
use crate::hensel::{approximate_sqrt, artin_schreier_solve, in_r_as, is_approximate_square, is_residual_square, solve_quadratic, sqrt_one_plus, Branch};
use crate::lattice::GramLattice;
use crate::matrix::Matrix;
use crate::valuation::{RingConfig, RingElem, RingKind, Val, ValInfo};

/// Gram `[[alpha, 1], [1, beta]]` with `v(alpha) <= v(beta)`.
#[derive(Clone, Debug)]
pub struct Rank2Form {
    pub alpha: RingElem,
    pub beta: RingElem,
}

fn unsupported(msg: impl Into<String>) -> Error {
    Error::UnsupportedRegime(msg.into())
}

/// Valuation used for ordering: exact, or the precision floor for zeros.
fn ord_val(x: &RingElem) -> Val {
    x.val_lower()
}

impl Rank2Form {
    /// Swaps the basis when `v(alpha) > v(beta)`; rejects non-unimodular pairs.
    pub fn new(alpha: RingElem, beta: RingElem) -> Result<Self> {
        let cfg = alpha.config();
        let det = &(&alpha * &beta) - &RingElem::one(cfg);
        if det.val_gt(cfg.zero_val())? {
            return Err(domain("alpha * beta - 1 is not a unit: the lattice is not unimodular"));
        }
        if ord_val(&alpha) > ord_val(&beta) {
            return Ok(Rank2Form { alpha: beta, beta: alpha });
        }
        Ok(Rank2Form { alpha, beta })
    }

    pub fn from_i64(cfg: RingConfig, alpha: i64, beta: i64) -> Result<Self> {
        Rank2Form::new(RingElem::from_i64(cfg, alpha), RingElem::from_i64(cfg, beta))
    }

    pub fn ring(&self) -> RingConfig {
        self.alpha.config()
    }

    pub fn gram(&self) -> Matrix {
        let one = RingElem::one(self.ring());
        Matrix::from_rows(self.ring(), vec![vec![self.alpha.clone(), one.clone()], vec![one, self.beta.clone()]]).expect("2x2")
    }

    pub fn lattice(&self) -> GramLattice {
        GramLattice::from_trusted(self.gram())
    }

    /// `alpha * beta`.
    pub fn arf_product(&self) -> RingElem {
        &self.alpha * &self.beta
    }
}

impl fmt::Display for Rank2Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M({}, {})", self.alpha, self.beta)
    }
}

/// Basis `(x, y)` of `m` (columns) with `(x, y) = 1`, and the resulting form.
pub fn normalize_rank2_with_basis(m: &GramLattice) -> Result<(Rank2Form, Matrix)> {
    if m.rank() != 2 {
        return Err(domain("rank-2 lattice expected"));
    }
    if !m.is_unimodular()? {
        return Err(domain("lattice is not unimodular"));
    }
    let cfg = m.ring();
    let g = m.gram();
    let mut basis = Matrix::identity(cfg, 2);
    if g[(0, 1)].val_gt(cfg.zero_val())? {
        // Both norms are units here; x, x + y has a unit pairing.
        basis[(0, 1)] = RingElem::one(cfg);
    }
    let gb = g.congruence(&basis);
    let b = gb[(0, 1)].clone();
    let inv = b.inverse()?;
    for i in 0..2 {
        basis[(i, 1)] = &basis[(i, 1)] * &inv;
    }
    let gb = g.congruence(&basis);
    let (alpha, beta) = (gb[(0, 0)].clone(), gb[(1, 1)].clone());
    if ord_val(&alpha) > ord_val(&beta) {
        let swapped = basis.select(&[0, 1], &[1, 0]);
        return Ok((Rank2Form { alpha: beta, beta: alpha }, swapped));
    }
    Ok((Rank2Form { alpha, beta }, basis))
}

pub fn normalize_rank2(m: &GramLattice) -> Result<Rank2Form> {
    Ok(normalize_rank2_with_basis(m)?.0)
}

/// Why the search stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// A primitive vector of norm zero was found.
    Isotropic,
    /// `v(beta / alpha)` is odd.
    OddRatio,
    /// `beta / (alpha sigma^2)` is not a residual square.
    NonSquareRatio,
    /// `v(alpha beta) = 2 v(2)` and `alpha beta / 4` is not in `R_AS`.
    NotArtinSchreier,
    /// 2 is a unit and `1 - alpha beta` is not a residual square.
    NonSquareDiscriminant,
}

/// Outcome of [`maximal_norm_search`]: `y + t x`, rescaled to pair to 1 with
/// `x`, has a norm of maximal valuation.
#[derive(Clone, Debug)]
pub struct MaximalNorm {
    pub t: RingElem,
    pub form: Rank2Form,
    pub certificate: Certificate,
    /// Number of strict improvements made.
    pub steps: usize,
}

impl MaximalNorm {
    pub fn isotropic(&self) -> bool {
        self.certificate == Certificate::Isotropic
    }
}

/// Hensel square root of a unit that is a residual square.
fn unit_sqrt(a: &RingElem) -> Result<RingElem> {
    let s0 = approximate_sqrt(a)?.ok_or_else(|| domain("not a residual square"))?;
    let one = RingElem::one(a.config());
    let y = &a.checked_div(&s0.square())? - &one;
    Ok(&s0 * &(&one + &sqrt_one_plus(&y)?))
}

/// Raises `v(beta)` step by step until a certificate holds or `y + t x` is isotropic.
pub fn maximal_norm_search(f: &Rank2Form) -> Result<MaximalNorm> {
    let cfg = f.ring();
    let v2 = cfg.v2();
    let one = RingElem::one(cfg);
    let two = RingElem::from_i64(cfg, 2);
    let alpha = f.alpha.clone();
    let mut t_total = RingElem::zero(cfg);
    let budget = match cfg.precision {
        Val::Fin(n) => 4 * n as usize + 8,
        Val::Pair(a, b) => 4 * (a as usize + 1) * (b as usize + 1) + 8,
        Val::Inf => 64,
    };
    for steps in 0..budget {
        let pair = &one + &(&t_total * &alpha);
        let norm = &(&f.beta + &(&two * &t_total)) + &(&t_total.square() * &alpha);
        let beta = norm.checked_div(&pair.square())?;
        let done = |t: RingElem, beta: RingElem, certificate| -> Result<MaximalNorm> {
            Ok(MaximalNorm { t, form: Rank2Form { alpha: alpha.clone(), beta }, certificate, steps })
        };
        if beta.is_zero_at_prec() || alpha.is_zero_at_prec() {
            let z = if alpha.is_zero_at_prec() && !beta.is_zero_at_prec() { beta } else { RingElem::zero(cfg) };
            return done(t_total, z, Certificate::Isotropic);
        }
        let (va, vb) = (alpha.valuation()?, beta.valuation()?);
        let sum = va + vb;
        let isotropic_step = |t_total: &RingElem| -> Result<MaximalNorm> {
            let t = solve_quadratic(&alpha, &two, &beta, Branch::Small)?;
            let t_new = t_total + &(&t * &pair);
            Ok(MaximalNorm { t: t_new, form: Rank2Form { alpha: alpha.clone(), beta: RingElem::zero(cfg) }, certificate: Certificate::Isotropic, steps: steps + 1 })
        };
        if sum > v2.times(2) {
            return isotropic_step(&t_total);
        }
        if v2.is_zero() {
            // sum = 0: isotropic exactly when the discriminant 1 - alpha beta is a square.
            let disc = &one - &(&alpha * &beta);
            if !is_residual_square(&disc)? {
                return done(t_total, beta, Certificate::NonSquareDiscriminant);
            }
            let s = unit_sqrt(&disc)?;
            let t = (&s - &one).checked_div(&alpha)?;
            let t_new = &t_total + &(&t * &pair);
            return Ok(MaximalNorm { t: t_new, form: Rank2Form { alpha, beta: RingElem::zero(cfg) }, certificate: Certificate::Isotropic, steps: steps + 1 });
        }
        if sum == v2.times(2) {
            let eps = (&alpha * &beta).checked_div(&two.square())?;
            if !in_r_as(&-&eps)? {
                return done(t_total, beta, Certificate::NotArtinSchreier);
            }
            // (y + t x)^2 = (4/alpha)(eps - s + s^2) vanishes for t = -(2/alpha) s.
            let s = artin_schreier_solve(&-&eps)?;
            let t = -(&two.checked_div(&alpha)? * &s);
            let t_new = &t_total + &(&t * &pair);
            return Ok(MaximalNorm { t: t_new, form: Rank2Form { alpha, beta: RingElem::zero(cfg) }, certificate: Certificate::Isotropic, steps: steps + 1 });
        }
        let d = vb - va;
        if !d.is_even() {
            return done(t_total, beta, Certificate::OddRatio);
        }
        let sigma = RingElem::sigma(cfg, d.half())?;
        let q = beta.checked_div(&(&alpha * &sigma.square()))?;
        let Some(r) = approximate_sqrt(&q)? else {
            return done(t_total, beta, Certificate::NonSquareRatio);
        };
        // In residue characteristic 2, r^2 = q = -q modulo I_0: the leading terms cancel.
        let t = &sigma * &r;
        t_total = &t_total + &(&t * &pair);
    }
    Err(Error::IndeterminateValuation("maximal norm search exhausted its step budget".into()))
}

/// A nonzero norm-zero vector `(a, b)` meaning `a x + b y`, if one exists.
pub fn isotropy_witness(f: &Rank2Form) -> Result<Option<Vec<RingElem>>> {
    let cfg = f.ring();
    if f.alpha.is_zero_at_prec() {
        return Ok(Some(vec![RingElem::one(cfg), RingElem::zero(cfg)]));
    }
    if f.beta.is_zero_at_prec() {
        return Ok(Some(vec![RingElem::zero(cfg), RingElem::one(cfg)]));
    }
    let m = maximal_norm_search(f)?;
    Ok(if m.isotropic() { Some(vec![m.t, RingElem::one(cfg)]) } else { None })
}

fn require_v2_positive(cfg: RingConfig) -> Result<()> {
    if cfg.two_is_unit() {
        return Err(domain("this invariant needs v(2) > 0"));
    }
    Ok(())
}

/// Units modulo `pi^m` (rank-1 backends with residue field `F_2`).
fn unit_reps(cfg: RingConfig, m: i64) -> Result<Vec<RingElem>> {
    match cfg.kind {
        RingKind::TwoAdic => Ok((1..(1i64 << m)).step_by(2).map(|a| RingElem::from_i64(cfg, a)).collect()),
        RingKind::Ramified2 => {
            let (ka, kb) = ((m + 1) / 2, m / 2);
            let mut out = Vec::new();
            for a in (1..(1i64 << ka)).step_by(2) {
                for b in 0..(1i64 << kb) {
                    out.push(RingElem::from_pair(cfg, &a.into(), &b.into())?);
                }
            }
            Ok(out)
        }
        _ => Err(domain("unit enumeration is only needed for residue field F_2")),
    }
}

fn v2_int(cfg: RingConfig) -> i64 {
    match cfg.v2() {
        Val::Fin(k) => k,
        _ => 0,
    }
}

/// `gamma = c^2 (alpha + 2 r)`: returns `(c, r)` when the coarse classes agree.
pub fn coarse_equal(alpha: &RingElem, gamma: &RingElem) -> Result<Option<(RingElem, RingElem)>> {
    let cfg = alpha.config();
    let one = RingElem::one(cfg);
    let two = RingElem::from_i64(cfg, 2);
    let v2 = cfg.v2();
    let witness = |c: RingElem| -> Result<Option<(RingElem, RingElem)>> {
        let r = (&gamma.checked_div(&c.square())? - alpha).checked_div(&two)?;
        Ok(Some((c, r)))
    };
    if cfg.two_is_unit() {
        return witness(one);
    }
    if alpha.val_ge(v2)? {
        return if gamma.val_ge(v2)? { witness(one) } else { Ok(None) };
    }
    if gamma.val_ge(v2)? || gamma.valuation()? != alpha.valuation()? {
        return Ok(None);
    }
    for c in unit_reps(cfg, v2_int(cfg) + 2)? {
        if (gamma - &(&c.square() * alpha)).val_ge(v2)? {
            return witness(c);
        }
    }
    Ok(None)
}

/// `gamma = c^2 alpha (1 + (4/tau) rho(s))`: returns `(c, s)` when it holds.
pub fn refined_equal(alpha: &RingElem, gamma: &RingElem, tau: &RingElem) -> Result<Option<(RingElem, RingElem)>> {
    let cfg = alpha.config();
    require_v2_positive(cfg)?;
    if gamma.valuation()? != alpha.valuation()? {
        return Ok(None);
    }
    let four = RingElem::from_i64(cfg, 4);
    let one = RingElem::one(cfg);
    for c in unit_reps(cfg, v2_int(cfg) + 2)? {
        let ratio = &gamma.checked_div(&(&c.square() * alpha))? - &one;
        let w = (&ratio * tau).checked_div(&four)?;
        if !w.is_integral()? {
            continue;
        }
        if in_r_as(&w)? {
            let s = artin_schreier_solve(&w)?;
            return Ok(Some((c, s)));
        }
    }
    Ok(None)
}

/// Membership of `g` in the norm set `T` of `M_{alpha,beta}`, for `v(beta) >= v(2)`.
///
/// `T = (R*)^2 (alpha + 2R)` when `v(beta) > v(2)`, and
/// `T = (R*)^2 (alpha + (4/beta) R_AS)` when `v(beta) = v(2)`.
pub fn norm_set_contains(f: &Rank2Form, g: &RingElem) -> Result<bool> {
    let cfg = f.ring();
    require_v2_positive(cfg)?;
    let v2 = cfg.v2();
    if !f.beta.val_ge(v2)? {
        return Err(domain("norm sets are described only for v(beta) >= v(2)"));
    }
    if g.is_zero_at_prec() {
        return Ok(f.alpha.val_ge(v2)? && f.beta.val_gt(v2)?);
    }
    if f.beta.val_gt(v2)? {
        return Ok(coarse_equal(&f.alpha, g)?.is_some());
    }
    let tau = f.arf_product();
    Ok(refined_equal(&f.alpha, g, &tau)?.is_some())
}

/// Whether `d` lies in `S = {2t + t^2 : 2 v(t) > v(2)}`.
///
/// Leading terms of even valuation below `2 v(2)` are removed with explicit
/// elements of `S`; the remainder is decided through `S ∩ 4R = 4 R_AS`.
pub fn in_s(d: &RingElem) -> Result<bool> {
    let cfg = d.config();
    require_v2_positive(cfg)?;
    let v2 = cfg.v2();
    let two = RingElem::from_i64(cfg, 2);
    let four = RingElem::from_i64(cfg, 4);
    let mut d = d.clone();
    loop {
        if d.is_zero_at_prec() || d.val_ge(v2.times(2))? {
            return in_r_as(&d.checked_div(&four)?);
        }
        let v = d.valuation()?;
        if v <= v2 || !v.is_even() {
            return Ok(false);
        }
        let Some(t) = approximate_sqrt(&d)? else {
            return Ok(false);
        };
        d = &d - &(&t.square() + &(&two * &t));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArfKind {
    Vanishing,
    Odd,
    Even,
    Exact,
}

impl fmt::Display for ArfKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ArfKind::Vanishing => "vanishing",
            ArfKind::Odd => "odd",
            ArfKind::Even => "even",
            ArfKind::Exact => "exact",
        };
        write!(f, "{s}")
    }
}

/// Class of `alpha beta` for a form with `beta` of maximal valuation.
#[derive(Clone, Debug)]
pub struct ArfInvariant {
    pub kind: ArfKind,
    pub valuation: Val,
    pub representative: RingElem,
    /// `alpha beta` modulo `S`, present when the valuation exceeds `v(2)`.
    pub fine_class: Option<RingElem>,
}

impl ArfInvariant {
    /// Equality of generalized Arf invariants.
    pub fn same_class(&self, o: &ArfInvariant) -> Result<bool> {
        if self.kind != o.kind || self.valuation != o.valuation {
            return Ok(false);
        }
        let d = &self.representative - &o.representative;
        let v = self.valuation;
        match self.kind {
            ArfKind::Vanishing => Ok(true),
            ArfKind::Odd => d.val_gt(v),
            ArfKind::Even => Ok(d.val_gt(v)? || (d.valuation()? == v && is_approximate_square(&d)?)),
            ArfKind::Exact => in_r_as(&d.checked_div(&RingElem::from_i64(d.config(), 4))?),
        }
    }

    /// Equality of fine classes, when both are defined.
    pub fn fine_equal(&self, o: &ArfInvariant) -> Result<Option<bool>> {
        match (&self.fine_class, &o.fine_class) {
            (Some(a), Some(b)) => Ok(Some(in_s(&(a - b))?)),
            _ => Ok(None),
        }
    }
}

impl fmt::Display for ArfInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ArfKind::Vanishing => write!(f, "vanishing"),
            ArfKind::Exact => {
                let cfg = self.representative.config();
                let eps = self.representative.checked_div(&RingElem::from_i64(cfg, 4)).ok().and_then(|e| e.residue().ok());
                match eps {
                    Some(r) => write!(f, "exact: 4·[{r}]"),
                    None => write!(f, "exact: rep={}", self.representative),
                }
            }
            k => write!(f, "{k}: v={}, rep={}", self.valuation, self.representative),
        }
    }
}

/// Generalized Arf invariant; `beta` must already have maximal valuation.
pub fn generalized_arf(f: &Rank2Form) -> Result<ArfInvariant> {
    let cfg = f.ring();
    require_v2_positive(cfg)?;
    let m = maximal_norm_search(f)?;
    if m.steps > 0 {
        return Err(domain("beta is not of maximal valuation; run maximal_norm_search first"));
    }
    arf_of_maximal(&m)
}

fn arf_of_maximal(m: &MaximalNorm) -> Result<ArfInvariant> {
    let f = &m.form;
    let cfg = f.ring();
    let v2 = cfg.v2();
    if m.isotropic() {
        let z = RingElem::zero(cfg);
        return Ok(ArfInvariant { kind: ArfKind::Vanishing, valuation: Val::Inf, representative: z.clone(), fine_class: Some(z) });
    }
    let rep = f.arf_product();
    let v = rep.valuation()?;
    let kind = if v == v2.times(2) {
        ArfKind::Exact
    } else if v > v2.times(2) {
        return Err(domain("a maximal anisotropic form has Arf valuation at most 2 v(2)"));
    } else if v.is_even() {
        ArfKind::Even
    } else {
        ArfKind::Odd
    };
    let fine_class = if v > v2 { Some(rep.clone()) } else { None };
    Ok(ArfInvariant { kind, valuation: v, representative: rep, fine_class })
}

/// Maximizes first, then computes the generalized Arf invariant.
pub fn arf_invariant(f: &Rank2Form) -> Result<(ArfInvariant, MaximalNorm)> {
    require_v2_positive(f.ring())?;
    let m = maximal_norm_search(f)?;
    Ok((arf_of_maximal(&m)?, m))
}

/// Class of the minimal norm `alpha`.
#[derive(Clone, Debug)]
pub struct MinimalNormClass {
    /// Representative of the class in `(R/2R)/(R*)^2`.
    pub coarse: RingElem,
    /// `(alpha, tau)`: class modulo `(R*)^2 (1 + (4/tau) R_AS)`, when `v(beta) = v(2)`.
    pub refined: Option<(RingElem, RingElem)>,
}

impl MinimalNormClass {
    pub fn same_class(&self, o: &MinimalNormClass) -> Result<bool> {
        match (&self.refined, &o.refined) {
            (Some((a, tau)), Some((g, _))) => Ok(refined_equal(a, g, tau)?.is_some()),
            (None, None) => Ok(coarse_equal(&self.coarse, &o.coarse)?.is_some()),
            _ => Ok(false),
        }
    }
}

/// Needs `v(beta) >= v(2)` with `beta` maximal.
pub fn minimal_norm_class(f: &Rank2Form) -> Result<MinimalNormClass> {
    let cfg = f.ring();
    require_v2_positive(cfg)?;
    let v2 = cfg.v2();
    if !f.beta.val_ge(v2)? {
        return Err(domain("minimal-norm classes need v(beta) >= v(2)"));
    }
    let refined = if f.beta.is_zero_at_prec() || f.beta.val_gt(v2)? { None } else { Some((f.alpha.clone(), f.arf_product())) };
    Ok(MinimalNormClass { coarse: f.alpha.clone(), refined })
}

/// Decision with a short justification.
#[derive(Clone, Debug)]
pub struct Rank2Decision {
    pub isomorphic: bool,
    pub reason: String,
}

fn verdict(isomorphic: bool, reason: impl Into<String>) -> Result<Rank2Decision> {
    Ok(Rank2Decision { isomorphic, reason: reason.into() })
}

/// Whether the maximized form lies in the regime covered by the classification.
pub fn supported_regime(m: &MaximalNorm) -> Result<()> {
    let cfg = m.form.ring();
    let v2 = cfg.v2();
    if m.isotropic() {
        return Ok(());
    }
    if !m.form.beta.val_ge(v2)? {
        return Err(unsupported(format!("v(beta) = {} < v(2) = {v2}", m.form.beta.valuation()?)));
    }
    let v = m.form.arf_product().valuation()?;
    if v > v2 {
        return Ok(());
    }
    if v == v2 && cfg.kind == RingKind::TwoAdic {
        return Ok(());
    }
    Err(unsupported(format!("Arf valuation {v} = v(2) with v(2) even")))
}

pub fn decide_rank2(f: &Rank2Form, g: &Rank2Form) -> Result<Rank2Decision> {
    let cfg = f.ring();
    if f.ring().kind != g.ring().kind {
        return Err(Error::Config("ring mismatch".into()));
    }
    if cfg.two_is_unit() {
        let same = isomorphic_odd(&f.lattice(), &g.lattice())?;
        return verdict(same, if same { "same symbol" } else { "symbols differ" });
    }
    let (mf, mg) = (maximal_norm_search(f)?, maximal_norm_search(g)?);
    let (af, ag) = (arf_of_maximal(&mf)?, arf_of_maximal(&mg)?);
    let (ff, gg) = (&mf.form, &mg.form);
    if mf.isotropic() || mg.isotropic() {
        if af.kind != ag.kind {
            return verdict(false, format!("Arf mismatch ({} vs {})", af.kind, ag.kind));
        }
        return match coarse_equal(&ff.alpha, &gg.alpha)? {
            Some((c, r)) => verdict(true, format!("isotropic, gamma = c^2 (alpha + 2r) with c = {c}, r = {r}")),
            None => verdict(false, "isotropic with different minimal-norm classes"),
        };
    }
    supported_regime(&mf)?;
    supported_regime(&mg)?;
    if af.kind != ag.kind || af.valuation != ag.valuation {
        return verdict(false, format!("Arf mismatch ({} vs {})", af.kind, ag.kind));
    }
    if !af.same_class(&ag)? {
        return verdict(false, format!("Arf mismatch ({af} vs {ag})"));
    }
    let fine = in_s(&(&ff.arf_product() - &gg.arf_product()))?;
    if !fine {
        return verdict(false, "fine Arf invariants differ");
    }
    if ff.alpha.valuation()? != gg.alpha.valuation()? {
        return verdict(false, "minimal norms have different valuations");
    }
    let (cf, cg) = (minimal_norm_class(ff)?, minimal_norm_class(gg)?);
    if cf.same_class(&cg)? {
        verdict(true, "same fine Arf invariant and class of minimal norms")
    } else {
        verdict(false, "classes of minimal norms differ")
    }
}

pub fn isomorphic_rank2(f: &Rank2Form, g: &Rank2Form) -> Result<bool> {
    Ok(decide_rank2(f, g)?.isomorphic)
}

/// Exact valuation if known (used by callers reporting regimes).
pub fn known_valuation(x: &RingElem) -> Option<Val> {
    match x.val_info() {
        ValInfo::Exact(v) => Some(v),
        ValInfo::AtLeast(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> RingConfig {
        RingConfig::two_adic(30).unwrap()
    }

    fn el(n: i64) -> RingElem {
        RingElem::from_i64(c2(), n)
    }

    #[test]
    fn normalization() {
        let c = c2();
        let f = normalize_rank2(&GramLattice::diagonal_i64(c, &[1, 1]).unwrap()).unwrap();
        assert_eq!((f.alpha.to_int().unwrap(), f.beta.to_int().unwrap()), (1.into(), 2.into()));
        let f = normalize_rank2(&GramLattice::from_i64(c, &[vec![0, 3], vec![3, 0]]).unwrap()).unwrap();
        assert!(f.alpha.is_zero_at_prec() && f.beta.is_zero_at_prec());
        let f = normalize_rank2(&GramLattice::from_i64(c, &[vec![2, 1], vec![1, 2]]).unwrap()).unwrap();
        assert_eq!(f.alpha.to_int().unwrap(), 2.into());
    }

    #[test]
    fn isotropy() {
        let f = Rank2Form::from_i64(c2(), 2, 4).unwrap();
        let w = isotropy_witness(&f).unwrap().unwrap();
        assert_eq!(w[0].valuation().unwrap(), Val::Fin(1));
        assert!(crate::matrix::bilinear(&f.gram(), &w, &w).is_zero_at_prec());
        assert!(isotropy_witness(&Rank2Form::from_i64(c2(), 2, 2).unwrap()).unwrap().is_none());
        assert!(Rank2Form::from_i64(c2(), 1, 3).is_err());
    }

    #[test]
    fn norm_sets() {
        assert!(norm_set_contains(&Rank2Form::from_i64(c2(), 2, 4).unwrap(), &el(6)).unwrap());
        assert!(!norm_set_contains(&Rank2Form::from_i64(c2(), 1, 2).unwrap(), &el(3)).unwrap());
        assert!(norm_set_contains(&Rank2Form::from_i64(c2(), 1, 2).unwrap(), &el(5)).unwrap());
        assert!(!norm_set_contains(&Rank2Form::from_i64(c2(), 2, 2).unwrap(), &el(1)).unwrap());
    }

    #[test]
    fn maximal_norms() {
        let m = maximal_norm_search(&Rank2Form::from_i64(c2(), 1, 2).unwrap()).unwrap();
        assert_eq!((m.steps, m.certificate), (0, Certificate::OddRatio));
        let m = maximal_norm_search(&Rank2Form::from_i64(c2(), 2, 2).unwrap()).unwrap();
        assert_eq!((m.steps, m.certificate), (0, Certificate::NotArtinSchreier));
        let m = maximal_norm_search(&Rank2Form::from_i64(c2(), 1, 4).unwrap()).unwrap();
        assert_eq!(m.certificate, Certificate::NotArtinSchreier);
        let m = maximal_norm_search(&Rank2Form::from_i64(c2(), 1, 8).unwrap()).unwrap();
        assert!(m.isotropic());
    }

    #[test]
    fn arf_values() {
        let a = generalized_arf(&Rank2Form::from_i64(c2(), 2, 2).unwrap()).unwrap();
        assert_eq!(a.kind, ArfKind::Exact);
        assert_eq!(a.to_string(), "exact: 4·[1]");
        let a = generalized_arf(&Rank2Form::from_i64(c2(), 1, 2).unwrap()).unwrap();
        assert_eq!((a.kind, a.valuation), (ArfKind::Odd, Val::Fin(1)));
        assert_eq!(a.to_string(), "odd: v=1, rep=2");
        let a = generalized_arf(&Rank2Form::from_i64(c2(), 3, 0).unwrap()).unwrap();
        assert_eq!(a.kind, ArfKind::Vanishing);
    }

    #[test]
    fn s_membership() {
        assert!(in_s(&el(8)).unwrap());
        assert!(!in_s(&el(4)).unwrap());
        assert!(in_s(&el(0)).unwrap());
        assert!(in_s(&el(-8)).unwrap());
        assert!(!in_s(&el(12)).unwrap());
        let r = RingConfig::ramified2(30).unwrap();
        // t = pi: 2 pi + 2, valuation 2 = v(2) is not > v(2) for 2 v(t) = 2.
        let t = RingElem::from_pair(r, &0.into(), &2.into()).unwrap();
        let d = &t.square() + &(&RingElem::from_i64(r, 2) * &t);
        assert!(in_s(&d).unwrap());
    }

    #[test]
    fn minimal_norm_classes() {
        assert!(coarse_equal(&el(3), &el(7)).unwrap().is_some());
        assert!(coarse_equal(&el(2), &el(3)).unwrap().is_none());
        assert!(coarse_equal(&el(2), &el(6)).unwrap().is_some());
    }

    #[test]
    fn decisions() {
        let f = |a, b| Rank2Form::from_i64(c2(), a, b).unwrap();
        assert!(isomorphic_rank2(&f(2, 2), &f(2, 6)).unwrap());
        let d = decide_rank2(&f(2, 2), &f(2, 4)).unwrap();
        assert!(!d.isomorphic);
        assert_eq!(d.reason, "Arf mismatch (exact vs vanishing)");
        assert!(isomorphic_rank2(&f(3, 0), &f(3, 0)).unwrap());
        let r = RingConfig::ramified2(20).unwrap();
        let pi = RingElem::from_pair(r, &0.into(), &1.into()).unwrap();
        // Improvable: y + x raises v(beta) from 1 to 2.
        let g = Rank2Form::new(pi.clone(), pi.clone()).unwrap();
        assert!(isomorphic_rank2(&g, &g).unwrap());
        let h = Rank2Form::new(RingElem::one(r), pi).unwrap();
        assert!(matches!(decide_rank2(&h, &h), Err(Error::UnsupportedRegime(_))));
    }
}
