use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::laurent::LaurRepr;
use super::padic::IntRepr;
use super::ramified::RamRepr;
use super::value::Val;
use super::{Residue, RingConfig, RingKind};
use crate::error::{domain, indeterminate, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Int(IntRepr),
    Ram(RamRepr),
    Laur(LaurRepr),
}

/// What is known about a valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValInfo {
    Exact(Val),
    /// Zero at the element's precision: the valuation is at least this.
    AtLeast(Val),
}

/// Valuation-ring (or fraction-field) element with tracked absolute precision.
#[derive(Clone, Debug)]
pub struct RingElem {
    cfg: RingConfig,
    r: Repr,
}

impl RingElem {
    pub fn config(&self) -> RingConfig {
        self.cfg
    }

    pub fn zero(cfg: RingConfig) -> Self {
        let r = match cfg.kind {
            RingKind::Padic { .. } | RingKind::TwoAdic => Repr::Int(IntRepr::zero(cfg.cap1())),
            RingKind::Ramified2 => Repr::Ram(RamRepr::zero(cfg.cap1())),
            RingKind::Laurent2 { .. } => Repr::Laur(LaurRepr::zero(cfg.caps2().0)),
        };
        RingElem { cfg, r }
    }

    pub fn from_int(cfg: RingConfig, n: &BigInt) -> Self {
        let r = match cfg.kind {
            RingKind::Padic { p } => Repr::Int(IntRepr::from_int(p, n, cfg.cap1())),
            RingKind::TwoAdic => Repr::Int(IntRepr::from_int(2, n, cfg.cap1())),
            RingKind::Ramified2 => Repr::Ram(RamRepr::from_pair(n, &BigInt::zero(), cfg.cap1())),
            RingKind::Laurent2 { q } => {
                let (nt, nu) = cfg.caps2();
                let d = (n % BigInt::from(q) + BigInt::from(q)) % BigInt::from(q);
                let d = d.iter_u64_digits().next().unwrap_or(0);
                Repr::Laur(LaurRepr::monomial(d, 0, 0, q, nt, nu))
            }
        };
        RingElem { cfg, r }
    }

    pub fn from_i64(cfg: RingConfig, n: i64) -> Self {
        RingElem::from_int(cfg, &BigInt::from(n))
    }

    pub fn one(cfg: RingConfig) -> Self {
        RingElem::from_i64(cfg, 1)
    }

    /// `a + b*pi` in the ramified backend.
    pub fn from_pair(cfg: RingConfig, a: &BigInt, b: &BigInt) -> Result<Self> {
        if cfg.kind != RingKind::Ramified2 {
            return Err(domain("pairs encode ramified2 elements only"));
        }
        Ok(RingElem { cfg, r: Repr::Ram(RamRepr::from_pair(a, b, cfg.cap1())) })
    }

    /// Sum of `digit * t^a * u^b` in the Laurent backend.
    pub fn from_terms(cfg: RingConfig, terms: &[(i64, i64, i64)]) -> Result<Self> {
        let RingKind::Laurent2 { q } = cfg.kind else {
            return Err(domain("term maps encode laurent2 elements only"));
        };
        let (nt, nu) = cfg.caps2();
        let mut acc = LaurRepr::zero(nt);
        for &(a, b, c) in terms {
            let d = c.rem_euclid(q as i64) as u64;
            acc = acc.add(&LaurRepr::monomial(d, a, b, q, nt, nu), q, nu);
        }
        Ok(RingElem { cfg, r: Repr::Laur(acc) })
    }

    /// The fixed monomial of valuation `v`: `p^v`, `pi^v` or `t^a u^b`.
    pub fn sigma(cfg: RingConfig, v: Val) -> Result<Self> {
        let r = match (cfg.kind, v) {
            (RingKind::Padic { p }, Val::Fin(k)) => Repr::Int(IntRepr::normalized(p, k, BigInt::one(), cfg.cap1().max(k + 1))),
            (RingKind::TwoAdic, Val::Fin(k)) => Repr::Int(IntRepr::normalized(2, k, BigInt::one(), cfg.cap1().max(k + 1))),
            (RingKind::Ramified2, Val::Fin(k)) => Repr::Ram(RamRepr::normalized(k, BigInt::one(), BigInt::zero(), cfg.cap1().max(k + 1))),
            (RingKind::Laurent2 { q }, Val::Pair(a, b)) => {
                let (nt, nu) = cfg.caps2();
                Repr::Laur(LaurRepr::monomial(1, a, b, q, nt.max(a + 1), nu.max(b)))
            }
            _ => return Err(domain(format!("no monomial of valuation {v} in {}", cfg.name()))),
        };
        Ok(RingElem { cfg, r })
    }

    pub fn val_info(&self) -> ValInfo {
        match &self.r {
            Repr::Int(x) => {
                if x.is_zero() {
                    ValInfo::AtLeast(Val::Fin(x.prec))
                } else {
                    ValInfo::Exact(Val::Fin(x.e))
                }
            }
            Repr::Ram(x) => {
                if x.is_zero() {
                    ValInfo::AtLeast(Val::Fin(x.prec))
                } else {
                    ValInfo::Exact(Val::Fin(x.e))
                }
            }
            Repr::Laur(x) => match x.valuation() {
                Ok(v) => ValInfo::Exact(v),
                Err(v) => ValInfo::AtLeast(v),
            },
        }
    }

    /// Exact valuation; errors when the element is zero at its precision.
    pub fn valuation(&self) -> Result<Val> {
        match self.val_info() {
            ValInfo::Exact(v) => Ok(v),
            ValInfo::AtLeast(v) => Err(indeterminate(format!("element is zero to precision {v}"))),
        }
    }

    /// Known lower bound of the valuation (exact when nonzero).
    pub fn val_lower(&self) -> Val {
        match self.val_info() {
            ValInfo::Exact(v) | ValInfo::AtLeast(v) => v,
        }
    }

    /// Absolute precision: the element is known modulo `{v >= known_to}`.
    pub fn known_to(&self) -> Val {
        match &self.r {
            Repr::Int(x) => Val::Fin(x.prec),
            Repr::Ram(x) => Val::Fin(x.prec),
            Repr::Laur(x) => x.known_to(),
        }
    }

    pub fn is_zero_at_prec(&self) -> bool {
        matches!(self.val_info(), ValInfo::AtLeast(_))
    }

    /// `v(self) >= g`.
    pub fn val_ge(&self, g: Val) -> Result<bool> {
        match self.val_info() {
            ValInfo::Exact(v) => Ok(v >= g),
            ValInfo::AtLeast(v) if v >= g => Ok(true),
            ValInfo::AtLeast(v) => Err(indeterminate(format!("cannot decide v >= {g}: zero to precision {v}"))),
        }
    }

    /// `v(self) > g`, i.e. membership in `I_g`.
    pub fn val_gt(&self, g: Val) -> Result<bool> {
        match self.val_info() {
            ValInfo::Exact(v) => Ok(v > g),
            ValInfo::AtLeast(v) if v > g => Ok(true),
            ValInfo::AtLeast(v) => Err(indeterminate(format!("cannot decide v > {g}: zero to precision {v}"))),
        }
    }

    /// In `R` (valuation non-negative).
    pub fn is_integral(&self) -> Result<bool> {
        self.val_ge(self.cfg.zero_val())
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.valuation()? == self.cfg.zero_val())
    }

    fn wrap(&self, r: Repr) -> RingElem {
        RingElem { cfg: self.cfg, r }
    }

    fn check_same(&self, o: &RingElem) {
        assert_eq!(self.cfg.kind, o.cfg.kind, "arithmetic across different rings");
    }

    fn add_ref(&self, o: &RingElem) -> RingElem {
        self.check_same(o);
        let r = match (&self.r, &o.r, self.cfg.kind) {
            (Repr::Int(a), Repr::Int(b), RingKind::Padic { p }) => Repr::Int(a.add(b, p)),
            (Repr::Int(a), Repr::Int(b), _) => Repr::Int(a.add(b, 2)),
            (Repr::Ram(a), Repr::Ram(b), _) => Repr::Ram(a.add(b)),
            (Repr::Laur(a), Repr::Laur(b), RingKind::Laurent2 { q }) => Repr::Laur(a.add(b, q, self.cfg.caps2().1)),
            _ => unreachable!(),
        };
        self.wrap(r)
    }

    fn neg_ref(&self) -> RingElem {
        let r = match (&self.r, self.cfg.kind) {
            (Repr::Int(a), RingKind::Padic { p }) => Repr::Int(a.neg(p)),
            (Repr::Int(a), _) => Repr::Int(a.neg(2)),
            (Repr::Ram(a), _) => Repr::Ram(a.neg()),
            (Repr::Laur(a), RingKind::Laurent2 { q }) => Repr::Laur(a.neg(q)),
            _ => unreachable!(),
        };
        self.wrap(r)
    }

    fn mul_ref(&self, o: &RingElem) -> RingElem {
        self.check_same(o);
        let r = match (&self.r, &o.r, self.cfg.kind) {
            (Repr::Int(a), Repr::Int(b), RingKind::Padic { p }) => Repr::Int(a.mul(b, p, self.cfg.cap1())),
            (Repr::Int(a), Repr::Int(b), _) => Repr::Int(a.mul(b, 2, self.cfg.cap1())),
            (Repr::Ram(a), Repr::Ram(b), _) => Repr::Ram(a.mul(b, self.cfg.cap1())),
            (Repr::Laur(a), Repr::Laur(b), RingKind::Laurent2 { q }) => {
                let (nt, nu) = self.cfg.caps2();
                Repr::Laur(a.mul(b, q, nt, nu))
            }
            _ => unreachable!(),
        };
        self.wrap(r)
    }

    /// `self / o`; fails when `o` is zero at its precision.
    pub fn checked_div(&self, o: &RingElem) -> Result<RingElem> {
        self.check_same(o);
        if o.is_zero_at_prec() {
            return Err(indeterminate("division by an element that is zero at precision"));
        }
        let r = match (&self.r, &o.r, self.cfg.kind) {
            (Repr::Int(a), Repr::Int(b), RingKind::Padic { p }) => Repr::Int(a.div(b, p, self.cfg.cap1())),
            (Repr::Int(a), Repr::Int(b), _) => Repr::Int(a.div(b, 2, self.cfg.cap1())),
            (Repr::Ram(a), Repr::Ram(b), _) => Repr::Ram(a.div(b, self.cfg.cap1())),
            (Repr::Laur(a), Repr::Laur(b), RingKind::Laurent2 { q }) => {
                let (nt, nu) = self.cfg.caps2();
                Repr::Laur(a.div(b, q, nt, nu))
            }
            _ => unreachable!(),
        };
        Ok(self.wrap(r))
    }

    pub fn inverse(&self) -> Result<RingElem> {
        RingElem::one(self.cfg).checked_div(self)
    }

    pub fn mul_i64(&self, k: i64) -> RingElem {
        self * &RingElem::from_i64(self.cfg, k)
    }

    pub fn square(&self) -> RingElem {
        self * self
    }

    pub fn pow(&self, k: u32) -> RingElem {
        let mut acc = RingElem::one(self.cfg);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `self / sigma(v(self))`, a unit.
    pub fn unit_part(&self) -> Result<RingElem> {
        let v = self.valuation()?;
        self.checked_div(&RingElem::sigma(self.cfg, v)?)
    }

    /// Image in the residue field.
    pub fn residue(&self) -> Result<Residue> {
        let ch = self.cfg.residue_char();
        match self.val_info() {
            ValInfo::Exact(v) if v < self.cfg.zero_val() => Err(domain(format!("valuation {v} < 0: not in R"))),
            ValInfo::Exact(v) if v > self.cfg.zero_val() => Ok(Residue::new(0, ch)),
            ValInfo::AtLeast(v) if v > self.cfg.zero_val() => Ok(Residue::new(0, ch)),
            ValInfo::AtLeast(_) => Err(indeterminate("residue of an element known only to non-positive precision")),
            ValInfo::Exact(_) => {
                let value = match (&self.r, self.cfg.kind) {
                    (Repr::Int(a), RingKind::Padic { p }) => a.leading_digit(p),
                    (Repr::Int(a), _) => a.leading_digit(2),
                    (Repr::Ram(_), _) => 1,
                    (Repr::Laur(a), _) => a.digit(0, 0).ok_or_else(|| indeterminate("unit digit unknown"))?,
                };
                Ok(Residue { value, modulus: ch })
            }
        }
    }

    /// Lift of a residue-field element (digit in `0..p`).
    pub fn from_residue(cfg: RingConfig, r: Residue) -> RingElem {
        RingElem::from_i64(cfg, r.value as i64)
    }

    /// Same known digits, regarded as exact up to the ring cap.
    pub(crate) fn lifted(&self) -> RingElem {
        let r = match &self.r {
            Repr::Int(a) => Repr::Int(a.lifted(self.cfg.cap1())),
            Repr::Ram(a) => Repr::Ram(a.lifted(self.cfg.cap1())),
            Repr::Laur(a) => Repr::Laur(a.lifted(self.cfg.caps2().0)),
        };
        self.wrap(r)
    }

    /// Same element with precision lowered to at most `prec` (rank-1 backends only).
    pub fn truncated(&self, prec: i64) -> RingElem {
        let r = match (&self.r, self.cfg.kind) {
            (Repr::Int(a), RingKind::Padic { p }) => Repr::Int(a.truncated(prec, p)),
            (Repr::Int(a), _) => Repr::Int(a.truncated(prec, 2)),
            (Repr::Ram(a), _) => Repr::Ram(a.truncated(prec)),
            (Repr::Laur(a), _) => Repr::Laur(a.clone()),
        };
        self.wrap(r)
    }

    /// Equality at the combined precision of both operands.
    pub fn approx_eq(&self, o: &RingElem) -> bool {
        (self - o).is_zero_at_prec()
    }

    /// Balanced integer representative (rank-1 integer backends, `v >= 0`).
    pub fn to_int(&self) -> Option<BigInt> {
        match (&self.r, self.cfg.kind) {
            (Repr::Int(a), RingKind::Padic { p }) => a.to_balanced_int(p),
            (Repr::Int(a), _) => a.to_balanced_int(2),
            _ => None,
        }
    }

    /// Numerator and p-power exponent of the denominator (rank-1 integer backends).
    pub(crate) fn to_fraction(&self) -> Option<(BigInt, i64)> {
        match (&self.r, self.cfg.kind) {
            (Repr::Int(a), RingKind::Padic { p }) => Some(a.to_fraction(p)),
            (Repr::Int(a), _) => Some(a.to_fraction(2)),
            _ => None,
        }
    }

    /// `(a, b)` numerator pair and pi-power denominator exponent (ramified backend).
    pub(crate) fn to_pair_fraction(&self) -> Option<((BigInt, BigInt), i64)> {
        match &self.r {
            Repr::Ram(a) => Some(a.to_fraction()),
            _ => None,
        }
    }

    /// Nonzero `(t-exp, u-exp, digit)` terms (Laurent backend).
    pub fn terms(&self) -> Option<Vec<(i64, i64, u64)>> {
        match &self.r {
            Repr::Laur(a) => Some(a.terms()),
            _ => None,
        }
    }

    /// Residue of the element modulo `p^k` (integer backends), as `0..p^k`.
    pub(crate) fn mod_pk(&self, k: i64) -> Result<BigInt> {
        let Some((n, den)) = self.to_fraction() else {
            return Err(domain("mod_pk on a non-integer backend"));
        };
        if den > 0 {
            return Err(domain("element is not integral"));
        }
        if self.known_to() < Val::Fin(k) {
            return Err(indeterminate(format!("element known only to {}", self.known_to())));
        }
        let m = super::padic::pow(self.cfg.residue_char(), k);
        Ok(((n % &m) + &m) % &m)
    }

    /// Digits `d[i][j]` of `t^i u^j` for `j < k`, only for the t^0 part.
    pub(crate) fn laurent_low_digits(&self, k: i64) -> Result<Vec<u64>> {
        let Repr::Laur(a) = &self.r else {
            return Err(domain("not a laurent2 element"));
        };
        if !self.val_ge(self.cfg.zero_val())? {
            return Err(domain("element is not integral"));
        }
        (0..k)
            .map(|j| a.digit(0, j).ok_or_else(|| indeterminate("digit beyond precision")))
            .collect()
    }

    /// Applies an a priori bound `v(self) >= v`: in the Laurent backend, t-coefficients
    /// lying wholly below `v` are known to vanish, so unknown tails there become exact
    /// zeros. Rank-1 backends gain nothing. Fails if a known digit contradicts the bound.
    pub fn with_valuation_at_least(&self, v: Val) -> Result<RingElem> {
        if let (Repr::Laur(a), Val::Pair(vt, vu)) = (&self.r, v) {
            if a.terms().iter().any(|&(t, u, _)| t < vt || (t == vt && u < vu)) {
                return Err(domain(format!("element has a nonzero digit below the asserted valuation {v}")));
            }
            return Ok(self.wrap(Repr::Laur(a.vanishing_below(vt))));
        }
        if let ValInfo::Exact(w) = self.val_info() {
            if w < v {
                return Err(domain(format!("element has valuation {w} below the asserted {v}")));
            }
        }
        Ok(self.clone())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl<'a> $tr<&'a RingElem> for &'a RingElem {
            type Output = RingElem;
            fn $m(self, o: &'a RingElem) -> RingElem {
                self.$f(o)
            }
        }
        impl $tr<RingElem> for RingElem {
            type Output = RingElem;
            fn $m(self, o: RingElem) -> RingElem {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a RingElem> for RingElem {
            type Output = RingElem;
            fn $m(self, o: &'a RingElem) -> RingElem {
                (&self).$f(o)
            }
        }
        impl<'a> $tr<RingElem> for &'a RingElem {
            type Output = RingElem;
            fn $m(self, o: RingElem) -> RingElem {
                self.$f(&o)
            }
        }
    };
}

impl RingElem {
    fn sub_ref(&self, o: &RingElem) -> RingElem {
        self.add_ref(&o.neg_ref())
    }
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        self.neg_ref()
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        self.neg_ref()
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cfg.kind {
            RingKind::Padic { .. } | RingKind::TwoAdic => {
                let (n, den) = self.to_fraction().unwrap();
                if den == 0 {
                    write!(f, "{n}")
                } else {
                    write!(f, "{n}/{}^{den}", self.cfg.residue_char())
                }
            }
            RingKind::Ramified2 => {
                let ((a, b), den) = self.to_pair_fraction().unwrap();
                if den == 0 {
                    write!(f, "[{a}, {b}]")
                } else {
                    write!(f, "[{a}, {b}]/pi^{den}")
                }
            }
            RingKind::Laurent2 { .. } => {
                let terms = self.terms().unwrap();
                if terms.is_empty() {
                    return write!(f, "0");
                }
                let parts: Vec<String> = terms.iter().map(|(a, b, c)| format!("{c}*t^{a}*u^{b}")).collect();
                write!(f, "{}", parts.join(" + "))
            }
        }
    }
}
