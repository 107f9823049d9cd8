//! Value groups, ring backends and precision-tracked elements.

mod elem;
mod laurent;
mod padic;
mod ramified;
mod value;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use elem::{RingElem, ValInfo};
pub use value::{vg_compare, Val};

/// Which valuation ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingKind {
    /// `Z_p`, p an odd prime.
    Padic { p: u64 },
    TwoAdic,
    /// `Z_2[pi]`, `pi^2 = 2`, valuations in pi-units.
    Ramified2,
    /// `F_q((u))((t))`, q an odd prime, value group `Z x Z` lexicographic.
    Laurent2 { q: u64 },
}

/// A ring together with its absolute precision cap.
///
/// For `Laurent2` the cap is `Val::Pair(n_t, n_u)`: t-degrees below `n_t` are
/// stored, and each u-Laurent coefficient keeps exponents up to `n_u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingConfig {
    pub kind: RingKind,
    pub precision: Val,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl RingConfig {
    pub fn padic(p: u64, precision: i64) -> Result<Self> {
        if p == 2 {
            return Err(Error::Config("use two_adic for p = 2".into()));
        }
        if !is_prime(p) || p > (1 << 20) {
            return Err(Error::Config(format!("p = {p} is not a supported odd prime")));
        }
        RingConfig::checked(RingKind::Padic { p }, Val::Fin(precision))
    }

    pub fn two_adic(precision: i64) -> Result<Self> {
        RingConfig::checked(RingKind::TwoAdic, Val::Fin(precision))
    }

    pub fn ramified2(precision: i64) -> Result<Self> {
        RingConfig::checked(RingKind::Ramified2, Val::Fin(precision))
    }

    pub fn laurent2(q: u64, n_t: i64, n_u: i64) -> Result<Self> {
        if q == 2 || !is_prime(q) || q > (1 << 20) {
            return Err(Error::Config(format!("q = {q} is not a supported odd prime")));
        }
        RingConfig::checked(RingKind::Laurent2 { q }, Val::Pair(n_t, n_u))
    }

    fn checked(kind: RingKind, precision: Val) -> Result<Self> {
        let ok = match precision {
            Val::Fin(n) => n > 0 && n <= 100_000,
            Val::Pair(a, b) => a > 0 && b > 0 && a <= 10_000 && b <= 10_000,
            Val::Inf => false,
        };
        if !ok {
            return Err(Error::Config(format!("invalid precision {precision}")));
        }
        Ok(RingConfig { kind, precision })
    }

    /// Same ring, different cap (e.g. doubled after an indeterminate result).
    pub fn with_precision(self, precision: Val) -> Result<Self> {
        RingConfig::checked(self.kind, precision)
    }

    pub fn rank(&self) -> u8 {
        match self.kind {
            RingKind::Laurent2 { .. } => 2,
            _ => 1,
        }
    }

    pub fn zero_val(&self) -> Val {
        Val::zero(self.rank())
    }

    /// `v(2)`.
    pub fn v2(&self) -> Val {
        match self.kind {
            RingKind::Padic { .. } => Val::Fin(0),
            RingKind::TwoAdic => Val::Fin(1),
            RingKind::Ramified2 => Val::Fin(2),
            RingKind::Laurent2 { .. } => Val::Pair(0, 0),
        }
    }

    /// Characteristic (= size) of the prime residue field.
    pub fn residue_char(&self) -> u64 {
        match self.kind {
            RingKind::Padic { p } => p,
            RingKind::TwoAdic | RingKind::Ramified2 => 2,
            RingKind::Laurent2 { q } => q,
        }
    }

    pub fn two_is_unit(&self) -> bool {
        self.v2().is_zero()
    }

    /// Smallest positive value: `v(p)`, `v(pi)` or `v(u)`.
    pub fn min_positive(&self) -> Val {
        match self.kind {
            RingKind::Laurent2 { .. } => Val::Pair(0, 1),
            _ => Val::Fin(1),
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            RingKind::Padic { p } => format!("padic({p})"),
            RingKind::TwoAdic => "two_adic".into(),
            RingKind::Ramified2 => "ramified2".into(),
            RingKind::Laurent2 { q } => format!("laurent2({q})"),
        }
    }

    pub(crate) fn cap1(&self) -> i64 {
        match self.precision {
            Val::Fin(n) => n,
            Val::Pair(a, _) => a,
            Val::Inf => unreachable!(),
        }
    }

    pub(crate) fn caps2(&self) -> (i64, i64) {
        match self.precision {
            Val::Pair(a, b) => (a, b),
            _ => unreachable!("rank-2 cap requested for a rank-1 ring"),
        }
    }

    pub(crate) fn same_ring(&self, other: &RingConfig) -> Result<()> {
        if self.kind == other.kind {
            Ok(())
        } else {
            Err(Error::Config(format!("ring mismatch: {} vs {}", self.name(), other.name())))
        }
    }
}

impl fmt::Display for RingConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {}", self.name(), self.precision)
    }
}

/// Element of the prime residue field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    pub value: u64,
    pub modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Self {
        Residue { value: value.rem_euclid(modulus as i64) as u64, modulus }
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn add(self, o: Residue) -> Residue {
        Residue { value: (self.value + o.value) % self.modulus, modulus: self.modulus }
    }

    pub fn mul(self, o: Residue) -> Residue {
        Residue { value: self.value * o.value % self.modulus, modulus: self.modulus }
    }

    pub fn neg(self) -> Residue {
        Residue { value: (self.modulus - self.value) % self.modulus, modulus: self.modulus }
    }

    pub fn inv(self) -> Option<Residue> {
        if self.value == 0 {
            None
        } else {
            Some(Residue {
                value: laurent::pow_mod(self.value, self.modulus - 2, self.modulus),
                modulus: self.modulus,
            })
        }
    }

    /// Nonzero square (Euler's criterion; every nonzero element in `F_2`).
    pub fn is_nonzero_square(self) -> bool {
        if self.value == 0 {
            return false;
        }
        if self.modulus == 2 {
            return true;
        }
        laurent::pow_mod(self.value, (self.modulus - 1) / 2, self.modulus) == 1
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
