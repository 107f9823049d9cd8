//! `F_q((u))((t))` truncated: t-series whose coefficients are u-Laurent series.
//!
//! Each coefficient carries its own u-precision (or is exact), and the t-series
//! carries a t-cap beyond which nothing is known.

use super::value::{Val, NEG_FAR};

pub(crate) const EXACT: i64 = i64::MAX / 4;

/// Truncated u-Laurent series `sum d[k] u^(lo+k) + O(u^prec)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct USeries {
    pub lo: i64,
    pub d: Vec<u64>,
    pub prec: i64,
}

fn inv_mod(a: u64, q: u64) -> u64 {
    // q prime: Fermat.
    pow_mod(a, q - 2, q)
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1u64 % q;
    a %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % q;
        }
        a = a * a % q;
        e >>= 1;
    }
    r
}

impl USeries {
    pub fn exact_zero() -> Self {
        USeries { lo: 0, d: Vec::new(), prec: EXACT }
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    pub fn is_exact_zero(&self) -> bool {
        self.d.is_empty() && self.is_exact()
    }

    /// u-order of the known part (or the precision when nothing is known).
    pub fn ord(&self) -> i64 {
        if self.d.is_empty() {
            self.prec
        } else {
            self.lo
        }
    }

    pub fn monomial(c: u64, k: i64, q: u64, nu: i64) -> Self {
        USeries::build(k, vec![c % q], EXACT, nu)
    }

    /// Normalizes digits starting at exponent `lo` under precision `prec` and window cap `nu`.
    pub fn build(mut lo: i64, mut d: Vec<u64>, prec: i64, nu: i64) -> Self {
        let mut prec = prec.min(EXACT);
        if prec < EXACT {
            prec = prec.min(nu + 1);
        }
        // Drop digits at or beyond the precision.
        let keep = (prec - lo).clamp(0, d.len() as i64) as usize;
        d.truncate(keep);
        // Exact series overflowing the window become inexact.
        if prec >= EXACT {
            let top = lo + d.len() as i64 - 1;
            if top > nu && d.iter().rev().take((top - nu) as usize).any(|&x| x != 0) {
                prec = nu + 1;
                let keep = (prec - lo).clamp(0, d.len() as i64) as usize;
                d.truncate(keep);
            }
        }
        while d.last() == Some(&0) {
            d.pop();
        }
        let lead = d.iter().position(|&x| x != 0).unwrap_or(d.len());
        if lead == d.len() {
            return USeries { lo: 0, d: Vec::new(), prec };
        }
        d.drain(..lead);
        lo += lead as i64;
        USeries { lo, d, prec }
    }

    pub fn add(&self, o: &Self, q: u64, nu: i64) -> Self {
        let prec = self.prec.min(o.prec);
        if self.d.is_empty() && o.d.is_empty() {
            return USeries::build(0, Vec::new(), prec, nu);
        }
        let lo = match (self.d.is_empty(), o.d.is_empty()) {
            (true, _) => o.lo,
            (_, true) => self.lo,
            _ => self.lo.min(o.lo),
        };
        let hi = (self.lo + self.d.len() as i64).max(o.lo + o.d.len() as i64);
        let mut d = vec![0u64; (hi - lo).max(0) as usize];
        for (k, &x) in self.d.iter().enumerate() {
            let idx = (self.lo - lo) as usize + k;
            d[idx] = (d[idx] + x) % q;
        }
        for (k, &x) in o.d.iter().enumerate() {
            let idx = (o.lo - lo) as usize + k;
            d[idx] = (d[idx] + x) % q;
        }
        USeries::build(lo, d, prec, nu)
    }

    pub fn neg(&self, q: u64) -> Self {
        USeries { lo: self.lo, d: self.d.iter().map(|&x| (q - x) % q).collect(), prec: self.prec }
    }

    pub fn mul(&self, o: &Self, q: u64, nu: i64) -> Self {
        if self.is_exact_zero() || o.is_exact_zero() {
            return USeries::exact_zero();
        }
        let prec = sat_add(self.prec, o.ord()).min(sat_add(o.prec, self.ord()));
        if self.d.is_empty() || o.d.is_empty() {
            return USeries::build(0, Vec::new(), prec, nu);
        }
        let lo = self.lo + o.lo;
        // Only digits below the result precision matter.
        let limit = (prec.min(nu + 2) - lo).max(0) as usize;
        let n = (self.d.len() + o.d.len() - 1).min(limit.max(1));
        let mut d = vec![0u64; n];
        for (i, &a) in self.d.iter().enumerate() {
            if a == 0 || i >= n {
                continue;
            }
            for (j, &b) in o.d.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                d[i + j] = (d[i + j] + a * b) % q;
            }
        }
        let prec = if n < self.d.len() + o.d.len() - 1 { prec.min(lo + n as i64) } else { prec };
        USeries::build(lo, d, prec, nu)
    }

    /// Inverse of a series with a known nonzero leading digit.
    pub fn inv(&self, q: u64, nu: i64) -> Self {
        debug_assert!(!self.d.is_empty());
        let o = self.lo;
        if self.is_exact() && self.d.len() == 1 {
            return USeries::build(-o, vec![inv_mod(self.d[0], q)], EXACT, nu);
        }
        let rel = if self.is_exact() { EXACT } else { self.prec - o };
        let target = (nu + 1).min(sat_add(-o, rel));
        let count = (target + o).max(0) as usize;
        let h0 = inv_mod(self.d[0], q);
        let mut h = Vec::with_capacity(count);
        for k in 0..count {
            if k == 0 {
                h.push(h0);
                continue;
            }
            let mut s = 0u64;
            for j in 1..=k.min(self.d.len() - 1) {
                s = (s + self.d[j] * h[k - j]) % q;
            }
            h.push((q - s) % q * h0 % q);
        }
        USeries::build(-o, h, target, nu)
    }

    pub fn digit(&self, k: i64) -> Option<u64> {
        if k >= self.prec {
            return None;
        }
        if k < self.lo || k >= self.lo + self.d.len() as i64 {
            return Some(0);
        }
        Some(self.d[(k - self.lo) as usize])
    }
}

fn sat_add(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        a + b
    }
}

/// `sum_i c[i] t^(lo+i) + O(t^tprec)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct LaurRepr {
    pub lo: i64,
    pub c: Vec<USeries>,
    pub tprec: i64,
}

impl LaurRepr {
    pub fn zero(tprec: i64) -> Self {
        LaurRepr { lo: tprec, c: Vec::new(), tprec }
    }

    pub fn build(mut lo: i64, mut c: Vec<USeries>, tprec: i64) -> Self {
        let keep = (tprec - lo).clamp(0, c.len() as i64) as usize;
        c.truncate(keep);
        while c.last().is_some_and(|s| s.is_exact_zero()) {
            c.pop();
        }
        let lead = c.iter().position(|s| !s.is_exact_zero()).unwrap_or(c.len());
        if lead == c.len() {
            return LaurRepr::zero(tprec);
        }
        c.drain(..lead);
        lo += lead as i64;
        LaurRepr { lo, c, tprec }
    }

    pub fn monomial(coef: u64, a: i64, b: i64, q: u64, nt: i64, nu: i64) -> Self {
        if coef % q == 0 {
            return LaurRepr::zero(nt);
        }
        LaurRepr::build(a, vec![USeries::monomial(coef, b, q, nu)], nt)
    }

    /// t-order lower bound.
    pub fn tord(&self) -> i64 {
        if self.c.is_empty() {
            self.tprec
        } else {
            self.lo
        }
    }

    /// Exact valuation, or `Err(lower bound)` when the leading part is zero at precision.
    pub fn valuation(&self) -> Result<Val, Val> {
        match self.c.first() {
            None => Err(Val::Pair(self.tprec, NEG_FAR)),
            Some(s) if s.d.is_empty() => Err(Val::Pair(self.lo, s.prec)),
            Some(s) => Ok(Val::Pair(self.lo, s.lo)),
        }
    }

    pub fn known_to(&self) -> Val {
        let mut best = Val::Pair(self.tprec, NEG_FAR);
        for (i, s) in self.c.iter().enumerate() {
            if !s.is_exact() {
                let v = Val::Pair(self.lo + i as i64, s.prec);
                if v < best {
                    best = v;
                }
            }
        }
        best
    }

    fn coeff(&self, texp: i64) -> USeries {
        if texp < self.lo || texp >= self.lo + self.c.len() as i64 {
            USeries::exact_zero()
        } else {
            self.c[(texp - self.lo) as usize].clone()
        }
    }

    pub fn add(&self, o: &Self, q: u64, nu: i64) -> Self {
        let tprec = self.tprec.min(o.tprec);
        let lo = self.tord().min(o.tord());
        if lo >= tprec {
            return LaurRepr::zero(tprec);
        }
        let c = (lo..tprec)
            .take_while(|&k| k < self.lo + self.c.len() as i64 || k < o.lo + o.c.len() as i64)
            .map(|k| self.coeff(k).add(&o.coeff(k), q, nu))
            .collect();
        LaurRepr::build(lo, c, tprec)
    }

    pub fn neg(&self, q: u64) -> Self {
        LaurRepr { lo: self.lo, c: self.c.iter().map(|s| s.neg(q)).collect(), tprec: self.tprec }
    }

    pub fn mul(&self, o: &Self, q: u64, nt: i64, nu: i64) -> Self {
        let tprec = (self.tprec + o.tord()).min(o.tprec + self.tord()).min(nt);
        if self.c.is_empty() || o.c.is_empty() {
            return LaurRepr::zero(tprec);
        }
        let lo = self.lo + o.lo;
        let n = ((tprec - lo).max(0) as usize).min(self.c.len() + o.c.len() - 1);
        let mut c = vec![USeries::exact_zero(); n];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                let prod = a.mul(b, q, nu);
                c[i + j] = c[i + j].add(&prod, q, nu);
            }
        }
        LaurRepr::build(lo, c, tprec)
    }

    /// `self / o`; `o` must have a known nonzero leading coefficient.
    pub fn div(&self, o: &Self, q: u64, nt: i64, nu: i64) -> Self {
        debug_assert!(o.c.first().is_some_and(|s| !s.d.is_empty()));
        let ty = o.lo;
        let rel_y = o.tprec - ty;
        let tvx = self.tord();
        let tprec = (self.tprec - ty).min(tvx + rel_y - ty).min(nt);
        let lo = tvx - ty;
        if lo >= tprec || self.c.is_empty() {
            return LaurRepr::zero(tprec);
        }
        let k_terms = (tprec - lo) as usize;
        let h0 = o.c[0].inv(q, nu);
        let mut h: Vec<USeries> = Vec::with_capacity(k_terms);
        for k in 0..k_terms {
            if k == 0 {
                h.push(h0.clone());
                continue;
            }
            let mut s = USeries::exact_zero();
            for j in 1..=k.min(o.c.len().saturating_sub(1)) {
                if o.c[j].is_exact_zero() {
                    continue;
                }
                s = s.add(&o.c[j].mul(&h[k - j], q, nu), q, nu);
            }
            h.push(s.mul(&h0, q, nu).neg(q));
        }
        let mut c = vec![USeries::exact_zero(); k_terms];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for j in 0..k_terms {
                if i + j >= k_terms {
                    break;
                }
                let prod = a.mul(&h[j], q, nu);
                c[i + j] = c[i + j].add(&prod, q, nu);
            }
        }
        LaurRepr::build(lo, c, tprec)
    }

    /// Known digits treated as exact, t-cap raised to `nt`.
    pub fn lifted(&self, nt: i64) -> Self {
        let c = self
            .c
            .iter()
            .map(|s| USeries { lo: s.lo, d: s.d.clone(), prec: EXACT })
            .map(|s| if s.d.is_empty() { USeries::exact_zero() } else { s })
            .collect();
        LaurRepr::build(self.lo, c, nt)
    }

    /// Coefficients of `t^k` for `k < a` replaced by exact zeros.
    pub fn vanishing_below(&self, a: i64) -> Self {
        let c = (self.lo..self.lo + self.c.len() as i64).map(|k| if k < a { USeries::exact_zero() } else { self.coeff(k) }).collect();
        LaurRepr::build(self.lo, c, self.tprec)
    }

    /// Digit at `t^a u^b`, `None` when unknown.
    pub fn digit(&self, a: i64, b: i64) -> Option<u64> {
        if a >= self.tprec {
            return None;
        }
        self.coeff(a).digit(b)
    }

    /// Nonzero digits as `(t-exp, u-exp, digit)`.
    pub fn terms(&self) -> Vec<(i64, i64, u64)> {
        let mut out = Vec::new();
        for (i, s) in self.c.iter().enumerate() {
            for (k, &x) in s.d.iter().enumerate() {
                if x != 0 {
                    out.push((self.lo + i as i64, s.lo + k as i64, x));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: u64 = 3;
    const NT: i64 = 6;
    const NU: i64 = 12;

    fn mono(c: u64, a: i64, b: i64) -> LaurRepr {
        LaurRepr::monomial(c, a, b, Q, NT, NU)
    }

    #[test]
    fn monomial_valuations() {
        let t = mono(1, 1, 0);
        let uinv = mono(1, 0, -1);
        let p = t.mul(&uinv, Q, NT, NU);
        assert_eq!(p.valuation(), Ok(Val::Pair(1, -1)));
    }

    #[test]
    fn inverse_of_one_plus_u() {
        let x = mono(1, 0, 0).add(&mono(1, 0, 1), Q, NU);
        let one = mono(1, 0, 0);
        let y = one.div(&x, Q, NT, NU);
        let back = y.mul(&x, Q, NT, NU);
        let diff = back.add(&one.neg(Q), Q, NU);
        assert!(diff.valuation().is_err());
        assert!(diff.known_to() >= Val::Pair(0, NU + 1));
    }

    #[test]
    fn t_times_inexact_stays_determinate() {
        let x = mono(1, 0, 0).add(&mono(1, 0, 1), Q, NU);
        let t = mono(1, 1, 0);
        let y = t.div(&x, Q, NT, NU);
        assert_eq!(y.valuation(), Ok(Val::Pair(1, 0)));
    }

    #[test]
    fn series_window_cap() {
        let big = USeries::monomial(1, NU + 3, Q, NU);
        assert!(big.d.is_empty());
        assert_eq!(big.prec, NU + 1);
    }
}
