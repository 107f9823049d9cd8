//! `Z_2[pi]` with `pi^2 = 2`: `pi^e * (a + b*pi) + O(pi^prec)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::padic::pow;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RamRepr {
    pub e: i64,
    /// Odd unless the element is zero at precision.
    pub a: BigInt,
    pub b: BigInt,
    pub prec: i64,
}

/// Moduli for `a` and `b` at relative precision `k` (in pi-units).
fn moduli(k: i64) -> (BigInt, BigInt) {
    (pow(2, (k + 1) / 2), pow(2, k / 2))
}

/// `pi^d * (a + b*pi)` as a new pair.
fn shift(a: &BigInt, b: &BigInt, d: i64) -> (BigInt, BigInt) {
    let two_pow = pow(2, d / 2);
    let (a, b) = (a * &two_pow, b * &two_pow);
    if d % 2 == 1 {
        (b * 2, a)
    } else {
        (a, b)
    }
}

impl RamRepr {
    pub fn zero(prec: i64) -> Self {
        RamRepr { e: prec, a: BigInt::zero(), b: BigInt::zero(), prec }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn normalized(mut e: i64, mut a: BigInt, mut b: BigInt, prec: i64) -> Self {
        loop {
            let k = prec - e;
            if k <= 0 {
                return RamRepr::zero(prec);
            }
            let (ma, mb) = moduli(k);
            a = a.mod_floor(&ma);
            b = b.mod_floor(&mb);
            if a.is_odd() {
                return RamRepr { e, a, b, prec };
            }
            if a.is_zero() && b.is_zero() {
                return RamRepr::zero(prec);
            }
            if b.is_odd() {
                // a + b*pi = pi * (b + (a/2)*pi)
                let half = &a >> 1usize;
                a = b;
                b = half;
                e += 1;
            } else {
                a >>= 1usize;
                b >>= 1usize;
                e += 2;
            }
        }
    }

    pub fn from_pair(a: &BigInt, b: &BigInt, prec: i64) -> Self {
        RamRepr::normalized(0, a.clone(), b.clone(), prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let e = self.e.min(other.e);
        if e >= prec {
            return RamRepr::zero(prec);
        }
        let (a1, b1) = if self.is_zero() { (BigInt::zero(), BigInt::zero()) } else { shift(&self.a, &self.b, self.e - e) };
        let (a2, b2) = if other.is_zero() { (BigInt::zero(), BigInt::zero()) } else { shift(&other.a, &other.b, other.e - e) };
        RamRepr::normalized(e, a1 + a2, b1 + b2, prec)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        RamRepr::normalized(self.e, -&self.a, -&self.b, self.prec)
    }

    pub fn mul(&self, other: &Self, cap: i64) -> Self {
        let prec = (self.prec + other.e).min(other.prec + self.e).min(cap);
        if self.is_zero() || other.is_zero() {
            return RamRepr::zero(prec);
        }
        let a = &self.a * &other.a + (&self.b * &other.b) * 2;
        let b = &self.a * &other.b + &self.b * &other.a;
        RamRepr::normalized(self.e + other.e, a, b, prec)
    }

    pub fn div(&self, other: &Self, cap: i64) -> Self {
        debug_assert!(!other.is_zero());
        let vy = other.e;
        let rel_y = other.prec - vy;
        let prec = (self.prec.min(self.e + rel_y) - vy).min(cap);
        if self.is_zero() {
            return RamRepr::zero(prec);
        }
        let e = self.e - vy;
        let k = prec - e;
        if k <= 0 {
            return RamRepr::zero(prec);
        }
        // (c + d pi)^{-1} = (c - d pi) / (c^2 - 2 d^2), the norm being odd.
        let (c, d) = (&other.a, &other.b);
        let norm: BigInt = c * c - (d * d) * 2;
        let modulus = pow(2, (k + 1) / 2 + 1);
        let inv_norm = norm.mod_floor(&modulus).modinv(&modulus).expect("odd norm");
        let ia = c * &inv_norm;
        let ib = -(d * &inv_norm);
        let a = &self.a * &ia + (&self.b * &ib) * 2;
        let b = &self.a * &ib + &self.b * &ia;
        RamRepr::normalized(e, a, b, prec)
    }

    pub fn lifted(&self, cap: i64) -> Self {
        if self.is_zero() {
            RamRepr::zero(cap)
        } else {
            RamRepr { e: self.e, a: self.a.clone(), b: self.b.clone(), prec: cap }
        }
    }

    pub fn truncated(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        RamRepr::normalized(self.e, self.a.clone(), self.b.clone(), prec)
    }

    /// `(a, b)` with `x = a + b*pi`, balanced representatives, for `e >= 0`.
    pub fn to_pair(&self) -> Option<(BigInt, BigInt)> {
        if self.is_zero() {
            return Some((BigInt::zero(), BigInt::zero()));
        }
        if self.e < 0 {
            return None;
        }
        let (a, b) = shift(&self.a, &self.b, self.e);
        let (ma, mb) = moduli(self.prec);
        Some((balanced(a.mod_floor(&ma), &ma), balanced(b.mod_floor(&mb), &mb)))
    }

    /// Pair for `pi^(-shift) * x`'s integral numerator, with `shift >= 0` minimal.
    pub fn to_fraction(&self) -> ((BigInt, BigInt), i64) {
        if self.e >= 0 {
            return (self.to_pair().unwrap(), 0);
        }
        let numer = RamRepr { e: 0, a: self.a.clone(), b: self.b.clone(), prec: self.prec - self.e };
        (numer.to_pair().unwrap(), -self.e)
    }
}

fn balanced(n: BigInt, modulus: &BigInt) -> BigInt {
    if modulus.is_one() {
        return BigInt::zero();
    }
    if &n + &n > *modulus {
        n - modulus
    } else {
        n
    }
}
