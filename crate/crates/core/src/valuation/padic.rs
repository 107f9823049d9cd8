//! Rank-1 backends `Z_p` (odd p) and `Z_2`: `p^e * m + O(p^prec)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntRepr {
    /// Exponent of the leading power; equals `prec` when the element is zero at precision.
    pub e: i64,
    /// Unit part, reduced into `[0, p^(prec-e))`; zero only when `e == prec`.
    pub m: BigInt,
    pub prec: i64,
}

pub(crate) fn pow(p: u64, k: i64) -> BigInt {
    debug_assert!(k >= 0);
    num_traits::pow(BigInt::from(p), k as usize)
}

impl IntRepr {
    pub fn zero(prec: i64) -> Self {
        IntRepr { e: prec, m: BigInt::zero(), prec }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// Builds `p^e * m + O(p^prec)` from an arbitrary integer `m`.
    pub fn normalized(p: u64, mut e: i64, m: BigInt, prec: i64) -> Self {
        if m.is_zero() || e >= prec {
            return IntRepr::zero(prec);
        }
        let pb = BigInt::from(p);
        let mut m = m;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
            if e >= prec {
                return IntRepr::zero(prec);
            }
        }
        let modulus = pow(p, prec - e);
        let m = m.mod_floor(&modulus);
        IntRepr { e, m, prec }
    }

    pub fn from_int(p: u64, n: &BigInt, prec: i64) -> Self {
        IntRepr::normalized(p, 0, n.clone(), prec)
    }

    fn scaled(&self, p: u64, target_e: i64) -> BigInt {
        if self.is_zero() {
            BigInt::zero()
        } else {
            &self.m * pow(p, self.e - target_e)
        }
    }

    pub fn add(&self, other: &Self, p: u64) -> Self {
        let prec = self.prec.min(other.prec);
        let e = self.e.min(other.e);
        if e >= prec {
            return IntRepr::zero(prec);
        }
        let m = self.scaled(p, e) + other.scaled(p, e);
        IntRepr::normalized(p, e, m, prec)
    }

    pub fn neg(&self, p: u64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let modulus = pow(p, self.prec - self.e);
        IntRepr { e: self.e, m: modulus - &self.m, prec: self.prec }
    }

    pub fn mul(&self, other: &Self, p: u64, cap: i64) -> Self {
        let prec = (self.prec + other.e).min(other.prec + self.e).min(cap);
        if self.is_zero() || other.is_zero() {
            return IntRepr::zero(prec);
        }
        IntRepr::normalized(p, self.e + other.e, &self.m * &other.m, prec)
    }

    /// `self / other`; `other` must be nonzero at its precision.
    pub fn div(&self, other: &Self, p: u64, cap: i64) -> Self {
        debug_assert!(!other.is_zero());
        let vy = other.e;
        let rel_y = other.prec - vy;
        let prec = (self.prec.min(self.e + rel_y) - vy).min(cap);
        if self.is_zero() {
            return IntRepr::zero(prec);
        }
        let e = self.e - vy;
        if e >= prec {
            return IntRepr::zero(prec);
        }
        let modulus = pow(p, prec - e);
        let inv = other.m.modinv(&modulus).expect("unit part is invertible");
        IntRepr::normalized(p, e, (&self.m * inv).mod_floor(&modulus), prec)
    }

    /// Same digits, precision raised to `cap`.
    pub fn lifted(&self, cap: i64) -> Self {
        if self.is_zero() {
            IntRepr::zero(cap)
        } else {
            IntRepr { e: self.e, m: self.m.clone(), prec: cap }
        }
    }

    pub fn truncated(&self, prec: i64, p: u64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        IntRepr::normalized(p, self.e, self.m.clone(), prec)
    }

    /// Integer representative of smallest absolute value, if `e >= 0`.
    pub fn to_balanced_int(&self, p: u64) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.e < 0 {
            return None;
        }
        let modulus = pow(p, self.prec);
        let mut n = (&self.m * pow(p, self.e)).mod_floor(&modulus);
        if &n + &n > modulus {
            n -= modulus;
        }
        Some(n)
    }

    /// `(numerator, p-power denominator exponent)` with a balanced numerator.
    pub fn to_fraction(&self, p: u64) -> (BigInt, i64) {
        if self.e >= 0 {
            return (self.to_balanced_int(p).unwrap(), 0);
        }
        let shifted = IntRepr { e: 0, m: self.m.clone(), prec: self.prec - self.e };
        (shifted.to_balanced_int(p).unwrap(), -self.e)
    }

    /// Residue of the unit part modulo `p`.
    pub fn leading_digit(&self, p: u64) -> u64 {
        let r = self.m.mod_floor(&BigInt::from(p));
        r.iter_u64_digits().next().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_in_two_adic() {
        let a = IntRepr::from_int(2, &BigInt::from(3), 20);
        let b = IntRepr::from_int(2, &BigInt::from(5), 20);
        let s = a.add(&b, 2);
        assert_eq!(s.e, 3);
        assert_eq!(s.m, BigInt::from(1));
    }

    #[test]
    fn product_in_three_adic() {
        let a = IntRepr::from_int(3, &BigInt::from(6), 20);
        let b = IntRepr::from_int(3, &BigInt::from(9), 20);
        let c = a.mul(&b, 3, 20);
        assert_eq!(c.e, 3);
        assert_eq!(c.leading_digit(3), 2);
    }

    #[test]
    fn division_loses_divisor_valuation() {
        let a = IntRepr::from_int(3, &BigInt::from(7), 10);
        let b = IntRepr::from_int(3, &BigInt::from(9), 10);
        let q = a.div(&b, 3, 10);
        assert_eq!(q.e, -2);
        assert_eq!(q.prec, 6);
        let back = q.mul(&b, 3, 10);
        assert_eq!(back.to_balanced_int(3).unwrap(), BigInt::from(7));
    }

    #[test]
    fn negatives_are_canonical() {
        let a = IntRepr::from_int(5, &BigInt::from(-1), 4);
        assert_eq!(a.m, BigInt::from(624));
        assert_eq!(a.to_balanced_int(5).unwrap(), BigInt::from(-1));
    }
}
