use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

/// Stand-in for an unbounded negative second coordinate in rank-2 precision bounds.
pub(crate) const NEG_FAR: i64 = i64::MIN / 8;

/// Element of the value group: `Z`, `Z x Z` ordered lexicographically, or the top element.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Val {
    Fin(i64),
    Pair(i64, i64),
    Inf,
}

impl Val {
    pub fn zero(rank: u8) -> Val {
        if rank == 2 {
            Val::Pair(0, 0)
        } else {
            Val::Fin(0)
        }
    }

    pub fn is_inf(self) -> bool {
        matches!(self, Val::Inf)
    }

    pub fn is_zero(self) -> bool {
        matches!(self, Val::Fin(0) | Val::Pair(0, 0))
    }

    pub fn rank(self) -> Option<u8> {
        match self {
            Val::Fin(_) => Some(1),
            Val::Pair(..) => Some(2),
            Val::Inf => None,
        }
    }

    fn key(self) -> (i64, i64) {
        match self {
            Val::Fin(a) => (a, 0),
            Val::Pair(a, b) => (a, b),
            Val::Inf => (i64::MAX, i64::MAX),
        }
    }

    /// `k * self`.
    pub fn times(self, k: i64) -> Val {
        match self {
            Val::Fin(a) => Val::Fin(a * k),
            Val::Pair(a, b) => Val::Pair(a * k, b * k),
            Val::Inf => {
                assert!(k > 0, "non-positive multiple of infinity");
                Val::Inf
            }
        }
    }

    /// Divisible by two in the value group.
    pub fn is_even(self) -> bool {
        match self {
            Val::Fin(a) => a % 2 == 0,
            Val::Pair(a, b) => a % 2 == 0 && b % 2 == 0,
            Val::Inf => true,
        }
    }

    pub fn half(self) -> Val {
        debug_assert!(self.is_even());
        match self {
            Val::Fin(a) => Val::Fin(a / 2),
            Val::Pair(a, b) => Val::Pair(a / 2, b / 2),
            Val::Inf => Val::Inf,
        }
    }

    /// Coordinates, or `None` for the top element.
    pub fn coords(self) -> Option<Vec<i64>> {
        match self {
            Val::Fin(a) => Some(vec![a]),
            Val::Pair(a, b) => Some(vec![a, b]),
            Val::Inf => None,
        }
    }
}

/// Total-order comparison that rejects mixing rank-1 and rank-2 elements.
pub fn vg_compare(a: Val, b: Val) -> Result<Ordering> {
    match (a.rank(), b.rank()) {
        (Some(x), Some(y)) if x != y => Err(Error::Config(format!(
            "cannot compare {a} with {b}: value groups differ"
        ))),
        _ => Ok(a.cmp(&b)),
    }
}

impl Ord for Val {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Val::Inf, Val::Inf) => Ordering::Equal,
            (Val::Inf, _) => Ordering::Greater,
            (_, Val::Inf) => Ordering::Less,
            _ => self.key().cmp(&other.key()),
        }
    }
}

impl PartialOrd for Val {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Val {
    type Output = Val;
    fn add(self, rhs: Val) -> Val {
        match (self, rhs) {
            (Val::Inf, _) | (_, Val::Inf) => Val::Inf,
            (Val::Fin(a), Val::Fin(b)) => Val::Fin(a.saturating_add(b)),
            (Val::Pair(a, b), Val::Pair(c, d)) => Val::Pair(a.saturating_add(c), b.saturating_add(d)),
            (Val::Fin(a), Val::Pair(c, d)) | (Val::Pair(c, d), Val::Fin(a)) => {
                debug_assert!(a == 0, "mixed value groups");
                Val::Pair(c, d)
            }
        }
    }
}

impl Neg for Val {
    type Output = Val;
    fn neg(self) -> Val {
        match self {
            Val::Fin(a) => Val::Fin(-a),
            Val::Pair(a, b) => Val::Pair(-a, -b),
            Val::Inf => panic!("negating the top element"),
        }
    }
}

impl Sub for Val {
    type Output = Val;
    fn sub(self, rhs: Val) -> Val {
        match (self, rhs) {
            (Val::Inf, Val::Inf) => panic!("infinity minus infinity"),
            (Val::Inf, _) => Val::Inf,
            _ => self + (-rhs),
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Fin(a) => write!(f, "{a}"),
            Val::Pair(a, b) if *b <= NEG_FAR / 2 => write!(f, "({a},-inf)"),
            Val::Pair(a, b) => write!(f, "({a},{b})"),
            Val::Inf => write!(f, "inf"),
        }
    }
}

/// `n`, `[a, b]` or `"inf"`.
impl serde::Serialize for Val {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Val::Fin(n) => s.serialize_i64(n),
            Val::Pair(a, b) => [a, b].serialize(s),
            Val::Inf => s.serialize_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_order() {
        assert_eq!(vg_compare(Val::Pair(1, -5), Val::Pair(0, 3)).unwrap(), Ordering::Greater);
        assert_eq!(vg_compare(Val::Fin(3), Val::Fin(3)).unwrap(), Ordering::Equal);
        assert_eq!(vg_compare(Val::Pair(0, 7), Val::Inf).unwrap(), Ordering::Less);
        assert!(vg_compare(Val::Fin(0), Val::Pair(0, 0)).is_err());
    }

    #[test]
    fn arithmetic_with_top() {
        assert_eq!(Val::Fin(2) + Val::Inf, Val::Inf);
        assert_eq!(Val::Pair(1, 2) + Val::Pair(0, -3), Val::Pair(1, -1));
        assert!(Val::Pair(2, 4).is_even());
        assert!(!Val::Pair(2, 3).is_even());
        assert_eq!(Val::Fin(6).half(), Val::Fin(3));
    }
}
