//! Classification when the residue characteristic is odd: rank and sign per component.

use std::fmt;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::hensel::is_residual_square;
use crate::jordan::{jordan_decompose, JordanBlock};
use crate::lattice::GramLattice;
use crate::valuation::{RingConfig, RingKind, Val};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolEntry {
    pub scale_valuation: Val,
    pub rank: usize,
    /// `+1` or `-1`: whether the component determinant is a residual square.
    pub sign: i8,
}

/// The list `(sigma_v, rank, sign)`, strictly increasing in `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub ring: RingConfig,
    pub entries: Vec<SymbolEntry>,
}

fn require_odd(cfg: RingConfig) -> Result<()> {
    if cfg.residue_char() == 2 {
        return Err(domain("signs need an odd residue characteristic"));
    }
    Ok(())
}

pub fn component_sign(b: &JordanBlock) -> Result<i8> {
    require_odd(b.ring())?;
    Ok(if is_residual_square(&b.unimodular_gram.det())? { 1 } else { -1 })
}

pub fn symbol(m: &GramLattice) -> Result<Symbol> {
    require_odd(m.ring())?;
    let d = jordan_decompose(m)?;
    let entries = d
        .blocks
        .iter()
        .map(|b| Ok(SymbolEntry { scale_valuation: b.scale_valuation, rank: b.rank(), sign: component_sign(b)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(Symbol { ring: m.ring(), entries })
}

pub fn isomorphic_odd(m: &GramLattice, n: &GramLattice) -> Result<bool> {
    m.check_same_ring(n)?;
    Ok(m.rank() == n.rank() && symbol(m)?.entries == symbol(n)?.entries)
}

/// Printed form of `sigma_v`: `p^v` as an integer when small, `t^a u^b` for Laurent.
fn scale_label(cfg: RingConfig, v: Val) -> String {
    match (cfg.kind, v) {
        (RingKind::Padic { p }, Val::Fin(k)) => match u32::try_from(k).ok().and_then(|k| p.checked_pow(k)) {
            Some(n) if n < 1_000_000_000 => n.to_string(),
            _ => format!("{p}^{k}"),
        },
        (RingKind::Laurent2 { .. }, Val::Pair(0, 0)) => "1".into(),
        (RingKind::Laurent2 { .. }, Val::Pair(a, b)) => {
            let mut parts = Vec::new();
            if a != 0 {
                parts.push(if a == 1 { "t".to_string() } else { format!("t^{a}") });
            }
            if b != 0 {
                parts.push(if b == 1 { "u".to_string() } else { format!("u^{b}") });
            }
            format!("({})", parts.join(" "))
        }
        (_, v) => format!("s{v}"),
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| {
                let s = if e.sign > 0 { "+" } else { "-" };
                format!("{}^{{{s}{}}}", scale_label(self.ring, e.scale_valuation), e.rank)
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols() {
        let c = RingConfig::padic(3, 20).unwrap();
        let s = symbol(&GramLattice::diagonal_i64(c, &[1, 3, 9, 2]).unwrap()).unwrap();
        assert_eq!(s.to_string(), "1^{-2} 3^{+1} 9^{+1}");
        let h = GramLattice::from_i64(c, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(symbol(&h).unwrap().to_string(), "1^{-2}");
        assert_eq!(symbol(&GramLattice::diagonal_i64(c, &[1]).unwrap()).unwrap().to_string(), "1^{+1}");
    }

    #[test]
    fn signs_and_decisions() {
        let c = RingConfig::padic(3, 20).unwrap();
        let d = |v: &[i64]| GramLattice::diagonal_i64(c, v).unwrap();
        let sign = |m: &GramLattice| component_sign(&jordan_decompose(m).unwrap().blocks[0]).unwrap();
        assert_eq!(sign(&d(&[1, 2])), -1);
        assert_eq!(sign(&d(&[2, 2])), 1);
        assert!(isomorphic_odd(&d(&[1, 1]), &d(&[2, 2])).unwrap());
        assert!(!isomorphic_odd(&d(&[1, 1]), &d(&[1, 2])).unwrap());
        let c2 = RingConfig::two_adic(10).unwrap();
        assert!(symbol(&GramLattice::diagonal_i64(c2, &[1]).unwrap()).is_err());
    }

    #[test]
    fn laurent_labels() {
        let c = RingConfig::laurent2(3, 4, 12).unwrap();
        let m = GramLattice::diagonal(
            c,
            &[crate::RingElem::one(c), crate::RingElem::from_terms(c, &[(1, -1, 2)]).unwrap()],
        )
        .unwrap();
        assert_eq!(symbol(&m).unwrap().to_string(), "1^{+1} (t u^-1)^{-1}");
    }
}
