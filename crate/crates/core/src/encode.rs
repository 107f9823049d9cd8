//! JSON encodings of rings, elements and lattices.
//!
//! Elements: decimal integer strings (or numbers) for the integer backends,
//! `[a, b]` for `a + b*pi`, and `{t_exp: {u_exp: digit}}` for Laurent series.
//! Non-integral values append a denominator: `"n/p^k"` or `[a, b, k]`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::matrix::Matrix;
use crate::valuation::{RingConfig, RingElem, RingKind, Val};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Ring description as it appears in lattice documents.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RingSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    /// An integer, or `[n_t, n_u]` for laurent2.
    pub precision: Value,
}

impl RingSpec {
    pub fn from_config(cfg: RingConfig) -> Self {
        let precision = match cfg.precision {
            Val::Fin(n) => json!(n),
            Val::Pair(a, b) => json!([a, b]),
            Val::Inf => Value::Null,
        };
        let (kind, p, q) = match cfg.kind {
            RingKind::Padic { p } => ("padic", Some(p), None),
            RingKind::TwoAdic => ("two_adic", None, None),
            RingKind::Ramified2 => ("ramified2", None, None),
            RingKind::Laurent2 { q } => ("laurent2", None, Some(q)),
        };
        RingSpec { kind: kind.into(), p, q, precision }
    }

    pub fn to_config(&self) -> Result<RingConfig> {
        let pair = || -> Result<(i64, i64)> {
            match &self.precision {
                Value::Array(v) if v.len() == 2 => {
                    let a = v[0].as_i64().ok_or_else(|| parse_err("precision entries must be integers"))?;
                    let b = v[1].as_i64().ok_or_else(|| parse_err("precision entries must be integers"))?;
                    Ok((a, b))
                }
                Value::Number(n) => {
                    let a = n.as_i64().ok_or_else(|| parse_err("precision must be an integer"))?;
                    Ok((a, 4 * a))
                }
                _ => Err(parse_err("laurent2 precision must be [n_t, n_u]")),
            }
        };
        let single = || self.precision.as_i64().ok_or_else(|| parse_err("precision must be an integer"));
        match self.kind.as_str() {
            "padic" => {
                let p = self.p.ok_or_else(|| parse_err("padic ring needs \"p\""))?;
                if p == 2 {
                    return RingConfig::two_adic(single()?);
                }
                RingConfig::padic(p, single()?)
            }
            "two_adic" => RingConfig::two_adic(single()?),
            "ramified2" => RingConfig::ramified2(single()?),
            "laurent2" => {
                let q = self.q.ok_or_else(|| parse_err("laurent2 ring needs \"q\""))?;
                let (a, b) = pair()?;
                RingConfig::laurent2(q, a, b)
            }
            other => Err(parse_err(format!("unknown ring kind {other:?}"))),
        }
    }
}

fn big_from_value(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| parse_err(format!("{n} is not an integer"))),
        Value::String(s) => s.trim().parse::<BigInt>().map_err(|_| parse_err(format!("{s:?} is not an integer"))),
        _ => Err(parse_err(format!("expected an integer, got {v}"))),
    }
}

fn big_to_value(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(k) if k.unsigned_abs() < (1 << 53) => json!(k),
        _ => json!(n.to_string()),
    }
}

pub fn elem_from_json(cfg: RingConfig, v: &Value) -> Result<RingElem> {
    match cfg.kind {
        RingKind::Padic { .. } | RingKind::TwoAdic => {
            if let Value::String(s) = v {
                if let Some((num, den)) = s.split_once('/') {
                    let n: BigInt = num.trim().parse().map_err(|_| parse_err(format!("bad numerator in {s:?}")))?;
                    let k: i64 = den
                        .trim()
                        .rsplit_once('^')
                        .and_then(|(_, k)| k.parse().ok())
                        .ok_or_else(|| parse_err(format!("denominator of {s:?} must read p^k")))?;
                    return RingElem::from_int(cfg, &n).checked_div(&RingElem::sigma(cfg, Val::Fin(k))?);
                }
            }
            Ok(RingElem::from_int(cfg, &big_from_value(v)?))
        }
        RingKind::Ramified2 => {
            let arr = v.as_array().ok_or_else(|| parse_err("ramified2 elements are [a, b]"))?;
            if arr.len() != 2 && arr.len() != 3 {
                return Err(parse_err("ramified2 elements are [a, b]"));
            }
            let e = RingElem::from_pair(cfg, &big_from_value(&arr[0])?, &big_from_value(&arr[1])?)?;
            match arr.get(2) {
                None => Ok(e),
                Some(k) => {
                    let k = k.as_i64().ok_or_else(|| parse_err("denominator exponent must be an integer"))?;
                    e.checked_div(&RingElem::sigma(cfg, Val::Fin(k))?)
                }
            }
        }
        RingKind::Laurent2 { .. } => {
            let outer = v.as_object().ok_or_else(|| parse_err("laurent2 elements are {t: {u: digit}}"))?;
            let mut terms = Vec::new();
            for (ts, inner) in outer {
                let a: i64 = ts.parse().map_err(|_| parse_err(format!("bad t-exponent {ts:?}")))?;
                let inner = inner.as_object().ok_or_else(|| parse_err("inner map must be {u: digit}"))?;
                for (us, d) in inner {
                    let b: i64 = us.parse().map_err(|_| parse_err(format!("bad u-exponent {us:?}")))?;
                    let d = d.as_i64().ok_or_else(|| parse_err("digits must be integers"))?;
                    terms.push((a, b, d));
                }
            }
            RingElem::from_terms(cfg, &terms)
        }
    }
}

pub fn elem_to_json(x: &RingElem) -> Value {
    let cfg = x.config();
    match cfg.kind {
        RingKind::Padic { .. } | RingKind::TwoAdic => {
            let (n, den) = x.to_fraction().expect("integer backend");
            if den == 0 {
                big_to_value(&n)
            } else {
                json!(format!("{n}/{}^{den}", cfg.residue_char()))
            }
        }
        RingKind::Ramified2 => {
            let ((a, b), den) = x.to_pair_fraction().expect("ramified backend");
            if den == 0 {
                json!([big_to_value(&a), big_to_value(&b)])
            } else {
                json!([big_to_value(&a), big_to_value(&b), den])
            }
        }
        RingKind::Laurent2 { .. } => {
            let mut outer: BTreeMap<i64, BTreeMap<i64, u64>> = BTreeMap::new();
            for (a, b, d) in x.terms().expect("laurent backend") {
                outer.entry(a).or_default().insert(b, d);
            }
            let obj: serde_json::Map<String, Value> = outer
                .into_iter()
                .map(|(a, inner)| {
                    let m: serde_json::Map<String, Value> = inner.into_iter().map(|(b, d)| (b.to_string(), json!(d))).collect();
                    (a.to_string(), Value::Object(m))
                })
                .collect();
            Value::Object(obj)
        }
    }
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(elem_to_json).collect())).collect())
}

pub fn matrix_from_json(cfg: RingConfig, v: &Value) -> Result<Matrix> {
    let rows = v.as_array().ok_or_else(|| parse_err("matrix must be a list of rows"))?;
    let rows = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| parse_err("matrix rows must be lists"))?
                .iter()
                .map(|e| elem_from_json(cfg, e))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(cfg, rows).map_err(|_| parse_err("ragged matrix"))
}

/// `{"ring": {...}, "gram": [[...]]}`.
pub fn lattice_to_json(m: &GramLattice) -> Value {
    json!({ "ring": RingSpec::from_config(m.ring()), "gram": matrix_to_json(m.gram()) })
}

/// Parses a lattice document; `ring_override` replaces the document's ring.
pub fn lattice_from_json(v: &Value, ring_override: Option<RingConfig>) -> Result<GramLattice> {
    let cfg = match ring_override {
        Some(c) => c,
        None => {
            let spec: RingSpec = serde_json::from_value(v.get("ring").cloned().ok_or_else(|| parse_err("missing \"ring\""))?)
                .map_err(|e| parse_err(format!("bad ring: {e}")))?;
            spec.to_config()?
        }
    };
    let gram = matrix_from_json(cfg, v.get("gram").ok_or_else(|| parse_err("missing \"gram\""))?)?;
    if !gram.is_square() {
        return Err(parse_err("Gram matrix must be square"));
    }
    GramLattice::new(gram)
}

pub fn lattice_from_str(s: &str, ring_override: Option<RingConfig>) -> Result<GramLattice> {
    let v: Value = serde_json::from_str(s).map_err(|e| parse_err(format!("invalid JSON: {e}")))?;
    lattice_from_json(&v, ring_override)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let cfgs = [
            RingConfig::padic(3, 20).unwrap(),
            RingConfig::two_adic(20).unwrap(),
            RingConfig::ramified2(20).unwrap(),
            RingConfig::laurent2(5, 4, 12).unwrap(),
        ];
        for cfg in cfgs {
            let m = GramLattice::from_i64(cfg, &[vec![2, 1], vec![1, -4]]).unwrap();
            let back = lattice_from_json(&lattice_to_json(&m), None).unwrap();
            assert!(back.approx_eq(&m), "{}", cfg.name());
            assert_eq!(back.ring(), cfg);
        }
    }

    #[test]
    fn parses_backend_encodings() {
        let doc = r#"{"ring": {"kind": "ramified2", "precision": 16}, "gram": [[[0, 1], [1, 0]], [[1, 0], [2, 0]]]}"#;
        let m = lattice_from_str(doc, None).unwrap();
        assert_eq!(m.entry(0, 0).valuation().unwrap(), Val::Fin(1));
        let doc = r#"{"ring": {"kind": "laurent2", "q": 3, "precision": [3, 8]}, "gram": [[{"0": {"0": 1}}, {}], [{}, {"1": {"-2": 2}}]]}"#;
        let m = lattice_from_str(doc, None).unwrap();
        assert_eq!(m.entry(1, 1).valuation().unwrap(), Val::Pair(1, -2));
        let c = RingConfig::padic(3, 10).unwrap();
        let x = elem_from_json(c, &json!("5/3^2")).unwrap();
        assert_eq!(x.valuation().unwrap(), Val::Fin(-2));
        assert_eq!(elem_to_json(&x), json!("5/3^2"));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(lattice_from_str("{", None), Err(Error::Parse(_))));
        assert!(matches!(lattice_from_str(r#"{"ring": {"kind": "nope", "precision": 3}, "gram": []}"#, None), Err(Error::Parse(_))));
        assert!(lattice_from_str(r#"{"ring": {"kind": "two_adic", "precision": 8}, "gram": [["1", "2"], ["3", "1"]]}"#, None).is_err());
    }
}
