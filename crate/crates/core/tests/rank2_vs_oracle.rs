use std::time::Instant;

use valform::oracle::{isometric_prepared, Prepared, Quotient, SearchMode};
use valform::rank2::{decide_rank2, maximal_norm_search, supported_regime, Rank2Form};
use valform::{Error, RingConfig, RingElem};

#[test]
fn rank2_decisions_match_oracle_mod_32() {
    let cfg = RingConfig::two_adic(40).unwrap();
    let q = Quotient::new(cfg, 5).unwrap();
    let mut forms = Vec::new();
    for a in 0..16i64 {
        for b in 0..16i64 {
            let Ok(f) = Rank2Form::from_i64(cfg, a, b) else { continue };
            if f.alpha.to_int() != Some(a.into()) {
                continue;
            }
            let m = maximal_norm_search(&f).unwrap();
            if supported_regime(&m).is_err() {
                continue;
            }
            let p = Prepared::new(&q, &f.lattice()).unwrap();
            forms.push((a, b, f, p));
        }
    }
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut pairs = 0;
    for i in 0..forms.len() {
        for j in i..forms.len() {
            let (a, b, f, pf) = &forms[i];
            let (c, d, g, pg) = &forms[j];
            let ours = match decide_rank2(f, g) {
                Ok(x) => x.isomorphic,
                Err(Error::UnsupportedRegime(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            pairs += 1;
            let o = isometric_prepared(&q, pf, pg, SearchMode::Exhaustive);
            assert!(o.is_yes() || o.is_no(), "oracle undecided");
            if o.is_yes() != ours {
                bad.push(format!("M({a},{b}) vs M({c},{d}): ours {ours}, oracle {}", o.is_yes()));
            }
        }
    }
    eprintln!("{} forms, {pairs} pairs, {:?}", forms.len(), start.elapsed());
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn ramified_rank2_decisions_match_oracle() {
    let cfg = RingConfig::ramified2(40).unwrap();
    let q = Quotient::new(cfg, 5).unwrap();
    let elems: Vec<RingElem> = (0..4i64).flat_map(|a| (0..4i64).map(move |b| (a, b))).map(|(a, b)| RingElem::from_pair(cfg, &a.into(), &b.into()).unwrap()).collect();
    let mut forms = Vec::new();
    for a in &elems {
        for b in &elems {
            let Ok(f) = Rank2Form::new(a.clone(), b.clone()) else { continue };
            let m = maximal_norm_search(&f).unwrap();
            if supported_regime(&m).is_err() {
                continue;
            }
            let p = Prepared::new(&q, &f.lattice()).unwrap();
            forms.push((f, p));
        }
    }
    let (mut bad, mut pairs, mut yes) = (Vec::new(), 0, 0);
    for i in 0..forms.len() {
        for j in i..forms.len() {
            let (f, pf) = &forms[i];
            let (g, pg) = &forms[j];
            let ours = match decide_rank2(f, g) {
                Ok(x) => x.isomorphic,
                Err(Error::UnsupportedRegime(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            pairs += 1;
            let o = isometric_prepared(&q, pf, pg, SearchMode::Exhaustive);
            assert!(o.is_yes() || o.is_no(), "oracle undecided");
            yes += o.is_yes() as usize;
            if o.is_yes() != ours {
                bad.push(format!("{f} vs {g}: ours {ours}, oracle {}", o.is_yes()));
            }
        }
    }
    eprintln!("{} forms, {pairs} pairs, {yes} isometric", forms.len());
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}
