//! Acceptance run: one PASS/FAIL line per criterion, thresholds pinned below.

mod common;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use valform::canonical::{canonical_compare, canonicalize, present, Comparison};
use valform::classify_odd::{isomorphic_odd, symbol};
use valform::hensel::{solve_quadratic, sqrt_one_plus, Branch};
use valform::isometry::{congruent_mod_v2, lift_isometry, lift_tolerance};
use valform::jordan::{jordan_decompose, verify_decomposition};
use valform::lattice::GramLattice;
use valform::oracle::{isometric_prepared, oracle_isometric_mod, OracleResult, Prepared, Quotient, SearchMode};
use valform::rank2::{arf_invariant, decide_rank2, in_s, maximal_norm_search, normalize_rank2, Rank2Form};
use valform::valuation::Val;
use valform::{Error, RingConfig, RingElem};

const JORDAN_PER_BACKEND: usize = 500;
const JORDAN_TIME: Duration = Duration::from_secs(10);
const SYMBOL_LEVEL: i64 = 4;
const SYMBOL_TIME: Duration = Duration::from_secs(300);
const WITT_TRIPLES: usize = 200;
const LIFTS_PER_BACKEND: usize = 200;
const RANK2_LEVEL: i64 = 5;
const RANK2_TIME: Duration = Duration::from_secs(600);
const ARF_CHANGES: usize = 500;
const S_PAIRS: usize = 1000;
const CANON_LEVEL: i64 = 5;
const HENSEL_PER_BACKEND: usize = 1000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn jordan_validity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = Vec::new();
    let mut elapsed = Duration::ZERO;
    let mut checked = 0;
    for cfg in common::backends() {
        for _ in 0..JORDAN_PER_BACKEND {
            let n = rng.gen_range(1..=4);
            let m = common::lattice(&mut rng, cfg, n);
            let start = Instant::now();
            let res = jordan_decompose(&m).and_then(|d| {
                verify_decomposition(&m, &d)?;
                let uni = d.blocks.iter().map(|b| b.unimodular_gram.is_unimodular()).collect::<Result<Vec<bool>, _>>()?;
                Ok(uni.into_iter().all(|u| u))
            });
            elapsed += start.elapsed();
            checked += 1;
            match res {
                Ok(true) => {}
                Ok(false) => failures.push(format!("{m}: a component is not uni-valued")),
                Err(e) => failures.push(format!("{m}: {e}")),
            }
        }
    }
    let pass = failures.is_empty() && elapsed < JORDAN_TIME;
    outcome(pass, format!("{checked} lattices over 4 backends, {} failures, {:.2?} (limit {JORDAN_TIME:?}){}", failures.len(), elapsed, first(&failures)))
}

fn first(v: &[String]) -> String {
    v.first().map(|s| format!("; first: {s}")).unwrap_or_default()
}

/// Every pair of rank-3 diagonal lattices with entries in {1,2,3,6,9,18}.
///
/// The oracle's first test compares representation numbers, so lattices are
/// grouped by them and only pairs within a group reach the search.
fn odd_classification() -> Outcome {
    let start = Instant::now();
    let cfg = RingConfig::padic(3, 20).unwrap();
    let q = Quotient::new(cfg, SYMBOL_LEVEL).unwrap();
    let entries = [1i64, 2, 3, 6, 9, 18];
    let mut lats = Vec::new();
    for a in entries {
        for b in entries {
            for c in entries {
                lats.push(GramLattice::diagonal_i64(cfg, &[a, b, c]).unwrap());
            }
        }
    }
    let symbols: Vec<_> = lats.iter().map(|m| symbol(m).unwrap()).collect();
    let mut groups: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    for (i, m) in lats.iter().enumerate() {
        let p = Prepared::new(&q, m).unwrap();
        groups.entry(p.representation_counts().to_vec()).or_default().push(i);
    }
    let mut group_of = vec![0usize; lats.len()];
    let group_list: Vec<Vec<usize>> = groups.into_values().collect();
    for (g, members) in group_list.iter().enumerate() {
        for &i in members {
            group_of[i] = g;
        }
    }
    let (mut pairs, mut searched, mut isometric) = (0usize, 0usize, 0usize);
    let mut bad = Vec::new();
    // Pairs in different groups: the oracle answers "no" from the counts.
    for i in 0..lats.len() {
        for j in (i + 1)..lats.len() {
            if group_of[i] != group_of[j] {
                pairs += 1;
                if symbols[i] == symbols[j] {
                    bad.push(format!("{} vs {}: same symbol, different representation numbers", lats[i], lats[j]));
                }
            }
        }
    }
    for members in &group_list {
        let prepared: Vec<Prepared> = members.iter().map(|&i| Prepared::new(&q, &lats[i]).unwrap()).collect();
        for a in 0..members.len() {
            for b in (a + 1)..members.len() {
                let (i, j) = (members[a], members[b]);
                pairs += 1;
                searched += 1;
                let verdict = match isometric_prepared(&q, &prepared[a], &prepared[b], SearchMode::Exhaustive) {
                    OracleResult::Yes(_) => true,
                    OracleResult::No(_) => false,
                    OracleResult::Unknown => {
                        bad.push(format!("{} vs {}: oracle undecided", lats[i], lats[j]));
                        continue;
                    }
                };
                isometric += verdict as usize;
                if verdict != (symbols[i] == symbols[j]) {
                    bad.push(format!("{} vs {}: oracle {verdict}, symbols {} / {}", lats[i], lats[j], symbols[i], symbols[j]));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && elapsed < SYMBOL_TIME,
        format!("{} lattices, {pairs} pairs ({searched} searched, {isometric} isometric), {} disagreements, {elapsed:.2?} (limit {SYMBOL_TIME:?}){}", lats.len(), bad.len(), first(&bad)),
    )
}

fn witt_cancellation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rings = [RingConfig::padic(3, 24).unwrap(), RingConfig::padic(5, 24).unwrap()];
    let mut bad = Vec::new();
    let mut positives = 0;
    for i in 0..WITT_TRIPLES {
        let cfg = rings[i % 2];
        let n = rng.gen_range(1..=2);
        let m = common::lattice(&mut rng, cfg, n);
        // Half the time N is M in another basis, so both answers occur.
        let nn = if rng.gen_bool(0.5) { m.change_basis(&common::unimodular(&mut rng, cfg, n)).unwrap() } else { common::lattice(&mut rng, cfg, n) };
        let ln = rng.gen_range(1..=2);
        let l = common::lattice(&mut rng, cfg, ln);
        let small = isomorphic_odd(&m, &nn).unwrap();
        let big = isomorphic_odd(&m.direct_sum(&l).unwrap(), &nn.direct_sum(&l).unwrap()).unwrap();
        positives += small as usize;
        if small != big {
            bad.push(format!("{m} / {nn} / {l}"));
        }
    }
    outcome(bad.is_empty(), format!("{WITT_TRIPLES} triples over padic(3)/padic(5), {positives} isometric, {} violations{}", bad.len(), first(&bad)))
}

fn isometry_lifting() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = Vec::new();
    let mut total = 0;
    for cfg in common::backends() {
        for _ in 0..LIFTS_PER_BACKEND {
            let n = rng.gen_range(1..=3);
            let m = common::lattice(&mut rng, cfg, n);
            let t = common::unimodular(&mut rng, cfg, n);
            let nn = m.change_basis(&t).unwrap();
            let tol = lift_tolerance(&m).unwrap();
            let mut phi = t.clone();
            for i in 0..n {
                for j in 0..n {
                    phi[(i, j)] = &phi[(i, j)] + &common::at_least(&mut rng, cfg, tol + cfg.min_positive());
                }
            }
            total += 1;
            let res = lift_isometry(&nn, &m, &phi).and_then(|psi| Ok(m.gram().congruence(&psi).approx_eq(nn.gram()) && congruent_mod_v2(&psi, &phi)?));
            match res {
                Ok(true) => {}
                Ok(false) => bad.push(format!("{}: lifted map is wrong for {m}", cfg.name())),
                Err(e) => bad.push(format!("{}: {m}: {e}", cfg.name())),
            }
        }
    }
    outcome(bad.is_empty(), format!("{total} instances over 4 backends, {} failures{}", bad.len(), first(&bad)))
}

/// Supported regime without the `v(alpha beta) = v(2)` extension.
fn in_stated_regime(f: &Rank2Form) -> bool {
    let v2 = f.ring().v2();
    let Ok(m) = maximal_norm_search(f) else { return false };
    if m.isotropic() {
        return true;
    }
    let beta_ok = m.form.beta.val_ge(v2).unwrap_or(false);
    let arf_ok = m.form.arf_product().val_gt(v2).unwrap_or(false);
    beta_ok && arf_ok
}

fn rank2_decisions() -> Outcome {
    let start = Instant::now();
    let cfg = RingConfig::two_adic(40).unwrap();
    let q = Quotient::new(cfg, RANK2_LEVEL).unwrap();
    let mut forms = Vec::new();
    for a in 0..16i64 {
        for b in 0..16i64 {
            let Ok(f) = Rank2Form::from_i64(cfg, a, b) else { continue };
            if f.alpha.to_int() != Some(a.into()) || !in_stated_regime(&f) {
                continue;
            }
            forms.push((a, b, Prepared::new(&q, &f.lattice()).unwrap(), f));
        }
    }
    let (mut pairs, mut yes) = (0, 0);
    let mut bad = Vec::new();
    for i in 0..forms.len() {
        for j in i..forms.len() {
            let (a, b, pf, f) = &forms[i];
            let (c, d, pg, g) = &forms[j];
            pairs += 1;
            let ours = match decide_rank2(f, g) {
                Ok(x) => x.isomorphic,
                Err(e) => {
                    bad.push(format!("M({a},{b}) vs M({c},{d}): {e}"));
                    continue;
                }
            };
            let oracle = match isometric_prepared(&q, pf, pg, SearchMode::Exhaustive) {
                OracleResult::Yes(_) => true,
                OracleResult::No(_) => false,
                OracleResult::Unknown => {
                    bad.push(format!("M({a},{b}) vs M({c},{d}): oracle undecided"));
                    continue;
                }
            };
            yes += oracle as usize;
            if ours != oracle {
                bad.push(format!("M({a},{b}) vs M({c},{d}): decision {ours}, oracle {oracle}"));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && elapsed < RANK2_TIME,
        format!("{} forms, {pairs} pairs ({yes} isometric), {} disagreements, {elapsed:.2?} (limit {RANK2_TIME:?}){}", forms.len(), bad.len(), first(&bad)),
    )
}

fn random_rank2<R: Rng>(rng: &mut R, cfg: RingConfig) -> Rank2Form {
    loop {
        let (va, vb) = (rng.gen_range(1..=3), rng.gen_range(1..=4));
        let a = common::at_least(rng, cfg, Val::Fin(va));
        let b = common::at_least(rng, cfg, Val::Fin(vb));
        let Ok(f) = Rank2Form::new(a, b) else { continue };
        match arf_invariant(&f) {
            Ok(_) => return f,
            Err(_) => continue,
        }
    }
}

fn arf_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bad = Vec::new();
    let rings = [RingConfig::two_adic(30).unwrap(), RingConfig::ramified2(30).unwrap()];
    for cfg in rings {
        for _ in 0..ARF_CHANGES {
            let f = random_rank2(&mut rng, cfg);
            let t = common::unimodular(&mut rng, cfg, 2);
            let res = (|| -> Result<bool, Error> {
                let g = normalize_rank2(&f.lattice().change_basis(&t)?)?;
                let ((af, _), (ag, _)) = (arf_invariant(&f)?, arf_invariant(&g)?);
                Ok(af.same_class(&ag)? && af.fine_equal(&ag)?.unwrap_or(true))
            })();
            match res {
                Ok(true) => {}
                Ok(false) => bad.push(format!("{f} changed class under {t}")),
                Err(e) => bad.push(format!("{f}: {e}")),
            }
        }
    }
    // S = {2t + t^2 : 2 v(t) > v(2)} is closed under sums and negation.
    let mut s_bad = 0;
    for i in 0..S_PAIRS {
        let cfg = rings[i % 2];
        let min_t = Val::Fin(cfg.v2().coords().unwrap()[0] / 2 + 1);
        let mut elem = || {
            let t = common::at_least(&mut rng, cfg, min_t);
            &t.square() + &t.mul_i64(2)
        };
        let (a, b) = (elem(), elem());
        let ok = [&a + &b, &a - &b, -a.clone()].iter().all(|x| in_s(x).unwrap_or(false));
        s_bad += (!ok) as usize;
    }
    outcome(
        bad.is_empty() && s_bad == 0,
        format!("{} basis changes, {} class changes; {S_PAIRS} S pairs, {s_bad} closure failures{}", 2 * ARF_CHANGES, bad.len(), first(&bad)),
    )
}

fn canonical_fixtures() -> Vec<GramLattice> {
    let c2 = RingConfig::two_adic(30).unwrap();
    let r2 = RingConfig::ramified2(30).unwrap();
    let pi = |a: i64, b: i64| RingElem::from_pair(r2, &a.into(), &b.into()).unwrap();
    let mut out: Vec<GramLattice> = [
        vec![3, 17],
        vec![1, 1],
        vec![3, 2],
        vec![1, 7],
        vec![3, 5],
        vec![3, 5, 2],
        vec![3, 3, 6],
        vec![5, 2, 4],
        vec![7, 12],
        vec![3, 11, 17],
    ]
    .iter()
    .map(|d| GramLattice::diagonal_i64(c2, d).unwrap())
    .collect();
    out.push(GramLattice::from_i64(c2, &[vec![2, 1, 0], vec![1, 2, 0], vec![0, 0, 3]]).unwrap());
    out.push(GramLattice::from_i64(c2, &[vec![2, 1, 0], vec![1, 4, 0], vec![0, 0, 6]]).unwrap());
    out.push(GramLattice::diagonal(r2, &[pi(1, 1), pi(3, 0)]).unwrap());
    out.push(GramLattice::diagonal(r2, &[pi(1, 1), pi(0, 1)]).unwrap());
    out.push(GramLattice::diagonal(r2, &[pi(3, 0), pi(1, 0), pi(0, 2)]).unwrap());
    out
}

fn canonicalization() -> Outcome {
    let mut bad = Vec::new();
    let (mut steps, mut fixtures) = (0, 0);
    for m in canonical_fixtures() {
        fixtures += 1;
        let res = (|| -> Result<Vec<String>, Error> {
            let mut issues = Vec::new();
            let c = canonicalize(&m)?;
            let mut prev = present(&m)?;
            for s in &c.transcript {
                steps += 1;
                s.presentation.check(&m)?;
                if !oracle_isometric_mod(&m, &s.presentation.lattice()?, CANON_LEVEL)?.is_yes() {
                    issues.push(format!("{m}: step '{}' not isometric mod pi^{CANON_LEVEL}", s.description));
                }
                if canonical_compare(&s.presentation, &prev)? != Comparison::Greater {
                    issues.push(format!("{m}: step '{}' does not improve", s.description));
                }
                prev = s.presentation.clone();
            }
            let again = canonicalize(&c.presentation.lattice()?)?;
            if !again.transcript.is_empty() || !again.presentation.gram()?.approx_eq(&c.presentation.gram()?) {
                issues.push(format!("{m}: not idempotent ({} vs {})", c.presentation, again.presentation));
            }
            Ok(issues)
        })();
        match res {
            Ok(issues) => bad.extend(issues),
            Err(e) => bad.push(format!("{m}: {e}")),
        }
    }
    outcome(bad.is_empty(), format!("{fixtures} fixtures, {steps} steps, {} problems{}", bad.len(), first(&bad)))
}

fn hensel_kernel() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = Vec::new();
    let mut total = 0;
    for cfg in common::backends() {
        let v2 = cfg.v2();
        let vals = common::block_valuations(cfg);
        let one = RingElem::one(cfg);
        for i in 0..HENSEL_PER_BACKEND {
            total += 1;
            let res = (|| -> Result<bool, Error> {
                if i % 2 == 0 {
                    let y = loop {
                        let y = common::at_least(&mut rng, cfg, v2.times(2) + cfg.min_positive());
                        if !y.is_zero_at_prec() {
                            break y;
                        }
                    };
                    let z = sqrt_one_plus(&y)?;
                    Ok((&one + &z).square().approx_eq(&(&one + &y)) && z.valuation()? == y.valuation()? - v2)
                } else {
                    let vb = vals[rng.gen_range(0..vals.len())];
                    let b = &RingElem::sigma(cfg, vb)? * &common::unit(&mut rng, cfg);
                    let a = common::small(&mut rng, cfg);
                    let c = &RingElem::sigma(cfg, vb.times(2) + cfg.min_positive())? * &common::unit(&mut rng, cfg);
                    let t = solve_quadratic(&a, &b, &c, Branch::Small)?;
                    let back = &(&(&a * &t.square()) + &(&b * &t)) + &c;
                    Ok(back.is_zero_at_prec() && t.valuation()? == c.valuation()? - b.valuation()?)
                }
            })();
            match res {
                Ok(true) => {}
                Ok(false) => bad.push(format!("{} instance {i}: contract violated", cfg.name())),
                Err(e) => bad.push(format!("{} instance {i}: {e}", cfg.name())),
            }
        }
    }
    outcome(bad.is_empty(), format!("{total} instances over 4 backends, {} failures{}", bad.len(), first(&bad)))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("Jordan validity", jordan_validity),
        ("odd-characteristic classification vs oracle", odd_classification),
        ("Witt cancellation", witt_cancellation),
        ("isometry lifting", isometry_lifting),
        ("rank-2 residue-characteristic-2 decision vs oracle", rank2_decisions),
        ("Arf invariance and S closure", arf_invariance),
        ("canonicalization soundness", canonicalization),
        ("Hensel kernel", hensel_kernel),
    ];
    // ACCEPTANCE_ONLY=2,4 runs a subset.
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.as_ref().is_some_and(|o| !o.contains(&(i + 1))) {
            continue;
        }
        let o = run();
        failed += (!o.pass) as usize;
        println!("criterion {} {}: {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
