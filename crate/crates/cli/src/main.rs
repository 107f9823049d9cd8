use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use valform::canonical::{canonicalize, jordan_invariants, BlockForm, Presentation};
use valform::classify_odd::{isomorphic_odd, symbol};
use valform::encode::{elem_to_json, matrix_to_json, RingSpec};
use valform::error::Error;
use valform::jordan::{jordan_decompose, verify_decomposition};
use valform::lattice::GramLattice;
use valform::matrix::Matrix;
use valform::oracle::{certify, certifying_level, oracle_isometric_mod, OracleResult};
use valform::rank2::{arf_invariant, decide_rank2, minimal_norm_class, normalize_rank2, supported_regime};
use valform::valuation::{RingConfig, Val};

#[derive(Parser)]
#[command(name = "valform", version, about = "Lattices over valuation rings: Jordan forms, symbols, Arf invariants, isometries")]
struct Cli {
    /// Ring override: padic:<p>, two_adic, ramified2 or laurent2:<q>.
    #[arg(long, global = true)]
    ring: Option<String>,
    /// Precision cap: an integer, or <n_t>,<n_u> for laurent2.
    #[arg(long, global = true)]
    precision: Option<String>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jordan decomposition and its invariants.
    Jordan { file: PathBuf },
    /// Symbol of a lattice over an odd residue characteristic.
    Symbol { file: PathBuf },
    /// Generalized and fine Arf invariants of a rank-2 unimodular lattice.
    Arf { file: PathBuf },
    /// Isomorphism decision with a witness or an obstruction.
    Isom { a: PathBuf, b: PathBuf },
    /// Canonical presentation and the transcript of rewrites.
    Canon { file: PathBuf },
    /// Cross-check `isom` against the brute-force oracle modulo pi^k.
    Verify {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        k: i64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Jordan { .. } => "jordan",
            Command::Symbol { .. } => "symbol",
            Command::Arf { .. } => "arf",
            Command::Isom { .. } => "isom",
            Command::Canon { .. } => "canon",
            Command::Verify { .. } => "verify",
        }
    }
}

/// Successful command output.
#[derive(Default)]
struct Report {
    text: Vec<String>,
    result: Value,
    witness: Option<Value>,
    obstruction: Option<String>,
}

enum Failure {
    Input(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

struct Loader {
    ring: Option<String>,
    precision: Option<String>,
    used: Option<RingConfig>,
}

fn parse_precision(s: &str) -> Outcome<Value> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let nums: Vec<i64> = parts.iter().map(|p| p.parse::<i64>()).collect::<std::result::Result<_, _>>().map_err(|_| Failure::Input(format!("bad precision {s:?}")))?;
    Ok(match nums.as_slice() {
        [n] => json!(n),
        [a, b] => json!([a, b]),
        _ => return Err(Failure::Input(format!("bad precision {s:?}"))),
    })
}

fn parse_ring(s: &str, precision: Value) -> Outcome<RingSpec> {
    let (kind, arg) = match s.split_once(':') {
        Some((k, a)) => (k, Some(a.parse::<u64>().map_err(|_| Failure::Input(format!("bad ring parameter in {s:?}")))?)),
        None => (s, None),
    };
    let (p, q) = match kind {
        "padic" => (Some(arg.ok_or_else(|| Failure::Input("padic needs a prime: padic:<p>".into()))?), None),
        "laurent2" => (None, Some(arg.ok_or_else(|| Failure::Input("laurent2 needs a residue field size: laurent2:<q>".into()))?)),
        "two_adic" | "ramified2" => (None, None),
        other => return Err(Failure::Input(format!("unknown ring {other:?}"))),
    };
    Ok(RingSpec { kind: kind.into(), p, q, precision })
}

impl Loader {
    fn load(&mut self, path: &PathBuf) -> Outcome<GramLattice> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let doc: Value = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: invalid JSON: {e}", path.display())))?;
        let doc_spec = match doc.get("ring") {
            Some(r) => Some(serde_json::from_value::<RingSpec>(r.clone()).map_err(|e| Failure::Input(format!("{}: bad ring: {e}", path.display())))?),
            None => None,
        };
        let precision = match (&self.precision, &doc_spec) {
            (Some(p), _) => parse_precision(p)?,
            (None, Some(d)) => d.precision.clone(),
            (None, None) => json!(40),
        };
        let mut spec = match (&self.ring, doc_spec) {
            (Some(r), _) => parse_ring(r, precision.clone())?,
            (None, Some(d)) => d,
            (None, None) => return Err(Failure::Input(format!("{}: no ring given (use --ring)", path.display()))),
        };
        spec.precision = precision;
        let cfg = spec.to_config()?;
        if let Some(prev) = self.used {
            if prev.kind != cfg.kind {
                return Err(Failure::Input(format!("lattices live over different rings: {} and {}", prev.name(), cfg.name())));
            }
        }
        self.used = Some(cfg);
        Ok(valform::encode::lattice_from_json(&doc, Some(cfg))?)
    }
}

fn presentation_json(p: &Presentation) -> Value {
    let blocks: Vec<Value> = p
        .blocks
        .iter()
        .map(|b| {
            json!({
                "scale_valuation": b.scale_valuation.to_string(),
                "form": match b.form { BlockForm::Diagonal => "diagonal", BlockForm::Rank2Sum => "rank2_sum" },
                "unimodular_gram": matrix_to_json(&b.unimodular),
            })
        })
        .collect();
    json!({ "display": p.to_string(), "blocks": blocks })
}

fn val_json(v: Val) -> Value {
    json!(v.to_string())
}

fn cmd_jordan(m: &GramLattice) -> Outcome<Report> {
    let d = jordan_decompose(m)?;
    verify_decomposition(m, &d)?;
    let inv = jordan_invariants(m)?;
    let mut text = Vec::new();
    let mut blocks = Vec::new();
    for (b, i) in d.blocks.iter().zip(&inv.blocks) {
        let norms = i.small_norms.as_ref().map(|s| s.iter().copied().collect::<Vec<_>>());
        text.push(format!(
            "block v={} rank={} diagonalizable={} gap={} unimodular part {}",
            b.scale_valuation,
            b.rank(),
            i.diagonalizable,
            i.gap,
            b.unimodular_gram.gram()
        ));
        blocks.push(json!({
            "scale_valuation": val_json(b.scale_valuation),
            "rank": b.rank(),
            "diagonalizable": i.diagonalizable,
            "gap": val_json(i.gap),
            "small_norm_residues": norms,
            "unimodular_gram": matrix_to_json(b.unimodular_gram.gram()),
        }));
    }
    Ok(Report { text, result: json!({ "blocks": blocks }), witness: Some(matrix_to_json(&d.transition)), obstruction: None })
}

fn cmd_symbol(m: &GramLattice) -> Outcome<Report> {
    let s = symbol(m)?;
    let entries: Vec<Value> = s.entries.iter().map(|e| json!({ "scale_valuation": val_json(e.scale_valuation), "rank": e.rank, "sign": e.sign })).collect();
    Ok(Report { text: vec![s.to_string()], result: json!({ "symbol": s.to_string(), "entries": entries }), ..Default::default() })
}

fn cmd_arf(m: &GramLattice) -> Outcome<Report> {
    if m.rank() != 2 || !m.is_unimodular()? {
        return Err(Failure::Input("arf needs a rank-2 unimodular lattice".into()));
    }
    let f = normalize_rank2(m)?;
    let (arf, max) = arf_invariant(&f)?;
    supported_regime(&max)?;
    let mut text = vec![format!("normalized {f}"), format!("maximal beta {} ({:?})", max.form, max.certificate), format!("Arf invariant: {arf}")];
    let mut result = json!({
        "normalized": { "alpha": elem_to_json(&f.alpha), "beta": elem_to_json(&f.beta) },
        "maximal": { "alpha": elem_to_json(&max.form.alpha), "beta": elem_to_json(&max.form.beta), "t": elem_to_json(&max.t), "certificate": format!("{:?}", max.certificate) },
        "arf": { "kind": arf.kind.to_string(), "valuation": val_json(arf.valuation), "representative": elem_to_json(&arf.representative), "display": arf.to_string() },
        "isotropic": max.isotropic(),
    });
    if !max.isotropic() {
        let c = minimal_norm_class(&max.form)?;
        text.push(format!("minimal norm class: {}{}", c.coarse, if c.refined.is_some() { " (refined by the Arf product)" } else { "" }));
        result["minimal_norm"] = json!({ "alpha": elem_to_json(&c.coarse), "refined": c.refined.is_some() });
    }
    Ok(Report { text, result, ..Default::default() })
}

/// Single uni-valued rank-2 block, as its unimodular part.
fn rank2_part(m: &GramLattice) -> Outcome<Option<(Val, GramLattice)>> {
    let d = jordan_decompose(m)?;
    Ok(match d.blocks.as_slice() {
        [b] if b.rank() == 2 => Some((b.scale_valuation, b.unimodular_gram.clone())),
        _ => None,
    })
}

/// Decision and its justification.
fn decide(a: &GramLattice, b: &GramLattice) -> Outcome<(bool, String)> {
    if a.rank() != b.rank() {
        return Ok((false, format!("ranks differ ({} vs {})", a.rank(), b.rank())));
    }
    let cfg = a.ring();
    if cfg.residue_char() != 2 {
        let (sa, sb) = (symbol(a)?, symbol(b)?);
        let same = isomorphic_odd(a, b)?;
        return Ok((same, if same { format!("same symbol {sa}") } else { format!("symbols differ ({sa} vs {sb})") }));
    }
    match (rank2_part(a)?, rank2_part(b)?) {
        (Some((va, ua)), Some((vb, ub))) => {
            if va != vb {
                return Ok((false, format!("scale valuations differ ({va} vs {vb})")));
            }
            let d = decide_rank2(&normalize_rank2(&ua)?, &normalize_rank2(&ub)?)?;
            Ok((d.isomorphic, d.reason))
        }
        _ => Err(Failure::Lib(Error::UnsupportedRegime("residue characteristic 2 is classified for rank-2 uni-valued lattices only; try `verify`".into()))),
    }
}

/// An exact isometry from the oracle, when the certifying quotient is small.
fn find_witness(a: &GramLattice, b: &GramLattice) -> Option<Matrix> {
    let k = certifying_level(b).ok()?;
    match oracle_isometric_mod(a, b, k).ok()? {
        OracleResult::Yes(t) => certify(a, b, &t, k).ok(),
        _ => None,
    }
}

fn cmd_isom(a: &GramLattice, b: &GramLattice) -> Outcome<Report> {
    let (same, reason) = decide(a, b)?;
    if same {
        let witness = find_witness(a, b);
        let mut text = vec![format!("isomorphic: {reason}")];
        if let Some(w) = &witness {
            text.push(format!("witness (columns: basis of B in A-coordinates) {w}"));
        }
        Ok(Report { text, result: json!({ "isomorphic": true, "reason": reason }), witness: witness.as_ref().map(matrix_to_json), obstruction: None })
    } else {
        Ok(Report { text: vec![format!("not isomorphic: {reason}")], result: json!({ "isomorphic": false, "reason": reason }), witness: None, obstruction: Some(reason) })
    }
}

fn cmd_canon(m: &GramLattice) -> Outcome<Report> {
    let c = canonicalize(m)?;
    let mut text = vec![format!("canonical: {}", c.presentation)];
    let mut steps = Vec::new();
    for (i, s) in c.transcript.iter().enumerate() {
        text.push(format!("step {}: {} -> {}", i + 1, s.description, s.presentation));
        steps.push(json!({ "description": s.description, "presentation": presentation_json(&s.presentation), "basis": matrix_to_json(&s.presentation.basis) }));
    }
    Ok(Report {
        text,
        result: json!({ "presentation": presentation_json(&c.presentation), "transcript": steps }),
        witness: Some(matrix_to_json(&c.presentation.basis)),
        obstruction: None,
    })
}

fn cmd_verify(a: &GramLattice, b: &GramLattice, k: i64) -> Outcome<Report> {
    if k < 1 {
        return Err(Failure::Input("--k must be positive".into()));
    }
    let decision = match decide(a, b) {
        Ok(d) => Some(d),
        Err(Failure::Lib(Error::UnsupportedRegime(_))) => None,
        Err(e) => return Err(e),
    };
    let oracle = oracle_isometric_mod(a, b, k)?;
    let (label, witness) = match &oracle {
        OracleResult::Yes(t) => ("congruent", Some(matrix_to_json(t))),
        OracleResult::No(r) => (if matches!(r, valform::oracle::NoReason::Rank) { "ranks differ" } else { "not congruent" }, None),
        OracleResult::Unknown => ("unknown (search budget exhausted)", None),
    };
    // A congruence below the certifying level is necessary but not sufficient.
    let agrees = match (&decision, &oracle) {
        (Some((true, _)), OracleResult::No(_)) => Some(false),
        (Some((false, _)), OracleResult::Yes(_)) => certifying_level(b).ok().map(|c| k < c),
        (Some(_), OracleResult::Unknown) | (None, _) => None,
        _ => Some(true),
    };
    let mut text = vec![format!("oracle mod pi^{k}: {label}")];
    match &decision {
        Some((d, r)) => text.push(format!("isom: {} ({r})", if *d { "isomorphic" } else { "not isomorphic" })),
        None => text.push("isom: unsupported regime".into()),
    }
    text.push(format!("agreement: {}", agrees.map_or("undetermined".to_string(), |x| x.to_string())));
    let obstruction = match agrees {
        Some(false) => Some("isom and oracle disagree".to_string()),
        _ => None,
    };
    Ok(Report {
        text,
        result: json!({ "oracle": label, "k": k, "isomorphic": decision.as_ref().map(|d| d.0), "agreement": agrees }),
        witness,
        obstruction,
    })
}

fn precision_json(cfg: Option<RingConfig>) -> Value {
    cfg.map_or(Value::Null, |c| RingSpec::from_config(c).precision)
}

fn doubled_cap(cfg: Option<RingConfig>) -> String {
    match cfg.map(|c| c.precision) {
        Some(Val::Fin(n)) => (2 * n).to_string(),
        Some(Val::Pair(a, b)) => format!("{},{}", 2 * a, 2 * b),
        _ => "80".to_string(),
    }
}

fn run(cli: Cli) -> u8 {
    let mut loader = Loader { ring: cli.ring.clone(), precision: cli.precision.clone(), used: None };
    let name = cli.command.name();
    let outcome = (|| -> Outcome<Report> {
        match &cli.command {
            Command::Jordan { file } => cmd_jordan(&loader.load(file)?),
            Command::Symbol { file } => cmd_symbol(&loader.load(file)?),
            Command::Arf { file } => cmd_arf(&loader.load(file)?),
            Command::Canon { file } => cmd_canon(&loader.load(file)?),
            Command::Isom { a, b } => {
                let (a, b) = (loader.load(a)?, loader.load(b)?);
                cmd_isom(&a, &b)
            }
            Command::Verify { a, b, k } => {
                let (a, b) = (loader.load(a)?, loader.load(b)?);
                cmd_verify(&a, &b, *k)
            }
        }
    })();
    let precision_used = precision_json(loader.used);
    match outcome {
        Ok(r) => {
            if cli.json {
                let mut out = Map::new();
                out.insert("command".into(), json!(name));
                out.insert("result".into(), r.result);
                if let Some(w) = r.witness {
                    out.insert("witness".into(), w);
                }
                if let Some(o) = r.obstruction {
                    out.insert("obstruction".into(), json!(o));
                }
                out.insert("precision_used".into(), precision_used);
                println!("{}", Value::Object(out));
            } else {
                for line in r.text {
                    println!("{line}");
                }
            }
            0
        }
        Err(f) => {
            let (code, kind, msg, retry) = match f {
                Failure::Input(m) => (1, "input", m, None),
                Failure::Lib(e @ Error::UnsupportedRegime(_)) => (2, "unsupported_regime", e.to_string(), None),
                Failure::Lib(e @ Error::IndeterminateValuation(_)) => (3, "indeterminate_valuation", e.to_string(), Some(doubled_cap(loader.used))),
                Failure::Lib(e) => (1, "input", e.to_string(), None),
            };
            if cli.json {
                let mut err = json!({ "kind": kind, "message": msg });
                if let Some(p) = &retry {
                    err["retry_precision"] = json!(p);
                }
                println!("{}", json!({ "command": name, "result": Value::Null, "error": err, "precision_used": precision_used }));
            } else {
                eprintln!("error: {msg}");
            }
            if let Some(p) = retry {
                eprintln!("hint: retry with --precision {p}");
            }
            code
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}
