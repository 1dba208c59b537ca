//! Thin command-line front end over the library. JSON in/out, CSV
//! catalogs, and the exit-code contract:
//! 0 = success, 1 = usage error, 2 = invalid input, 3 = the methods
//! disagree (adjudication path) or the self-check battery fails.

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use k3zd::arith::Place;
use k3zd::classify::{self, Answer, CaseMatch};
use k3zd::quadform::{self, IsotropyVerdict, QuadraticForm};
use k3zd::zariski::{self, Divisor, SurfaceLattice};
use k3zd::{hilbert, oracle, selfcheck, Int, Rat};

#[derive(Parser)]
#[command(name = "k3zd", version, about = "Exact isotropy, Zariski decompositions, and the six-case K3 lattice classifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Local Hilbert symbol (a, b)_v
    Hilbert {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// "inf" or a prime
        place: String,
        /// Print the full critical-place table and its product
        #[arg(long)]
        table: bool,
    },
    /// Quadratic form reports
    Form {
        #[command(subcommand)]
        command: FormCommand,
    },
    /// K3 lattice classification
    K3 {
        #[command(subcommand)]
        command: K3Command,
    },
    /// Zariski decomposition of an effective divisor
    Zariski {
        /// Lattice file: {"gram": [[...]], "labels": [...]?}
        file: String,
        /// Comma-separated integer coefficients, e.g. 1,1
        #[arg(long)]
        divisor: String,
    },
    /// Enumerate and classify admissible lattices
    Search {
        #[arg(long)]
        rho: usize,
        /// Largest half-entry (full entries are twice this)
        #[arg(long = "max-entry")]
        max_entry: i64,
        /// Restrict to one canonical case 1..=6
        #[arg(long)]
        case: Option<u8>,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the full regression battery
    Selfcheck,
}

#[derive(Subcommand)]
enum FormCommand {
    /// Signature, discriminant, local invariants, isotropy verdict
    Analyze(FormArgs),
}

#[derive(Subcommand)]
enum K3Command {
    /// Full verdict for one intersection matrix
    Classify(FormArgs),
}

#[derive(Args)]
struct FormArgs {
    /// JSON file: {"gram": [[...]]} or {"diag": [...]}
    file: String,
    /// Integer zero search height for the witness
    #[arg(long)]
    height: Option<u64>,
}

/// Errors that should surface as "invalid input" (exit 2).
struct InputError(String);

macro_rules! input_error_from {
    ($($ty:ty),*) => {$(
        impl From<$ty> for InputError {
            fn from(e: $ty) -> Self {
                InputError(e.to_string())
            }
        }
    )*};
}

input_error_from!(
    k3zd::Error,
    std::io::Error,
    serde_json::Error,
    num_bigint::ParseBigIntError
);

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's help/version are successes, everything else is usage
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, InputError> {
    match cli.command {
        Command::Hilbert { a, b, place, table } => {
            let a = parse_rat(&a)?;
            let b = parse_rat(&b)?;
            if table {
                let r = hilbert::product_formula_check(&a, &b)?;
                for (v, s) in &r.table {
                    println!("{v}\t{s:+}");
                }
                println!("product\t{:+}", r.product);
            } else {
                let place = parse_place(&place)?;
                let s = hilbert::hilbert_symbol(&a, &b, &place)?;
                println!("{s:+}");
            }
            Ok(0)
        }
        Command::Form { command: FormCommand::Analyze(args) } => {
            let q = read_form(&args.file)?;
            let report = analyze_form(&q, args.height)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(0)
        }
        Command::K3 { command: K3Command::Classify(args) } => {
            let gram = read_int_gram(&args.file)?;
            let v = classify::decide_d1(&gram)?;
            let report = verdict_json(&v);
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if v.answer == Answer::Inconsistent { 3 } else { 0 })
        }
        Command::Zariski { file, divisor } => {
            let (gram, labels) = read_lattice(&file)?;
            let lattice = match labels {
                Some(l) => SurfaceLattice::new(l, gram)?,
                None => SurfaceLattice::from_gram(gram)?,
            };
            let coeffs: Vec<Int> = divisor
                .split(',')
                .map(|t| Int::from_str(t.trim()).map_err(|e| InputError(e.to_string())))
                .collect::<Result<_, _>>()?;
            let z = zariski::zariski_decompose(&lattice, &Divisor::new(coeffs))?;
            let report = json!({
                "P": z.p.iter().map(rat_str).collect::<Vec<_>>(),
                "N": z.n.iter().map(rat_str).collect::<Vec<_>>(),
                "support": z.support.iter().map(|&i| lattice.labels()[i].clone()).collect::<Vec<_>>(),
                "denominator": z.denominator.to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(0)
        }
        Command::Search { rho, max_entry, case, out } => {
            let rows = classify::search_lattices(rho, max_entry, case)?;
            let mut csv = String::from("canonical_gram,rho,case,verdict,certificate_primes,strongly_primitive\n");
            for r in rows {
                let gram_packed = r
                    .canonical_gram
                    .iter()
                    .map(|row| row.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" "))
                    .collect::<Vec<_>>()
                    .join(";");
                let verdict = match &r.answer {
                    Answer::D1 => "D1",
                    Answer::NotD1(_) => "NotD1",
                    Answer::Inconsistent => "Inconsistent",
                };
                let certs = r
                    .certificate_primes
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                csv.push_str(&format!(
                    "{gram_packed},{},{},{verdict},{certs},{}\n",
                    r.rho,
                    r.case_id.map(|c| c.to_string()).unwrap_or_default(),
                    r.strongly_primitive
                ));
            }
            match out {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
            Ok(0)
        }
        Command::Selfcheck => {
            let lines = selfcheck::run()?;
            let mut all_pass = true;
            for l in &lines {
                all_pass &= l.pass;
                println!("{}\t{}\t{}", if l.pass { "PASS" } else { "FAIL" }, l.name, l.detail);
            }
            println!("{}/{} checks passed", lines.iter().filter(|l| l.pass).count(), lines.len());
            Ok(if all_pass { 0 } else { 3 })
        }
    }
}

fn parse_rat(s: &str) -> Result<Rat, InputError> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = Int::from_str(n.trim())?;
        let d = Int::from_str(d.trim())?;
        if d == Int::from(0) {
            return Err(InputError("zero denominator".into()));
        }
        Ok(Rat::new(n, d))
    } else {
        Ok(Rat::from_integer(Int::from_str(s)?))
    }
}

fn parse_place(s: &str) -> Result<Place, InputError> {
    match s.trim() {
        "inf" | "infinity" | "oo" => Ok(Place::Infinity),
        t => Ok(Place::prime(Int::from_str(t)?)?),
    }
}

fn read_json(path: &str) -> Result<Value, InputError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn json_int(v: &Value) -> Result<Int, InputError> {
    match v {
        Value::Number(n) => Ok(Int::from(
            n.as_i64().ok_or_else(|| InputError(format!("non-integer entry {n}")))?,
        )),
        Value::String(s) => Ok(Int::from_str(s)?),
        other => Err(InputError(format!("expected an integer, found {other}"))),
    }
}

fn json_rat(v: &Value) -> Result<Rat, InputError> {
    match v {
        Value::String(s) => parse_rat(s),
        other => Ok(Rat::from_integer(json_int(other)?)),
    }
}

fn read_int_gram(path: &str) -> Result<Vec<Vec<Int>>, InputError> {
    let v = read_json(path)?;
    let rows = v
        .get("gram")
        .and_then(Value::as_array)
        .ok_or_else(|| InputError("expected a \"gram\" array of rows".into()))?;
    rows.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| InputError("gram rows must be arrays".into()))?
                .iter()
                .map(json_int)
                .collect()
        })
        .collect()
}

fn read_lattice(path: &str) -> Result<(Vec<Vec<Int>>, Option<Vec<String>>), InputError> {
    let gram = read_int_gram(path)?;
    let labels = read_json(path)?
        .get("labels")
        .and_then(Value::as_array)
        .map(|l| l.iter().filter_map(|s| s.as_str().map(String::from)).collect());
    Ok((gram, labels))
}

fn read_form(path: &str) -> Result<QuadraticForm, InputError> {
    let v = read_json(path)?;
    if let Some(diag) = v.get("diag").and_then(Value::as_array) {
        let coeffs: Vec<Rat> = diag.iter().map(json_rat).collect::<Result<_, _>>()?;
        return Ok(QuadraticForm::diagonal(&coeffs)?);
    }
    let gram = read_int_gram(path)?;
    Ok(QuadraticForm::from_int_gram(&gram)?)
}

fn rat_str(x: &Rat) -> String {
    x.to_string()
}

fn place_str(p: &Place) -> String {
    p.to_string()
}

fn analyze_form(q: &QuadraticForm, height: Option<u64>) -> Result<Value, InputError> {
    let (np, nm, nz) = quadform::signature(q);
    let disc = quadform::discriminant(q)?;
    let mut locals = Vec::new();
    for place in quadform::critical_places(q)? {
        let inv = quadform::local_invariants(q, &place)?;
        locals.push(json!({
            "place": place_str(&place),
            "d_square": inv.d_square,
            "epsilon": inv.epsilon,
            "isotropic": quadform::is_isotropic_local(q, &place)?,
        }));
    }
    let verdict = match height {
        Some(h) => quadform::is_isotropic_global_with_height(q, h)?,
        None => quadform::is_isotropic_global(q)?,
    };
    let verdict_json = match &verdict {
        IsotropyVerdict::Isotropic { witness } => json!({
            "isotropic": true,
            "witness": witness.as_ref().map(|w| w.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        }),
        IsotropyVerdict::Anisotropic { place, .. } => json!({
            "isotropic": false,
            "certificate_place": place_str(place),
        }),
    };
    Ok(json!({
        "dim": q.dim(),
        "signature": {"plus": np, "minus": nm, "zero": nz},
        "discriminant": rat_str(&disc),
        "local": locals,
        "verdict": verdict_json,
    }))
}

fn verdict_json(v: &classify::K3Verdict) -> Value {
    let answer = match &v.answer {
        Answer::D1 => json!({"answer": "D1"}),
        Answer::NotD1(reason) => json!({"answer": "NotD1", "reason": reason}),
        Answer::Inconsistent => json!({"answer": "Inconsistent"}),
    };
    let checks: Vec<Value> = v
        .diagnostics
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
        .collect();
    let case = match &v.case_match {
        CaseMatch::NoMatch => json!("none"),
        CaseMatch::Matched(m) => json!({
            "case": m.case_id,
            "params": m.params.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "permutation": m.permutation,
        }),
    };
    let condition = v.condition.as_ref().map(|c| {
        json!({
            "holds": c.holds,
            "certificate_primes": c.certificate_primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "evaluated": c.evaluated.iter().map(|(k, val)| json!({"name": k, "value": val})).collect::<Vec<_>>(),
            "notes": c.notes,
        })
    });
    let crosscheck = v.crosscheck.as_ref().map(crosscheck_json);
    let numthm = v.numthm.as_ref().map(|r| {
        json!({"cond_a": r.cond_a, "cond_b": r.cond_b, "violations": r.violations})
    });
    json!({
        "verdict": answer,
        "admissibility": checks,
        "case_match": case,
        "condition": condition,
        "crosscheck": crosscheck,
        "structural": numthm,
        "bounded_denominator_h6": v.bounded_denominator.as_ref().map(|d| d.to_string()),
        "notes": v.notes,
    })
}

fn crosscheck_json(c: &oracle::CrossCheck) -> Value {
    json!({
        "consistent": c.consistent,
        "lemma_predicts_anisotropic": c.lemma_predicts_anisotropic,
        "engine_anisotropic": c.engine_anisotropic,
        "zero_witness": c.zero_witness.as_ref().map(|w| w.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        "zero_search_height": c.zero_height,
        "local_agreement": c.local_agreements.iter().map(|l| json!({
            "place": place_str(&l.place),
            "engine": l.engine,
            "search": l.search.map(|s| s.to_string()).unwrap_or_else(|| "skipped".into()),
        })).collect::<Vec<_>>(),
        "details": c.details,
    })
}
