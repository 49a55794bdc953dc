use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use motdeg_core::datasets;
use motdeg_core::fan::{self, json as fan_json};
use motdeg_core::ring::{expr, json as ring_json, RingElement, SymbolTable};
use motdeg_core::series::{json as series_json, morse_reduce, odp_certificate};
use motdeg_core::snc::{self, json as snc_json};
use motdeg_core::verify;

#[derive(Parser)]
#[command(name = "motdeg", version, about = "Exact motivic invariants of degenerations")]
struct Cli {
    /// print nothing on success; the exit code carries the result
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grothendieck ring expressions: {"symbols": .., "expr": ..}
    Ring {
        #[command(subcommand)]
        op: RingOp,
    },
    /// snc models
    Snc {
        #[command(subcommand)]
        op: SncOp,
    },
    /// logarithmic fans and subdivisions
    Fan {
        #[command(subcommand)]
        op: FanOp,
    },
    /// truncated power series at a singular point
    Series {
        #[command(subcommand)]
        op: SeriesOp,
    },
    /// randomized property suites
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        iters: usize,
        /// run only this suite
        #[arg(long)]
        suite: Option<String>,
        /// emit the table as JSON
        #[arg(long)]
        json: bool,
    },
    /// bundled example inputs
    Examples {
        /// print this example instead of listing them
        name: Option<String>,
    },
}

#[derive(Subcommand)]
enum RingOp {
    /// evaluate to canonical form
    Eval { input: PathBuf },
    /// image in Z[SB]
    Modl { input: PathBuf },
    /// stable rationality verdict
    Verdict { input: PathBuf },
}

#[derive(Subcommand)]
enum SncOp {
    Vol { input: PathBuf },
    Mr { input: PathBuf },
    Dual { input: PathBuf },
    CheckDual { input: PathBuf },
    CheckReducible { input: PathBuf },
    OdpSemistable { input: PathBuf },
    Validate { input: PathBuf },
}

#[derive(Subcommand)]
enum FanOp {
    Vol { input: PathBuf },
    /// ranks, root indices and volume
    Info { input: PathBuf },
    /// apply the plan under "plan"
    Subdivide { input: PathBuf },
    CheckInvariance { input: PathBuf },
    /// input {"gamma", "delta", "cones"}
    CheckEuler { input: PathBuf },
}

#[derive(Subcommand)]
enum SeriesOp {
    Morse {
        input: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        trunc: Option<u32>,
    },
    Certify {
        input: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        trunc: Option<u32>,
        #[arg(long, default_value_t = 10)]
        height_bound: u32,
    },
}

enum Failure {
    /// bad input: exit 1
    Input(String),
    /// a check ran and failed: exit 2, with the report on stdout
    Check(Value, String),
    /// input parsed but is not valid: exit 1, with the report on stdout
    Invalid(Value, String),
}

fn input_err(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn read_input(path: &Path) -> Result<Value, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(input_err)?;
        s
    } else {
        match std::fs::read_to_string(path) {
            Ok(s) => s,
            // fall back to a bundled example of the same name
            Err(e) => match path.file_stem().and_then(|s| s.to_str()).filter(|s| datasets::bundled(s).is_some()) {
                Some(name) if !path.exists() => return datasets::load(name).map_err(Failure::Input),
                _ => return Err(Failure::Input(format!("{}: {e}", path.display()))),
            },
        }
    };
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn element_doc(t: &SymbolTable, e: &RingElement) -> Value {
    snc_json::element_document(t, e)
}

/// Forgets any group action before reducing mod L.
fn plain(t: &SymbolTable, e: &RingElement) -> Result<RingElement, Failure> {
    if t.has_nontrivial_action(e).map_err(input_err)? {
        t.res_full(e).map_err(input_err)
    } else {
        Ok(e.clone())
    }
}

fn ring(op: &RingOp) -> Result<Value, Failure> {
    let (RingOp::Eval { input } | RingOp::Modl { input } | RingOp::Verdict { input }) = op;
    let v = read_input(input)?;
    let t = match v.get("symbols") {
        None | Some(Value::Null) => SymbolTable::new(),
        Some(s) => ring_json::table_from_json(s).map_err(input_err)?,
    };
    let e = expr::eval(&t, v.get("expr").ok_or_else(|| Failure::Input("input needs \"expr\"".into()))?).map_err(input_err)?;
    Ok(match op {
        RingOp::Eval { .. } => element_doc(&t, &e),
        RingOp::Modl { .. } => json!({"reduction": ring_json::sb_to_json(&t.reduce_mod_l(&plain(&t, &e)?).map_err(input_err)?)}),
        RingOp::Verdict { .. } => ring_json::verdict_to_json(&t.verdict(&plain(&t, &e)?).map_err(input_err)?),
    })
}

fn snc_cmd(op: &SncOp) -> Result<Value, Failure> {
    let model = |p: &Path| snc_json::valid_model_from_json(&read_input(p)?).map_err(input_err);
    Ok(match op {
        SncOp::Vol { input } => {
            let m = model(input)?;
            element_doc(&m.symbols, &m.vol().map_err(input_err)?)
        }
        SncOp::Mr { input } => {
            let m = model(input)?;
            element_doc(&m.symbols, &m.mr().map_err(input_err)?)
        }
        SncOp::Dual { input } => snc_json::dual_complex_to_json(&snc::dual_complex(&model(input)?)),
        SncOp::CheckDual { input } => {
            let r = snc::check_dual_theorem(&model(input)?).map_err(input_err)?;
            let out = snc_json::dual_report_to_json(&r);
            if r.hypothesis_holds() && !r.identity_holds {
                return Err(Failure::Check(out, "dual complex identity fails".into()));
            }
            out
        }
        SncOp::CheckReducible { input } => {
            let inp = snc_json::reducible_from_json(&read_input(input)?).map_err(input_err)?;
            snc_json::reducible_report_to_json(&snc::reducible_odp_report(&inp).map_err(input_err)?)
        }
        SncOp::OdpSemistable { input } => {
            let inp = snc_json::odp_from_json(&read_input(input)?).map_err(input_err)?;
            snc_json::model_to_json(&snc::odp_semistable(&inp).map_err(input_err)?)
        }
        SncOp::Validate { input } => {
            let m = snc_json::model_from_json(&read_input(input)?).map_err(input_err)?;
            let r = m.validate();
            let out = snc_json::validation_to_json(&r);
            if !r.is_valid() {
                return Err(Failure::Invalid(out, "model is invalid".into()));
            }
            out
        }
    })
}

fn fan_cmd(op: &FanOp) -> Result<Value, Failure> {
    let load = |p: &Path| -> Result<(Value, fan::LogFan), Failure> {
        let v = read_input(p)?;
        let f = fan_json::valid_fan_from_json(&v).map_err(input_err)?;
        Ok((v, f))
    };
    let plan = |v: &Value| fan_json::plan_from_json(v.get("plan").unwrap_or(&Value::Null)).map_err(input_err);
    Ok(match op {
        FanOp::Vol { input } => {
            let (_, f) = load(input)?;
            element_doc(&f.symbols, &f.vol().map_err(input_err)?)
        }
        FanOp::Info { input } => fan_json::fan_summary_to_json(&load(input)?.1).map_err(input_err)?,
        FanOp::Subdivide { input } => {
            let (v, f) = load(input)?;
            fan_json::fan_to_json(&fan::apply_plan(&f, &plan(&v)?).map_err(input_err)?)
        }
        FanOp::CheckInvariance { input } => {
            let (v, f) = load(input)?;
            let r = fan::check_subdivision_invariance(&f, &plan(&v)?).map_err(input_err)?;
            let out = fan_json::invariance_to_json(&r);
            if !r.invariant {
                return Err(Failure::Check(out, "volume changed under subdivision".into()));
            }
            out
        }
        FanOp::CheckEuler { input } => {
            let p = fan_json::problem_from_json(&read_input(input)?).map_err(input_err)?;
            let c = fan::check_euler(&p).map_err(input_err)?;
            let out = fan_json::euler_check_to_json(&c);
            if !(c.holds && c.covers) {
                return Err(Failure::Check(out, "Euler counts differ from the expected values".into()));
            }
            out
        }
    })
}

fn series_cmd(op: &SeriesOp) -> Result<Value, Failure> {
    let (input, d, trunc) = match op {
        SeriesOp::Morse { input, d, trunc } | SeriesOp::Certify { input, d, trunc, .. } => (input, *d, *trunc),
    };
    let f = series_json::series_from_json(&read_input(input)?).map_err(input_err)?;
    let trunc = trunc.unwrap_or(f.trunc());
    Ok(match op {
        SeriesOp::Morse { .. } => {
            let m = morse_reduce(&f, d, trunc).map_err(input_err)?;
            let residual_zero = m.change.apply(&f.with_trunc(trunc)).map_err(input_err)? == m.normal_form(f.nvars(), trunc);
            let mut out = series_json::morse_to_json(&m);
            out["residual_zero"] = json!(residual_zero);
            out["normal_form"] = series_json::series_to_json(&m.normal_form(f.nvars(), trunc));
            if !residual_zero {
                return Err(Failure::Check(out, "substitution check failed".into()));
            }
            out
        }
        SeriesOp::Certify { height_bound, .. } => {
            series_json::certificate_to_json(&odp_certificate(&f, d, trunc, *height_bound).map_err(input_err)?)
        }
    })
}

fn verify_cmd(seed: u64, iters: usize, suite: &Option<String>, as_json: bool, quiet: bool) -> Result<(Value, Option<String>), Failure> {
    let results = match suite {
        Some(s) => vec![verify::run_suite(s, seed, iters).ok_or_else(|| Failure::Input(format!("unknown suite {s}")))?],
        None => verify::run_all(seed, iters),
    };
    let passed = results.iter().all(|r| r.passed());
    let report = json!({
        "seed": seed,
        "iters": iters,
        "passed": passed,
        "suites": results.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
    });
    if as_json {
        return if passed { Ok((report, None)) } else { Err(Failure::Check(report, "some suites failed".into())) };
    }
    let mut table = format!("{:<24} {:>6} {:>8}  result\n", "suite", "cases", "failures");
    for r in &results {
        table.push_str(&format!(
            "{:<24} {:>6} {:>8}  {}\n",
            r.name,
            r.cases,
            r.failures,
            if r.passed() { "pass" } else { "FAIL" }
        ));
        if let Some((s, m)) = &r.first_failure {
            table.push_str(&format!("    first failure at seed {s}: {m}\n"));
        }
    }
    table.push_str(if passed { "all suites pass\n" } else { "some suites FAILED\n" });
    if passed {
        Ok((report, Some(table)))
    } else {
        if !quiet {
            out(&table);
        }
        Err(Failure::Check(Value::Null, "some suites failed".into()))
    }
}

fn run(cli: &Cli) -> Result<(Value, Option<String>), Failure> {
    let v = match &cli.command {
        Command::Ring { op } => ring(op)?,
        Command::Snc { op } => snc_cmd(op)?,
        Command::Fan { op } => fan_cmd(op)?,
        Command::Series { op } => series_cmd(op)?,
        Command::Verify { seed, iters, suite, json } => return verify_cmd(*seed, *iters, suite, *json, cli.quiet),
        Command::Examples { name: None } => json!(datasets::NAMES),
        Command::Examples { name: Some(n) } => datasets::load(n).map_err(Failure::Input)?,
    };
    Ok((v, None))
}

fn emit(v: &Value) {
    out(&format!("{}\n", serde_json::to_string_pretty(v).expect("serializable")));
}

// a closed pipe downstream is not an error
fn out(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((v, text)) => {
            if !cli.quiet {
                match text {
                    Some(t) => out(&t),
                    None => emit(&v),
                }
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Input(m)) => {
            eprintln!("{}", json!({"error": "input", "message": m}));
            ExitCode::from(1)
        }
        Err(Failure::Invalid(v, m)) => {
            if !cli.quiet {
                emit(&v);
            }
            eprintln!("{}", json!({"error": "invalid", "message": m}));
            ExitCode::from(1)
        }
        Err(Failure::Check(v, m)) => {
            if !cli.quiet && !v.is_null() {
                emit(&v);
            }
            eprintln!("{}", json!({"error": "check_failed", "message": m}));
            ExitCode::from(2)
        }
    }
}
