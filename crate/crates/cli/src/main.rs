use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use descartes_core::certificates::check_all;
use descartes_core::classify::{
    audit_conjecture, classify_degree, ensure_complete, export_report, verify_against_paper,
    ClassifyConfig, ReportFormat, Store, StoreLock, LONG_RUN_DEGREE,
};
use descartes_core::constructors::{Realizer, RealizerConfig, Witness, WitnessClaim};
use descartes_core::patterns::{
    combination_counts, count_combinations, count_monic_combinations, MAX_ENUMERATION_DEGREE,
};
use descartes_core::{ClassifyError, PatternError, RootPair, SignPattern, StoreError};
use serde_json::json;

const EXIT_OK: u8 = 0;
const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INADMISSIBLE: u8 = 3;
const EXIT_CERTIFIED: u8 = 4;
const EXIT_UNKNOWN: u8 = 5;
const EXIT_INCOMPLETE: u8 = 6;

#[derive(Parser, Debug)]
#[command(
    name = "descartes",
    version,
    about = "Sign patterns and real root counts of real polynomials"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Text => ReportFormat::Text,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify every orbit of one degree into a store.
    Classify(ClassifyArgs),
    /// Realize a single pattern and pair, or print why it cannot be realized.
    Realize(RealizeArgs),
    /// Re-verify a witness file.
    Check(CheckArgs),
    /// Compare a complete store with the reference tables and audit it.
    VerifyPaper(VerifyArgs),
    /// Print combination and orbit counts.
    Count(CountArgs),
    /// Summarize a store.
    Report(ReportArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct Budgets {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Objective evaluations of the random search per combination.
    #[arg(long, env = "DESCARTES_BUDGET_RANDOM", default_value_t = RealizerConfig::default().random_budget)]
    budget_random: u64,
    /// Node cap of the suffix search.
    #[arg(long, default_value_t = RealizerConfig::default().dfs_budget)]
    budget_dfs: u64,
}

impl Budgets {
    fn config(self) -> RealizerConfig {
        RealizerConfig {
            seed: self.seed,
            random_budget: self.budget_random,
            dfs_budget: self.budget_dfs,
            ..RealizerConfig::default()
        }
    }
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long)]
    degree: usize,
    /// Store file (JSON Lines).
    #[arg(long, alias = "store")]
    out: PathBuf,
    /// Continue an existing store instead of refusing to touch it.
    #[arg(long)]
    resume: bool,
    #[arg(long, env = "DESCARTES_JOBS", default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
    /// Allow degrees 9 and 10, which take a long time.
    #[arg(long)]
    long_run: bool,
    #[command(flatten)]
    budgets: Budgets,
}

#[derive(Args, Debug)]
struct RealizeArgs {
    /// Sign pattern such as "+---++" or "+,-,-,-,+,+".
    #[arg(long)]
    pattern: String,
    #[arg(long)]
    pos: u32,
    #[arg(long)]
    neg: u32,
    #[arg(long)]
    degree: Option<usize>,
    #[command(flatten)]
    budgets: Budgets,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Witness JSON with coefficients (ascending), pattern, pos and neg.
    file: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    degree: usize,
    #[arg(long, alias = "out")]
    store: PathBuf,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long)]
    degree: usize,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long, alias = "out")]
    store: PathBuf,
}

/// Exit code plus a message for stderr.
struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

impl From<StoreError> for Failure {
    fn from(e: StoreError) -> Self {
        let code = if matches!(e, StoreError::Io { .. } | StoreError::Locked(_)) {
            EXIT_USAGE
        } else {
            EXIT_FAILED
        };
        fail(code, e.to_string())
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Store(s) => s.into(),
            ClassifyError::Incomplete { .. } => fail(EXIT_INCOMPLETE, e.to_string()),
            other => fail(EXIT_USAGE, other.to_string()),
        }
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(format: Format, value: serde_json::Value, text: String) {
    match format {
        Format::Json => out(&(serde_json::to_string_pretty(&value).expect("json output") + "\n")),
        Format::Text => out(&text),
    }
}

fn classify(args: ClassifyArgs, format: Format) -> Result<u8, Failure> {
    let config = ClassifyConfig {
        jobs: args.jobs as usize,
        realizer: args.budgets.config(),
        long_run: args.long_run,
    };
    if args.degree >= LONG_RUN_DEGREE && args.long_run {
        eprintln!(
            "warning: degree {} runs for many hours at default budgets",
            args.degree
        );
    }
    let _lock = StoreLock::acquire(&args.out)?;
    let mut store = if args.out.exists() {
        if !args.resume {
            return Err(fail(
                EXIT_USAGE,
                format!(
                    "{} exists; pass --resume to continue it",
                    args.out.display()
                ),
            ));
        }
        Store::load(&args.out)?
    } else {
        Store::create(&args.out)
    };
    let summary = classify_degree(args.degree, &config, &mut store)?;
    eprintln!(
        "classified {} orbits in {} ms",
        summary.processed, summary.wall_ms
    );
    let value = json!({
        "degree": summary.degree,
        "orbits": summary.orbits,
        "skipped": summary.skipped,
        "processed": summary.processed,
        "realizable": summary.realizable,
        "non_realizable": summary.non_realizable,
        "unknown": summary.unknown,
        "store": args.out.display().to_string(),
    });
    let text = format!(
        "degree {}: {} orbits, {} already stored, {} classified ({} realizable, {} non-realizable, {} unknown)\n",
        summary.degree,
        summary.orbits,
        summary.skipped,
        summary.processed,
        summary.realizable,
        summary.non_realizable,
        summary.unknown
    );
    emit(format, value, text);
    Ok(EXIT_OK)
}

fn realize(args: RealizeArgs, format: Format) -> Result<u8, Failure> {
    let sp = SignPattern::parse(&args.pattern).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    if let Some(d) = args.degree {
        if d != sp.degree() {
            return Err(fail(
                EXIT_USAGE,
                format!(
                    "pattern {sp} has {} entries, degree {d} needs {}",
                    sp.len(),
                    d + 1
                ),
            ));
        }
    }
    let pair = RootPair::new(args.pos, args.neg);
    if let Err(e) = sp.check_admissible(pair) {
        let reason = match &e {
            PatternError::Inadmissible { reason, .. } => reason.clone(),
            other => other.to_string(),
        };
        emit(
            format,
            json!({"status": "inadmissible", "pattern": sp, "pos": pair.pos, "neg": pair.neg, "reason": reason}),
            format!("INADMISSIBLE {sp} {pair}: {reason}\n"),
        );
        return Ok(EXIT_INADMISSIBLE);
    }
    if let Some(cert) = check_all(sp, pair).map_err(|e| fail(EXIT_USAGE, e.to_string()))? {
        emit(
            format,
            json!({"status": "non_realizable", "certificate": cert}),
            format!(
                "NON-REALIZABLE {sp} {pair}: {}\n{}\n",
                cert.summary(),
                to_json(&cert)
            ),
        );
        return Ok(EXIT_CERTIFIED);
    }
    let realizer = Realizer::new(args.budgets.config());
    match realizer
        .realize(sp, pair)
        .map_err(|e| fail(EXIT_USAGE, e.to_string()))?
    {
        Some(w) => {
            emit(
                format,
                json!({"status": "realizable", "witness": w}),
                format!(
                    "REALIZABLE {sp} {pair} by {}\n{}\n",
                    w.method(),
                    to_json(&w)
                ),
            );
            Ok(EXIT_OK)
        }
        None => {
            emit(
                format,
                json!({"status": "unknown", "pattern": sp, "pos": pair.pos, "neg": pair.neg}),
                format!("UNKNOWN {sp} {pair}\n"),
            );
            Ok(EXIT_UNKNOWN)
        }
    }
}

fn to_json<T: serde::Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("json output")
}

fn check(args: CheckArgs, format: Format) -> Result<u8, Failure> {
    let text = fs::read_to_string(&args.file)
        .map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", args.file.display())))?;
    let mut value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", args.file.display())))?;
    // Accept a bare claim or the output of `realize --format json`.
    if let Some(inner) = value.get("witness") {
        value = inner.clone();
    }
    let claim: WitnessClaim = serde_json::from_value(value)
        .map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", args.file.display())))?;
    let (sp, pair) = (claim.pattern, RootPair::new(claim.pos, claim.neg));
    match Witness::from_claim(claim) {
        Ok(_) => {
            emit(
                format,
                json!({"verified": true, "pattern": sp, "pos": pair.pos, "neg": pair.neg}),
                format!("OK {sp} {pair}\n"),
            );
            Ok(EXIT_OK)
        }
        Err(e) => {
            emit(
                format,
                json!({"verified": false, "pattern": sp, "pos": pair.pos, "neg": pair.neg, "reason": e.to_string()}),
                format!("FAILED {sp} {pair}: {e}\n"),
            );
            Ok(EXIT_FAILED)
        }
    }
}

fn verify_paper(args: VerifyArgs, format: Format) -> Result<u8, Failure> {
    let store = Store::load(&args.store)?;
    ensure_complete(&store, args.degree)?;
    let paper = match verify_against_paper(&store, args.degree) {
        Ok(r) => Some(r),
        Err(ClassifyError::NoReferenceTable(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let audit = audit_conjecture(&store);
    let passed = paper.as_ref().is_none_or(|p| p.passed()) && audit.passed();
    let mut text = match &paper {
        Some(p) => p.to_string(),
        None => format!("degree {}: no reference table, audit only\n", args.degree),
    };
    text.push_str(&audit.to_string());
    let paper_json = paper.as_ref().map(|p| {
        let mut v = serde_json::to_value(p).expect("json output");
        v["passed"] = json!(p.passed());
        v
    });
    let mut audit_json = serde_json::to_value(&audit).expect("json output");
    audit_json["passed"] = json!(audit.passed());
    emit(
        format,
        json!({"passed": passed, "paper": paper_json, "audit": audit_json}),
        text,
    );
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

fn count(args: CountArgs, format: Format) -> Result<u8, Failure> {
    let d = args.degree;
    if !(1..=MAX_ENUMERATION_DEGREE).contains(&d) {
        return Err(fail(
            EXIT_USAGE,
            format!("degree must be in 1..={MAX_ENUMERATION_DEGREE}"),
        ));
    }
    let c = combination_counts(d).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    debug_assert_eq!(
        (c.raw, c.monic),
        (count_combinations(d), count_monic_combinations(d))
    );
    emit(
        format,
        json!({"degree": d, "raw": c.raw as u64, "monic": c.monic as u64, "orbits": c.orbits}),
        format!(
            "degree {d}: {} raw combinations / {} monic / {} orbits\n",
            c.raw, c.monic, c.orbits
        ),
    );
    Ok(EXIT_OK)
}

fn report(args: ReportArgs, format: Format) -> Result<u8, Failure> {
    let store = Store::load(&args.store)?;
    out(&export_report(&store, format.into()));
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let result = match cli.command {
        Command::Classify(a) => classify(a, format),
        Command::Realize(a) => realize(a, format),
        Command::Check(a) => check(a, format),
        Command::VerifyPaper(a) => verify_paper(a, format),
        Command::Count(a) => count(a, format),
        Command::Report(a) => report(a, format),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
