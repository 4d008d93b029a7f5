//! Command-line front end: argument definitions, command execution, and
//! text/json/csv rendering.
//!
//! Commands run through [`run`], which returns the rendered output and exit
//! status instead of printing, so that tests can drive every subcommand
//! in-process. [`verify_schedule_outcome`] accepts an arbitrary schedule
//! and is how the test suite exercises the failure path.

use std::fmt::Write as _;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use pentarec_core::{
    count_restricted_table, count_unrestricted_pentagonal, enumerate_restricted, schedule_for,
    term_rows, verify_lemma, verify_product_identity, verify_schedule, IdentitySchedule,
    ResidueRestriction, VerificationReport, DEFAULT_ORACLE_BOUND,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const DEFAULT_CEILING: usize = 5000;
pub const ORACLE_BOUND_ENV: &str = "PARTITION_ORACLE_BOUND";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Counting,
    Series,
    Both,
}

impl MethodArg {
    fn name(self) -> &'static str {
        match self {
            MethodArg::Counting => "counting",
            MethodArg::Series => "series",
            MethodArg::Both => "both",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "pentarec",
    version,
    about = "Restricted partition counts and truncated pentagonal recurrences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,

    /// Refuse --max-n / --order / --to above this value
    #[arg(long, default_value_t = DEFAULT_CEILING, global = true)]
    pub ceiling: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count partitions of n, optionally avoiding parts in given residue classes
    Count(CountArgs),
    /// Print the term schedule of the identity for m
    Terms(TermsArgs),
    /// Check the identity for m over 1..=max-n
    Verify(VerifyArgs),
    /// Check the triple-product lemma for k at every admissible i
    Lemma(LemmaArgs),
    /// Per-term restricted counts and residuals over a range of n
    Table(TableArgs),
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub modulus: Option<u64>,
    /// Comma-separated residues; the modulus itself may stand for 0
    #[arg(long, requires = "modulus", value_parser = parse_residues)]
    pub forbid: Option<Residues>,
    /// Cross-check against exhaustive enumeration
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct TermsArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
    #[arg(long, default_value_t = 300)]
    pub max_n: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    #[arg(long, default_value_t = 300)]
    pub order: usize,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,
    #[arg(long = "from")]
    pub from: usize,
    #[arg(long = "to")]
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residues(pub Vec<i64>);

fn parse_residues(raw: &str) -> Result<Residues, String> {
    if raw.trim().is_empty() {
        return Ok(Residues(Vec::new()));
    }
    raw.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad residue {tok:?}: {e}"))
        })
        .collect::<Result<_, _>>()
        .map(Residues)
}

/// Rendered result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome {
            exit_code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {}\n", msg.into()),
        }
    }
}

/// Everything a renderer needs; `params` and `residuals` feed json
/// directly, `text` and `csv` are prepared by each command.
struct Rendered {
    kind: &'static str,
    params: Value,
    passed: bool,
    residuals: Vec<(usize, BigInt)>,
    elapsed: Duration,
    text: String,
    csv: Vec<Vec<String>>,
}

impl Rendered {
    fn finish(self, format: OutputFormat) -> Outcome {
        let exit_code = if self.passed { EXIT_PASS } else { EXIT_FAIL };
        let elapsed_ms = self.elapsed.as_secs_f64() * 1e3;
        let (stdout, stderr) = match format {
            OutputFormat::Json => {
                let doc = json!({
                    "kind": self.kind,
                    "params": self.params,
                    "passed": self.passed,
                    "residuals": self.residuals.iter().map(|(n, v)| json!({
                        "n": n,
                        "value": v.to_string(),
                    })).collect::<Vec<_>>(),
                    "elapsed_ms": elapsed_ms,
                });
                (format!("{doc}\n"), String::new())
            }
            OutputFormat::Text => (self.text, format!("elapsed: {elapsed_ms:.3} ms\n")),
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in &self.csv {
                    w.write_record(row).expect("in-memory write");
                }
                let bytes = w.into_inner().expect("in-memory flush");
                (
                    String::from_utf8(bytes).expect("utf-8 fields"),
                    format!("elapsed: {elapsed_ms:.3} ms\n"),
                )
            }
        };
        Outcome {
            exit_code,
            stdout,
            stderr,
        }
    }
}

fn check_ceiling(name: &str, value: usize, ceiling: usize) -> Result<(), Outcome> {
    if value > ceiling {
        Err(Outcome::usage(format!(
            "{name} = {value} exceeds the safety ceiling {ceiling}; pass --ceiling to raise it"
        )))
    } else {
        Ok(())
    }
}

/// Reads the oracle recursion guard from the environment.
pub fn oracle_bound_from_env() -> Result<usize, String> {
    match std::env::var(ORACLE_BOUND_ENV) {
        Err(_) => Ok(DEFAULT_ORACLE_BOUND),
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(format!("{ORACLE_BOUND_ENV} must be a positive integer, got {raw:?}")),
        },
    }
}

fn residue_list(r: &ResidueRestriction) -> Vec<u64> {
    r.forbidden().iter().copied().collect()
}

fn joined(residues: &[u64]) -> String {
    residues
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Count(a) => cmd_count(a, cli.format),
        Command::Terms(a) => Ok(cmd_terms(a.m, cli.format)),
        Command::Verify(a) => check_ceiling("max-n", a.max_n, cli.ceiling).and_then(|_| {
            let schedule = schedule_for(a.m).map_err(|e| Outcome::usage(e.to_string()))?;
            Ok(verify_schedule_outcome(&schedule, a.max_n, a.method, cli.format))
        }),
        Command::Lemma(a) => {
            check_ceiling("order", a.order, cli.ceiling).map(|_| cmd_lemma(a.k, a.order, cli.format))
        }
        Command::Table(a) => check_ceiling("to", a.to, cli.ceiling)
            .and_then(|_| cmd_table(a.m, a.from, a.to, cli.format)),
    };
    result.unwrap_or_else(|usage| usage)
}

fn cmd_count(a: &CountArgs, format: OutputFormat) -> Result<Outcome, Outcome> {
    let started = std::time::Instant::now();
    let restriction = match a.modulus {
        None => None,
        Some(m) => {
            let residues = a.forbid.clone().unwrap_or(Residues(Vec::new())).0;
            Some(ResidueRestriction::new(m, residues).map_err(|e| Outcome::usage(e.to_string()))?)
        }
    };
    let count = match &restriction {
        None => count_unrestricted_pentagonal(a.n).counts()[a.n].clone(),
        Some(r) => count_restricted_table(r, a.n).counts()[a.n].clone(),
    };
    let mut passed = true;
    let mut oracle = Value::Null;
    if a.oracle {
        let bound = oracle_bound_from_env().map_err(Outcome::usage)?;
        let r = restriction.clone().unwrap_or_else(ResidueRestriction::unrestricted);
        let brute = enumerate_restricted(a.n, &r, bound).map_err(|e| Outcome::usage(e.to_string()))?;
        passed = brute == count;
        oracle = json!(brute.to_string());
    }
    let forbidden = restriction.as_ref().map(residue_list).unwrap_or_default();
    let params = json!({
        "n": a.n,
        "modulus": a.modulus,
        "forbidden": forbidden,
        "count": count.to_string(),
        "oracle": oracle,
    });

    let mut text = match &restriction {
        None => format!("p({}) = {count}\n", a.n),
        Some(r) => format!("p({} | {r}) = {count}\n", a.n),
    };
    if let Value::String(brute) = &oracle {
        let verdict = if passed { "agrees" } else { "DISAGREES" };
        let _ = writeln!(text, "enumeration oracle: {brute} ({verdict})");
    }
    let csv = vec![
        vec!["n".into(), "modulus".into(), "forbidden".into(), "count".into()],
        vec![
            a.n.to_string(),
            a.modulus.map(|m| m.to_string()).unwrap_or_default(),
            joined(&forbidden),
            count.to_string(),
        ],
    ];
    Ok(Rendered {
        kind: "count",
        params,
        passed,
        residuals: Vec::new(),
        elapsed: started.elapsed(),
        text,
        csv,
    }
    .finish(format))
}

fn schedule_json(schedule: &IdentitySchedule) -> Value {
    schedule
        .terms
        .iter()
        .map(|t| {
            json!({
                "shift": t.shift,
                "sign": t.sign.to_string(),
                "forbidden": residue_list(&t.restriction),
            })
        })
        .collect()
}

fn cmd_terms(m: u64, format: OutputFormat) -> Outcome {
    let started = std::time::Instant::now();
    let schedule = schedule_for(m).expect("m >= 1 enforced by the parser");
    let mut text = format!(
        "m = {m}, modulus {} = 3(2m+1)^2, {} terms\n",
        schedule.modulus,
        schedule.terms.len()
    );
    let mut csv = vec![vec![
        "index".to_string(),
        "shift".into(),
        "sign".into(),
        "modulus".into(),
        "forbidden".into(),
    ]];
    for (idx, t) in schedule.terms.iter().enumerate() {
        let _ = writeln!(text, "  {} p(n - {} | {})", t.sign, t.shift, t.restriction);
        csv.push(vec![
            idx.to_string(),
            t.shift.to_string(),
            t.sign.to_string(),
            schedule.modulus.to_string(),
            joined(&residue_list(&t.restriction)),
        ]);
    }
    Rendered {
        kind: "terms",
        params: json!({
            "m": m,
            "modulus": schedule.modulus,
            "terms": schedule_json(&schedule),
        }),
        passed: true,
        residuals: Vec::new(),
        elapsed: started.elapsed(),
        text,
        csv,
    }
    .finish(format)
}

fn check_summary(report: &VerificationReport) -> Value {
    json!({
        "method": report.method.to_string(),
        "passed": report.passed,
        "n_from": report.n_range.start(),
        "n_to": report.n_range.end(),
        "first_failure": report.first_failure().map(|(n, _)| n),
    })
}

fn describe(report: &VerificationReport, text: &mut String) {
    let verdict = if report.passed { "PASS" } else { "FAIL" };
    let _ = write!(
        text,
        "  {:<9} {verdict} over n = {}..={}",
        format!("{}:", report.method),
        report.n_range.start(),
        report.n_range.end()
    );
    match report.first_failure() {
        Some((n, v)) => {
            let _ = writeln!(text, ", first failing n = {n} (residual {v})");
        }
        None => text.push('\n'),
    }
    for (n, v) in report.nonzero_residuals() {
        let note = if n == 0 { " (constant term)" } else { "" };
        let _ = writeln!(text, "    residual({n}) = {v}{note}");
    }
}

fn residual_csv(reports: &[VerificationReport]) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["method".to_string(), "n".into(), "residual".into()]];
    for r in reports {
        for (n, v) in &r.residuals {
            rows.push(vec![r.method.to_string(), n.to_string(), v.to_string()]);
        }
    }
    rows
}

fn nonzero(reports: &[VerificationReport]) -> Vec<(usize, BigInt)> {
    reports
        .iter()
        .flat_map(|r| r.nonzero_residuals().map(|(n, v)| (n, v.clone())))
        .collect()
}

/// Runs the selected checks for `schedule` and renders a `verify` report.
///
/// The counting check uses `schedule` as given; the series check rebuilds
/// the product identity for `schedule.m` from its closed form.
pub fn verify_schedule_outcome(
    schedule: &IdentitySchedule,
    max_n: usize,
    method: MethodArg,
    format: OutputFormat,
) -> Outcome {
    let mut reports = Vec::new();
    if matches!(method, MethodArg::Counting | MethodArg::Both) {
        match verify_schedule(schedule, max_n) {
            Ok(r) => reports.push(r),
            Err(e) => return Outcome::usage(e.to_string()),
        }
    }
    if matches!(method, MethodArg::Series | MethodArg::Both) {
        match verify_product_identity(schedule.m, max_n) {
            Ok(r) => reports.push(r),
            Err(e) => return Outcome::usage(e.to_string()),
        }
    }
    let passed = reports.iter().all(|r| r.passed);
    let mut text = format!(
        "verify m = {} (modulus {}), n up to {max_n}, method {}\n",
        schedule.m,
        schedule.modulus,
        method.name()
    );
    for r in &reports {
        describe(r, &mut text);
    }
    let _ = writeln!(text, "result: {}", if passed { "PASS" } else { "FAIL" });
    Rendered {
        kind: "verify",
        params: json!({
            "m": schedule.m,
            "modulus": schedule.modulus,
            "max_n": max_n,
            "method": method.name(),
            "checks": reports.iter().map(check_summary).collect::<Vec<_>>(),
        }),
        passed,
        residuals: nonzero(&reports),
        elapsed: reports.iter().map(|r| r.elapsed).sum(),
        csv: residual_csv(&reports),
        text,
    }
    .finish(format)
}

fn cmd_lemma(k: u64, order: usize, format: OutputFormat) -> Outcome {
    let report = match verify_lemma(k, order) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(e.to_string()),
    };
    let mut text = format!(
        "lemma k = {k}, i = 1..={}, exponents 0..={order}\n",
        2 * k
    );
    describe(&report, &mut text);
    let _ = writeln!(text, "result: {}", if report.passed { "PASS" } else { "FAIL" });
    let reports = [report];
    Rendered {
        kind: "lemma",
        params: json!({
            "k": k,
            "order": order,
            "i_values": (1..=2 * k).collect::<Vec<_>>(),
        }),
        passed: reports[0].passed,
        residuals: nonzero(&reports),
        elapsed: reports[0].elapsed,
        csv: residual_csv(&reports),
        text,
    }
    .finish(format)
}

fn cmd_table(m: u64, from: usize, to: usize, format: OutputFormat) -> Result<Outcome, Outcome> {
    if from > to {
        return Err(Outcome::usage(format!("--from {from} is greater than --to {to}")));
    }
    let started = std::time::Instant::now();
    let schedule = schedule_for(m).map_err(|e| Outcome::usage(e.to_string()))?;
    let rows = term_rows(&schedule, from..=to).map_err(|e| Outcome::usage(e.to_string()))?;
    let passed = rows.iter().all(|r| r.n == 0 || r.residual.is_zero());

    let labels: Vec<String> = schedule
        .terms
        .iter()
        .map(|t| format!("{}p(n-{})", t.sign, t.shift))
        .collect();
    let mut text = format!("table m = {m} (modulus {})\n", schedule.modulus);
    for (label, t) in labels.iter().zip(&schedule.terms) {
        let _ = writeln!(text, "  {label}: {}", t.restriction);
    }
    let mut header = format!("{:>6}", "n");
    for label in &labels {
        let _ = write!(header, " {label:>14}");
    }
    let _ = writeln!(text, "{header} {:>10}", "residual");
    let mut csv = vec![std::iter::once("n".to_string())
        .chain((0..labels.len()).map(|i| format!("term_{i}")))
        .chain(std::iter::once("residual".to_string()))
        .collect::<Vec<_>>()];
    for row in &rows {
        let mut line = format!("{:>6}", row.n);
        for c in &row.counts {
            let _ = write!(line, " {c:>14}");
        }
        let _ = writeln!(text, "{line} {:>10}", row.residual);
        csv.push(
            std::iter::once(row.n.to_string())
                .chain(row.counts.iter().map(BigInt::to_string))
                .chain(std::iter::once(row.residual.to_string()))
                .collect(),
        );
    }

    Ok(Rendered {
        kind: "table",
        params: json!({
            "m": m,
            "modulus": schedule.modulus,
            "from": from,
            "to": to,
            "terms": schedule_json(&schedule),
            "rows": rows.iter().map(|r| json!({
                "n": r.n,
                "counts": r.counts.iter().map(BigInt::to_string).collect::<Vec<_>>(),
                "residual": r.residual.to_string(),
            })).collect::<Vec<_>>(),
        }),
        passed,
        residuals: rows.iter().map(|r| (r.n, r.residual.clone())).collect(),
        elapsed: started.elapsed(),
        text,
        csv,
    }
    .finish(format))
}
