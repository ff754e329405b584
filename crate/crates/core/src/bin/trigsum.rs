//! Command-line front end: evaluate, rewrite, cross-check, and tabulate
//! trigonometric series through their integral representations.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::process::ExitCode;

use trigsum::closed_forms::{self, ClosedForm};
use trigsum::dsl::{self, normalize_angle, SeriesSpec};
use trigsum::laplace::{self, RenderFormat, RewriteError};
use trigsum::oracle::{self, OracleConfig, OracleEstimate};
use trigsum::quadrature::{self, QuadConfig, QuadError, QuadResult};
use trigsum::report::{
    family_label, json_f64, EvalReport, Verdict, ORACLE_CLOSED_TOL, ORACLE_QUAD_TOL,
    QUAD_CLOSED_TOL,
};

#[derive(Parser)]
#[command(name = "trigsum", version, about = "Evaluate trigonometric series via integral representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a series at a point with all available backends.
    Eval(EvalArgs),
    /// Print the integral-representation derivation for a series.
    Rewrite(RewriteArgs),
    /// Verify the tabulated identities on an interior grid.
    Check(CheckArgs),
    /// Emit a value table over a list of x values.
    Table(TableArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Ascii,
    Latex,
    Json,
    Csv,
}

#[derive(Args)]
struct EvalArgs {
    /// Series text, e.g. "sum(n=1..inf, sin(n*x)/n)".
    series: String,
    /// Evaluation point.
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    #[arg(long, value_enum, default_value = "ascii")]
    format: Format,
    /// Reduce x into the series' periodicity window before evaluating.
    #[arg(long)]
    normalize_angle: bool,
    /// Skip the independent summation backend.
    #[arg(long)]
    no_oracle: bool,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
}

#[derive(Args)]
struct RewriteArgs {
    series: String,
    #[arg(long, value_enum, default_value = "ascii")]
    format: Format,
}

#[derive(Args)]
struct CheckArgs {
    /// Check every tabulated identity.
    #[arg(long, conflicts_with_all = ["family", "nu"])]
    all: bool,
    /// Restrict to one trig kind (sin or cos).
    #[arg(long)]
    family: Option<String>,
    /// Restrict to one denominator power.
    #[arg(long)]
    nu: Option<u32>,
    /// Number of interior grid points per identity.
    #[arg(long, default_value_t = 25)]
    grid: usize,
    #[arg(long, value_enum, default_value = "ascii")]
    format: Format,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    series: String,
    /// Comma-separated evaluation points, e.g. "0.5,1.0,1.5".
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    normalize_angle: bool,
    #[arg(long)]
    no_oracle: bool,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Eval(a) => cmd_eval(&a),
        Command::Rewrite(a) => cmd_rewrite(&a),
        Command::Check(a) => cmd_check(&a),
        Command::Table(a) => cmd_table(&a),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Quadrature settings from flags plus the TRIGSUM_MAX_EVALS override.
fn quad_config(abs_tol: Option<f64>, rel_tol: Option<f64>) -> Result<QuadConfig, String> {
    let mut cfg = QuadConfig::default();
    if let Some(t) = abs_tol {
        cfg.abs_tol = t;
    }
    if let Some(t) = rel_tol {
        cfg.rel_tol = t;
    }
    if let Ok(v) = std::env::var("TRIGSUM_MAX_EVALS") {
        cfg.max_evals = v
            .parse::<u64>()
            .map_err(|_| format!("TRIGSUM_MAX_EVALS must be a positive integer, got {v:?}"))?;
    }
    Ok(cfg)
}

fn parse_series(text: &str) -> Result<SeriesSpec, String> {
    let expr = dsl::parse(text).map_err(|e| format!("unsupported series: {e}"))?;
    dsl::classify(&expr).map_err(|e| format!("unsupported series: {e}"))
}

/// Run every backend at one point and assemble a report. Oracle refusals
/// downgrade to a missing backend with a warning; domain errors abort.
fn evaluate_point(
    input: &str,
    spec: SeriesSpec,
    x: f64,
    cfg: &QuadConfig,
    with_oracle: bool,
) -> Result<EvalReport, String> {
    let rep = laplace::build_integral_rep(&spec, x).map_err(|e| match e {
        RewriteError::OutOfDomain { x, validity } => {
            format!("x = {x} is outside the validity interval {validity}")
        }
    })?;
    let quad: QuadResult = match quadrature::integrate(&rep, cfg) {
        Ok(q) => q,
        Err(QuadError::NoConvergence(best)) => {
            eprintln!(
                "warning: quadrature stopped at its budget; best estimate {} +- {}",
                json_f64(best.value),
                json_f64(best.error_estimate)
            );
            best
        }
        Err(e) => return Err(e.to_string()),
    };
    let closed = closed_forms::closed_form(&spec, x).map_err(|e| e.to_string())?;
    let orc: Option<OracleEstimate> = if with_oracle {
        match oracle::estimate(&spec, x, &OracleConfig::default()) {
            Ok(o) => Some(o),
            Err(oracle::OracleError::OutOfDomain { x, validity }) => {
                return Err(format!("x = {x} is outside the validity interval {validity}"));
            }
            Err(e) => {
                eprintln!("warning: oracle unavailable at x = {x}: {e}");
                None
            }
        }
    } else {
        None
    };
    Ok(EvalReport::new(input, spec, x, closed, quad, orc))
}

fn cmd_eval(args: &EvalArgs) -> Result<ExitCode, String> {
    if !args.x.is_finite() {
        return Err(format!("x must be finite, got {}", args.x));
    }
    let spec = parse_series(&args.series)?;
    let x = if args.normalize_angle { normalize_angle(&spec, args.x) } else { args.x };
    let cfg = quad_config(args.abs_tol, args.rel_tol)?;
    let report = evaluate_point(&args.series, spec, x, &cfg, !args.no_oracle)?;
    match args.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => {
            println!("{}", EvalReport::csv_header());
            println!("{}", report.to_csv_row());
        }
        _ => print_eval_ascii(&report),
    }
    Ok(match report.verdict {
        Verdict::Disagree => ExitCode::from(2),
        _ => ExitCode::SUCCESS,
    })
}

fn print_eval_ascii(r: &EvalReport) {
    println!("series     {}", r.input);
    println!("family     {} (nu = {})", family_label(r.spec), r.spec.power);
    println!("x          {}", json_f64(r.x));
    println!(
        "quadrature {}  (err est {}, {} evals, {} panels)",
        json_f64(r.quadrature.value),
        json_f64(r.quadrature.error_estimate),
        r.quadrature.evals,
        r.quadrature.panels
    );
    match r.closed_form {
        Some(c) => println!("closed     {}", json_f64(c)),
        None => println!("closed     (not tabulated)"),
    }
    match &r.oracle {
        Some(o) => println!(
            "oracle     {}  (bound {}, {} terms)",
            json_f64(o.value),
            json_f64(o.error_bound),
            o.terms_used
        ),
        None => println!("oracle     (skipped)"),
    }
    if let Some(d) = r.deviations.quad_closed {
        println!("|quad - closed|   {}", json_f64(d));
    }
    if let Some(d) = r.deviations.oracle_closed {
        println!("|oracle - closed| {}", json_f64(d));
    }
    if let Some(d) = r.deviations.oracle_quad {
        println!("|oracle - quad|   {}", json_f64(d));
    }
    println!("verdict    {}", r.verdict.as_str());
}

fn cmd_rewrite(args: &RewriteArgs) -> Result<ExitCode, String> {
    let spec = parse_series(&args.series)?;
    let format = match args.format {
        Format::Latex => RenderFormat::Latex,
        Format::Ascii => RenderFormat::Ascii,
        _ => return Err("rewrite supports --format ascii or latex".to_string()),
    };
    for line in laplace::render_derivation(&spec, format) {
        println!("{line}");
    }
    Ok(ExitCode::SUCCESS)
}

/// Evenly spaced interior points of the identity's validity interval.
fn interior_grid(spec: &SeriesSpec, n: usize) -> Vec<f64> {
    let v = spec.validity();
    let step = (v.hi - v.lo) / (n as f64 + 1.0);
    (1..=n).map(|i| v.lo + step * i as f64).collect()
}

struct CheckRow {
    id: &'static str,
    formula: &'static str,
    points: usize,
    max_quad_closed: f64,
    max_oracle_closed: f64,
    max_oracle_quad: f64,
    verdict: Verdict,
}

fn check_identity(cf: &ClosedForm, grid: usize, cfg: &QuadConfig) -> Result<CheckRow, String> {
    let xs = interior_grid(&cf.spec, grid);
    let mut row = CheckRow {
        id: cf.id,
        formula: cf.formula,
        points: xs.len(),
        max_quad_closed: 0.0,
        max_oracle_closed: 0.0,
        max_oracle_quad: 0.0,
        verdict: Verdict::Agree,
    };
    for &x in &xs {
        let r = evaluate_point(cf.formula, cf.spec, x, cfg, true)?;
        match r.deviations.quad_closed {
            Some(d) => row.max_quad_closed = row.max_quad_closed.max(d),
            None => row.verdict = Verdict::Disagree,
        }
        match r.deviations.oracle_closed {
            Some(d) => row.max_oracle_closed = row.max_oracle_closed.max(d),
            None => row.verdict = Verdict::Disagree,
        }
        match r.deviations.oracle_quad {
            Some(d) => row.max_oracle_quad = row.max_oracle_quad.max(d),
            None => row.verdict = Verdict::Disagree,
        }
    }
    if row.max_quad_closed > QUAD_CLOSED_TOL
        || row.max_oracle_closed > ORACLE_CLOSED_TOL
        || row.max_oracle_quad > ORACLE_QUAD_TOL
    {
        row.verdict = Verdict::Disagree;
    }
    Ok(row)
}

fn cmd_check(args: &CheckArgs) -> Result<ExitCode, String> {
    if !args.all && args.family.is_none() && args.nu.is_none() {
        return Err("pass --all or a filter (--family, --nu)".to_string());
    }
    if args.grid == 0 {
        return Err("--grid must be at least 1".to_string());
    }
    let family = match args.family.as_deref() {
        None => None,
        Some("sin") => Some(dsl::Trig::Sin),
        Some("cos") => Some(dsl::Trig::Cos),
        Some(other) => return Err(format!("--family must be sin or cos, got {other:?}")),
    };
    let cfg = quad_config(args.abs_tol, args.rel_tol)?;
    let selected: Vec<ClosedForm> = closed_forms::table()
        .into_iter()
        .filter(|cf| family.is_none_or(|t| cf.spec.trig == t))
        .filter(|cf| args.nu.is_none_or(|nu| cf.spec.power == nu))
        .collect();
    if selected.is_empty() {
        return Err("no tabulated identity matches the filter".to_string());
    }
    let rows: Vec<CheckRow> = selected
        .iter()
        .map(|cf| check_identity(cf, args.grid, &cfg))
        .collect::<Result<_, _>>()?;
    let all_agree = rows.iter().all(|r| r.verdict == Verdict::Agree);
    match args.format {
        Format::Json => {
            let body: Vec<String> = rows
                .iter()
                .map(|r| {
                    format!(
                        "{{\"id\":\"{}\",\"formula\":\"{}\",\"points\":{},\"max_dev_quad_closed\":{},\"max_dev_oracle_closed\":{},\"max_dev_oracle_quad\":{},\"verdict\":\"{}\"}}",
                        r.id,
                        r.formula,
                        r.points,
                        json_f64(r.max_quad_closed),
                        json_f64(r.max_oracle_closed),
                        json_f64(r.max_oracle_quad),
                        r.verdict.as_str()
                    )
                })
                .collect();
            println!(
                "{{\"schema\":\"trigsum/1\",\"command\":\"check\",\"grid\":{},\"rows\":[{}],\"all_agree\":{}}}",
                args.grid,
                body.join(","),
                all_agree
            );
        }
        _ => {
            println!(
                "{:<6} {:<28} {:>6} {:>12} {:>14} {:>14}  verdict",
                "id", "formula", "points", "quad-closed", "oracle-closed", "oracle-quad"
            );
            for r in &rows {
                println!(
                    "{:<6} {:<28} {:>6} {:>12.3e} {:>14.3e} {:>14.3e}  {}",
                    r.id,
                    r.formula,
                    r.points,
                    r.max_quad_closed,
                    r.max_oracle_closed,
                    r.max_oracle_quad,
                    r.verdict.as_str()
                );
            }
        }
    }
    Ok(if all_agree { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn cmd_table(args: &TableArgs) -> Result<ExitCode, String> {
    let xs: Vec<f64> = args
        .x
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad x value {s:?}")))
        .collect::<Result<_, _>>()?;
    if xs.is_empty() {
        return Err("empty x list".to_string());
    }
    let spec = parse_series(&args.series)?;
    let cfg = quad_config(args.abs_tol, args.rel_tol)?;
    let mut reports = Vec::with_capacity(xs.len());
    for &x0 in &xs {
        let x = if args.normalize_angle { normalize_angle(&spec, x0) } else { x0 };
        reports.push(evaluate_point(&args.series, spec, x, &cfg, !args.no_oracle)?);
    }
    match args.format {
        Format::Json => {
            let body: Vec<String> = reports.iter().map(|r| r.to_json()).collect();
            println!("[{}]", body.join(","));
        }
        Format::Csv => {
            println!("{}", EvalReport::csv_header());
            for r in &reports {
                println!("{}", r.to_csv_row());
            }
        }
        _ => return Err("table supports --format csv or json".to_string()),
    }
    Ok(if reports.iter().any(|r| r.verdict == Verdict::Disagree) {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}
