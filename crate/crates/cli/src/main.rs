//! Command-line driver: solve extremal instances, verify the inequalities,
//! sweep the built-in matrix, and summarize reports.
//!
//! Exit codes: 0 = all checks pass, 1 = at least one inequality violation,
//! 2 = configuration error, 3 = numerical non-convergence.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use szegolab_core::bounds::EmbeddingKind;
use szegolab_core::harness::{
    builtin_matrix_config, render_report_csv, render_summary_json, rows_are_monotone,
    run_convergence, run_embedding_trials, run_fejer_trials, run_theorem_matrix, summarize_rows,
    summarize_trials, ReportRow, TrialSummary,
};
use szegolab_core::{CurveSpec, Error, ExperimentConfig, WeightSpec};

const EXIT_VIOLATION: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "szegolab",
    version,
    about = "Szegő outer functions, extremal polynomials, and boundary-inequality checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one constrained best-approximation instance, print JSON.
    Solve(SolveArgs),
    /// Verify an inequality family and write report files.
    Verify(VerifyArgs),
    /// Run the built-in (curve, weight, p, n) verification matrix.
    Sweep(CommonArgs),
    /// Run a convergence study for a single configuration.
    Convergence(CommonArgs),
    /// Summarize an existing report.csv.
    Report(ReportArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    target: VerifyTarget,
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// Uniform bound ||J_n - Phi|| <= (m/2)(...)^{p-1} over the config matrix.
    Theorem(CommonArgs),
    /// Cauchy-Schwarz embedding trials.
    Proposition(CommonArgs),
    /// Hölder embedding trials (conjugate exponents).
    Corollary1(CommonArgs),
    /// Generalized Hölder embedding trials (1/p + 1/q = 1/r).
    Corollary2(CommonArgs),
    /// Fejér-Riesz segment-vs-circle trials.
    #[command(name = "fejer-riesz")]
    FejerRiesz(CommonArgs),
}

fn parse_complex(s: &str) -> Result<(f64, f64), String> {
    let mut parts = s.splitn(2, ',');
    let re = parts
        .next()
        .ok_or("empty complex literal")?
        .trim()
        .parse::<f64>()
        .map_err(|e| format!("bad real part: {e}"))?;
    let im = match parts.next() {
        Some(p) => p
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("bad imaginary part: {e}"))?,
        None => 0.0,
    };
    Ok((re, im))
}

/// Flags shared by every experiment-driving subcommand; each flag overrides
/// the matching config-file field.
#[derive(Args, Clone)]
struct CommonArgs {
    /// JSON experiment config; see the README for the schema.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Curve kind: disk | quadratic.
    #[arg(long)]
    curve: Option<String>,
    /// Quadratic curve coefficient, as "re,im".
    #[arg(long, value_name = "RE,IM", value_parser = parse_complex)]
    curve_a: Option<(f64, f64)>,
    /// Base point, as "re,im" (quadratic curves only).
    #[arg(long, value_name = "RE,IM", value_parser = parse_complex)]
    xi: Option<(f64, f64)>,
    /// Weight kind: const | expcos | szego_a.
    #[arg(long)]
    weight: Option<String>,
    /// Constant weight value (weight kind "const").
    #[arg(long)]
    c: Option<f64>,
    /// szego_a weight parameter, as "re,im".
    #[arg(long, value_name = "RE,IM", value_parser = parse_complex)]
    a: Option<(f64, f64)>,
    /// Norm exponent; repeat for several (e.g. --p 2 --p 3).
    #[arg(long = "p")]
    p: Vec<u32>,
    /// Largest polynomial degree; degrees 0..=n-max are run.
    #[arg(long)]
    n_max: Option<usize>,
    /// Boundary grid size (power of two, >= 64).
    #[arg(long)]
    m: Option<usize>,
    /// Fourier truncation order of the outer function.
    #[arg(long)]
    fourier_k: Option<usize>,
    /// Gauss-Legendre nodes for segment integrals.
    #[arg(long)]
    segment_nodes: Option<usize>,
    /// Compact radii, comma separated (each in (0,1)).
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Seed for the randomized trials.
    #[arg(long)]
    seed: Option<u64>,
    /// Randomized trial count for the selected inequality.
    #[arg(long)]
    trials: Option<usize>,
    /// Output directory for report.csv and summary.json.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Polynomial degree of the solved instance.
    #[arg(long, default_value_t = 0)]
    n: usize,
}

#[derive(Args)]
struct ReportArgs {
    /// Path of a previously written report.csv.
    #[arg(long, default_value = "report.csv")]
    csv: PathBuf,
}

/// A failure bucketed by exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }
}

fn classify(e: Error) -> Failure {
    let code = match e {
        Error::InvalidConfig(_)
        | Error::InvalidGridSize { .. }
        | Error::InvalidExponent { .. }
        | Error::InvalidP { .. }
        | Error::InvalidTruncation { .. }
        | Error::NotUnivalent { .. }
        | Error::NonPositiveWeight { .. }
        | Error::ExponentMismatch(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn build_config(args: &CommonArgs, default: ExperimentConfig) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::from_json_str(&text)
                .map_err(|e| Failure::config(format!("{}: {e}", path.display())))?
        }
        None => default,
    };
    if let Some(kind) = &args.curve {
        let spec = match kind.as_str() {
            "disk" => CurveSpec::Disk,
            "quadratic" => {
                let a = args
                    .curve_a
                    .ok_or_else(|| Failure::config("--curve quadratic needs --curve-a re,im"))?;
                let xi = args.xi.unwrap_or((0.0, 0.0));
                CurveSpec::Quadratic {
                    a: [a.0, a.1],
                    xi: [xi.0, xi.1],
                }
            }
            other => return Err(Failure::config(format!("unknown curve kind \"{other}\""))),
        };
        cfg.curves = vec![spec];
    }
    if let Some(kind) = &args.weight {
        let spec = match kind.as_str() {
            "const" => WeightSpec::Const {
                c: args.c.unwrap_or(1.0),
            },
            "expcos" => WeightSpec::ExpCos,
            "szego_a" => {
                let a = args
                    .a
                    .ok_or_else(|| Failure::config("--weight szego_a needs --a re,im"))?;
                WeightSpec::SzegoA { a: [a.0, a.1] }
            }
            other => return Err(Failure::config(format!("unknown weight kind \"{other}\""))),
        };
        cfg.weights = vec![spec];
    }
    if !args.p.is_empty() {
        cfg.p_values = args.p.clone();
    }
    if let Some(n) = args.n_max {
        cfg.n_max = n;
    }
    if let Some(m) = args.m {
        cfg.disc.m = m;
    }
    if let Some(k) = args.fourier_k {
        cfg.disc.fourier_k = k;
    }
    if let Some(s) = args.segment_nodes {
        cfg.disc.segment_nodes = s;
    }
    if let Some(r) = &args.radii {
        cfg.radii = r.clone();
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
        cfg.fejer_trials = t;
    }
    cfg.validate().map_err(classify)?;
    Ok(cfg)
}

fn write_outputs(out: &Path, csv: &str, summary_json: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(out)
        .map_err(|e| Failure::config(format!("cannot create {}: {e}", out.display())))?;
    let csv_path = out.join("report.csv");
    let json_path = out.join("summary.json");
    std::fs::write(&csv_path, csv)
        .map_err(|e| Failure::config(format!("cannot write {}: {e}", csv_path.display())))?;
    std::fs::write(&json_path, summary_json)
        .map_err(|e| Failure::config(format!("cannot write {}: {e}", json_path.display())))?;
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}

fn rows_exit_code(rows: &[ReportRow]) -> u8 {
    if rows.iter().any(|r| !r.pass) {
        EXIT_VIOLATION
    } else if rows.iter().any(|r| !r.converged) {
        EXIT_NUMERICAL
    } else {
        0
    }
}

fn run_matrix_command(args: &CommonArgs, default: ExperimentConfig) -> Result<u8, Failure> {
    let cfg = build_config(args, default)?;
    let started = std::time::Instant::now();
    let rows = run_theorem_matrix(&cfg).map_err(classify)?;
    let mut summary = summarize_rows(&rows, cfg.seed);
    summary.wall_ms_total = started.elapsed().as_millis() as u64;
    write_outputs(&args.out, &render_report_csv(&rows), &render_summary_json(&summary))?;
    println!(
        "rows: {}, passes: {}, failures: {}, worst slack: {:.3e}",
        summary.totals.rows, summary.totals.passes, summary.totals.failures, summary.worst_slack
    );
    for f in &summary.failures {
        println!("FAIL {}", f.config);
    }
    if !rows_are_monotone(&rows) {
        println!("warning: m_n is not nonincreasing within some group");
    }
    Ok(rows_exit_code(&rows))
}

fn run_trial_command(
    args: &CommonArgs,
    run: impl FnOnce(&ExperimentConfig) -> szegolab_core::Result<TrialSummary>,
) -> Result<u8, Failure> {
    let cfg = build_config(args, builtin_matrix_config(12345))?;
    let started = std::time::Instant::now();
    let summary = run(&cfg).map_err(classify)?;
    let merged = summarize_trials(
        std::slice::from_ref(&summary),
        started.elapsed().as_millis() as u64,
    );
    std::fs::create_dir_all(&args.out)
        .map_err(|e| Failure::config(format!("cannot create {}: {e}", args.out.display())))?;
    let json_path = args.out.join("summary.json");
    std::fs::write(&json_path, render_summary_json(&merged))
        .map_err(|e| Failure::config(format!("cannot write {}: {e}", json_path.display())))?;
    println!(
        "{}: trials: {}, passes: {}, failures: {}, worst slack: {:.3e}",
        summary.label,
        summary.trials,
        summary.passes,
        summary.failures.len(),
        summary.worst_slack
    );
    for f in &summary.failures {
        println!("FAIL seed={} {}", f.seed, f.config);
    }
    println!("wrote {}", json_path.display());
    Ok(if summary.failures.is_empty() { 0 } else { EXIT_VIOLATION })
}

fn run_solve(args: &SolveArgs) -> Result<u8, Failure> {
    let cfg = build_config(&args.common, ExperimentConfig::default())?;
    if cfg.curves.len() != 1 || cfg.weights.len() != 1 {
        return Err(Failure::config("solve takes a single curve and weight"));
    }
    let p = *cfg.p_values.first().unwrap();
    let curve = cfg.curves[0];
    let weight = cfg.weights[0];
    let pair = curve.build().map_err(classify)?;
    let grid = szegolab_core::make_boundary_grid(&pair, &weight, cfg.disc.m).map_err(classify)?;
    let outer =
        szegolab_core::szego::build_outer(&grid, p, cfg.disc.fourier_k).map_err(classify)?;
    let sol = szegolab_core::extremal::solve_extremal(&pair, &grid, &outer, args.n, p)
        .map_err(classify)?;
    let coefficients: Vec<[f64; 2]> = sol.q_poly.coeffs().iter().map(|c| [c.re, c.im]).collect();
    let doc = serde_json::json!({
        "curve": curve.label(),
        "weight": weight.label(),
        "p": p,
        "n": sol.n,
        "m": sol.m,
        "coefficients": coefficients,
        "iterations": sol.iterations,
        "converged": sol.converged,
        "objective_history": sol.objective_history,
    });
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializes"));
    Ok(if sol.converged { 0 } else { EXIT_NUMERICAL })
}

fn run_convergence_command(args: &CommonArgs) -> Result<u8, Failure> {
    let default = ExperimentConfig {
        weights: vec![WeightSpec::ExpCos],
        n_max: 12,
        ..ExperimentConfig::default()
    };
    let cfg = build_config(args, default)?;
    let started = std::time::Instant::now();
    let report = run_convergence(&cfg).map_err(classify)?;
    let mut summary = summarize_rows(&report.rows, cfg.seed);
    summary.wall_ms_total = started.elapsed().as_millis() as u64;
    write_outputs(
        &args.out,
        &render_report_csv(&report.rows),
        &render_summary_json(&summary),
    )?;
    for row in &report.rows {
        println!(
            "n = {:2}  m_n = {:.6e}  sup|J-Phi| = {:.6e}",
            row.n, row.m_n, row.lhs
        );
    }
    match report.decay_rate {
        Some(rate) => println!("fitted decay rate of log m_n: {rate:.6}"),
        None => println!("decay rate omitted (fewer than 3 degrees with m_n > 1e-13)"),
    }
    Ok(rows_exit_code(&report.rows))
}

fn run_report(args: &ReportArgs) -> Result<u8, Failure> {
    let text = std::fs::read_to_string(&args.csv)
        .map_err(|e| Failure::config(format!("cannot read {}: {e}", args.csv.display())))?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header != szegolab_core::harness::REPORT_CSV_HEADER {
        return Err(Failure::config(format!(
            "{}: unexpected header {header:?}",
            args.csv.display()
        )));
    }
    let mut rows = 0usize;
    let mut failures = Vec::new();
    let mut worst_slack = f64::INFINITY;
    let mut monotone = true;
    let mut last: Option<(String, f64)> = None;
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(Failure::config(format!(
                "{}:{}: expected 9 fields, found {}",
                args.csv.display(),
                idx + 2,
                fields.len()
            )));
        }
        let parse = |s: &str, what: &str| -> Result<f64, Failure> {
            s.parse::<f64>().map_err(|e| {
                Failure::config(format!("{}:{}: bad {what}: {e}", args.csv.display(), idx + 2))
            })
        };
        let m_n = parse(fields[2], "m_n")?;
        let slack = parse(fields[6], "slack")?;
        worst_slack = worst_slack.min(slack);
        rows += 1;
        if fields[7] != "true" {
            failures.push(format!("{};n={}", fields[0], fields[1]));
        }
        if let Some((digest, prev_m)) = &last {
            if digest == fields[0] && m_n > prev_m + 1e-10 {
                monotone = false;
            }
        }
        last = Some((fields[0].to_string(), m_n));
    }
    println!(
        "rows: {rows}, failures: {}, worst slack: {worst_slack:.3e}, m_n monotone: {monotone}",
        failures.len()
    );
    for f in &failures {
        println!("FAIL {f}");
    }
    Ok(if failures.is_empty() { 0 } else { EXIT_VIOLATION })
}

fn dispatch() -> Result<u8, Failure> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Verify(v) => match &v.target {
            VerifyTarget::Theorem(args) => run_matrix_command(args, ExperimentConfig::default()),
            VerifyTarget::Proposition(args) => {
                run_trial_command(args, |cfg| run_embedding_trials(cfg, EmbeddingKind::Proposition))
            }
            VerifyTarget::Corollary1(args) => {
                run_trial_command(args, |cfg| run_embedding_trials(cfg, EmbeddingKind::Corollary1))
            }
            VerifyTarget::Corollary2(args) => {
                run_trial_command(args, |cfg| run_embedding_trials(cfg, EmbeddingKind::Corollary2))
            }
            VerifyTarget::FejerRiesz(args) => run_trial_command(args, run_fejer_trials),
        },
        Command::Sweep(args) => {
            let seed = args.seed.unwrap_or(12345);
            run_matrix_command(args, builtin_matrix_config(seed))
        }
        Command::Convergence(args) => run_convergence_command(args),
        Command::Report(args) => run_report(args),
    }
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
