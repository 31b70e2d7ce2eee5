//! Experiment driver: theorem matrices, convergence studies, randomized
//! inequality trials, and deterministic report emission.
//!
//! Determinism contract: a fixed config and seed produce byte-identical CSV.
//! Matrix cells and random trials run in parallel, but every result is keyed
//! and sorted before emission and every trial derives its own generator from
//! the trial index, so the output is schedule-independent. Wall-clock
//! timings are kept out of the CSV (its `ms` column is fixed at zero) and
//! reported in the JSON summary instead.
//!
//! Random ensemble: trial `i` of stream `s` draws from
//! `Xoshiro256PlusPlus::seed_from_u64(seed ^ s*0x9E3779B97F4A7C15 ^ i*0xD1B54A32D192ED03)`.
//! Polynomials have degree uniform on `0..=20` and coefficients i.i.d.
//! standard complex normal (real and imaginary parts `N(0, 1/2)`).

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    check_embedding_inequality, fejer_riesz_check, theorem_rhs, EmbeddingKind, InequalityReport,
    TheoremForm,
};
use crate::curve::{make_boundary_grid, BoundaryGrid, ConformalPair, CurveSpec};
use crate::error::{Error, Result};
use crate::extremal::solve_extremal;
use crate::numerics::ComplexPoly;
use crate::szego::build_outer;
use crate::transport::{compact_lattice, phi_on_lattice, sup_diff_against, TransportPair};
use crate::weight::WeightSpec;

/// Rings per compact radius in the evaluation lattice.
pub const LATTICE_RINGS: usize = 8;
/// Angles per ring.
pub const LATTICE_ANGLES: usize = 512;
/// Random polynomial degree is uniform on `0..=MAX_RANDOM_DEGREE`.
pub const MAX_RANDOM_DEGREE: usize = 20;

const STREAM_MIX: u64 = 0x9E37_79B9_7F4A_7C15;
const TRIAL_MIX: u64 = 0xD1B5_4A32_D192_ED03;

/// Grid size, Fourier truncation order, and segment node count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discretization {
    pub m: usize,
    pub fourier_k: usize,
    pub segment_nodes: usize,
}

impl Default for Discretization {
    fn default() -> Self {
        Self {
            m: 1024,
            fourier_k: 256,
            segment_nodes: 64,
        }
    }
}

/// A fully resolved experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub curves: Vec<CurveSpec>,
    pub weights: Vec<WeightSpec>,
    pub p_values: Vec<u32>,
    /// Degrees run are `0..=n_max`.
    pub n_max: usize,
    pub disc: Discretization,
    /// Compact radii for the evaluation lattice, each in `(0, 1)`.
    pub radii: Vec<f64>,
    pub seed: u64,
    /// Randomized trials per embedding inequality.
    pub trials: usize,
    /// Randomized Fejér–Riesz trials.
    pub fejer_trials: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            curves: vec![CurveSpec::Disk],
            weights: vec![WeightSpec::Const { c: 1.0 }],
            p_values: vec![2],
            n_max: 8,
            disc: Discretization::default(),
            radii: vec![0.5, 0.9, 0.95],
            seed: 12345,
            trials: 200,
            fejer_trials: 500,
        }
    }
}

/// On-disk form of [`ExperimentConfig`]: single specs and lists are both
/// accepted for curves, weights, and exponents.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    curve: Option<CurveSpec>,
    curves: Option<Vec<CurveSpec>>,
    weight: Option<WeightSpec>,
    weights: Option<Vec<WeightSpec>>,
    p: Option<OneOrMany<u32>>,
    n_max: Option<usize>,
    m: Option<usize>,
    fourier_k: Option<usize>,
    segment_nodes: Option<usize>,
    radii: Option<Vec<f64>>,
    seed: Option<u64>,
    trials: Option<usize>,
    fejer_trials: Option<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

impl ExperimentConfig {
    /// Parses a JSON config. Messages from malformed input retain
    /// serde_json's line/column information.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let mut cfg = ExperimentConfig::default();
        match (raw.curve, raw.curves) {
            (Some(c), None) => cfg.curves = vec![c],
            (None, Some(cs)) => cfg.curves = cs,
            (None, None) => {}
            (Some(_), Some(_)) => {
                return Err(Error::InvalidConfig(
                    "give either \"curve\" or \"curves\", not both".into(),
                ))
            }
        }
        match (raw.weight, raw.weights) {
            (Some(w), None) => cfg.weights = vec![w],
            (None, Some(ws)) => cfg.weights = ws,
            (None, None) => {}
            (Some(_), Some(_)) => {
                return Err(Error::InvalidConfig(
                    "give either \"weight\" or \"weights\", not both".into(),
                ))
            }
        }
        if let Some(p) = raw.p {
            cfg.p_values = p.into_vec();
        }
        if let Some(n) = raw.n_max {
            cfg.n_max = n;
        }
        if let Some(m) = raw.m {
            cfg.disc.m = m;
        }
        if let Some(k) = raw.fourier_k {
            cfg.disc.fourier_k = k;
        }
        if let Some(s) = raw.segment_nodes {
            cfg.disc.segment_nodes = s;
        }
        if let Some(r) = raw.radii {
            cfg.radii = r;
        }
        if let Some(s) = raw.seed {
            cfg.seed = s;
        }
        if let Some(t) = raw.trials {
            cfg.trials = t;
        }
        if let Some(t) = raw.fejer_trials {
            cfg.fejer_trials = t;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.curves.is_empty() || self.weights.is_empty() || self.p_values.is_empty() {
            return Err(Error::InvalidConfig(
                "need at least one curve, weight, and exponent".into(),
            ));
        }
        for c in &self.curves {
            c.build()?;
        }
        for w in &self.weights {
            w.validate()?;
        }
        for &p in &self.p_values {
            if p < 2 {
                return Err(Error::InvalidP { p });
            }
        }
        if self.disc.m < 64 || !self.disc.m.is_power_of_two() {
            return Err(Error::InvalidGridSize { m: self.disc.m });
        }
        if self.disc.fourier_k == 0 || self.disc.fourier_k > self.disc.m / 2 {
            return Err(Error::InvalidTruncation {
                k: self.disc.fourier_k,
                m: self.disc.m,
            });
        }
        if self.disc.segment_nodes < 16 {
            return Err(Error::InvalidConfig(format!(
                "segment_nodes = {} must be at least 16",
                self.disc.segment_nodes
            )));
        }
        if self.radii.is_empty() || self.radii.iter().any(|&r| !(0.0 < r && r < 1.0)) {
            return Err(Error::InvalidConfig(format!(
                "compact radii must lie in (0,1); got {:?}",
                self.radii
            )));
        }
        Ok(())
    }

    fn digest(&self, curve: &CurveSpec, weight: &WeightSpec, p: u32) -> String {
        format!("curve={};weight={};p={p}", curve.label(), weight.label())
    }
}

/// The built-in verification matrix: both curves, all three weights,
/// p in {2, 3}, degrees 0..=10.
pub fn builtin_matrix_config(seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        curves: vec![
            CurveSpec::Disk,
            CurveSpec::Quadratic {
                a: [0.2, 0.1],
                xi: [0.0, 0.0],
            },
        ],
        weights: vec![
            WeightSpec::Const { c: 1.0 },
            WeightSpec::ExpCos,
            WeightSpec::SzegoA { a: [0.5, 0.0] },
        ],
        p_values: vec![2, 3],
        n_max: 10,
        seed,
        ..ExperimentConfig::default()
    }
}

/// One matrix cell: uniform-bound data for a single `(curve, weight, p, n)`.
#[derive(Clone, Debug, Serialize)]
pub struct ReportRow {
    pub config_digest: String,
    pub n: usize,
    pub m_n: f64,
    /// Lattice sup of `|J_n - Phi|` over the configured compact radii.
    pub lhs: f64,
    pub rhs_proof: f64,
    pub rhs_statement: f64,
    /// `rhs_proof - lhs`; the canonical verdict uses the proof form.
    pub slack: f64,
    pub pass: bool,
    pub converged: bool,
    pub wall_ms: f64,
}

/// C-style `%.15e` with a signed two-digit exponent, pinned so CSV output is
/// stable across platforms.
pub fn fmt_e15(x: f64) -> String {
    debug_assert!(x.is_finite());
    let s = format!("{x:.15e}");
    let (mantissa, exp) = s.split_once('e').expect("exponential format");
    let (sign, digits) = match exp.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exp),
    };
    format!("{mantissa}e{sign}{digits:0>2}")
}

pub const REPORT_CSV_HEADER: &str =
    "config_digest,n,m_n,lhs,rhs_proof,rhs_statement,slack,pass,ms";

/// Renders rows in the fixed CSV schema. The `ms` column is always `0`;
/// see the module docs for why timings stay out of the CSV.
pub fn render_report_csv(rows: &[ReportRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 160 + 64);
    out.push_str(REPORT_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},0\n",
            row.config_digest,
            row.n,
            fmt_e15(row.m_n),
            fmt_e15(row.lhs),
            fmt_e15(row.rhs_proof),
            fmt_e15(row.rhs_statement),
            fmt_e15(row.slack),
            row.pass,
        ));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct FailureRecord {
    pub seed: u64,
    pub config: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SummaryTotals {
    pub rows: usize,
    pub passes: usize,
    pub failures: usize,
}

/// The JSON summary emitted next to the CSV.
#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub totals: SummaryTotals,
    pub failures: Vec<FailureRecord>,
    pub worst_slack: f64,
    pub wall_ms_total: u64,
}

pub fn summarize_rows(rows: &[ReportRow], seed: u64) -> Summary {
    let failures: Vec<FailureRecord> = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| FailureRecord {
            seed,
            config: format!("{};n={}", r.config_digest, r.n),
        })
        .collect();
    Summary {
        totals: SummaryTotals {
            rows: rows.len(),
            passes: rows.len() - failures.len(),
            failures: failures.len(),
        },
        failures,
        worst_slack: rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min),
        wall_ms_total: rows.iter().map(|r| r.wall_ms).sum::<f64>().round() as u64,
    }
}

pub fn render_summary_json(summary: &Summary) -> String {
    let mut s = serde_json::to_string_pretty(summary).expect("summary serializes");
    s.push('\n');
    s
}

/// `m_{n+1} <= m_n + 1e-10` within every digest group of a sorted row set.
pub fn rows_are_monotone(rows: &[ReportRow]) -> bool {
    rows.windows(2).all(|w| {
        w[0].config_digest != w[1].config_digest || w[1].m_n <= w[0].m_n + 1e-10
    })
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = std::env::var("SZEGO_LAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
}

struct ComboInputs {
    curve: CurveSpec,
    weight: WeightSpec,
    pair: ConformalPair,
    grid: BoundaryGrid,
}

fn run_combo(cfg: &ExperimentConfig, combo: &ComboInputs) -> Result<Vec<ReportRow>> {
    let lattice = compact_lattice(&combo.pair, &cfg.radii, LATTICE_RINGS, LATTICE_ANGLES);
    let mut rows = Vec::with_capacity(cfg.p_values.len() * (cfg.n_max + 1));
    // The integrand of Phi is exp(2 sum c_k u^k): the exponent's 1/p cancels
    // against the p-th power, so Phi is shared across every p of the combo.
    let mut phi: Option<Vec<Complex64>> = None;
    for &p in &cfg.p_values {
        let outer = build_outer(&combo.grid, p, cfg.disc.fourier_k)?;
        let phi = match &phi {
            Some(v) => v,
            None => {
                let v = phi_on_lattice(&combo.pair, &outer, &lattice, cfg.disc.segment_nodes)?;
                phi.insert(v)
            }
        };
        let digest = cfg.digest(&combo.curve, &combo.weight, p);
        for n in 0..=cfg.n_max {
            let start = Instant::now();
            let sol = solve_extremal(&combo.pair, &combo.grid, &outer, n, p)?;
            let transport = TransportPair::new(
                &combo.pair,
                &outer,
                &sol.q_poly,
                p,
                cfg.disc.segment_nodes,
            );
            let lhs = sup_diff_against(&transport.jn, &lattice, phi);
            let rhs_proof = theorem_rhs(&sol, &combo.grid, &outer, TheoremForm::ProofForm);
            let rhs_statement =
                theorem_rhs(&sol, &combo.grid, &outer, TheoremForm::StatementForm);
            let report = InequalityReport::evaluate(
                crate::bounds::InequalityKind::TheoremProofForm,
                lhs,
                rhs_proof,
                String::new(),
            );
            rows.push(ReportRow {
                config_digest: digest.clone(),
                n,
                m_n: sol.m,
                lhs,
                rhs_proof,
                rhs_statement,
                slack: report.slack,
                pass: report.pass,
                converged: sol.converged,
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
            });
        }
    }
    Ok(rows)
}

/// Runs the uniform-bound check over the full `(curve, weight, p, n)`
/// matrix. Rows come back sorted by `(config_digest, n)` regardless of the
/// execution schedule. Solver non-convergence flags the row and the run
/// continues; hard numerical failures abort.
pub fn run_theorem_matrix(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    cfg.validate()?;
    let mut combos = Vec::new();
    for curve in &cfg.curves {
        for weight in &cfg.weights {
            let pair = curve.build()?;
            let grid = make_boundary_grid(&pair, weight, cfg.disc.m)?;
            combos.push(ComboInputs {
                curve: *curve,
                weight: *weight,
                pair,
                grid,
            });
        }
    }
    let pool = thread_pool()?;
    let nested: Vec<Vec<ReportRow>> = pool.install(|| {
        combos
            .par_iter()
            .map(|combo| run_combo(cfg, combo))
            .collect::<Result<_>>()
    })?;
    let mut rows: Vec<ReportRow> = nested.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        a.config_digest
            .cmp(&b.config_digest)
            .then(a.n.cmp(&b.n))
    });
    Ok(rows)
}

/// Theorem rows for a single configuration plus the fitted geometric decay
/// rate of `m_n` (least-squares slope of `log m_n` against `n` over the
/// degrees with `m_n > 1e-13`; omitted when fewer than three qualify).
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub rows: Vec<ReportRow>,
    pub decay_rate: Option<f64>,
}

pub fn run_convergence(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    if cfg.curves.len() != 1 || cfg.weights.len() != 1 || cfg.p_values.len() != 1 {
        return Err(Error::InvalidConfig(
            "convergence studies take a single curve, weight, and exponent".into(),
        ));
    }
    let rows = run_theorem_matrix(cfg)?;
    let tail: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.m_n > 1e-13)
        .map(|r| (r.n as f64, r.m_n.ln()))
        .collect();
    let decay_rate = if tail.len() < 3 {
        None
    } else {
        let n = tail.len() as f64;
        let sx: f64 = tail.iter().map(|(x, _)| x).sum();
        let sy: f64 = tail.iter().map(|(_, y)| y).sum();
        let sxx: f64 = tail.iter().map(|(x, _)| x * x).sum();
        let sxy: f64 = tail.iter().map(|(x, y)| x * y).sum();
        Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
    };
    Ok(ConvergenceReport { rows, decay_rate })
}

/// Outcome of one randomized trial family.
#[derive(Clone, Debug, Serialize)]
pub struct TrialSummary {
    pub label: String,
    pub trials: usize,
    pub passes: usize,
    pub failures: Vec<FailureRecord>,
    /// Minimum slack seen across all trials (negative means a violation).
    pub worst_slack: f64,
}

impl TrialSummary {
    fn from_reports(label: &str, reports: &[(u64, InequalityReport)]) -> Self {
        let failures: Vec<FailureRecord> = reports
            .iter()
            .filter(|(_, r)| !r.pass)
            .map(|(seed, r)| FailureRecord {
                seed: *seed,
                config: r.inputs_digest.clone(),
            })
            .collect();
        Self {
            label: label.to_string(),
            trials: reports.len(),
            passes: reports.len() - failures.len(),
            failures,
            worst_slack: reports
                .iter()
                .map(|(_, r)| r.slack)
                .fold(f64::INFINITY, f64::min),
        }
    }
}

fn trial_seed(seed: u64, stream: u64, trial: u64) -> u64 {
    seed ^ stream.wrapping_mul(STREAM_MIX) ^ trial.wrapping_mul(TRIAL_MIX)
}

/// Degree uniform on `0..=max_degree`, coefficients i.i.d. standard complex
/// normal.
pub fn random_poly<R: Rng>(rng: &mut R, max_degree: usize) -> ComplexPoly {
    let degree = rng.gen_range(0..=max_degree);
    let coeffs = (0..=degree)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect();
    ComplexPoly::new(coeffs)
}

/// Exponent cycles for the randomized embedding trials; every triple
/// satisfies the relation its inequality requires.
fn exponent_cycle(kind: EmbeddingKind) -> &'static [(f64, f64, f64)] {
    match kind {
        EmbeddingKind::Proposition => &[(2.0, 2.0, 1.0)],
        EmbeddingKind::Corollary1 => &[
            (2.0, 2.0, 1.0),
            (3.0, 1.5, 1.0),
            (4.0, 4.0 / 3.0, 1.0),
        ],
        EmbeddingKind::Corollary2 => &[
            (2.0, 2.0, 1.0),
            (3.0, 1.5, 1.0),
            (4.0, 4.0, 2.0),
            (6.0, 3.0, 2.0),
        ],
    }
}

fn embedding_stream(kind: EmbeddingKind) -> u64 {
    match kind {
        EmbeddingKind::Proposition => 1,
        EmbeddingKind::Corollary1 => 2,
        EmbeddingKind::Corollary2 => 3,
    }
}

fn embedding_label(kind: EmbeddingKind) -> &'static str {
    match kind {
        EmbeddingKind::Proposition => "proposition",
        EmbeddingKind::Corollary1 => "corollary1",
        EmbeddingKind::Corollary2 => "corollary2",
    }
}

/// Runs the equality probes plus `cfg.trials` randomized trials of one
/// embedding inequality, cycling through every `(curve, weight)` combo and
/// the kind's exponent cycle by trial index.
pub fn run_embedding_trials(cfg: &ExperimentConfig, kind: EmbeddingKind) -> Result<TrialSummary> {
    cfg.validate()?;
    let mut combos = Vec::new();
    for curve in &cfg.curves {
        for weight in &cfg.weights {
            let pair = curve.build()?;
            let grid = make_boundary_grid(&pair, weight, cfg.disc.m)?;
            let label = format!("curve={};weight={}", curve.label(), weight.label());
            combos.push((grid, label));
        }
    }
    let cycle = exponent_cycle(kind);
    let stream = embedding_stream(kind);

    // Equality probes: Q = 1 and Q = z on the unit circle with unit weight
    // saturate the Cauchy-Schwarz bound exactly.
    let probe_grid = make_boundary_grid(
        &ConformalPair::disk(),
        &WeightSpec::Const { c: 1.0 },
        cfg.disc.m,
    )?;
    let mut reports: Vec<(u64, InequalityReport)> = Vec::new();
    for probe in [ComplexPoly::one(), ComplexPoly::from_real(&[0.0, 1.0])] {
        let rep = check_embedding_inequality(
            kind,
            &probe,
            &probe_grid,
            2.0,
            2.0,
            1.0,
            "probe;curve=disk;weight=const(c=1)",
        )?;
        reports.push((cfg.seed, rep));
    }

    let pool = thread_pool()?;
    let trial_reports: Vec<(u64, InequalityReport)> = pool.install(|| {
        (0..cfg.trials as u64)
            .into_par_iter()
            .map(|i| {
                let s = trial_seed(cfg.seed, stream, i);
                let mut rng = Xoshiro256PlusPlus::seed_from_u64(s);
                let poly = random_poly(&mut rng, MAX_RANDOM_DEGREE);
                let (grid, label) = &combos[i as usize % combos.len()];
                let (p, q, r) = cycle[i as usize % cycle.len()];
                let context = format!("trial={i};{label}");
                let rep = check_embedding_inequality(kind, &poly, grid, p, q, r, &context)?;
                Ok((s, rep))
            })
            .collect::<Result<_>>()
    })?;
    reports.extend(trial_reports);
    Ok(TrialSummary::from_reports(embedding_label(kind), &reports))
}

/// Runs `cfg.fejer_trials` randomized Fejér–Riesz trials: random polynomial,
/// random endpoint uniform on the closed disk.
pub fn run_fejer_trials(cfg: &ExperimentConfig) -> Result<TrialSummary> {
    cfg.validate()?;
    let pool = thread_pool()?;
    let reports: Vec<(u64, InequalityReport)> = pool.install(|| {
        (0..cfg.fejer_trials as u64)
            .into_par_iter()
            .map(|i| {
                let s = trial_seed(cfg.seed, 4, i);
                let mut rng = Xoshiro256PlusPlus::seed_from_u64(s);
                let poly = random_poly(&mut rng, MAX_RANDOM_DEGREE);
                let radius = rng.gen::<f64>().sqrt();
                let angle = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
                let x = Complex64::from_polar(radius, angle);
                let rep = fejer_riesz_check(&poly, x)?;
                Ok((s, rep))
            })
            .collect::<Result<_>>()
    })?;
    Ok(TrialSummary::from_reports("fejer_riesz", &reports))
}

/// All four randomized trial families, in fixed order.
pub fn run_random_checks(cfg: &ExperimentConfig) -> Result<Vec<TrialSummary>> {
    Ok(vec![
        run_embedding_trials(cfg, EmbeddingKind::Proposition)?,
        run_embedding_trials(cfg, EmbeddingKind::Corollary1)?,
        run_embedding_trials(cfg, EmbeddingKind::Corollary2)?,
        run_fejer_trials(cfg)?,
    ])
}

/// Merges trial summaries into the JSON summary shape.
pub fn summarize_trials(summaries: &[TrialSummary], wall_ms_total: u64) -> Summary {
    let mut failures = Vec::new();
    let mut rows = 0;
    let mut passes = 0;
    let mut worst = f64::INFINITY;
    for s in summaries {
        rows += s.trials;
        passes += s.passes;
        failures.extend(s.failures.iter().cloned());
        worst = worst.min(s.worst_slack);
    }
    Summary {
        totals: SummaryTotals {
            rows,
            passes,
            failures: failures.len(),
        },
        failures,
        worst_slack: worst,
        wall_ms_total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_e15_is_c_style() {
        assert_eq!(fmt_e15(0.0), "0.000000000000000e+00");
        assert_eq!(fmt_e15(1.0), "1.000000000000000e+00");
        assert_eq!(fmt_e15(-2.5e-13), "-2.500000000000000e-13");
        assert_eq!(fmt_e15(6.02214076e23), "6.022140760000000e+23");
        assert_eq!(fmt_e15(7.954926521012845), "7.954926521012845e+00");
    }

    #[test]
    fn identity_matrix_rows_all_pass() {
        let cfg = ExperimentConfig {
            n_max: 4,
            ..ExperimentConfig::default()
        };
        let rows = run_theorem_matrix(&cfg).unwrap();
        assert_eq!(rows.len(), 5);
        for row in &rows {
            assert!(row.m_n <= 1e-12);
            assert!(row.lhs <= 1e-12);
            assert!(row.pass, "row n = {} failed", row.n);
            assert!(row.converged);
        }
        assert!(rows_are_monotone(&rows));
    }

    #[test]
    fn matrix_is_sorted_and_deterministic() {
        let cfg = ExperimentConfig {
            curves: vec![
                CurveSpec::Disk,
                CurveSpec::Quadratic {
                    a: [0.2, 0.1],
                    xi: [0.0, 0.0],
                },
            ],
            weights: vec![WeightSpec::Const { c: 1.0 }, WeightSpec::ExpCos],
            p_values: vec![2],
            n_max: 2,
            ..ExperimentConfig::default()
        };
        let a = render_report_csv(&run_theorem_matrix(&cfg).unwrap());
        let b = render_report_csv(&run_theorem_matrix(&cfg).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with(REPORT_CSV_HEADER));
    }

    #[test]
    fn convergence_identity_has_no_rate() {
        let cfg = ExperimentConfig {
            n_max: 4,
            ..ExperimentConfig::default()
        };
        let rep = run_convergence(&cfg).unwrap();
        assert!(rep.decay_rate.is_none());
        assert!(rep.rows.iter().all(|r| r.m_n <= 1e-12));
    }

    #[test]
    fn convergence_expcos_rate_is_negative() {
        let cfg = ExperimentConfig {
            weights: vec![WeightSpec::ExpCos],
            n_max: 8,
            ..ExperimentConfig::default()
        };
        let rep = run_convergence(&cfg).unwrap();
        let rate = rep.decay_rate.expect("enough tail points");
        assert!(rate < -1.0, "rate = {rate}");
    }

    #[test]
    fn convergence_szego_a_collapses_after_degree_one() {
        // The target is a degree-1 polynomial, so only m_0 clears the
        // 1e-13 floor and the rate fit is omitted.
        let cfg = ExperimentConfig {
            weights: vec![WeightSpec::SzegoA { a: [0.5, 0.0] }],
            n_max: 6,
            ..ExperimentConfig::default()
        };
        let rep = run_convergence(&cfg).unwrap();
        assert!(rep.decay_rate.is_none());
        for row in &rep.rows {
            if row.n >= 1 {
                assert!(row.m_n <= 1e-9, "m_{} = {:e}", row.n, row.m_n);
            }
        }
    }

    #[test]
    fn config_json_forms() {
        let cfg = ExperimentConfig::from_json_str(
            r#"{"curve":{"kind":"disk"},"weight":{"kind":"expcos"},"p":2,"n_max":3}"#,
        )
        .unwrap();
        assert_eq!(cfg.curves, vec![CurveSpec::Disk]);
        assert_eq!(cfg.p_values, vec![2]);

        let cfg = ExperimentConfig::from_json_str(
            r#"{"curves":[{"kind":"disk"},{"kind":"quadratic","a":[0.2,0.1]}],
                "weights":[{"kind":"const","c":1.0}],"p":[2,3],"seed":7}"#,
        )
        .unwrap();
        assert_eq!(cfg.curves.len(), 2);
        assert_eq!(cfg.p_values, vec![2, 3]);
        assert_eq!(cfg.seed, 7);

        assert!(ExperimentConfig::from_json_str("{\"p\":1}").is_err());
        assert!(ExperimentConfig::from_json_str("{nope").is_err());
    }

    #[test]
    fn trial_rng_is_reproducible() {
        let mut a = Xoshiro256PlusPlus::seed_from_u64(trial_seed(42, 1, 7));
        let mut b = Xoshiro256PlusPlus::seed_from_u64(trial_seed(42, 1, 7));
        let pa = random_poly(&mut a, 20);
        let pb = random_poly(&mut b, 20);
        assert_eq!(pa, pb);
        let c = Xoshiro256PlusPlus::seed_from_u64(trial_seed(42, 1, 8)).gen::<u64>();
        assert_ne!(Xoshiro256PlusPlus::seed_from_u64(trial_seed(42, 1, 7)).gen::<u64>(), c);
    }

    #[test]
    fn small_trial_runs_have_no_failures() {
        let cfg = ExperimentConfig {
            curves: vec![CurveSpec::Disk],
            weights: vec![WeightSpec::Const { c: 1.0 }, WeightSpec::ExpCos],
            trials: 12,
            fejer_trials: 20,
            ..ExperimentConfig::default()
        };
        for summary in run_random_checks(&cfg).unwrap() {
            assert!(
                summary.failures.is_empty(),
                "{}: {:?}",
                summary.label,
                summary.failures
            );
            assert!(summary.worst_slack >= -1e-12);
        }
    }

    #[test]
    fn summary_counts_are_consistent() {
        let cfg = ExperimentConfig {
            n_max: 3,
            ..ExperimentConfig::default()
        };
        let rows = run_theorem_matrix(&cfg).unwrap();
        let summary = summarize_rows(&rows, cfg.seed);
        assert_eq!(summary.totals.rows, rows.len());
        assert_eq!(summary.totals.passes + summary.totals.failures, rows.len());
        let json = render_summary_json(&summary);
        assert!(json.contains("\"totals\""));
        assert!(json.contains("\"worst_slack\""));
    }
}
