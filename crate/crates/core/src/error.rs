use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the numerical pipeline.
///
/// Construction errors (`NotUnivalent`, `InvalidGridSize`, ...) signal bad
/// inputs; the convergence variants signal that an iteration budget or a
/// stabilization check was exhausted and the caller should treat the result
/// as unavailable rather than silently degraded.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("quadratic map with |a| = {abs_a} is not univalent on the closed disk (need |a| < 1/2)")]
    NotUnivalent { abs_a: f64 },

    #[error("point z = {z} is outside the closure of the domain (|phi(z)| = {abs_w})")]
    OutsideDomain { z: Complex64, abs_w: f64 },

    #[error(
        "inverse map did not converge after {iterations} Newton steps at z = {z} \
         (residual {residual:.3e}); z may lie outside the domain"
    )]
    InverseNonConvergence {
        z: Complex64,
        iterations: usize,
        residual: f64,
    },

    #[error("grid size {m} must be a power of two and at least 64")]
    InvalidGridSize { m: usize },

    #[error("weight samples must be strictly positive (min sample {min:.3e})")]
    NonPositiveWeight { min: f64 },

    #[error("exponent q = {q} must exceed 1")]
    InvalidExponent { q: f64 },

    #[error("exponent p = {p} must be an integer >= 2")]
    InvalidP { p: u32 },

    #[error("truncation order K = {k} must satisfy 1 <= K <= M/2 (M = {m})")]
    InvalidTruncation { k: usize, m: usize },

    #[error(
        "Fourier tail |c_K| = {tail:.3e} exceeds {limit:.3e}; \
         the weight is too rough for this truncation order"
    )]
    Truncation { tail: f64, limit: f64 },

    #[error("segment quadrature did not stabilize (last node doubling moved the value by {delta:.3e})")]
    QuadratureNonConvergence { delta: f64 },

    #[error("least-squares system is ill-conditioned (condition estimate {cond:.3e})")]
    IllConditioned { cond: f64 },

    #[error(
        "boundary-norm routes disagree: {direct:.15e} vs {closed_form:.15e} \
         (relative {rel:.3e}); the outer-function build is suspect"
    )]
    ConsistencyFailure {
        direct: f64,
        closed_form: f64,
        rel: f64,
    },

    #[error("exponent relation violated: {0}")]
    ExponentMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
