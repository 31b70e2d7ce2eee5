//! Outer (Szegő) functions built from boundary data.
//!
//! With `W(theta) = rho_hat(theta) * |psi'(e^{i theta})|`, the outer function
//! on the disk is
//!
//! ```text
//! D(w) = exp{ (1/p) (c_0 + 2 * sum_{k>=1} c_k w^k) },
//! c_k = (1/2pi) int_0^{2pi} log W(theta) e^{-ik theta} dtheta,
//! ```
//!
//! the Fourier form of the Herglotz-kernel integral with kernel
//! `(e^{i theta} + w) / (e^{i theta} - w)`. This is the kernel orientation
//! that makes the boundary modulus reproduce the weight
//! (`|D|^p |phi'| = rho` on the curve) and makes `D(0) = e^{c_0/p} > 0`;
//! the opposite orientation satisfies neither property.
//!
//! The p-th power is always evaluated by scaling the exponent, never by
//! complex powering, so no branch cut is ever crossed.

use num_complex::Complex64;

use crate::curve::{BoundaryGrid, ConformalPair};
use crate::error::{Error, Result};

/// A built outer function is rejected when its last Fourier coefficient is
/// still above this size: the weight is too rough for the truncation order.
pub const TRUNCATION_LIMIT: f64 = 1e-13;

/// Coefficients at or below this modulus are skipped during evaluation;
/// their total contribution sits ten orders below every tolerance in play.
const EVAL_TRIM: f64 = 1e-18;

/// Truncated Fourier representation of `log W`, exposing exact evaluation of
/// `D`, `D^p`, and `D(0)`.
///
/// Immutable after construction; evaluation is pure.
#[derive(Clone, Debug)]
pub struct OuterFunction {
    p: u32,
    /// `c_0..c_K`; `c_0` is real by construction.
    coeffs: Vec<Complex64>,
    /// Number of leading coefficients that matter at evaluation time; the
    /// built-in weights decay super-exponentially, so this is usually far
    /// below `K`.
    eval_terms: usize,
    tail: f64,
}

/// Computes the Fourier coefficients of `log W` on the grid and assembles
/// the outer function for exponent `p`.
///
/// Requires `p >= 2` and `1 <= K <= M/2`. Fails with [`Error::Truncation`]
/// when `|c_K|` exceeds [`TRUNCATION_LIMIT`].
pub fn build_outer(grid: &BoundaryGrid, p: u32, k: usize) -> Result<OuterFunction> {
    if p < 2 {
        return Err(Error::InvalidP { p });
    }
    let m = grid.len();
    if k == 0 || k > m / 2 {
        return Err(Error::InvalidTruncation { k, m });
    }

    let log_w: Vec<f64> = grid
        .rho()
        .iter()
        .zip(grid.psi_prime_abs())
        .map(|(r, d)| (r * d).ln())
        .collect();

    // c_j accumulated for all orders in one sweep over the grid; the phase
    // factor e^{-i j theta} is built up multiplicatively per node.
    let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
    for (j, &lw) in log_w.iter().enumerate() {
        let u = grid.circle()[j].conj();
        let mut phase = Complex64::new(1.0, 0.0);
        for c in coeffs.iter_mut() {
            *c += lw * phase;
            phase *= u;
        }
    }
    let scale = 1.0 / m as f64;
    for c in coeffs.iter_mut() {
        *c *= scale;
    }

    debug_assert!(coeffs[0].im.abs() <= 1e-12, "c_0 must be real");
    coeffs[0] = Complex64::new(coeffs[0].re, 0.0);

    let tail = coeffs[k].norm();
    if tail > TRUNCATION_LIMIT {
        return Err(Error::Truncation {
            tail,
            limit: TRUNCATION_LIMIT,
        });
    }
    let eval_terms = coeffs
        .iter()
        .rposition(|c| c.norm() > EVAL_TRIM)
        .map_or(1, |i| i + 1);
    Ok(OuterFunction {
        p,
        coeffs,
        eval_terms,
        tail,
    })
}

impl OuterFunction {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Modulus of the last retained Fourier coefficient.
    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `c_0 + 2 sum_{k>=1} c_k w^k`, the analytic exponent of `D^p`.
    fn exponent(&self, w: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs[1..self.eval_terms.max(1)].iter().rev() {
            acc = acc * w + c;
        }
        self.coeffs[0] + 2.0 * acc * w
    }

    /// `D(w)` for `|w| <= 1`.
    pub fn eval(&self, w: Complex64) -> Complex64 {
        debug_assert!(w.norm() <= 1.0 + 1e-12);
        (self.exponent(w) / self.p as f64).exp()
    }

    /// `D(w)^p`, evaluated as `exp` of the unscaled exponent so that the
    /// power is exact and branch-free.
    pub fn eval_power(&self, w: Complex64) -> Complex64 {
        debug_assert!(w.norm() <= 1.0 + 1e-12);
        self.exponent(w).exp()
    }

    /// `D(0) = e^{c_0 / p}`, real and positive.
    pub fn at_base(&self) -> f64 {
        (self.coeffs[0].re / self.p as f64).exp()
    }

    /// A positive lower bound for `|D|` on the closed disk:
    /// `exp(-(|c_0| + 2 sum |c_k|) / p)`. Witnesses zero-freeness.
    pub fn min_modulus_bound(&self) -> f64 {
        let total = self.coeffs[0].norm()
            + 2.0 * self.coeffs.iter().skip(1).map(|c| c.norm()).sum::<f64>();
        (-total / self.p as f64).exp()
    }
}

/// The normalized target `f*(z) = D(phi(z)) / D(0)`, the function the
/// extremal problem approximates. Satisfies `f*(xi) = 1`.
pub fn eval_target(pair: &ConformalPair, outer: &OuterFunction, z: Complex64) -> Result<Complex64> {
    let w = pair.map_inverse(z)?;
    Ok(outer.eval(w) / outer.at_base())
}

/// `f*` sampled at all grid nodes. The grid's circle nodes are exactly the
/// preimages of its curve points, so no inversion is needed.
pub fn target_on_grid(grid: &BoundaryGrid, outer: &OuterFunction) -> Vec<Complex64> {
    let d0 = outer.at_base();
    grid.circle().iter().map(|&w| outer.eval(w) / d0).collect()
}
