//! Quadrature engines and complex-polynomial algebra.
//!
//! Everything downstream (outer functions, extremal solves, transported
//! integrals) reduces to three primitives: the periodic trapezoid rule on
//! equispaced boundary samples, Gauss–Legendre quadrature on straight
//! segments, and dense polynomial arithmetic in the monomial basis.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Trailing coefficients at or below this modulus are trimmed away when a
/// polynomial is put in canonical form. The threshold sits at the subnormal
/// floor so genuine solver noise (1e-16-ish) is never dropped.
pub const TRIM_THRESHOLD: f64 = 1e-300;

/// Dense complex polynomial, coefficients in ascending degree.
///
/// Canonical form: the zero polynomial has no coefficients, and a nonzero
/// polynomial has a trailing coefficient above [`TRIM_THRESHOLD`].
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while let Some(c) = coeffs.last() {
            if c.norm() <= TRIM_THRESHOLD {
                coeffs.pop();
            } else {
                break;
            }
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Product by direct coefficient convolution.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Integer power by repeated convolution; `pow(0)` is the constant 1.
    pub fn pow(&self, p: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..p {
            out = out.mul(self);
        }
        out
    }

    /// Antiderivative with zero constant term: coefficient `c_k` moves to
    /// degree `k + 1` scaled by `1/(k + 1)`.
    pub fn antiderivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(Complex64::new(0.0, 0.0));
        for (k, &c) in self.coeffs.iter().enumerate() {
            out.push(c / (k as f64 + 1.0));
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }
}

/// Trapezoid rule on a full period of equispaced samples.
///
/// On periodic grids the trapezoid rule collapses to the rectangle rule and
/// converges spectrally for smooth integrands.
pub fn integrate_periodic(samples: &[Complex64], d_theta: f64) -> Complex64 {
    let sum: Complex64 = samples.iter().sum();
    sum * d_theta
}

/// Real-sample variant of [`integrate_periodic`].
pub fn integrate_periodic_real(samples: &[f64], d_theta: f64) -> f64 {
    samples.iter().sum::<f64>() * d_theta
}

/// A quadrature rule: paired node and weight vectors on `[-1, 1]`.
pub type QuadRule = Rc<(Vec<f64>, Vec<f64>)>;

thread_local! {
    static GL_CACHE: RefCell<HashMap<usize, QuadRule>> = RefCell::new(HashMap::new());
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
///
/// Nodes are found by Newton iteration on the Legendre recurrence, seeded by
/// the Chebyshev-angle estimate; the rule is exact for polynomials of degree
/// `2k - 1`. Rules are cached per node count (thread-locally, so segment
/// integrals in hot parallel loops never contend on a lock).
pub fn gauss_legendre(k: usize) -> QuadRule {
    assert!(k >= 1, "Gauss-Legendre rule needs at least one node");
    if let Some(hit) = GL_CACHE.with(|c| c.borrow().get(&k).cloned()) {
        return hit;
    }

    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    let half = k.div_ceil(2);
    for i in 0..half {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence: (j+1) P_{j+1} = (2j+1) x P_j - j P_{j-1}.
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 1..k {
                let p2 = ((2 * j + 1) as f64 * x * p1 - j as f64 * p0) / (j as f64 + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = k as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[k - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[k - 1 - i] = w;
    }
    if k % 2 == 1 {
        nodes[k / 2] = 0.0;
    }

    let rule = Rc::new((nodes, weights));
    GL_CACHE.with(|c| c.borrow_mut().insert(k, rule.clone()));
    rule
}

fn gl_segment<F: Fn(Complex64) -> Complex64>(
    f: &F,
    z0: Complex64,
    z1: Complex64,
    k: usize,
) -> Complex64 {
    let rule = gauss_legendre(k);
    let (nodes, weights) = (&rule.0, &rule.1);
    let mid = (z0 + z1) * 0.5;
    let half = (z1 - z0) * 0.5;
    let mut sum = Complex64::new(0.0, 0.0);
    for (&x, &w) in nodes.iter().zip(weights) {
        sum += f(mid + half * x) * w;
    }
    sum * half
}

/// Gauss–Legendre integral of `f` along the straight segment `[z0, z1]`.
///
/// The node count is doubled (at most twice) until the value stops moving:
/// a change below 1e-12 on the first doubling is accepted immediately, a
/// change below 1e-10 on the second is still accepted, anything else is a
/// [`Error::QuadratureNonConvergence`].
pub fn integrate_segment<F: Fn(Complex64) -> Complex64>(
    f: F,
    z0: Complex64,
    z1: Complex64,
    k: usize,
) -> Result<Complex64> {
    assert!(k >= 16, "segment rule needs at least 16 nodes");
    let coarse = gl_segment(&f, z0, z1, k);
    let fine = gl_segment(&f, z0, z1, 2 * k);
    let delta = (fine - coarse).norm();
    if delta <= 1e-12 {
        return Ok(fine);
    }
    let finest = gl_segment(&f, z0, z1, 4 * k);
    let delta2 = (finest - fine).norm();
    if delta2 <= 1e-10 {
        Ok(finest)
    } else {
        Err(Error::QuadratureNonConvergence { delta: delta2 })
    }
}

/// Arc-length integral of `|f|` along the straight segment `[z0, z1]`, at a
/// fixed node count.
///
/// `|f|` is continuous but loses analyticity at zeros of `f`, so the
/// stabilization loop of [`integrate_segment`] does not apply; a fixed
/// high-order rule is used instead.
pub fn integrate_segment_modulus<F: Fn(Complex64) -> Complex64>(
    f: F,
    z0: Complex64,
    z1: Complex64,
    k: usize,
) -> f64 {
    let rule = gauss_legendre(k);
    let (nodes, weights) = (&rule.0, &rule.1);
    let length = (z1 - z0).norm();
    let mid = (z0 + z1) * 0.5;
    let half = (z1 - z0) * 0.5;
    let mut sum = 0.0;
    for (&x, &w) in nodes.iter().zip(weights) {
        sum += f(mid + half * x).norm() * w;
    }
    sum * length * 0.5
}
