//! Jordan curves as images of the unit circle under explicit univalent maps.
//!
//! The built-in family consists of the disk itself and quadratic images
//! `psi(w) = xi + w + a*w^2` with `|a| < 1/2`, which keeps the map univalent
//! on the closed disk with a nonvanishing derivative and gives the inverse a
//! closed-form seed. Both maps satisfy `psi'(0) = 1`, so the two usual
//! normalizations of the inverse map (`phi(xi) = 0`, `|phi| = 1` on the
//! curve, and `phi'(xi) = 1`) hold at once.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weight::WeightSpec;

const INVERSE_TOL: f64 = 1e-13;
const INVERSE_MAX_ITER: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq)]
enum MapKind {
    Disk,
    Quadratic { a: Complex64 },
}

/// A univalent map `psi` of the closed unit disk onto the closure of a
/// Jordan domain, together with its numerically inverted `phi` and the base
/// point `xi = psi(0)`.
///
/// Immutable after construction; share freely across threads.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConformalPair {
    kind: MapKind,
    xi: Complex64,
}

impl ConformalPair {
    /// The identity map: the domain is the unit disk itself.
    pub fn disk() -> Self {
        Self {
            kind: MapKind::Disk,
            xi: Complex64::new(0.0, 0.0),
        }
    }

    /// Quadratic image `psi(w) = xi + w + a*w^2`. Rejects `|a| >= 1/2`,
    /// which is exactly the univalence threshold on the closed disk.
    pub fn quadratic(a: Complex64, xi: Complex64) -> Result<Self> {
        if a.norm() >= 0.5 {
            return Err(Error::NotUnivalent { abs_a: a.norm() });
        }
        Ok(Self {
            kind: MapKind::Quadratic { a },
            xi,
        })
    }

    /// The base point `xi = psi(0)`, i.e. the point the extremal problem
    /// normalizes at.
    pub fn base_point(&self) -> Complex64 {
        self.xi
    }

    /// `psi(w)` and `psi'(w)` in one call.
    ///
    /// # Panics
    ///
    /// If `w` is materially outside the closed unit disk; that is a caller
    /// bug, not a data condition.
    pub fn map_forward(&self, w: Complex64) -> (Complex64, Complex64) {
        assert!(
            w.norm() <= 1.0 + 1e-12,
            "map_forward called outside the closed disk: |w| = {}",
            w.norm()
        );
        match self.kind {
            MapKind::Disk => (self.xi + w, Complex64::new(1.0, 0.0)),
            MapKind::Quadratic { a } => {
                (self.xi + w + a * w * w, Complex64::new(1.0, 0.0) + 2.0 * a * w)
            }
        }
    }

    /// `phi(z) = psi^{-1}(z)` for `z` in the closure of the domain.
    ///
    /// The quadratic case seeds Newton with the closed-form root
    /// `2(z - xi) / (1 + sqrt(1 + 4a(z - xi)))` (the rationalized principal
    /// branch, which picks the preimage inside the disk) and polishes to a
    /// residual of 1e-13.
    pub fn map_inverse(&self, z: Complex64) -> Result<Complex64> {
        let w = match self.kind {
            MapKind::Disk => z - self.xi,
            MapKind::Quadratic { a } => {
                let delta = z - self.xi;
                let root = (Complex64::new(1.0, 0.0) + 4.0 * a * delta).sqrt();
                let mut w = 2.0 * delta / (Complex64::new(1.0, 0.0) + root);
                let mut converged = false;
                for _ in 0..INVERSE_MAX_ITER {
                    let f = self.xi + w + a * w * w - z;
                    if f.norm() <= INVERSE_TOL {
                        converged = true;
                        break;
                    }
                    let df = Complex64::new(1.0, 0.0) + 2.0 * a * w;
                    w -= f / df;
                }
                if !converged {
                    let residual = (self.xi + w + a * w * w - z).norm();
                    if residual > INVERSE_TOL {
                        return Err(Error::InverseNonConvergence {
                            z,
                            iterations: INVERSE_MAX_ITER,
                            residual,
                        });
                    }
                }
                w
            }
        };
        if w.norm() > 1.0 + 1e-10 {
            return Err(Error::OutsideDomain { z, abs_w: w.norm() });
        }
        Ok(w)
    }

    /// `|phi'(z)| = 1 / |psi'(phi(z))|`, computed through the inverse map.
    ///
    /// This is the transplantation Jacobian between arc length on the curve
    /// and arc length on the circle; grid code stores `|psi'|` directly and
    /// this route exists so tests can cross-check the identity.
    pub fn phi_prime_abs(&self, z: Complex64) -> Result<f64> {
        let w = self.map_inverse(z)?;
        let (_, dz) = self.map_forward(w);
        Ok(1.0 / dz.norm())
    }
}

/// Curve selection as it appears in config files:
/// `{"kind":"disk"}` or `{"kind":"quadratic","a":[re,im],"xi":[re,im]}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    Disk,
    Quadratic {
        a: [f64; 2],
        #[serde(default)]
        xi: [f64; 2],
    },
}

impl CurveSpec {
    pub fn build(&self) -> Result<ConformalPair> {
        match *self {
            CurveSpec::Disk => Ok(ConformalPair::disk()),
            CurveSpec::Quadratic { a, xi } => {
                ConformalPair::quadratic(Complex64::new(a[0], a[1]), Complex64::new(xi[0], xi[1]))
            }
        }
    }

    /// Short stable label used in report digests.
    pub fn label(&self) -> String {
        match *self {
            CurveSpec::Disk => "disk".to_string(),
            CurveSpec::Quadratic { a, xi } => {
                if xi == [0.0, 0.0] {
                    format!("quadratic(a={}{:+}i)", a[0], a[1])
                } else {
                    format!("quadratic(a={}{:+}i;xi={}{:+}i)", a[0], a[1], xi[0], xi[1])
                }
            }
        }
    }
}

/// Boundary discretization shared by every quadrature in the pipeline:
/// equispaced angles, curve points `psi(e^{i theta})`, the arc-length
/// Jacobian `|psi'|`, and weight samples.
///
/// Immutable after construction.
#[derive(Clone, Debug)]
pub struct BoundaryGrid {
    theta: Vec<f64>,
    circle: Vec<Complex64>,
    t: Vec<Complex64>,
    psi_prime_abs: Vec<f64>,
    rho: Vec<f64>,
    d_theta: f64,
}

impl BoundaryGrid {
    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn d_theta(&self) -> f64 {
        self.d_theta
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Unit-circle nodes `e^{i theta_j}`.
    pub fn circle(&self) -> &[Complex64] {
        &self.circle
    }

    /// Curve points `t_j = psi(e^{i theta_j})`.
    pub fn points(&self) -> &[Complex64] {
        &self.t
    }

    pub fn psi_prime_abs(&self) -> &[f64] {
        &self.psi_prime_abs
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    /// Discrete curve length `sum |psi'| d_theta`.
    pub fn contour_length(&self) -> f64 {
        self.psi_prime_abs.iter().sum::<f64>() * self.d_theta
    }
}

/// Samples the boundary at `m` equispaced angles. `m` must be a power of two
/// of at least 64, and the weight must be strictly positive on the grid.
pub fn make_boundary_grid(
    pair: &ConformalPair,
    weight: &WeightSpec,
    m: usize,
) -> Result<BoundaryGrid> {
    if m < 64 || !m.is_power_of_two() {
        return Err(Error::InvalidGridSize { m });
    }
    weight.validate()?;
    let d_theta = 2.0 * std::f64::consts::PI / m as f64;
    let mut theta = Vec::with_capacity(m);
    let mut circle = Vec::with_capacity(m);
    let mut t = Vec::with_capacity(m);
    let mut psi_prime_abs = Vec::with_capacity(m);
    let mut rho = Vec::with_capacity(m);
    for j in 0..m {
        let th = j as f64 * d_theta;
        let w = Complex64::new(th.cos(), th.sin());
        let (z, dz) = pair.map_forward(w);
        theta.push(th);
        circle.push(w);
        t.push(z);
        psi_prime_abs.push(dz.norm());
        rho.push(weight.eval(th));
    }
    let min_rho = rho.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_rho <= 0.0 || min_rho.is_nan() {
        return Err(Error::NonPositiveWeight { min: min_rho });
    }
    debug_assert!(psi_prime_abs.iter().all(|&d| d > 0.0));
    Ok(BoundaryGrid {
        theta,
        circle,
        t,
        psi_prime_abs,
        rho,
        d_theta,
    })
}
