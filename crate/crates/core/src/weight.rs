//! Boundary weights and their dual counterparts.
//!
//! Weights are functions of the boundary parameter `theta` (pullbacks through
//! the map `psi`), so every built-in weight is well defined on every curve in
//! the family and the transplanted integrals are exact. All built-ins are
//! strictly positive with bounded logarithm, so the log-integrability
//! condition holds by construction.

use serde::{Deserialize, Serialize};

use crate::curve::BoundaryGrid;
use crate::error::{Error, Result};
use crate::numerics::integrate_periodic_real;

/// Weight selection as it appears in config files:
/// `{"kind":"const","c":1.0}`, `{"kind":"expcos"}`,
/// `{"kind":"szego_a","a":[re,im]}`.
///
/// The three kinds are chosen so the associated outer function has a closed
/// form (constant, `e^{w/p}`, and `(1 - a w)^{2/p}` respectively), which is
/// what makes the downstream pipelines oracle-checkable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    Const {
        c: f64,
    },
    #[serde(rename = "expcos")]
    ExpCos,
    SzegoA {
        a: [f64; 2],
    },
}

impl WeightSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            WeightSpec::Const { c } => {
                if c > 0.0 {
                    Ok(())
                } else {
                    Err(Error::NonPositiveWeight { min: c })
                }
            }
            WeightSpec::ExpCos => Ok(()),
            WeightSpec::SzegoA { a } => {
                let abs = (a[0] * a[0] + a[1] * a[1]).sqrt();
                if abs < 1.0 {
                    Ok(())
                } else {
                    // |a| >= 1 puts a zero (or worse) on the boundary.
                    Err(Error::NonPositiveWeight { min: 0.0 })
                }
            }
        }
    }

    /// Weight sample at boundary angle `theta`:
    /// `c`, `e^{cos theta}`, or `|1 - a e^{i theta}|^2`.
    pub fn eval(&self, theta: f64) -> f64 {
        match *self {
            WeightSpec::Const { c } => c,
            WeightSpec::ExpCos => theta.cos().exp(),
            WeightSpec::SzegoA { a } => {
                let re = 1.0 - (a[0] * theta.cos() - a[1] * theta.sin());
                let im = -(a[0] * theta.sin() + a[1] * theta.cos());
                re * re + im * im
            }
        }
    }

    /// Short stable label used in report digests.
    pub fn label(&self) -> String {
        match *self {
            WeightSpec::Const { c } => format!("const(c={c})"),
            WeightSpec::ExpCos => "expcos".to_string(),
            WeightSpec::SzegoA { a } => format!("szego_a(a={}{:+}i)", a[0], a[1]),
        }
    }
}

/// The dual weight `nu = rho^{1-q}` for a conjugate exponent `q > 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NuWeight {
    base: WeightSpec,
    q: f64,
}

impl NuWeight {
    pub fn new(base: WeightSpec, q: f64) -> Result<Self> {
        if q <= 1.0 || q.is_nan() {
            return Err(Error::InvalidExponent { q });
        }
        base.validate()?;
        Ok(Self { base, q })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.base.eval(theta).powf(1.0 - self.q)
    }

    /// Samples on a grid's angles.
    pub fn on_grid(&self, grid: &BoundaryGrid) -> Vec<f64> {
        grid.theta().iter().map(|&th| self.eval(th)).collect()
    }
}

/// Trapezoid value of `int log rho_hat(theta) dtheta`, the transplanted
/// log-integrability integral (`log rho |phi'| |dt| = log rho_hat dtheta`).
/// Finite for every built-in weight; returned so callers can log or assert.
pub fn validate_szego_condition(grid: &BoundaryGrid) -> f64 {
    let samples: Vec<f64> = grid.rho().iter().map(|&r| r.ln()).collect();
    integrate_periodic_real(&samples, grid.d_theta())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_boundary_grid, ConformalPair};

    #[test]
    fn const_weight_is_constant() {
        let w = WeightSpec::Const { c: 1.0 };
        for th in [0.0, 1.0, 3.9] {
            assert_eq!(w.eval(th), 1.0);
        }
    }

    #[test]
    fn expcos_at_zero_is_e() {
        let w = WeightSpec::ExpCos;
        assert!((w.eval(0.0) - std::f64::consts::E).abs() <= 1e-15);
    }

    #[test]
    fn szego_a_at_pi_is_direct_modulus() {
        let w = WeightSpec::SzegoA { a: [0.5, 0.0] };
        // |1 + 0.5|^2 = 2.25
        assert!((w.eval(std::f64::consts::PI) - 2.25).abs() <= 1e-14);
    }

    #[test]
    fn nu_weight_examples() {
        let nu = NuWeight::new(WeightSpec::Const { c: 1.0 }, 2.0).unwrap();
        assert_eq!(nu.eval(0.3), 1.0);
        let nu = NuWeight::new(WeightSpec::Const { c: 4.0 }, 2.0).unwrap();
        assert_eq!(nu.eval(0.3), 0.25);
        let nu = NuWeight::new(WeightSpec::ExpCos, 2.0).unwrap();
        assert!((nu.eval(0.0) - (-1.0f64).exp()).abs() <= 1e-15);
    }

    #[test]
    fn nu_weight_rejects_bad_exponent() {
        assert!(matches!(
            NuWeight::new(WeightSpec::ExpCos, 1.0),
            Err(Error::InvalidExponent { .. })
        ));
        assert!(matches!(
            NuWeight::new(WeightSpec::ExpCos, 0.5),
            Err(Error::InvalidExponent { .. })
        ));
    }

    #[test]
    fn nu_times_rho_is_one_at_q_two() {
        let base = WeightSpec::SzegoA { a: [0.3, 0.2] };
        let nu = NuWeight::new(base, 2.0).unwrap();
        for k in 0..32 {
            let th = 2.0 * std::f64::consts::PI * k as f64 / 32.0;
            assert!((nu.eval(th) * base.eval(th) - 1.0).abs() <= 1e-13);
        }
    }

    #[test]
    fn log_weight_bounded_and_positive() {
        for w in [
            WeightSpec::Const { c: 0.7 },
            WeightSpec::ExpCos,
            WeightSpec::SzegoA { a: [0.5, 0.0] },
            WeightSpec::SzegoA { a: [0.3, -0.6] },
        ] {
            let mut min = f64::INFINITY;
            let mut max_log = 0.0f64;
            for k in 0..4096 {
                let th = 2.0 * std::f64::consts::PI * k as f64 / 4096.0;
                let v = w.eval(th);
                min = min.min(v);
                max_log = max_log.max(v.ln().abs());
            }
            assert!(min > 0.0);
            assert!(max_log.is_finite());
        }
    }

    #[test]
    fn szego_condition_integrals() {
        let pair = ConformalPair::disk();
        let grid = make_boundary_grid(&pair, &WeightSpec::Const { c: 1.0 }, 256).unwrap();
        assert!(validate_szego_condition(&grid).abs() <= 1e-13);

        let grid = make_boundary_grid(&pair, &WeightSpec::ExpCos, 256).unwrap();
        assert!(validate_szego_condition(&grid).abs() <= 1e-13);

        // log|1 - a e^{i theta}|^2 has zero mean for |a| < 1; oracle is the
        // same trapezoid at M = 8192.
        let spec = WeightSpec::SzegoA { a: [0.5, 0.0] };
        let coarse = validate_szego_condition(&make_boundary_grid(&pair, &spec, 256).unwrap());
        let fine = validate_szego_condition(&make_boundary_grid(&pair, &spec, 8192).unwrap());
        assert!(fine.abs() <= 1e-12, "high-resolution value {fine}");
        assert!((coarse - fine).abs() <= 1e-12);
    }

    #[test]
    fn weight_spec_round_trips_through_json() {
        let w: WeightSpec = serde_json::from_str(r#"{"kind":"const","c":1.0}"#).unwrap();
        assert_eq!(w, WeightSpec::Const { c: 1.0 });
        let w: WeightSpec = serde_json::from_str(r#"{"kind":"expcos"}"#).unwrap();
        assert_eq!(w, WeightSpec::ExpCos);
        let w: WeightSpec = serde_json::from_str(r#"{"kind":"szego_a","a":[0.5,0]}"#).unwrap();
        assert_eq!(w, WeightSpec::SzegoA { a: [0.5, 0.0] });
    }

    #[test]
    fn const_weight_rejects_nonpositive() {
        assert!(WeightSpec::Const { c: 0.0 }.validate().is_err());
        assert!(WeightSpec::Const { c: -1.0 }.validate().is_err());
    }
}
