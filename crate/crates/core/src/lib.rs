//! Szegő outer functions, constrained L^p extremal polynomials, and
//! boundary-integral inequality verification on Jordan curves.
//!
//! The pipeline: a Jordan curve is given as the image of the unit circle
//! under an explicit univalent map ([`curve`]); a boundary weight and its
//! dual live in [`weight`]; the outer function whose boundary modulus
//! reproduces the weight is built spectrally in [`szego`]; the constrained
//! best-approximation problem is solved in [`extremal`]; the transported
//! antiderivatives and their uniform distance on compact subsets live in
//! [`transport`]; every norm, constant, and inequality check in [`bounds`];
//! and [`harness`] drives matrices of configurations, convergence studies,
//! and randomized trials with deterministic, reproducible output.
//!
//! ```
//! use szegolab_core::{make_boundary_grid, ConformalPair, WeightSpec};
//! use szegolab_core::szego::build_outer;
//! use szegolab_core::extremal::solve_extremal;
//! use szegolab_core::transport::{sup_diff_on_compact, TransportPair};
//!
//! // |1 - 0.5 e^{i theta}|^2 on the unit circle: the outer function is
//! // 1 - 0.5 w at p = 2, so degree one already represents it exactly.
//! let pair = ConformalPair::disk();
//! let weight = WeightSpec::SzegoA { a: [0.5, 0.0] };
//! let grid = make_boundary_grid(&pair, &weight, 256)?;
//! let outer = build_outer(&grid, 2, 128)?;
//! let sol = solve_extremal(&pair, &grid, &outer, 1, 2)?;
//! assert!(sol.m <= 1e-9);
//!
//! let transport = TransportPair::new(&pair, &outer, &sol.q_poly, 2, 64);
//! let sup = sup_diff_on_compact(&transport, 0.95, 8, 128)?;
//! assert!(sup <= 1e-9);
//! # Ok::<(), szegolab_core::Error>(())
//! ```

pub mod bounds;
pub mod curve;
pub mod error;
pub mod extremal;
pub mod harness;
pub mod numerics;
pub mod szego;
pub mod transport;
pub mod weight;

pub use bounds::{InequalityKind, InequalityReport, TheoremForm};
pub use curve::{make_boundary_grid, BoundaryGrid, ConformalPair, CurveSpec};
pub use error::{Error, Result};
pub use extremal::ExtremalSolution;
pub use harness::{ExperimentConfig, ReportRow};
pub use numerics::ComplexPoly;
pub use szego::OuterFunction;
pub use transport::TransportPair;
pub use weight::{NuWeight, WeightSpec};

pub use num_complex::Complex64;
