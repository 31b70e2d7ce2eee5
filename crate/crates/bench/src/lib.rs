//! Shared fixtures for the pipeline benchmarks.

use szegolab_core::curve::{make_boundary_grid, BoundaryGrid, ConformalPair};
use szegolab_core::szego::{build_outer, OuterFunction};
use szegolab_core::weight::WeightSpec;
use szegolab_core::Complex64;

pub struct Fixture {
    pub pair: ConformalPair,
    pub weight: WeightSpec,
    pub grid: BoundaryGrid,
    pub outer: OuterFunction,
    pub p: u32,
}

/// The most expensive combo of the built-in matrix: quadratic curve with the
/// szego_a weight (slowest Fourier decay of the built-ins).
pub fn quadratic_szego_fixture(p: u32) -> Fixture {
    let pair = ConformalPair::quadratic(Complex64::new(0.2, 0.1), Complex64::new(0.0, 0.0))
        .expect("univalent");
    let weight = WeightSpec::SzegoA { a: [0.5, 0.0] };
    let grid = make_boundary_grid(&pair, &weight, 1024).expect("grid");
    let outer = build_outer(&grid, p, 256).expect("outer");
    Fixture {
        pair,
        weight,
        grid,
        outer,
        p,
    }
}

/// Disk with the entire weight: the fast-converging reference combo.
pub fn disk_expcos_fixture(p: u32) -> Fixture {
    let pair = ConformalPair::disk();
    let weight = WeightSpec::ExpCos;
    let grid = make_boundary_grid(&pair, &weight, 1024).expect("grid");
    let outer = build_outer(&grid, p, 256).expect("outer");
    Fixture {
        pair,
        weight,
        grid,
        outer,
        p,
    }
}
