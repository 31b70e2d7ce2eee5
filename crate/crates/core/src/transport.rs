//! Transported antiderivatives and their distance on compact subsets.
//!
//! `J(z)` integrates `Q^p` from the base point and is an exact polynomial;
//! `Phi(z)` integrates `(D/D(0))^p` and is evaluated by pulling the path back
//! to the straight segment `[0, phi(z)]` in the disk, where the integrand is
//! the closed-form exponential of the truncated series times `psi'`. Both
//! vanish at the base point by construction.

use num_complex::Complex64;

use crate::curve::ConformalPair;
use crate::error::Result;
use crate::numerics::{integrate_segment, ComplexPoly};
use crate::szego::OuterFunction;

/// Default Gauss–Legendre node count for the segment pullback.
pub const DEFAULT_SEGMENT_NODES: usize = 64;

/// Exact antiderivative of `Q^p` anchored at the base point:
/// `J(z) = A(z) - A(xi)` with `A' = Q^p`, path-independent because the
/// integrand is a polynomial.
pub fn compute_jn(q: &ComplexPoly, p: u32, xi: Complex64) -> ComplexPoly {
    let anti = q.pow(p).antiderivative();
    let at_xi = anti.eval(xi);
    anti.sub(&ComplexPoly::constant(at_xi))
}

/// `Phi(z) = int_{[0, phi(z)]} (D(u)/D(0))^p psi'(u) du` by segment
/// quadrature in the disk.
pub fn compute_phi_integral(
    pair: &ConformalPair,
    outer: &OuterFunction,
    z: Complex64,
    nodes: usize,
) -> Result<Complex64> {
    let w_end = pair.map_inverse(z)?;
    phi_from_disk_point(pair, outer, w_end, nodes)
}

/// Same integral with the endpoint already given in disk coordinates
/// (`w = phi(z)`), skipping the inversion.
pub fn phi_from_disk_point(
    pair: &ConformalPair,
    outer: &OuterFunction,
    w_end: Complex64,
    nodes: usize,
) -> Result<Complex64> {
    let d0_pow = outer.eval_power(Complex64::new(0.0, 0.0));
    let raw = integrate_segment(
        |u| outer.eval_power(u) * pair.map_forward(u).1,
        Complex64::new(0.0, 0.0),
        w_end,
        nodes,
    )?;
    Ok(raw / d0_pow)
}

/// A solved cell's transported pair: the polynomial `J` and the data needed
/// to evaluate `Phi` anywhere in the domain.
#[derive(Clone, Debug)]
pub struct TransportPair {
    pub jn: ComplexPoly,
    pub p: u32,
    pair: ConformalPair,
    outer: OuterFunction,
    segment_nodes: usize,
}

impl TransportPair {
    pub fn new(
        pair: &ConformalPair,
        outer: &OuterFunction,
        q: &ComplexPoly,
        p: u32,
        segment_nodes: usize,
    ) -> Self {
        Self {
            jn: compute_jn(q, p, pair.base_point()),
            p,
            pair: *pair,
            outer: outer.clone(),
            segment_nodes,
        }
    }

    pub fn jn_at(&self, z: Complex64) -> Complex64 {
        self.jn.eval(z)
    }

    pub fn phi_at(&self, z: Complex64) -> Result<Complex64> {
        compute_phi_integral(&self.pair, &self.outer, z, self.segment_nodes)
    }

    pub fn pair(&self) -> &ConformalPair {
        &self.pair
    }
}

/// Polar evaluation lattice `psi(r e^{i alpha})` over one or more compact
/// radii, kept in both disk and domain coordinates so `Phi` never needs the
/// inverse map.
#[derive(Clone, Debug)]
pub struct CompactLattice {
    pub disk_points: Vec<Complex64>,
    pub domain_points: Vec<Complex64>,
}

/// Builds the union lattice over `radii`, with `n_r` rings per radius and
/// `n_ang` angles per ring. Ring `j` of radius `r_max` sits at
/// `r_max * j / n_r`, so the outermost ring hits `r_max` exactly.
pub fn compact_lattice(
    pair: &ConformalPair,
    radii: &[f64],
    n_r: usize,
    n_ang: usize,
) -> CompactLattice {
    let mut disk_points = Vec::with_capacity(radii.len() * n_r * n_ang);
    let mut domain_points = Vec::with_capacity(disk_points.capacity());
    for &r_max in radii {
        assert!(r_max > 0.0 && r_max < 1.0, "compact radius must be in (0,1)");
        for j in 1..=n_r {
            let r = r_max * j as f64 / n_r as f64;
            for k in 0..n_ang {
                let ang = 2.0 * std::f64::consts::PI * k as f64 / n_ang as f64;
                let w = Complex64::from_polar(r, ang);
                disk_points.push(w);
                domain_points.push(pair.map_forward(w).0);
            }
        }
    }
    CompactLattice {
        disk_points,
        domain_points,
    }
}

/// `Phi` at every lattice point, in lattice order.
pub fn phi_on_lattice(
    pair: &ConformalPair,
    outer: &OuterFunction,
    lattice: &CompactLattice,
    nodes: usize,
) -> Result<Vec<Complex64>> {
    lattice
        .disk_points
        .iter()
        .map(|&w| phi_from_disk_point(pair, outer, w, nodes))
        .collect()
}

/// Max of `|J(z) - phi_value|` over the lattice, against precomputed `Phi`
/// values. The reduction order is the fixed lattice order, so the result is
/// schedule-independent.
pub fn sup_diff_against(jn: &ComplexPoly, lattice: &CompactLattice, phi: &[Complex64]) -> f64 {
    lattice
        .domain_points
        .iter()
        .zip(phi)
        .map(|(&z, &phi_z)| (jn.eval(z) - phi_z).norm())
        .fold(0.0, f64::max)
}

/// Lattice sup of `|J - Phi|` over the single compact radius `r_max`.
///
/// By the maximum principle the true sup over the closed sub-domain is
/// attained on the outermost ring, so the lattice max is a lower bound for
/// the sup over the whole domain that becomes tight as `n_ang` grows.
pub fn sup_diff_on_compact(
    t: &TransportPair,
    r_max: f64,
    n_r: usize,
    n_ang: usize,
) -> Result<f64> {
    let lattice = compact_lattice(&t.pair, &[r_max], n_r, n_ang);
    let phi = phi_on_lattice(&t.pair, &t.outer, &lattice, t.segment_nodes)?;
    Ok(sup_diff_against(&t.jn, &lattice, &phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::make_boundary_grid;
    use crate::extremal::solve_extremal;
    use crate::szego::build_outer;
    use crate::weight::WeightSpec;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn jn_of_constant_one_is_z() {
        for p in [2u32, 3, 5] {
            let j = compute_jn(&ComplexPoly::one(), p, c(0.0, 0.0));
            assert_eq!(j, ComplexPoly::from_real(&[0.0, 1.0]));
        }
    }

    #[test]
    fn jn_of_one_plus_z_squared() {
        let q = ComplexPoly::from_real(&[1.0, 1.0]);
        let j = compute_jn(&q, 2, c(0.0, 0.0));
        let want = ComplexPoly::from_real(&[0.0, 1.0, 1.0, 1.0 / 3.0]);
        for (a, b) in j.coeffs().iter().zip(want.coeffs()) {
            assert!((a - b).norm() <= 1e-15);
        }
    }

    #[test]
    fn jn_matches_segment_quadrature() {
        let q = ComplexPoly::new(vec![c(0.9, 0.1), c(-0.4, 0.3), c(0.2, -0.1)]);
        let xi = c(0.1, -0.2);
        let j = compute_jn(&q, 3, xi);
        assert!(j.eval(xi).norm() <= 1e-14);
        for i in 0..10 {
            let z1 = Complex64::from_polar(
                0.8 * ((i as f64 * 0.6180339887498949) % 1.0),
                2.0 * PI * ((i as f64 * 0.7548776662466927) % 1.0),
            );
            let oracle =
                integrate_segment(|u| q.eval(u).powu(3), xi, z1, 32).unwrap();
            assert!(
                (j.eval(z1) - oracle).norm() <= 1e-12,
                "z1 = {z1}: {} vs {oracle}",
                j.eval(z1)
            );
        }
    }

    #[test]
    fn derivative_of_jn_is_q_to_the_p() {
        let q = ComplexPoly::new(vec![c(1.0, 0.0), c(-0.3, 0.25), c(0.05, -0.6)]);
        let j = compute_jn(&q, 3, c(0.2, 0.1));
        let dj = j.derivative();
        let qp = q.pow(3);
        assert_eq!(dj.coeffs().len(), qp.coeffs().len());
        for (a, b) in dj.coeffs().iter().zip(qp.coeffs()) {
            assert!((a - b).norm() <= 1e-13);
        }
    }

    #[test]
    fn phi_telescopes_for_constant_weight_on_disk() {
        // On the disk with rho = 1 the outer function is identically one,
        // so the integrand is psi' alone and Phi(z) = z - xi. (Off the disk
        // the boundary modulus picks up |psi'| and the telescoping stops.)
        let pair = ConformalPair::disk();
        let grid = make_boundary_grid(&pair, &WeightSpec::Const { c: 1.0 }, 1024).unwrap();
        let outer = build_outer(&grid, 2, 256).unwrap();
        for i in 0..8 {
            let w = Complex64::from_polar(0.9 * (i as f64 + 1.0) / 8.0, i as f64);
            let (z, _) = pair.map_forward(w);
            let phi = compute_phi_integral(&pair, &outer, z, 64).unwrap();
            assert!(
                (phi - (z - pair.base_point())).norm() <= 1e-12,
                "z = {z}"
            );
        }
    }

    #[test]
    fn phi_derivative_at_base_is_one_for_constant_weight() {
        // What survives of the telescoping off the disk: D(0) normalizes the
        // integrand to 1 at the base point, so Phi'(xi) = 1.
        let pair = ConformalPair::quadratic(c(0.2, 0.1), c(0.3, -0.1)).unwrap();
        let grid = make_boundary_grid(&pair, &WeightSpec::Const { c: 1.0 }, 1024).unwrap();
        let outer = build_outer(&grid, 2, 256).unwrap();
        let h = 1e-5;
        let xi = pair.base_point();
        let plus = compute_phi_integral(&pair, &outer, xi + h, 64).unwrap();
        let minus = compute_phi_integral(&pair, &outer, xi - h, 64).unwrap();
        let deriv = (plus - minus) / (2.0 * h);
        assert!((deriv - c(1.0, 0.0)).norm() <= 1e-8, "Phi'(xi) = {deriv}");
    }

    #[test]
    fn phi_expcos_is_exponential_minus_one() {
        let pair = ConformalPair::disk();
        let grid = make_boundary_grid(&pair, &WeightSpec::ExpCos, 1024).unwrap();
        for p in [2u32, 3] {
            let outer = build_outer(&grid, p, 256).unwrap();
            let z = c(0.5, 0.0);
            let phi = compute_phi_integral(&pair, &outer, z, 64).unwrap();
            assert!((phi.re - (0.5f64.exp() - 1.0)).abs() <= 1e-11, "p = {p}");
            assert!(phi.im.abs() <= 1e-11);
        }
    }

    #[test]
    fn phi_szego_a_is_cubic_polynomial() {
        let pair = ConformalPair::disk();
        let grid = make_boundary_grid(&pair, &WeightSpec::SzegoA { a: [0.5, 0.0] }, 1024).unwrap();
        let outer = build_outer(&grid, 2, 256).unwrap();
        let closed = |z: Complex64| z - 0.5 * z * z + z * z * z / 12.0;
        for z in [c(1.0, 0.0), c(0.3, 0.4), c(-0.6, 0.1)] {
            let phi = compute_phi_integral(&pair, &outer, z, 64).unwrap();
            assert!((phi - closed(z)).norm() <= 1e-11, "z = {z}");
        }
        let at_one = compute_phi_integral(&pair, &outer, c(1.0, 0.0), 64).unwrap();
        assert!((at_one.re - 0.583333333333333).abs() <= 1e-11);
    }

    #[test]
    fn phi_is_path_independent() {
        // Two-leg evaluation [0, w/2] + [w/2, w] must match the single
        // segment; the integrand is analytic in the disk.
        let pair = ConformalPair::quadratic(c(0.2, 0.1), c(0.0, 0.0)).unwrap();
        let grid = make_boundary_grid(&pair, &WeightSpec::ExpCos, 1024).unwrap();
        let outer = build_outer(&grid, 2, 256).unwrap();
        let w = c(0.7, 0.45);
        let d0 = outer.eval_power(c(0.0, 0.0));
        let integrand = |u: Complex64| outer.eval_power(u) * pair.map_forward(u).1;
        let single = integrate_segment(integrand, c(0.0, 0.0), w, 64).unwrap() / d0;
        let leg1 = integrate_segment(integrand, c(0.0, 0.0), w / 2.0, 64).unwrap();
        let leg2 = integrate_segment(integrand, w / 2.0, w, 64).unwrap();
        let two_leg = (leg1 + leg2) / d0;
        assert!((single - two_leg).norm() <= 1e-12);
    }

    #[test]
    fn transport_pair_anchors_at_base_point() {
        let pair = ConformalPair::quadratic(c(0.2, 0.1), c(0.3, -0.1)).unwrap();
        let grid = make_boundary_grid(&pair, &WeightSpec::SzegoA { a: [0.4, -0.2] }, 1024).unwrap();
        let outer = build_outer(&grid, 2, 256).unwrap();
        let sol = solve_extremal(&pair, &grid, &outer, 3, 2).unwrap();
        let t = TransportPair::new(&pair, &outer, &sol.q_poly, 2, 64);
        assert!(t.jn_at(pair.base_point()).norm() <= 1e-14);
        assert!(t.phi_at(pair.base_point()).unwrap().norm() <= 1e-15);
    }

    #[test]
    fn sup_diff_vanishes_for_constant_weight() {
        let pair = ConformalPair::disk();
        let grid = make_boundary_grid(&pair, &WeightSpec::Const { c: 1.0 }, 1024).unwrap();
        let outer = build_outer(&grid, 2, 256).unwrap();
        let sol = solve_extremal(&pair, &grid, &outer, 2, 2).unwrap();
        let t = TransportPair::new(&pair, &outer, &sol.q_poly, 2, 64);
        let sup = sup_diff_on_compact(&t, 0.95, 8, 128).unwrap();
        assert!(sup <= 1e-12, "sup = {sup:e}");
    }

    #[test]
    fn sup_diff_expcos_n0_matches_endpoint_value() {
        // Q = 1 at n = 0, so J(z) = z while Phi(z) = e^z - 1; the max of
        // |z + 1 - e^z| over the closed 0.95-disk sits on the positive real
        // axis. Oracle: dense boundary sampling plus the endpoint value.
        let pair = ConformalPair::disk();
        let grid = make_boundary_grid(&pair, &WeightSpec::ExpCos, 1024).unwrap();
        let outer = build_outer(&grid, 2, 256).unwrap();
        let t = TransportPair::new(&pair, &outer, &ComplexPoly::one(), 2, 64);

        let dense = {
            let mut worst = 0.0f64;
            for k in 0..4096 {
                let z = Complex64::from_polar(0.95, 2.0 * PI * k as f64 / 4096.0);
                worst = worst.max((z + 1.0 - z.exp()).norm());
            }
            worst
        };
        let endpoint = 0.95f64.exp() - 1.95;
        assert!((dense - endpoint).abs() <= 1e-8);

        let sup = sup_diff_on_compact(&t, 0.95, 8, 512).unwrap();
        assert!((sup - endpoint).abs() <= 1e-10, "sup = {sup}, endpoint = {endpoint}");
    }

    #[test]
    fn sup_diff_vanishes_when_target_is_polynomial() {
        let pair = ConformalPair::disk();
        let grid = make_boundary_grid(&pair, &WeightSpec::SzegoA { a: [0.5, 0.0] }, 1024).unwrap();
        let outer = build_outer(&grid, 2, 256).unwrap();
        for n in [1usize, 3] {
            let sol = solve_extremal(&pair, &grid, &outer, n, 2).unwrap();
            let t = TransportPair::new(&pair, &outer, &sol.q_poly, 2, 64);
            let sup = sup_diff_on_compact(&t, 0.95, 8, 256).unwrap();
            assert!(sup <= 1e-10, "n = {n}: sup = {sup:e}");
        }
    }

    #[test]
    fn lattice_covers_radii_union() {
        let pair = ConformalPair::disk();
        let lat = compact_lattice(&pair, &[0.5, 0.9], 4, 8);
        assert_eq!(lat.disk_points.len(), 2 * 4 * 8);
        let max_r = lat
            .disk_points
            .iter()
            .map(|w| w.norm())
            .fold(0.0, f64::max);
        assert!((max_r - 0.9).abs() <= 1e-15);
    }
}
