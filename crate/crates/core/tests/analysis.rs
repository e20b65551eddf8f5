mod common;

use std::f64::consts::TAU;

use common::*;
use mobius_cocycle::analysis::{
    boundedness_bounds, drift_grid, drift_sequence, fitted_exponential_rate, hyperbolic_drift_lower_bound,
    max_final_drift, reduce_at, reduce_on, reduce_with_conjugacy, DriftRecord,
};
use mobius_cocycle::projective::osculating_r_squared;
use mobius_cocycle::sweep::{map_sequential, uniform_grid};
use mobius_cocycle::{Angle, CircleMap, CircleMapExpr, MobiusMap};
use num_complex::Complex64;
use rand::Rng;

fn conj_rotation(s: f64, alpha: f64) -> CircleMapExpr {
    CircleMapExpr::conjugate(
        CircleMapExpr::Mobius(MobiusMap::new(0.0, Complex64::new(s, 0.0)).unwrap()),
        CircleMapExpr::rotation(alpha),
    )
}

/// `4D/((D+1)² + (Δ/D)²)`, the same quantity as `4D³/(D²(D+1)² + Δ²)`
/// without overflow for large `D`.
fn identity_rhs(d: f64, delta: f64) -> f64 {
    let q = delta / d;
    4.0 * d / ((d + 1.0).powi(2) + q * q)
}

fn check_record_invariants(r: &DriftRecord) {
    let (d, delta) = (r.d_n.unwrap(), r.delta_n.unwrap());
    let rhs = identity_rhs(d, delta);
    assert!(((r.one_minus_r_sq - rhs) / rhs).abs() < 1e-10, "n = {}", r.n);
    assert!((r.r_n - osculating_r_squared(d, delta).sqrt()).abs() < 1e-9);
    if r.r_n < 0.999 {
        assert!((r.dist - ((1.0 + r.r_n) / (1.0 - r.r_n)).ln()).abs() < 1e-12);
    }
    assert!(r.dist >= 0.0 && r.r_n < 1.0);
}

#[test]
fn drift_record_invariants_on_random_maps() {
    let mut rng = rng(21);
    for _ in 0..30 {
        let f = random_expr(&mut rng, 3);
        let theta = random_angle(&mut rng);
        for r in drift_sequence(&f, theta, 40).unwrap() {
            check_record_invariants(&r);
        }
    }
}

#[test]
fn bound_contrapositive_on_sampled_jets() {
    let mut rng = rng(7);
    for _ in 0..10_000 {
        let (j, _) = random_jet(&mut rng);
        let r = osculating_r_squared(j.d1, j.d2).sqrt();
        for lambda in [r, r + (1.0 - r) * rng.random::<f64>()] {
            if lambda >= 1.0 {
                continue;
            }
            let (d_max, delta_max) = boundedness_bounds(lambda).unwrap();
            assert!(j.d1 <= d_max + 1e-9, "{j:?} lambda {lambda}");
            assert!(j.d2.abs() <= delta_max + 1e-9, "{j:?} lambda {lambda}");
        }
    }
}

#[test]
fn hyperbolic_fixed_points_bound_drift_below() {
    let phi = CircleMapExpr::Mobius(MobiusMap::new(0.4, Complex64::new(0.2, -0.35)).unwrap());
    let cases: Vec<(CircleMapExpr, Angle)> = [0.5, 0.3, -0.4]
        .into_iter()
        .flat_map(|b| {
            let f = CircleMapExpr::arnold(0.0, b).unwrap();
            // the expanding fixed point: 0 for b > 0, π for b < 0
            let p = if b > 0.0 {
                Angle::ZERO
            } else {
                Angle::new(std::f64::consts::PI)
            };
            let g = CircleMapExpr::conjugate(phi.clone(), f.clone());
            let q = phi.eval(p).unwrap();
            [(f, p), (g, q)]
        })
        .collect();
    for (f, p) in cases {
        assert!(f.eval(p).unwrap().distance(p) < 1e-12);
        let mu = f.jet(p).unwrap().d1.ln();
        assert!(mu > 0.0);
        for r in drift_sequence(&f, p, 40).unwrap() {
            assert!(r.drift >= hyperbolic_drift_lower_bound(mu, r.n), "{f} n = {}", r.n);
            check_record_invariants(&r);
        }
    }
}

#[test]
fn affine_derivative_grows_subexponentially() {
    for alpha in [1.0, 2.0, TAU * 0.618_033_988_749_895] {
        let f = conj_rotation(0.3, alpha);
        let recs = drift_sequence(&f, Angle::new(0.7), 500).unwrap();
        let deltas: Vec<f64> = recs.iter().map(|r| r.delta_n.unwrap()).collect();
        let rate = fitted_exponential_rate(&deltas);
        assert!(rate < 0.05, "alpha {alpha}: rate {rate}");
    }
}

#[test]
fn grid_refinement_keeps_suprema() {
    let f = conj_rotation(0.3, 1.0);
    let n = 200;
    let coarse = max_final_drift(&f, &uniform_grid(256, 0.0), n).unwrap();
    let fine = max_final_drift(&f, &uniform_grid(1024, 0.0), n).unwrap();
    assert!((coarse - fine).abs() < 1e-3, "{coarse} vs {fine}");

    let g = CircleMapExpr::arnold(0.8, 0.5).unwrap();
    let sup = |k| {
        reduce_with_conjugacy(&g, &CircleMapExpr::identity(), k)
            .unwrap()
            .iter()
            .map(|r| r.residual)
            .fold(0.0, f64::max)
    };
    assert!((sup(256) - sup(1024)).abs() < 1e-3);
}

#[test]
fn reduction_is_pointwise() {
    let f = CircleMapExpr::arnold(0.8, 0.5).unwrap();
    let phi = CircleMapExpr::Mobius(MobiusMap::new(0.1, Complex64::new(-0.2, 0.1)).unwrap());
    let k = 64;
    let base = reduce_with_conjugacy(&f, &phi, k).unwrap();
    // rotating the grid by one cell permutes the records
    let shifted = reduce_on(&f, &phi, &uniform_grid(k, TAU / k as f64)).unwrap();
    for j in 0..k {
        let (a, b) = (&base[(j + 1) % k], &shifted[j]);
        assert!(a.theta.distance(b.theta) < 1e-12);
        assert!((a.residual - b.residual).abs() < 1e-10);
    }
    // and an arbitrary offset agrees with single-point evaluation
    let offset = reduce_on(&f, &phi, &uniform_grid(k, 0.37)).unwrap();
    for r in &offset {
        assert_eq!(*r, reduce_at(&f, &phi, r.theta).unwrap());
    }

    let exact = conj_rotation(0.3, 1.0);
    let inv = CircleMapExpr::inverse(CircleMapExpr::Mobius(
        MobiusMap::new(0.0, Complex64::new(0.3, 0.0)).unwrap(),
    ));
    for r in reduce_on(&exact, &inv, &uniform_grid(100, 0.011)).unwrap() {
        assert!(r.residual < 1e-9);
        assert!(r.angle.distance(Angle::new(1.0)) < 1e-9);
    }
}

#[test]
fn parallel_sweep_matches_sequential() {
    let f = conj_rotation(0.3, 1.0);
    let grid = uniform_grid(64, 0.0);
    let par = drift_grid(&f, &grid, 50).unwrap();
    let seq: Vec<_> = map_sequential(grid.len(), |j| drift_sequence(&f, grid[j], 50).unwrap());
    assert_eq!(par, seq);
}
