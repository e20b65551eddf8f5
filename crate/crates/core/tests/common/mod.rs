//! Random maps, jets and triples shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::TAU;

use mobius_cocycle::enlarged::Triple;
use mobius_cocycle::{Angle, CircleMap, CircleMapExpr, Jet2, MobiusMap};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SIGMA_MAX: f64 = 0.4;
pub const ARNOLD_B_MAX: f64 = 0.5;
pub const MIN_TRIPLE_GAP: f64 = 0.3;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_mobius<R: Rng>(rng: &mut R, max_r: f64) -> MobiusMap {
    let sigma = Complex64::from_polar(rng.random_range(0.0..max_r), rng.random_range(0.0..TAU));
    MobiusMap::new(rng.random_range(0.0..TAU), sigma).unwrap()
}

pub fn random_leaf<R: Rng>(rng: &mut R) -> CircleMapExpr {
    match rng.random_range(0..3) {
        0 => CircleMapExpr::rotation(rng.random_range(0.0..TAU)),
        1 => CircleMapExpr::Mobius(random_mobius(rng, SIGMA_MAX)),
        _ => CircleMapExpr::arnold(
            rng.random_range(0.0..TAU),
            rng.random_range(-ARNOLD_B_MAX..ARNOLD_B_MAX),
        )
        .unwrap(),
    }
}

/// Random expression with `depth() ≤ depth`.
pub fn random_expr<R: Rng>(rng: &mut R, depth: usize) -> CircleMapExpr {
    if depth <= 1 || rng.random_bool(0.3) {
        return random_leaf(rng);
    }
    let sub = |rng: &mut R| random_expr(rng, depth - 1);
    match rng.random_range(0..4) {
        0 => {
            let f = sub(rng);
            CircleMapExpr::compose(f, sub(rng))
        }
        1 => CircleMapExpr::inverse(sub(rng)),
        2 => CircleMapExpr::power(sub(rng), rng.random_range(-2..=2)),
        _ => {
            let phi = sub(rng);
            CircleMapExpr::conjugate(phi, sub(rng))
        }
    }
}

pub fn random_angle<R: Rng>(rng: &mut R) -> Angle {
    Angle::new(rng.random_range(0.0..TAU))
}

/// Counter-clockwise triple with all gaps at least `MIN_TRIPLE_GAP`.
pub fn random_triple<R: Rng>(rng: &mut R) -> Triple {
    loop {
        let base = rng.random_range(0.0..TAU);
        let g1 = rng.random_range(MIN_TRIPLE_GAP..TAU - 2.0 * MIN_TRIPLE_GAP);
        let g2 = rng.random_range(MIN_TRIPLE_GAP..TAU - MIN_TRIPLE_GAP - g1);
        if TAU - g1 - g2 >= MIN_TRIPLE_GAP {
            return Triple::from_radians(base, base + g1, base + g1 + g2);
        }
    }
}

pub fn random_jet<R: Rng>(rng: &mut R) -> (Jet2, Angle) {
    let theta = random_angle(rng);
    let jet = Jet2::new(
        random_angle(rng),
        rng.random_range(0.1..10.0),
        rng.random_range(-10.0..10.0),
    );
    (jet, theta)
}

/// Central finite-difference estimates `(Df, D²f)` at `theta`.
pub fn finite_difference_jet<M: CircleMap + ?Sized>(f: &M, theta: Angle) -> (f64, f64) {
    let at = |h: f64| f.eval(theta.shifted(h)).unwrap();
    let f0 = at(0.0);
    let h1 = 1e-5;
    let d1 = at(h1).signed_difference(at(-h1)) / (2.0 * h1);
    let h2 = 1e-4;
    let d2 = (at(h2).signed_difference(f0) - f0.signed_difference(at(-h2))) / (h2 * h2);
    (d1, d2)
}

pub fn leaf_strategy() -> impl Strategy<Value = CircleMapExpr> {
    prop_oneof![
        (0.0..TAU).prop_map(CircleMapExpr::rotation),
        (0.0..TAU, 0.0..SIGMA_MAX, 0.0..TAU)
            .prop_map(|(k, r, a)| { CircleMapExpr::Mobius(MobiusMap::new(k, Complex64::from_polar(r, a)).unwrap()) }),
        (0.0..TAU, -ARNOLD_B_MAX..ARNOLD_B_MAX).prop_map(|(a, b)| CircleMapExpr::arnold(a, b).unwrap()),
    ]
}

/// Expressions of depth at most `depth`.
pub fn expr_strategy(depth: u32) -> impl Strategy<Value = CircleMapExpr> {
    leaf_strategy().prop_recursive(depth.saturating_sub(1), 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, g)| CircleMapExpr::compose(f, g)),
            inner.clone().prop_map(CircleMapExpr::inverse),
            (inner.clone(), -2i64..=2).prop_map(|(f, n)| CircleMapExpr::power(f, n)),
            (inner.clone(), inner).prop_map(|(phi, f)| CircleMapExpr::conjugate(phi, f)),
        ]
    })
}

pub fn angle_strategy() -> impl Strategy<Value = Angle> {
    (0.0..TAU).prop_map(Angle::new)
}

pub fn triple_strategy() -> impl Strategy<Value = Triple> {
    (0.0..TAU, 0.0..1.0f64, 0.0..1.0f64).prop_map(|(base, u, v)| {
        // gaps (g1, g2, g3) ≥ MIN_TRIPLE_GAP summing to 2π
        let free = TAU - 3.0 * MIN_TRIPLE_GAP;
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        let g1 = MIN_TRIPLE_GAP + free * lo;
        let g2 = MIN_TRIPLE_GAP + free * (hi - lo);
        Triple::from_radians(base, base + g1, base + g1 + g2)
    })
}
