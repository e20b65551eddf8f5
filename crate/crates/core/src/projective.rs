//! The projective derivative: the Möbius map osculating a circle map to
//! second order, and the cocycle it forms along orbits.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Angle, MobiusMap, Su11Matrix};
use crate::maps::{CircleMap, Jet2};
use crate::newton;

/// Below this, `|D − 1|` and `|Δ|` select the rotation branch.
pub const DEGENERATE_JET_TOL: f64 = 1e-12;

/// `r²` of the osculating map: `(D²(D−1)² + Δ²)/(D²(D+1)² + Δ²)`.
///
/// Written with `Δ/D` so that large derivatives do not overflow.
pub fn osculating_r_squared(d1: f64, d2: f64) -> f64 {
    let q = d2 / d1;
    let q2 = q * q;
    ((d1 - 1.0).powi(2) + q2) / ((d1 + 1.0).powi(2) + q2)
}

/// `1 − r²` of the osculating map, `4D³/(D²(D+1)² + Δ²)`, without cancellation.
pub fn osculating_one_minus_r_squared(d1: f64, d2: f64) -> f64 {
    let q = d2 / d1;
    4.0 * d1 / ((d1 + 1.0).powi(2) + q * q)
}

/// Both roots in `r²` of
/// `r⁴(D²(D+1)²+Δ²) − 2r²(D²(D²+1)+Δ²) + D²(D−1)²+Δ² = 0`, ascending.
pub fn osculating_quadratic_roots(d1: f64, d2: f64) -> [f64; 2] {
    let dd = d1 * d1;
    let e2 = d2 * d2;
    let a = dd * (d1 + 1.0).powi(2) + e2;
    let b = -2.0 * (dd * (dd + 1.0) + e2);
    let c = dd * (d1 - 1.0).powi(2) + e2;
    let disc = (b * b - 4.0 * a * c).max(0.0);
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (x1, x2) = (q / a, c / q);
    if x1 <= x2 {
        [x1, x2]
    } else {
        [x2, x1]
    }
}

/// The unique Möbius map whose 2-jet at `theta` is `jet`.
pub fn jet_to_mobius(jet: &Jet2, theta: Angle) -> Result<MobiusMap> {
    let (d, delta) = (jet.d1, jet.d2);
    if !(d > 0.0) {
        return Err(Error::NonPositiveDerivative(d));
    }
    if !delta.is_finite() || !d.is_finite() {
        return Err(Error::NonFinite("jet"));
    }
    if (d - 1.0).abs() < DEGENERATE_JET_TOL && delta.abs() < DEGENERATE_JET_TOL {
        return MobiusMap::new(jet.value.radians() - theta.radians(), Complex64::new(0.0, 0.0));
    }
    let r = osculating_r_squared(d, delta).sqrt();
    // sin β and cos β share the positive denominator, so atan2 of the
    // numerators is quadrant-correct
    let beta = (-2.0 * d * delta).atan2(d * d * (d * d - 1.0) + delta * delta);
    let alpha = theta.radians() - beta;
    let sigma = Complex64::from_polar(r, alpha);
    let e = theta.unit();
    let phase = ((e - sigma) / (1.0 - sigma.conj() * e)).arg();
    MobiusMap::new(jet.value.radians() - phase, sigma)
}

/// `P_{f,θ}`.
pub fn projective_derivative<M: CircleMap + ?Sized>(f: &M, theta: Angle) -> Result<MobiusMap> {
    jet_to_mobius(&f.jet(theta)?, theta)
}

/// Brute-force fit of `(κ, σ)` to a 2-jet by damped Newton on the three
/// matching conditions, independent of the closed-form route.
pub fn oracle_fit_mobius(jet: &Jet2, theta: Angle) -> Result<MobiusMap> {
    if !(jet.d1 > 0.0) {
        return Err(Error::NonPositiveDerivative(jet.d1));
    }
    // σ = w / √(1 + |w|²) keeps every trial point inside the disk
    let sigma_of = |w: Complex64| w / (1.0 + w.norm_sqr()).sqrt();
    let residual = |p: &[f64; 3]| -> Option<[f64; 3]> {
        let sigma = sigma_of(Complex64::new(p[1], p[2]));
        if !(sigma.norm() < 1.0) {
            return None;
        }
        let m = MobiusMap::from_parts(p[0], sigma);
        let fit = m.jet(theta);
        Some([fit.value.signed_difference(jet.value), fit.d1 - jet.d1, fit.d2 - jet.d2])
    };

    let e = theta.unit();
    let mut best: Option<(f64, MobiusMap)> = None;
    let starts = std::iter::once(Complex64::new(0.0, 0.0))
        .chain((0..7).map(|k| Complex64::from_polar(0.5, TAU * k as f64 / 7.0)));
    for sigma0 in starts {
        let w0 = sigma0 / (1.0 - sigma0.norm_sqr()).sqrt();
        let kappa0 = jet.value.radians() - ((e - sigma0) / (1.0 - sigma0.conj() * e)).arg();
        let Some(out) = newton::solve(residual, [kappa0, w0.re, w0.im], 1e-14, 200) else {
            continue;
        };
        let m = MobiusMap::from_parts(out.x[0], sigma_of(Complex64::new(out.x[1], out.x[2])));
        if best.as_ref().is_none_or(|(r, _)| out.residual < *r) {
            best = Some((out.residual, m));
        }
        if out.residual < 1e-13 {
            break;
        }
    }
    match best {
        Some((res, m)) if res < 1e-10 => Ok(m),
        Some((res, _)) => Err(Error::FitNonConvergence(res)),
        None => Err(Error::FitNonConvergence(f64::INFINITY)),
    }
}

/// `P_{fᵏ,θ}` for `k = 1..=n` in the matrix representation, built by the
/// cocycle relation `P_{f^{k+1},θ} = P_{f,fᵏθ} ∘ P_{fᵏ,θ}`.
pub fn cocycle_matrices<M: CircleMap + ?Sized>(f: &M, theta: Angle, n: usize) -> Result<Vec<Su11Matrix>> {
    let mut out = Vec::with_capacity(n);
    let mut acc = Su11Matrix::IDENTITY;
    let mut x = theta;
    for _ in 0..n {
        let j = f.jet(x)?;
        let step = jet_to_mobius(&j, x)?.to_su11();
        acc = step.compose(&acc);
        out.push(acc);
        x = j.value;
    }
    Ok(out)
}

/// `[P_{f,θ}, P_{f²,θ}, …, P_{fⁿ,θ}]`.
pub fn cocycle_iterates<M: CircleMap + ?Sized>(f: &M, theta: Angle, n: usize) -> Result<Vec<MobiusMap>> {
    Ok(cocycle_matrices(f, theta, n)?
        .iter()
        .map(Su11Matrix::to_mobius)
        .collect())
}
