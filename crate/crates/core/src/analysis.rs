//! Drift and reduction diagnostics for the projective and enlarged cocycles.
//!
//! The drift of a cocycle along `f` at a base point is the hyperbolic
//! distance of `σₙ` (the σ-parameter of the n-th iterate) from the origin,
//! divided by `n`. It tends to zero for maps conjugate to rotations and is
//! bounded below by `log Df` at hyperbolic fixed points.

use crate::enlarged::{mobius_through, Triple};
use crate::error::{Error, Result};
use crate::geometry::{canonical, disk_distance_to_origin, Angle, MobiusMap, Su11Matrix};
use crate::maps::{iterate_jet, CircleMap, Lift};
use crate::projective::{
    cocycle_matrices, osculating_one_minus_r_squared, osculating_r_squared, projective_derivative,
};
use crate::sweep;

/// Agreement required between the jet route and the composed cocycle.
pub const COCYCLE_CROSS_CHECK_TOL: f64 = 1e-8;

/// Relative agreement required between the composed enlarged cocycle and
/// the closed-form expression for `1/(1 − rₙ²)`, on top of the rounding
/// allowance from [`MAX_CONDITIONING`].
pub const ENLARGED_EXPRESSION_TOL: f64 = 1e-8;

/// Largest accepted `ε·(1 + max|x̃|)/min|sin(gap/2)|` over the lifted image
/// gaps. Image points of a contracting orbit approach each other
/// geometrically, and `1/(1 − rₙ²)` inherits a relative error of about this
/// size from rounding in the orbit itself.
pub const MAX_CONDITIONING: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriftRecord {
    pub n: usize,
    pub r_n: f64,
    /// `log((1 + rₙ)/(1 − rₙ))`.
    pub dist: f64,
    /// `dist / n`.
    pub drift: f64,
    /// `Dfⁿ(θ)`; absent for the enlarged cocycle.
    pub d_n: Option<f64>,
    /// `D²fⁿ(θ)`; absent for the enlarged cocycle.
    pub delta_n: Option<f64>,
    /// `1 − rₙ²` of the composed cocycle, from its matrix representation.
    pub one_minus_r_sq: f64,
    pub cocycle: MobiusMap,
}

/// Drift of the projective cocycle along the orbit of `theta`.
///
/// `rₙ` and the distance come from the iterate jets; the composed cocycle
/// supplies `1 − rₙ²` and must agree with the jet route.
pub fn drift_sequence<M: CircleMap + ?Sized>(f: &M, theta: Angle, n_max: usize) -> Result<Vec<DriftRecord>> {
    let jets = iterate_jet(f, theta, n_max)?;
    let mats = cocycle_matrices(f, theta, n_max)?;
    jets.iter()
        .zip(&mats)
        .enumerate()
        .map(|(k, (jet, mat))| {
            let n = k + 1;
            let (d, delta) = (jet.d1, jet.d2);
            let r = osculating_r_squared(d, delta).sqrt();
            let dist = 2.0 * r.ln_1p() - osculating_one_minus_r_squared(d, delta).ln();
            let cocycle = mat.to_mobius();
            if (cocycle.r() - r).abs() > COCYCLE_CROSS_CHECK_TOL {
                return Err(Error::CrossCheck {
                    what: "r_n from jets and from the composed cocycle",
                    lhs: r,
                    rhs: cocycle.r(),
                });
            }
            Ok(DriftRecord {
                n,
                r_n: r,
                dist,
                drift: dist / n as f64,
                d_n: Some(d),
                delta_n: Some(delta),
                one_minus_r_sq: mat.one_minus_r_squared(),
                cocycle,
            })
        })
        .collect()
}

/// Drift sequences at each base point, in input order.
pub fn drift_grid<M: CircleMap + ?Sized>(f: &M, thetas: &[Angle], n_max: usize) -> Result<Vec<Vec<DriftRecord>>> {
    sweep::map_indexed(thetas.len(), |j| drift_sequence(f, thetas[j], n_max))
        .into_iter()
        .collect()
}

/// Largest `drift(n_max)` over the base points.
pub fn max_final_drift<M: CircleMap + ?Sized>(f: &M, thetas: &[Angle], n_max: usize) -> Result<f64> {
    let finals: Result<Vec<f64>> = sweep::map_indexed(thetas.len(), |j| {
        let recs = drift_sequence(f, thetas[j], n_max)?;
        Ok(recs.last().map_or(0.0, |r| r.drift))
    })
    .into_iter()
    .collect();
    Ok(finals?.into_iter().fold(0.0, f64::max))
}

/// The closed form of `1/(1 − rₙ²)` for the enlarged cocycle in terms of
/// `ρₙ = |τₙ|`, the source spread `θ₃ − θ₁` and the image spread
/// `fⁿ(θ₃) − fⁿ(θ₁)` (both lifted, in `(0, 2π)`).
pub fn enlarged_expression(rho: f64, spread: f64, image_spread: f64) -> f64 {
    let num = (1.0 - rho).powi(2) + 2.0 * rho * (1.0 - (0.5 * spread + 0.5 * image_spread).cos());
    num / (4.0 * rho * (0.5 * spread).sin() * (0.5 * image_spread).sin())
}

/// Lifted coordinates `x₁ < x₂ < x₃ < x₁ + 2π` of a triple, reordering the
/// first two points when the triple runs clockwise.
fn ordered_lift(t: &Triple) -> [f64; 3] {
    let (p, q) = if canonical(t.t2.radians() - t.t1.radians()) < canonical(t.t3.radians() - t.t1.radians()) {
        (t.t1, t.t2)
    } else {
        (t.t2, t.t1)
    };
    let base = p.radians();
    [
        base,
        base + canonical(q.radians() - base),
        base + canonical(t.t3.radians() - base),
    ]
}

/// `|τ|` from half-angle sines of lifted gaps.
fn rho_from_lifts(src: &[f64; 3], dst: &[f64; 3]) -> f64 {
    let s = |x: f64| (0.5 * x).sin();
    (s(src[1] - src[0]) / s(dst[1] - dst[0])) * (s(dst[2] - dst[1]) / s(src[2] - src[1]))
}

/// Relative rounding sensitivity of quantities built from the lifted
/// image gaps `dst`.
fn gap_conditioning(dst: &[f64; 3]) -> f64 {
    let scale = 1.0 + dst.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let min_sine = [dst[1] - dst[0], dst[2] - dst[1], dst[2] - dst[0]]
        .iter()
        .map(|g| (0.5 * g).sin().abs())
        .fold(f64::INFINITY, f64::min);
    f64::EPSILON * scale / min_sine
}

/// Drift of the enlarged cocycle along the orbit of a triple.
///
/// `M_{fⁿ,t}` is accumulated as `M_{f,fᵏ(t)} ∘ M_{fᵏ,t}`; each record is
/// checked against the closed form for `1/(1 − rₙ²)`. Fails with
/// [`Error::LostResolution`] once the image points are too close to resolve.
pub fn enlarged_drift_sequence<M: CircleMap + ?Sized>(f: &M, t: &Triple, n_max: usize) -> Result<Vec<DriftRecord>> {
    if t.degenerate {
        return Err(Error::DegenerateTriple(t.min_distance()));
    }
    let lift = Lift::new(f)?;
    let src = ordered_lift(t);
    let mut lifted = src;
    let mut current = *t;
    let mut acc = Su11Matrix::IDENTITY;
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let next = current.image(f)?;
        for x in lifted.iter_mut() {
            *x = lift.eval(*x)?;
        }
        let conditioning = gap_conditioning(&lifted);
        if !(conditioning <= MAX_CONDITIONING) {
            return Err(Error::LostResolution { n, conditioning });
        }
        acc = mobius_through(&current, &next)?.to_su11().compose(&acc);
        current = next;

        let one_minus_r_sq = acc.one_minus_r_squared();
        let rho = rho_from_lifts(&src, &lifted);
        let expected = enlarged_expression(rho, src[2] - src[0], lifted[2] - lifted[0]);
        let composed = 1.0 / one_minus_r_sq;
        if ((composed - expected) / expected).abs() > ENLARGED_EXPRESSION_TOL + 64.0 * conditioning {
            return Err(Error::CrossCheck {
                what: "1/(1 - r_n^2) from the composed cocycle and the closed form",
                lhs: composed,
                rhs: expected,
            });
        }
        let cocycle = acc.to_mobius();
        let dist = acc.distance_to_origin();
        out.push(DriftRecord {
            n,
            r_n: cocycle.r(),
            dist,
            drift: dist / n as f64,
            d_n: None,
            delta_n: None,
            one_minus_r_sq,
            cocycle,
        });
    }
    Ok(out)
}

/// Pointwise reduction `B(f(θ)) ∘ P_{f,θ} ∘ B(θ)⁻¹` with `B(θ) = P_{φ,θ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReductionRecord {
    pub theta: Angle,
    pub reduced: MobiusMap,
    /// Hyperbolic distance of the reduced map's σ from the origin.
    pub residual: f64,
    /// Rotation part `κ` of the reduced map.
    pub angle: Angle,
}

pub fn reduce_at<F, P>(f: &F, phi: &P, theta: Angle) -> Result<ReductionRecord>
where
    F: CircleMap + ?Sized,
    P: CircleMap + ?Sized,
{
    let b_theta = projective_derivative(phi, theta)?.to_su11();
    let image = f.eval(theta)?;
    let b_image = projective_derivative(phi, image)?.to_su11();
    let p = projective_derivative(f, theta)?.to_su11();
    let reduced = b_image.compose(&p).compose(&b_theta.inverse()).to_mobius();
    Ok(ReductionRecord {
        theta,
        reduced,
        residual: disk_distance_to_origin(reduced.sigma())?,
        angle: reduced.kappa(),
    })
}

/// Reduction records at the given base points, in order.
pub fn reduce_on<F, P>(f: &F, phi: &P, thetas: &[Angle]) -> Result<Vec<ReductionRecord>>
where
    F: CircleMap + ?Sized,
    P: CircleMap + ?Sized,
{
    sweep::map_indexed(thetas.len(), |j| reduce_at(f, phi, thetas[j]))
        .into_iter()
        .collect()
}

/// Reduction records on the uniform grid `θⱼ = 2πj/grid_size`.
pub fn reduce_with_conjugacy<F, P>(f: &F, phi: &P, grid_size: usize) -> Result<Vec<ReductionRecord>>
where
    F: CircleMap + ?Sized,
    P: CircleMap + ?Sized,
{
    if grid_size == 0 {
        return Err(Error::InvalidArgument("grid size must be at least 1".into()));
    }
    reduce_on(f, phi, &sweep::uniform_grid(grid_size, 0.0))
}

/// Bounds `(D_max, Δ_max) = ((1+λ)/(1−λ), 2(1+λ)/(1−λ)²)` on first and second
/// derivatives implied by `|σ| ≤ λ` for the projective derivative.
pub fn boundedness_bounds(lambda: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    let one_minus = 1.0 - lambda;
    Ok((
        (1.0 + lambda) / one_minus,
        2.0 * (1.0 + lambda) / (one_minus * one_minus),
    ))
}

/// Lower bound `μ − log(4)/n` on the drift at a fixed point with `Df = e^μ`.
pub fn hyperbolic_drift_lower_bound(mu: f64, n: usize) -> f64 {
    mu - 4f64.ln() / n as f64
}

/// Least-squares slope of `ys` against `xs`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Exponential growth rate of `|values[k]|` (indexed by `n = k + 1`),
/// fitted by least squares on logs over the second half of the range.
pub fn fitted_exponential_rate(values: &[f64]) -> f64 {
    let start = values.len() / 2;
    let (xs, ys): (Vec<f64>, Vec<f64>) = values[start..]
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(k, v)| ((start + k + 1) as f64, v.abs().ln()))
        .unzip();
    least_squares_slope(&xs, &ys)
}

/// Log-log slope of `errors` against `steps`.
pub fn log_log_slope(steps: &[f64], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = steps.iter().map(|x| x.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|x| x.ln()).collect();
    least_squares_slope(&xs, &ys)
}
