//! The three-point ("enlarged") cocycle: the Möbius map sending a triple of
//! circle points to its image, and its behaviour as the triple collapses
//! onto the diagonal.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{canonical, Angle, MobiusMap};
use crate::maps::CircleMap;
use crate::newton;
use crate::projective::projective_derivative;

/// Min pairwise circular distance below which a triple is treated as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-5;

/// Allowed deviation of `|e^{iκ}|` from one in the direct (unfactored)
/// evaluation of the coefficients.
pub const UNIT_DEFECT_TOL: f64 = 1e-9;

/// Allowed interpolation error `|M(θᵢ) − f(θᵢ)|`.
pub const INTERPOLATION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triple {
    pub t1: Angle,
    pub t2: Angle,
    pub t3: Angle,
    /// Circular distances `(|t1 − t2|, |t2 − t3|, |t1 − t3|)`.
    pub distances: [f64; 3],
    pub degenerate: bool,
}

impl Triple {
    pub fn new(t1: Angle, t2: Angle, t3: Angle) -> Self {
        let distances = [t1.distance(t2), t2.distance(t3), t1.distance(t3)];
        let min = distances.iter().copied().fold(f64::INFINITY, f64::min);
        Triple {
            t1,
            t2,
            t3,
            distances,
            degenerate: min < DEGENERACY_THRESHOLD,
        }
    }

    pub fn from_radians(t1: f64, t2: f64, t3: f64) -> Self {
        Triple::new(Angle::new(t1), Angle::new(t2), Angle::new(t3))
    }

    pub fn min_distance(&self) -> f64 {
        self.distances.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn points(&self) -> [Angle; 3] {
        [self.t1, self.t2, self.t3]
    }

    /// Coordinatewise image under `f`.
    pub fn image<M: CircleMap + ?Sized>(&self, f: &M) -> Result<Triple> {
        Ok(Triple::new(f.eval(self.t1)?, f.eval(self.t2)?, f.eval(self.t3)?))
    }
}

/// `τ = ρ·e^{iγ}` split into half-angle data.
///
/// With `b − a = 2i·sin((θ₂−θ₁)/2)·e^{i(θ₁+θ₂)/2}` every chord is a sine of a
/// half gap, so `ρ` and `1 − ρ` keep full relative accuracy for close points.
/// `v = (θ₃−θ₁)/2` and `u = (φ₃−φ₁)/2` use the same gaps as the sines, which
/// makes the result independent of how each gap is lifted.
struct HalfAngles {
    rho: f64,
    one_minus_rho: f64,
    u: f64,
    v: f64,
}

impl HalfAngles {
    fn new(src: &Triple, dst: &Triple) -> Self {
        let d21 = src.t2.signed_difference(src.t1);
        let d32 = src.t3.signed_difference(src.t2);
        let e21 = dst.t2.signed_difference(dst.t1);
        let e32 = dst.t3.signed_difference(dst.t2);
        let (s21, s32) = ((0.5 * d21).sin(), (0.5 * d32).sin());
        let (big21, big32) = ((0.5 * e21).sin(), (0.5 * e32).sin());
        let den = big21 * s32;
        HalfAngles {
            rho: s21 * big32 / den,
            one_minus_rho: (den - s21 * big32) / den,
            u: 0.5 * (e21 + e32),
            v: 0.5 * (d21 + d32),
        }
    }

    fn gamma(&self) -> f64 {
        self.u - self.v
    }

    fn tau(&self) -> Complex64 {
        Complex64::from_polar(self.rho, self.gamma())
    }
}

/// `2·sin²(x/2) = 1 − cos x` without cancellation.
fn versine(x: f64) -> f64 {
    let s = (0.5 * x).sin();
    2.0 * s * s
}

/// The cross-ratio-like quantity `τ` of `f` on a non-degenerate triple.
pub fn tau<M: CircleMap + ?Sized>(f: &M, t: &Triple) -> Result<Complex64> {
    if t.degenerate {
        return Err(Error::DegenerateTriple(t.min_distance()));
    }
    Ok(HalfAngles::new(t, &t.image(f)?).tau())
}

/// Normal form of the Möbius map sending `src` to `dst` (both distinct triples).
///
/// Evaluates `e^{iκ} = (C − Aτ)/(cτ − a)` and `σ = −conj((1 − τ)/(cτ − a))`
/// after factoring out unit phases. With `w = e^{i(u+v)}` this gives
/// `e^{iκ} = −(A/a)·e^{−2iv}·(w − ρ)/conj(w − ρ)`, which has modulus one
/// by construction, and `σ = −a·conj((1 − ρe^{iγ})/(ρw − 1))`.
pub fn mobius_through(src: &Triple, dst: &Triple) -> Result<MobiusMap> {
    let h = HalfAngles::new(src, dst);
    let psi = h.u + h.v;
    let w_minus_rho = Complex64::new(h.one_minus_rho - versine(psi), psi.sin());
    let kappa = dst.t1.radians() - src.t1.radians() - 2.0 * h.v + PI + 2.0 * w_minus_rho.arg();
    let gamma = h.gamma();
    let num = Complex64::new(h.one_minus_rho + h.rho * versine(gamma), -h.rho * gamma.sin());
    let den = Complex64::new(-(h.one_minus_rho + h.rho * versine(psi)), h.rho * psi.sin());
    let sigma = -src.t1.unit() * (num / den).conj();
    if !kappa.is_finite() || !sigma.re.is_finite() || !sigma.im.is_finite() {
        return Err(Error::NonFinite("enlarged cocycle coefficients"));
    }
    Ok(MobiusMap::from_parts(kappa, sigma))
}

fn check_interpolation(m: &MobiusMap, src: &Triple, dst: &Triple) -> Result<()> {
    for (s, d) in src.points().iter().zip(dst.points()) {
        let err = m.apply(*s).distance(d);
        if err > INTERPOLATION_TOL {
            return Err(Error::CrossCheck {
                what: "enlarged cocycle interpolation",
                lhs: m.apply(*s).radians(),
                rhs: d.radians(),
            });
        }
    }
    Ok(())
}

/// `M_{f,t}`: the Möbius map agreeing with `f` on the three points of `t`.
///
/// Degenerate triples fall back to the continuous extension: the projective
/// derivative when all three points collapse, and the map matching value and
/// derivative at a doubled point plus the value at the isolated point when
/// exactly two collapse.
pub fn enlarged_cocycle<M: CircleMap + ?Sized>(f: &M, t: &Triple) -> Result<MobiusMap> {
    if !t.degenerate {
        let image = t.image(f)?;
        let m = mobius_through(t, &image)?;
        check_interpolation(&m, t, &image)?;
        return Ok(m);
    }
    let [d12, d23, d13] = t.distances;
    if d12.max(d23).max(d13) < DEGENERACY_THRESHOLD {
        return projective_derivative(f, t.t2);
    }
    let (p, q, isolated) = if d12 <= d23 && d12 <= d13 {
        (t.t1, t.t2, t.t3)
    } else if d23 <= d13 {
        (t.t2, t.t3, t.t1)
    } else {
        (t.t1, t.t3, t.t2)
    };
    let doubled = p.shifted(0.5 * q.signed_difference(p));
    two_point_fallback(f, doubled, isolated)
}

/// Möbius map matching `f` to first order at `x` and in value at `y`.
fn two_point_fallback<M: CircleMap + ?Sized>(f: &M, x: Angle, y: Angle) -> Result<MobiusMap> {
    let jx = f.jet(x)?;
    let fy = f.eval(y)?;
    let seed = projective_derivative(f, x)?;
    let sigma_of = |w: Complex64| w / (1.0 + w.norm_sqr()).sqrt();
    let residual = |p: &[f64; 3]| -> Option<[f64; 3]> {
        let m = MobiusMap::from_parts(p[0], sigma_of(Complex64::new(p[1], p[2])));
        let j = m.jet(x);
        Some([
            j.value.signed_difference(jx.value),
            j.d1 - jx.d1,
            m.apply(y).signed_difference(fy),
        ])
    };
    let w0 = seed.sigma() / (1.0 - seed.sigma().norm_sqr()).sqrt();
    let out = newton::solve(residual, [seed.kappa().radians(), w0.re, w0.im], 1e-14, 200)
        .ok_or(Error::FitNonConvergence(f64::INFINITY))?;
    if out.residual > 1e-10 {
        return Err(Error::FitNonConvergence(out.residual));
    }
    Ok(MobiusMap::from_parts(
        out.x[0],
        sigma_of(Complex64::new(out.x[1], out.x[2])),
    ))
}

/// One step of a diagonal probe at half-width `eps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagonalProbeRecord {
    pub eps: f64,
    /// `(1 − cos γ_ε)/ε²`.
    pub gamma_over: f64,
    /// `(1 − cos(γ_ε + θ₃ − θ₁))/ε²`.
    pub gamma_plus_over: f64,
    /// `(1 − ρ_ε)/ε`.
    pub rho_defect_over: f64,
    pub sigma_eps: Complex64,
    pub kappa_eps: Angle,
}

/// Probe data for the triple `(θ − ε, θ + shift·ε, θ + ε)`.
pub fn probe_triple<M: CircleMap + ?Sized>(f: &M, theta: Angle, eps: f64, shift: f64) -> Result<DiagonalProbeRecord> {
    let t = Triple::new(theta.shifted(-eps), theta.shifted(shift * eps), theta.shifted(eps));
    let image = t.image(f)?;
    // θ₃ − θ₁ = 2ε; the image arc is the short positive one for small ε
    let spread = canonical(image.t3.radians() - image.t1.radians());
    let gamma = 0.5 * spread - eps;
    let h = HalfAngles::new(&t, &image);
    let m = enlarged_cocycle(f, &t)?;
    Ok(DiagonalProbeRecord {
        eps,
        gamma_over: versine(gamma) / (eps * eps),
        gamma_plus_over: versine(gamma + 2.0 * eps) / (eps * eps),
        rho_defect_over: h.one_minus_rho / eps,
        sigma_eps: m.sigma(),
        kappa_eps: m.kappa(),
    })
}

/// Symmetric probes `(θ − ε, θ, θ + ε)` for `ε = eps0·factorᵏ`, `k < steps`.
pub fn diagonal_probe<M: CircleMap + ?Sized>(
    f: &M,
    theta: Angle,
    eps0: f64,
    factor: f64,
    steps: usize,
) -> Result<Vec<DiagonalProbeRecord>> {
    if !(factor > 0.0 && factor < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "factor must lie in (0, 1), got {factor}"
        )));
    }
    if !(eps0 > 0.0 && eps0 < std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidArgument(format!("eps0 must lie in (0, π/2), got {eps0}")));
    }
    (0..steps)
        .map(|k| probe_triple(f, theta, eps0 * factor.powi(k as i32), 0.0))
        .collect()
}

/// `‖σ_ε‖²` from the closed form in `ρ`, `γ` and `θ₃ − θ₁`.
pub fn sigma_norm_sq_closed_form(rho: f64, gamma: f64, spread: f64) -> f64 {
    (1.0 - 2.0 * rho * gamma.cos() + rho * rho) / (1.0 - 2.0 * rho * (gamma + spread).cos() + rho * rho)
}
