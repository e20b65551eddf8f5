//! Circle diffeomorphisms with exact 2-jets.
//!
//! [`CircleMapExpr`] is a small expression language (rotations, Möbius
//! maps, the Arnold family and their compositions, inverses, powers and
//! conjugates) whose jets are computed by the chain rule. Anything that can
//! produce a jet implements [`CircleMap`]; lifts to the real line are
//! reconstructed from values through [`Lift`].

pub mod conjugators;
pub mod parse;

use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{canonical, Angle, MobiusMap};
pub use crate::jet::Jet2;

pub use conjugators::{AveragingConjugator, FiniteOrderConjugator};
pub use parse::{parse_map_spec, ParseError};

/// Bisection step cap for numerical inverses.
pub const MAX_BISECTION_STEPS: usize = 200;

/// Residual above which an inverse is reported as failed.
const INVERSE_FAILURE: f64 = 1e-9;

/// Rounding allowance used when unwrapping values into a lift.
const LIFT_NOISE: f64 = 1e-10;

/// An orientation-preserving circle diffeomorphism that can report its 2-jet.
pub trait CircleMap: Sync {
    fn jet(&self, theta: Angle) -> Result<Jet2>;

    fn eval(&self, theta: Angle) -> Result<Angle> {
        Ok(self.jet(theta)?.value)
    }

    /// Preimage of `target`; bisection on the monotone lift by default.
    fn inverse_eval(&self, target: Angle) -> Result<Angle> {
        bisect_inverse(self, target)
    }
}

impl<M: CircleMap + ?Sized> CircleMap for &M {
    fn jet(&self, theta: Angle) -> Result<Jet2> {
        (**self).jet(theta)
    }
    fn eval(&self, theta: Angle) -> Result<Angle> {
        (**self).eval(theta)
    }
    fn inverse_eval(&self, target: Angle) -> Result<Angle> {
        (**self).inverse_eval(target)
    }
}

impl CircleMap for MobiusMap {
    fn jet(&self, theta: Angle) -> Result<Jet2> {
        Ok(MobiusMap::jet(self, theta))
    }
    fn eval(&self, theta: Angle) -> Result<Angle> {
        Ok(self.apply(theta))
    }
    fn inverse_eval(&self, target: Angle) -> Result<Angle> {
        Ok(self.inverse().apply(target))
    }
}

/// Unwraps `value = f(x)` for `x ∈ [0, 2π)` into the lift with `f̃(0) = base`.
fn unwrap_value(base: f64, x: f64, value: Angle) -> f64 {
    if x == 0.0 {
        return base;
    }
    let mut d = canonical(value.radians() - base);
    if x < PI && d > TAU - LIFT_NOISE {
        d -= TAU;
    } else if x > PI && d < LIFT_NOISE {
        d += TAU;
    }
    base + d
}

/// Splits `x` into `x − 2πk ∈ [0, 2π)` and `k`.
fn split_turns(x: f64) -> (f64, f64) {
    let k = (x / TAU).floor();
    let mut r = x - k * TAU;
    let mut k = k;
    if r >= TAU {
        r -= TAU;
        k += 1.0;
    }
    if r < 0.0 {
        r += TAU;
        k -= 1.0;
        if r >= TAU {
            r = 0.0;
            k += 1.0;
        }
    }
    (r, k)
}

/// The lift `f̃ : ℝ → ℝ` of a circle map with `f̃(0) ∈ [0, 2π)`.
pub struct Lift<'a, M: CircleMap + ?Sized> {
    map: &'a M,
    base: f64,
}

impl<'a, M: CircleMap + ?Sized> Lift<'a, M> {
    pub fn new(map: &'a M) -> Result<Self> {
        let base = map.eval(Angle::ZERO)?.radians();
        Ok(Lift { map, base })
    }

    pub fn map(&self) -> &'a M {
        self.map
    }

    /// `f̃(0)`.
    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let (r, k) = split_turns(x);
        let v = if r == 0.0 {
            self.base
        } else {
            unwrap_value(self.base, r, self.map.eval(Angle::new(r))?)
        };
        Ok(v + k * TAU)
    }

    /// Lifted value together with the jet at `x`.
    pub fn jet(&self, x: f64) -> Result<(f64, Jet2)> {
        let (r, k) = split_turns(x);
        let j = self.map.jet(Angle::new(r))?;
        Ok((unwrap_value(self.base, r, j.value) + k * TAU, j))
    }

    /// `f̃⁻¹(y)`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        let x0 = self.map.inverse_eval(Angle::new(y))?.radians();
        let image = self.eval(x0)?;
        let m = ((image - y) / TAU).round();
        Ok(x0 - m * TAU)
    }
}

/// Preimage of `target` by bisection on the monotone lift over one period.
pub fn bisect_inverse<M: CircleMap + ?Sized>(map: &M, target: Angle) -> Result<Angle> {
    let base = map.eval(Angle::ZERO)?.radians();
    let goal = base + canonical(target.radians() - base);
    let (mut lo, mut hi) = (0.0, TAU);
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = unwrap_value(base, mid, map.eval(Angle::new(mid))?);
        if !v.is_finite() {
            return Err(Error::NonFinite("bisection"));
        }
        if v < goal {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let residual_at = |x: f64| -> Result<f64> { Ok(map.eval(Angle::new(x))?.distance(target)) };
    let (rl, rh) = (residual_at(lo)?, residual_at(hi)?);
    let (x, residual) = if rl <= rh { (lo, rl) } else { (hi, rh) };
    if residual > INVERSE_FAILURE {
        return Err(Error::InverseNonConvergence {
            target: target.radians(),
            residual,
        });
    }
    Ok(Angle::new(x))
}

/// Expression tree of analytic circle diffeomorphisms.
#[derive(Clone, Debug, PartialEq)]
pub enum CircleMapExpr {
    Rotation(Angle),
    Mobius(MobiusMap),
    /// `θ ↦ θ + a + b sin θ`, `|b| < 1`.
    Arnold {
        a: f64,
        b: f64,
    },
    /// `f ∘ g`.
    Compose(Box<CircleMapExpr>, Box<CircleMapExpr>),
    Inverse(Box<CircleMapExpr>),
    Power(Box<CircleMapExpr>, i64),
    /// `φ ∘ f ∘ φ⁻¹`, stored as `(φ, f)`.
    Conjugate(Box<CircleMapExpr>, Box<CircleMapExpr>),
}

impl CircleMapExpr {
    pub fn identity() -> Self {
        CircleMapExpr::Rotation(Angle::ZERO)
    }

    pub fn rotation(alpha: f64) -> Self {
        CircleMapExpr::Rotation(Angle::new(alpha))
    }

    pub fn mobius(m: MobiusMap) -> Self {
        CircleMapExpr::Mobius(m)
    }

    pub fn arnold(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFinite("arnold parameters"));
        }
        if b.abs() >= 1.0 {
            return Err(Error::InvalidArgument("|b| must be < 1".into()));
        }
        Ok(CircleMapExpr::Arnold { a, b })
    }

    pub fn compose(f: CircleMapExpr, g: CircleMapExpr) -> Self {
        CircleMapExpr::Compose(Box::new(f), Box::new(g))
    }

    pub fn inverse(f: CircleMapExpr) -> Self {
        CircleMapExpr::Inverse(Box::new(f))
    }

    pub fn power(f: CircleMapExpr, n: i64) -> Self {
        CircleMapExpr::Power(Box::new(f), n)
    }

    pub fn conjugate(phi: CircleMapExpr, f: CircleMapExpr) -> Self {
        CircleMapExpr::Conjugate(Box::new(phi), Box::new(f))
    }

    pub fn depth(&self) -> usize {
        use CircleMapExpr::*;
        match self {
            Rotation(_) | Mobius(_) | Arnold { .. } => 1,
            Inverse(f) | Power(f, _) => 1 + f.depth(),
            Compose(f, g) | Conjugate(f, g) => 1 + f.depth().max(g.depth()),
        }
    }

    fn eval_inner(&self, theta: Angle) -> Result<Angle> {
        use CircleMapExpr::*;
        Ok(match self {
            Rotation(alpha) => theta.shifted(alpha.radians()),
            Mobius(m) => m.apply(theta),
            Arnold { a, b } => {
                let t = theta.radians();
                Angle::new(t + a + b * t.sin())
            }
            Compose(f, g) => f.eval_inner(g.eval_inner(theta)?)?,
            Inverse(f) => f.inverse_inner(theta)?,
            Power(f, n) => {
                let mut x = theta;
                for _ in 0..n.unsigned_abs() {
                    x = if *n > 0 { f.eval_inner(x)? } else { f.inverse_inner(x)? };
                }
                x
            }
            Conjugate(phi, f) => phi.eval_inner(f.eval_inner(phi.inverse_inner(theta)?)?)?,
        })
    }

    fn inverse_inner(&self, target: Angle) -> Result<Angle> {
        use CircleMapExpr::*;
        Ok(match self {
            Rotation(alpha) => target.shifted(-alpha.radians()),
            Mobius(m) => m.inverse().apply(target),
            Arnold { .. } => bisect_inverse(self, target)?,
            Compose(f, g) => g.inverse_inner(f.inverse_inner(target)?)?,
            Inverse(f) => f.eval_inner(target)?,
            Power(f, n) => {
                let mut x = target;
                for _ in 0..n.unsigned_abs() {
                    x = if *n > 0 { f.inverse_inner(x)? } else { f.eval_inner(x)? };
                }
                x
            }
            Conjugate(phi, f) => phi.eval_inner(f.inverse_inner(phi.inverse_inner(target)?)?)?,
        })
    }

    fn jet_inner(&self, theta: Angle) -> Result<Jet2> {
        use CircleMapExpr::*;
        Ok(match self {
            Rotation(alpha) => Jet2::new(theta.shifted(alpha.radians()), 1.0, 0.0),
            Mobius(m) => m.jet(theta),
            Arnold { a, b } => {
                let t = theta.radians();
                let (s, c) = t.sin_cos();
                Jet2::new(Angle::new(t + a + b * s), 1.0 + b * c, -b * s)
            }
            Compose(f, g) => {
                let jg = g.jet_inner(theta)?;
                f.jet_inner(jg.value)?.after(&jg)
            }
            Inverse(f) => inverse_jet(f, theta)?,
            Power(f, n) => {
                let mut acc = Jet2::identity(theta);
                for _ in 0..n.unsigned_abs() {
                    let step = if *n > 0 {
                        f.jet_inner(acc.value)?
                    } else {
                        inverse_jet(f, acc.value)?
                    };
                    acc = step.after(&acc);
                }
                acc
            }
            Conjugate(phi, f) => {
                let j_inv = inverse_jet(phi, theta)?;
                let j_f = f.jet_inner(j_inv.value)?.after(&j_inv);
                phi.jet_inner(j_f.value)?.after(&j_f)
            }
        })
    }

    /// Image of `theta`.
    pub fn apply(&self, theta: Angle) -> Result<Angle> {
        self.eval_inner(theta)
    }
}

fn inverse_jet(f: &CircleMapExpr, theta: Angle) -> Result<Jet2> {
    let x = f.inverse_inner(theta)?;
    Ok(f.jet_inner(x)?.inverted(x))
}

impl CircleMap for CircleMapExpr {
    fn jet(&self, theta: Angle) -> Result<Jet2> {
        self.jet_inner(theta)
    }

    fn eval(&self, theta: Angle) -> Result<Angle> {
        self.eval_inner(theta)
    }

    /// Structural inverse; only Arnold leaves fall back to bisection.
    fn inverse_eval(&self, target: Angle) -> Result<Angle> {
        self.inverse_inner(target)
    }
}

impl fmt::Display for CircleMapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CircleMapExpr::*;
        match self {
            Rotation(alpha) => write!(f, "rot:{}", alpha.radians()),
            Mobius(m) => m.fmt(f),
            Arnold { a, b } => write!(f, "arnold:a={a},b={b}"),
            Compose(x, y) => write!(f, "comp({x},{y})"),
            Inverse(x) => write!(f, "inv({x})"),
            Power(x, n) => write!(f, "pow({x},{n})"),
            Conjugate(x, y) => write!(f, "conj({x},{y})"),
        }
    }
}

/// `φ ∘ f ∘ φ⁻¹` for arbitrary jet providers.
pub struct Conjugated<P, F> {
    pub phi: P,
    pub f: F,
}

impl<P: CircleMap, F: CircleMap> CircleMap for Conjugated<P, F> {
    fn jet(&self, theta: Angle) -> Result<Jet2> {
        let x = self.phi.inverse_eval(theta)?;
        let j_inv = self.phi.jet(x)?.inverted(x);
        let j_f = self.f.jet(j_inv.value)?.after(&j_inv);
        Ok(self.phi.jet(j_f.value)?.after(&j_f))
    }

    fn eval(&self, theta: Angle) -> Result<Angle> {
        let x = self.phi.inverse_eval(theta)?;
        self.phi.eval(self.f.eval(x)?)
    }

    fn inverse_eval(&self, target: Angle) -> Result<Angle> {
        let y = self.phi.inverse_eval(target)?;
        self.phi.eval(self.f.inverse_eval(y)?)
    }
}

/// Jets of `f¹, …, fⁿ` at `theta`, accumulated along the orbit.
pub fn iterate_jet<M: CircleMap + ?Sized>(f: &M, theta: Angle, n: usize) -> Result<Vec<Jet2>> {
    let mut out = Vec::with_capacity(n);
    let mut acc = Jet2::identity(theta);
    for _ in 0..n {
        acc = f.jet(acc.value)?.after(&acc);
        out.push(acc);
    }
    Ok(out)
}

/// `θ, f(θ), …, fⁿ(θ)`.
pub fn orbit<M: CircleMap + ?Sized>(f: &M, theta: Angle, n: usize) -> Result<Vec<Angle>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut x = theta;
    out.push(x);
    for _ in 0..n {
        x = f.eval(x)?;
        out.push(x);
    }
    Ok(out)
}

/// Birkhoff estimate of the rotation number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationNumber {
    /// Radians, in `[0, 2π)`.
    pub value: f64,
    /// Guaranteed accuracy `2π / n_iters`.
    pub accuracy: f64,
}

impl RotationNumber {
    /// Circular distance between the estimate and `alpha`.
    pub fn error_from(&self, alpha: f64) -> f64 {
        Angle::new(self.value).distance(Angle::new(alpha))
    }
}

pub fn rotation_number<M: CircleMap + ?Sized>(f: &M, n_iters: usize) -> Result<RotationNumber> {
    if n_iters == 0 {
        return Err(Error::InvalidArgument("n_iters must be at least 1".into()));
    }
    let lift = Lift::new(f)?;
    let mut x = 0.0;
    for _ in 0..n_iters {
        x = lift.eval(x)?;
    }
    Ok(RotationNumber {
        value: canonical(x / n_iters as f64),
        accuracy: TAU / n_iters as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn conj_mobius_rot(s: f64, alpha: f64) -> CircleMapExpr {
        CircleMapExpr::conjugate(
            CircleMapExpr::mobius(MobiusMap::new(0.0, Complex64::new(s, 0.0)).unwrap()),
            CircleMapExpr::rotation(alpha),
        )
    }

    #[test]
    fn reference_jets() {
        let t = Angle::new(2.5);
        let j = CircleMapExpr::rotation(0.3).jet(t).unwrap();
        assert_abs_diff_eq!(j.value.radians(), 2.8, epsilon = 1e-15);
        assert_eq!((j.d1, j.d2), (1.0, 0.0));

        let j = CircleMapExpr::arnold(0.0, 0.5).unwrap().jet(Angle::ZERO).unwrap();
        assert_eq!(j.value, Angle::ZERO);
        assert_eq!((j.d1, j.d2), (1.5, 0.0));

        let r = CircleMapExpr::rotation(0.3);
        let j = CircleMapExpr::compose(r.clone(), r).jet(t).unwrap();
        assert_abs_diff_eq!(j.value.radians(), 3.1, epsilon = 1e-15);
        assert_eq!((j.d1, j.d2), (1.0, 0.0));
    }

    #[test]
    fn arnold_rejects_large_b() {
        assert!(CircleMapExpr::arnold(0.0, 1.0).is_err());
        assert!(CircleMapExpr::arnold(0.0, -1.2).is_err());
    }

    #[test]
    fn inverse_eval_cases() {
        let r = CircleMapExpr::rotation(0.8);
        assert_abs_diff_eq!(
            r.inverse_eval(Angle::new(0.5)).unwrap().radians(),
            canonical(0.5 - 0.8),
            epsilon = 1e-15
        );
        let id = CircleMapExpr::identity();
        assert_eq!(id.inverse_eval(Angle::new(2.0)).unwrap().radians(), 2.0);
        let f = CircleMapExpr::arnold(0.0, 0.5).unwrap();
        assert!(f.inverse_eval(Angle::ZERO).unwrap().distance(Angle::ZERO) < 1e-12);
    }

    #[test]
    fn structural_and_bisection_inverse_agree() {
        let f = CircleMapExpr::compose(conj_mobius_rot(0.4, 1.3), CircleMapExpr::arnold(0.7, -0.6).unwrap());
        for k in 0..37 {
            let t = Angle::new(0.17 * k as f64);
            let a = f.inverse_eval(t).unwrap();
            let b = bisect_inverse(&f, t).unwrap();
            assert!(a.distance(b) < 1e-12, "{a} vs {b}");
            assert!(f.eval(a).unwrap().distance(t) < 1e-12);
        }
    }

    #[test]
    fn inverse_derivative_reciprocal() {
        let f = CircleMapExpr::compose(CircleMapExpr::arnold(0.2, 0.7).unwrap(), conj_mobius_rot(0.3, 0.4));
        let inv = CircleMapExpr::inverse(f.clone());
        for k in 0..20 {
            let t = Angle::new(0.31 * k as f64);
            let jf = f.jet(t).unwrap();
            let ji = inv.jet(jf.value).unwrap();
            assert!((ji.d1 * jf.d1 - 1.0).abs() < 1e-9);
            assert!(ji.value.distance(t) < 1e-12);
        }
    }

    #[test]
    fn negative_power_inverts_positive_power() {
        let f = CircleMapExpr::arnold(0.4, 0.5).unwrap();
        let p = CircleMapExpr::power(f.clone(), 3);
        let m = CircleMapExpr::power(f, -3);
        let t = Angle::new(1.0);
        let y = p.eval(t).unwrap();
        assert!(m.eval(y).unwrap().distance(t) < 1e-12);
        let jp = p.jet(t).unwrap();
        let jm = m.jet(y).unwrap();
        assert!((jp.d1 * jm.d1 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lift_is_monotone_and_periodic() {
        let f = conj_mobius_rot(0.6, 5.9);
        let lift = Lift::new(&f).unwrap();
        assert!((0.0..TAU).contains(&lift.base()));
        let mut last = f64::NEG_INFINITY;
        for k in -200..200 {
            let x = 0.05 * k as f64;
            let y = lift.eval(x).unwrap();
            assert!(y > last);
            assert_abs_diff_eq!(lift.eval(x + TAU).unwrap(), y + TAU, epsilon = 1e-12);
            assert_abs_diff_eq!(lift.inverse(y).unwrap(), x, epsilon = 1e-12);
            last = y;
        }
    }

    #[test]
    fn rotation_numbers() {
        let rn = rotation_number(&CircleMapExpr::rotation(1.0), 10).unwrap();
        assert_abs_diff_eq!(rn.value, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rn.accuracy, TAU / 10.0);

        let rn = rotation_number(&conj_mobius_rot(0.3, 1.0), 1000).unwrap();
        assert!(rn.error_from(1.0) <= rn.accuracy);

        let rn = rotation_number(&CircleMapExpr::arnold(0.0, 0.5).unwrap(), 100).unwrap();
        assert!(rn.error_from(0.0) < 1e-12);

        assert!(rotation_number(&CircleMapExpr::identity(), 0).is_err());
    }

    #[test]
    fn iterate_jet_examples() {
        let jets = iterate_jet(&CircleMapExpr::rotation(0.5), Angle::new(1.0), 3).unwrap();
        for (k, j) in jets.iter().enumerate() {
            assert_abs_diff_eq!(j.value.radians(), 1.0 + 0.5 * (k + 1) as f64, epsilon = 1e-14);
            assert_eq!((j.d1, j.d2), (1.0, 0.0));
        }

        let jets = iterate_jet(&CircleMapExpr::arnold(0.0, 0.5).unwrap(), Angle::ZERO, 5).unwrap();
        for (k, j) in jets.iter().enumerate() {
            assert_abs_diff_eq!(j.d1, 1.5f64.powi(k as i32 + 1), epsilon = 1e-12);
            assert_eq!(j.d2, 0.0);
        }

        let f = conj_mobius_rot(0.3, 1.0);
        let t = Angle::new(0.4);
        assert_eq!(iterate_jet(&f, t, 1).unwrap(), vec![f.jet(t).unwrap()]);
    }

    #[test]
    fn iterate_jet_matches_power_expansion() {
        let f = CircleMapExpr::compose(CircleMapExpr::arnold(0.3, 0.4).unwrap(), conj_mobius_rot(0.25, 2.0));
        let t = Angle::new(0.9);
        let jets = iterate_jet(&f, t, 12).unwrap();
        for (k, j) in jets.iter().enumerate() {
            let p = CircleMapExpr::power(f.clone(), k as i64 + 1).jet(t).unwrap();
            assert!(p.value.distance(j.value) < 1e-10);
            assert!((p.d1 - j.d1).abs() <= 1e-8 * p.d1.abs().max(1.0));
            assert!((p.d2 - j.d2).abs() <= 1e-8 * p.d2.abs().max(1.0));
        }
    }
}
