use crate::geometry::Angle;

/// 2-jet `(f(θ), Df(θ), D²f(θ))` of a circle map at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    pub value: Angle,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub fn new(value: Angle, d1: f64, d2: f64) -> Self {
        Jet2 { value, d1, d2 }
    }

    /// Jet of the identity at `theta`.
    pub fn identity(theta: Angle) -> Self {
        Jet2::new(theta, 1.0, 0.0)
    }

    /// Chain rule: `self` is the jet of `f` at `g(θ)`, `inner` the jet of `g` at `θ`.
    pub fn after(&self, inner: &Jet2) -> Jet2 {
        Jet2::new(
            self.value,
            self.d1 * inner.d1,
            self.d2 * inner.d1 * inner.d1 + self.d1 * inner.d2,
        )
    }

    /// Given the jet of `f` at `x`, the jet of `f⁻¹` at `f(x)`.
    pub fn inverted(&self, x: Angle) -> Jet2 {
        Jet2::new(x, 1.0 / self.d1, -self.d2 / self.d1.powi(3))
    }

    /// Affine derivative `D²f / Df`.
    pub fn affine(&self) -> f64 {
        self.d2 / self.d1
    }
}
