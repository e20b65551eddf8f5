//! Möbius automorphisms of the unit disk acting on the boundary circle.
//!
//! A [`MobiusMap`] is stored in the normal form
//! `z ↦ e^{iκ} (z − σ) / (1 − σ̄ z)` with `|σ| < 1`. Group operations go
//! through the `SU(1,1)` representation [`Su11Matrix`], whose entries also
//! give a well-conditioned handle on the hyperbolic size of a map.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::Jet2;

/// Largest admissible `|σ|` for user-constructed maps.
pub const SIGMA_LIMIT: f64 = 1.0 - 1e-12;

/// A point of the circle, in radians, canonicalized to `[0, 2π)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    pub fn new(radians: f64) -> Self {
        Angle(canonical(radians))
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }

    /// `self + delta` on the circle.
    pub fn shifted(self, delta: f64) -> Self {
        Angle::new(self.0 + delta)
    }

    /// Representative of `self − other` in `(−π, π]`.
    pub fn signed_difference(self, other: Angle) -> f64 {
        let d = canonical(self.0 - other.0);
        if d > PI {
            d - TAU
        } else {
            d
        }
    }

    /// Circular distance in `[0, π]`.
    pub fn distance(self, other: Angle) -> f64 {
        self.signed_difference(other).abs()
    }

    pub fn unit(self) -> Complex64 {
        Complex64::cis(self.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Reduces a real number to `[0, 2π)`.
pub fn canonical(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Circular distance between two real angles.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    Angle::new(a).distance(Angle::new(b))
}

/// Poincaré-disk distance from the origin to a point of modulus `r`,
/// `log((1 + r)/(1 − r))`.
pub fn distance_from_modulus(r: f64) -> f64 {
    2.0 * r.atanh()
}

/// Hyperbolic distance from the origin of the disk to `sigma`.
pub fn disk_distance_to_origin(sigma: Complex64) -> Result<f64> {
    if !sigma.re.is_finite() || !sigma.im.is_finite() {
        return Err(Error::NonFinite("sigma"));
    }
    let r = sigma.norm();
    if r >= 1.0 {
        return Err(Error::SigmaOutsideDisk {
            re: sigma.re,
            im: sigma.im,
            modulus: r,
        });
    }
    Ok(distance_from_modulus(r))
}

/// Orientation-preserving Möbius map of the disk in normal form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusMap {
    kappa: Angle,
    sigma: Complex64,
}

impl MobiusMap {
    pub const IDENTITY: MobiusMap = MobiusMap {
        kappa: Angle::ZERO,
        sigma: Complex64::new(0.0, 0.0),
    };

    /// Checked constructor; rejects `|σ| > 1 − 10⁻¹²` and non-finite input.
    pub fn new(kappa: f64, sigma: Complex64) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(Error::NonFinite("kappa"));
        }
        if !sigma.re.is_finite() || !sigma.im.is_finite() {
            return Err(Error::NonFinite("sigma"));
        }
        let modulus = sigma.norm();
        if modulus > SIGMA_LIMIT {
            return Err(Error::SigmaOutsideDisk {
                re: sigma.re,
                im: sigma.im,
                modulus,
            });
        }
        Ok(MobiusMap {
            kappa: Angle::new(kappa),
            sigma,
        })
    }

    /// Constructor for results of group operations, where `|σ| < 1` holds
    /// analytically. A modulus that rounded onto the circle is pulled back
    /// to the largest representable value below one.
    pub(crate) fn from_parts(kappa: f64, sigma: Complex64) -> Self {
        let modulus = sigma.norm();
        let sigma = if modulus >= 1.0 {
            sigma * ((1.0 - f64::EPSILON) / modulus)
        } else {
            sigma
        };
        MobiusMap {
            kappa: Angle::new(kappa),
            sigma,
        }
    }

    pub fn rotation(alpha: f64) -> Self {
        MobiusMap {
            kappa: Angle::new(alpha),
            sigma: Complex64::new(0.0, 0.0),
        }
    }

    #[inline]
    pub fn kappa(&self) -> Angle {
        self.kappa
    }

    #[inline]
    pub fn sigma(&self) -> Complex64 {
        self.sigma
    }

    /// `|σ|`.
    pub fn r(&self) -> f64 {
        self.sigma.norm()
    }

    /// Argument of `σ`, in `[0, 2π)` (zero when `σ = 0`).
    pub fn alpha(&self) -> Angle {
        Angle::new(self.sigma.arg())
    }

    pub fn is_rotation(&self) -> bool {
        self.sigma == Complex64::new(0.0, 0.0)
    }

    /// Hyperbolic distance of `σ` from the origin.
    pub fn distance_to_origin(&self) -> f64 {
        distance_from_modulus(self.r())
    }

    /// Action on the unit circle as a complex number.
    pub fn apply_complex(&self, z: Complex64) -> Complex64 {
        self.kappa.unit() * (z - self.sigma) / (1.0 - self.sigma.conj() * z)
    }

    pub fn apply(&self, theta: Angle) -> Angle {
        Angle::new(self.apply_complex(theta.unit()).arg())
    }

    /// Value, first and second derivative of the induced circle map.
    pub fn jet(&self, theta: Angle) -> Jet2 {
        let e = theta.unit();
        let denom = (1.0 - self.sigma.conj() * e).norm_sqr();
        let one_minus_r2 = 1.0 - self.sigma.norm_sqr();
        let d1 = one_minus_r2 / denom;
        let d2 = one_minus_r2 * 2.0 * (e.conj() * self.sigma).im / (denom * denom);
        Jet2::new(self.apply(theta), d1, d2)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        self.to_su11().compose(&other.to_su11()).to_mobius()
    }

    pub fn inverse(&self) -> MobiusMap {
        self.to_su11().inverse().to_mobius()
    }

    pub fn to_su11(&self) -> Su11Matrix {
        let half = Complex64::cis(self.kappa.radians() / 2.0);
        let scale = 1.0 / (1.0 - self.sigma.norm_sqr()).sqrt();
        Su11Matrix::canonical(half * scale, -half * self.sigma * scale)
    }

    /// Largest of the circular distance between the κ's and `|σ₁ − σ₂|`.
    pub fn parameter_distance(&self, other: &MobiusMap) -> f64 {
        self.kappa.distance(other.kappa).max((self.sigma - other.sigma).norm())
    }
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mobius:kappa={},sigma={}",
            self.kappa.radians(),
            format_complex(self.sigma)
        )
    }
}

/// Formats `re+imi`/`re-imi` in the map-spec syntax.
pub(crate) fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Matrix `[[a, b], [b̄, ā]]` acting by `z ↦ (a z + b)/(b̄ z + ā)`.
///
/// Kept in the projective class with `Re(a) ≥ 0` (ties: `Im(a) ≥ 0`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su11Matrix {
    a: Complex64,
    b: Complex64,
}

impl Su11Matrix {
    pub const IDENTITY: Su11Matrix = Su11Matrix {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
    };

    /// Rescales to unit determinant and fixes the sign of the class.
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let det = a.norm_sqr() - b.norm_sqr();
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::InvalidArgument(format!("|a|^2 - |b|^2 = {det} is not positive")));
        }
        let s = 1.0 / det.sqrt();
        Ok(Self::canonical(a * s, b * s))
    }

    fn canonical(a: Complex64, b: Complex64) -> Self {
        let flip = a.re < 0.0 || (a.re == 0.0 && a.im < 0.0);
        if flip {
            Su11Matrix { a: -a, b: -b }
        } else {
            Su11Matrix { a, b }
        }
    }

    #[inline]
    pub fn a(&self) -> Complex64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> Complex64 {
        self.b
    }

    /// `|a|² − |b|²`; one up to rounding.
    pub fn determinant(&self) -> f64 {
        self.a.norm_sqr() - self.b.norm_sqr()
    }

    /// `self · other`.
    ///
    /// Not renormalized: for large `|a|` the computed determinant cancels
    /// catastrophically, while the product entries stay accurate.
    pub fn compose(&self, other: &Su11Matrix) -> Su11Matrix {
        let a = self.a * other.a + self.b * other.b.conj();
        let b = self.a * other.b + self.b * other.a.conj();
        Self::canonical(a, b)
    }

    pub fn inverse(&self) -> Su11Matrix {
        Self::canonical(self.a.conj(), -self.b)
    }

    pub fn to_mobius(&self) -> MobiusMap {
        MobiusMap::from_parts(2.0 * self.a.arg(), -self.b / self.a)
    }

    /// `1 − |σ|²` of the represented map, computed as `1/|a|²`.
    pub fn one_minus_r_squared(&self) -> f64 {
        1.0 / self.a.norm_sqr()
    }

    /// Hyperbolic distance of `σ` from the origin, `2 asinh|b|`.
    pub fn distance_to_origin(&self) -> f64 {
        2.0 * self.b.norm().asinh()
    }
}
