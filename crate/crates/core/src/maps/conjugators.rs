//! Conjugating maps built by averaging lifts along a cyclic group.

use std::f64::consts::TAU;

use super::{CircleMap, Jet2, Lift};
use crate::error::{Error, Result};
use crate::geometry::Angle;

/// Grid size for the finite-order check.
const ORDER_CHECK_GRID: usize = 64;
const ORDER_CHECK_TOL: f64 = 1e-9;

/// Lifted value and derivatives accumulated along an orbit.
#[derive(Clone, Copy)]
struct LiftedJet {
    x: f64,
    d1: f64,
    d2: f64,
}

impl LiftedJet {
    fn start(x: f64) -> Self {
        LiftedJet { x, d1: 1.0, d2: 0.0 }
    }

    fn push(&self, x: f64, step: &Jet2) -> Self {
        LiftedJet {
            x,
            d1: step.d1 * self.d1,
            d2: step.d2 * self.d1 * self.d1 + step.d1 * self.d2,
        }
    }
}

fn forward<M: CircleMap + ?Sized>(lift: &Lift<'_, M>, cur: &LiftedJet) -> Result<LiftedJet> {
    let (x, j) = lift.jet(cur.x)?;
    Ok(cur.push(x, &j))
}

fn backward<M: CircleMap + ?Sized>(lift: &Lift<'_, M>, cur: &LiftedJet) -> Result<LiftedJet> {
    let x = lift.inverse(cur.x)?;
    let (_, j) = lift.jet(x)?;
    Ok(cur.push(x, &j.inverted(Angle::new(x))))
}

/// `φₙ` with lift `φ̃ₙ(x) = (2n+1)⁻¹ Σ_{|k|≤n} f̃ᵏ(x)`.
///
/// Powers use the iterates of the lift with `f̃(0) ∈ [0, 2π)`; jets are
/// averaged the same way.
pub struct AveragingConjugator<'a, M: CircleMap + ?Sized> {
    lift: Lift<'a, M>,
    radius: usize,
}

impl<'a, M: CircleMap + ?Sized> AveragingConjugator<'a, M> {
    pub fn new(f: &'a M, radius: usize) -> Result<Self> {
        if radius == 0 {
            return Err(Error::InvalidArgument("ball radius must be at least 1".into()));
        }
        Ok(AveragingConjugator {
            lift: Lift::new(f)?,
            radius,
        })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// `(φ̃ₙ(x), Dφₙ, D²φₙ)` for real `x`.
    pub fn lifted_jet(&self, x: f64) -> Result<(f64, f64, f64)> {
        let (mut v, mut d1, mut d2) = (x, 1.0, 0.0);
        let mut fwd = LiftedJet::start(x);
        let mut bwd = LiftedJet::start(x);
        for _ in 0..self.radius {
            fwd = forward(&self.lift, &fwd)?;
            bwd = backward(&self.lift, &bwd)?;
            v += fwd.x + bwd.x;
            d1 += fwd.d1 + bwd.d1;
            d2 += fwd.d2 + bwd.d2;
        }
        let w = (2 * self.radius + 1) as f64;
        Ok((v / w, d1 / w, d2 / w))
    }
}

impl<M: CircleMap + ?Sized> CircleMap for AveragingConjugator<'_, M> {
    fn jet(&self, theta: Angle) -> Result<Jet2> {
        let (v, d1, d2) = self.lifted_jet(theta.radians())?;
        Ok(Jet2::new(Angle::new(v), d1, d2))
    }
}

/// Conjugator to a rotation for a map of finite order `k`:
/// `φ̃(x) = (x + f̃(x) + … + f̃^{k−1}(x))/k − φ̃(0)`.
pub struct FiniteOrderConjugator<'a, M: CircleMap + ?Sized> {
    lift: Lift<'a, M>,
    order: usize,
    offset: f64,
    rotation: f64,
}

impl<'a, M: CircleMap + ?Sized> FiniteOrderConjugator<'a, M> {
    pub fn new(f: &'a M, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("order must be at least 1".into()));
        }
        let mut deviation: f64 = 0.0;
        for j in 0..ORDER_CHECK_GRID {
            let t = Angle::new(TAU * j as f64 / ORDER_CHECK_GRID as f64);
            let mut x = t;
            for _ in 0..order {
                x = f.eval(x)?;
            }
            deviation = deviation.max(x.distance(t));
        }
        if deviation > ORDER_CHECK_TOL {
            return Err(Error::NotFiniteOrder {
                order: order as i64,
                deviation,
            });
        }
        let lift = Lift::new(f)?;
        let mut x = 0.0;
        for _ in 0..order {
            x = lift.eval(x)?;
        }
        let turns = (x / TAU).round();
        let mut c = FiniteOrderConjugator {
            lift,
            order,
            offset: 0.0,
            rotation: Angle::new(TAU * turns / order as f64).radians(),
        };
        c.offset = c.raw(0.0)?.0;
        Ok(c)
    }

    /// Rotation number of `f`, in `[0, 2π)`.
    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    fn raw(&self, x: f64) -> Result<(f64, f64, f64)> {
        let mut cur = LiftedJet::start(x);
        let (mut v, mut d1, mut d2) = (x, 1.0, 0.0);
        for _ in 1..self.order {
            cur = forward(&self.lift, &cur)?;
            v += cur.x;
            d1 += cur.d1;
            d2 += cur.d2;
        }
        let k = self.order as f64;
        Ok((v / k, d1 / k, d2 / k))
    }

    pub fn lifted_jet(&self, x: f64) -> Result<(f64, f64, f64)> {
        let (v, d1, d2) = self.raw(x)?;
        Ok((v - self.offset, d1, d2))
    }
}

impl<M: CircleMap + ?Sized> CircleMap for FiniteOrderConjugator<'_, M> {
    fn jet(&self, theta: Angle) -> Result<Jet2> {
        let (v, d1, d2) = self.lifted_jet(theta.radians())?;
        Ok(Jet2::new(Angle::new(v), d1, d2))
    }
}
