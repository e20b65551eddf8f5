//! Projective and enlarged Möbius cocycles over circle diffeomorphisms.
//!
//! A circle map `f` is approximated at each point by the unique Möbius
//! transformation matching its 2-jet (the projective derivative), or by the
//! one interpolating it at three points (the enlarged cocycle). Iterating
//! either along orbits gives a cocycle in `PSU(1,1)` whose hyperbolic drift
//! measures how far `f` is from being conjugate to a rotation.

// `!(x > 0.0)` is used deliberately so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod enlarged;
pub mod error;
pub mod geometry;
pub mod jet;
pub mod maps;
mod newton;
pub mod projective;
pub mod sweep;

pub use error::{Error, Result};
pub use geometry::{Angle, MobiusMap, Su11Matrix};
pub use jet::Jet2;
pub use maps::parse::{parse_map_spec, ParseError};
pub use maps::{CircleMap, CircleMapExpr};
