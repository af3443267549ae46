//! Legendrian knots in the first Heisenberg group and their Moebius-invariant
//! energy.
//!
//! The crate is organised bottom-up: [`heisenberg`] holds the group law and the
//! Koranyi gauge, [`mobius`] the projective action of `SU(2,1)`, [`curves`]
//! arc-length parametrised Legendrian knots, [`distribution`] the chord and
//! distance-distribution functions, [`energy`] the regularisations of the
//! energy and [`minimize`] a small constrained gradient flow.

pub mod curves;
pub mod distribution;
pub mod energy;
pub mod error;
pub mod heisenberg;
pub mod minimize;
pub mod mobius;
pub mod quadrature;

pub use curves::{KnotSample, LegendrianKnot, PlanarCurve};
pub use error::{Error, Result};
pub use heisenberg::{ExtendedPoint, HPoint};
pub use mobius::{Generator, MobiusMatrix};
pub use num_complex::Complex64;
