//! Planar Fourier curves, their Legendrian lifts, R-circles and Moebius images
//! of knots.

mod construct;
mod knot;
mod planar;
mod series;
mod spec;

pub use construct::{
    finite_r_circle, gerono_knot, infinite_r_circle, lift, lift_closed, mobius_image, pinch_gap, pinch_knot,
    pinch_parameter, LiftHeight, MobiusImage, LENGTH_TABLE,
};
pub use knot::{arc_distance, ChordWindow, KnotSample, LegendrianKnot};
pub use planar::{curvature_jet, CurvatureJet, PlanarCurve};
pub use series::{ArcLengthMap, PeriodicSeries};
pub use spec::CurveSpec;

pub fn signed_area(c: &PlanarCurve) -> f64 {
    c.signed_area()
}

pub fn curvature(c: &PlanarCurve, t: f64) -> crate::Result<(f64, f64, f64)> {
    c.curvature(t)
}

pub fn chord(k: &LegendrianKnot, s0: f64, s: f64) -> f64 {
    k.chord(s0, s)
}

pub fn arc_dist(k: &LegendrianKnot, s: f64, s2: f64) -> f64 {
    k.arc_dist(s, s2)
}

pub fn embeddedness_margin(k: &LegendrianKnot) -> f64 {
    k.embeddedness_margin()
}
