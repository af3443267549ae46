//! Group law, Koranyi gauge and elementary symmetries of the Heisenberg group
//! in exponential coordinates `(x, y, u)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite point `(x, y, u)` of the Heisenberg group.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
    pub u: f64,
}

impl HPoint {
    pub const ORIGIN: HPoint = HPoint { x: 0.0, y: 0.0, u: 0.0 };

    pub const fn new(x: f64, y: f64, u: f64) -> Self {
        HPoint { x, y, u }
    }

    /// Like [`HPoint::new`] but rejects non-finite coordinates.
    pub fn try_new(x: f64, y: f64, u: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && u.is_finite() {
            Ok(HPoint { x, y, u })
        } else {
            Err(Error::InvalidArgument(format!(
                "non-finite coordinates ({x}, {y}, {u})"
            )))
        }
    }

    pub fn from_z(z: Complex64, u: f64) -> Self {
        HPoint { x: z.re, y: z.im, u }
    }

    /// Planar projection `x + iy`.
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.u]
    }
}

/// A point of `H ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtendedPoint {
    Finite(HPoint),
    Infinity,
}

impl ExtendedPoint {
    pub fn finite(self) -> Result<HPoint> {
        match self {
            ExtendedPoint::Finite(p) => Ok(p),
            ExtendedPoint::Infinity => Err(Error::PointAtInfinity),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ExtendedPoint::Infinity)
    }
}

impl From<HPoint> for ExtendedPoint {
    fn from(p: HPoint) -> Self {
        ExtendedPoint::Finite(p)
    }
}

pub fn h_mul(p: HPoint, q: HPoint) -> HPoint {
    HPoint {
        x: p.x + q.x,
        y: p.y + q.y,
        u: p.u + q.u + 0.5 * (p.x * q.y - q.x * p.y),
    }
}

pub fn h_inv(p: HPoint) -> HPoint {
    HPoint { x: -p.x, y: -p.y, u: -p.u }
}

pub fn koranyi_norm(p: HPoint) -> f64 {
    let r2 = p.x * p.x + p.y * p.y;
    (r2 * r2 + 16.0 * p.u * p.u).sqrt().sqrt()
}

pub fn koranyi_dist(p: HPoint, q: HPoint) -> f64 {
    koranyi_norm(h_mul(h_inv(p), q))
}

pub fn dilate(lambda: f64, p: HPoint) -> Result<HPoint> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "dilation factor must be positive, got {lambda}"
        )));
    }
    Ok(HPoint { x: lambda * p.x, y: lambda * p.y, u: lambda * lambda * p.u })
}

pub fn rotate(theta: f64, p: HPoint) -> HPoint {
    let (s, c) = theta.sin_cos();
    HPoint { x: c * p.x - s * p.y, y: s * p.x + c * p.y, u: p.u }
}

/// Koranyi inversion; exchanges the origin and `∞`.
pub fn invert(p: ExtendedPoint) -> ExtendedPoint {
    match p {
        ExtendedPoint::Infinity => ExtendedPoint::Finite(HPoint::ORIGIN),
        ExtendedPoint::Finite(q) => {
            let a = a_value(q);
            let n = a.norm_sqr();
            if n == 0.0 {
                return ExtendedPoint::Infinity;
            }
            // z / conj(A) = z A / |A|^2
            let z = q.z() * a / n;
            ExtendedPoint::Finite(HPoint::from_z(z, -q.u / n))
        }
    }
}

/// `A(p) = |z|^2 - 4iu`.
pub fn a_value(p: HPoint) -> Complex64 {
    Complex64::new(p.x * p.x + p.y * p.y, -4.0 * p.u)
}

/// `A(p^{-1} q)` from the closed form `conj A(p) + A(q) - 2 z conj(z')`.
pub fn a_rel(p: HPoint, q: HPoint) -> Complex64 {
    a_value(p).conj() + a_value(q) - 2.0 * p.z() * q.z().conj()
}
