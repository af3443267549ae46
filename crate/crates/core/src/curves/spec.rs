//! JSON description of a knot.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::construct::{finite_r_circle, infinite_r_circle, lift_closed};
use super::knot::LegendrianKnot;
use super::planar::PlanarCurve;
use crate::error::{Error, Result};
use crate::heisenberg::HPoint;

/// A knot specification, tagged by `"type"`. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    /// Lift of a Fourier curve; coefficients use the layout
    /// `[a0, a1, b1, ..., aN, bN]`.
    Fourier {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order: Option<usize>,
        x_coeffs: Vec<f64>,
        y_coeffs: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<f64>,
    },
    Gerono {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<f64>,
    },
    FiniteRCircle {
        p0: [f64; 3],
        direction: [f64; 2],
    },
    /// Window `[-scale, scale]` of an affine Legendrian line.
    InfiniteRCircle {
        p0: [f64; 3],
        direction: [f64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<f64>,
    },
    /// Order-`order` Fourier fit of a finite R-circle projection with every
    /// harmonic multiplied by `1 + amplitude U(-1, 1)`, projected back to zero
    /// area.
    PerturbedRCircle {
        p0: [f64; 3],
        direction: [f64; 2],
        order: usize,
        seed: u64,
        amplitude: f64,
    },
}

fn hpoint(p: [f64; 3]) -> Result<HPoint> {
    HPoint::try_new(p[0], p[1], p[2])
}

fn positive(scale: Option<f64>) -> Result<f64> {
    let s = scale.unwrap_or(1.0);
    if s > 0.0 && s.is_finite() {
        Ok(s)
    } else {
        Err(Error::InvalidArgument(format!("scale must be positive, got {s}")))
    }
}

/// Planar samples of a finite R-circle uniform in arc length.
fn r_circle_projection(p0: HPoint, direction: [f64; 2], n: usize) -> Result<Vec<num_complex::Complex64>> {
    let k = finite_r_circle(p0, direction[0], direction[1], n)?;
    Ok(k.samples().iter().map(|s| s.point.z()).collect())
}

impl CurveSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("curve spec: {e}")))
    }

    /// Planar Fourier curve underlying the spec, for the lifted families.
    pub fn planar(&self) -> Result<Option<PlanarCurve>> {
        match self {
            CurveSpec::Fourier { order, x_coeffs, y_coeffs, scale } => {
                let c = PlanarCurve::new(x_coeffs.clone(), y_coeffs.clone())?;
                if let Some(o) = order {
                    if *o != c.order() {
                        return Err(Error::InvalidArgument(format!(
                            "order {o} does not match {} coefficients",
                            x_coeffs.len()
                        )));
                    }
                }
                Ok(Some(c.scaled(positive(*scale)?)))
            }
            CurveSpec::Gerono { scale } => Ok(Some(PlanarCurve::gerono().scaled(positive(*scale)?))),
            CurveSpec::PerturbedRCircle { p0, direction, order, seed, amplitude } => {
                if *order < 1 || *order > 256 {
                    return Err(Error::InvalidArgument("order must lie in [1, 256]".into()));
                }
                if !(*amplitude >= 0.0 && *amplitude < 1.0) {
                    return Err(Error::InvalidArgument("amplitude must lie in [0, 1)".into()));
                }
                let base = PlanarCurve::fit(&r_circle_projection(hpoint(*p0)?, *direction, 2048)?, *order)?;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut v = base.to_vec();
                let half = v.len() / 2;
                for (i, c) in v.iter_mut().enumerate() {
                    if i % half != 0 {
                        *c *= 1.0 + amplitude * rng.random_range(-1.0..=1.0);
                    }
                }
                Ok(Some(PlanarCurve::from_vec(&v)?.project_zero_area()?))
            }
            _ => Ok(None),
        }
    }

    pub fn build(&self, n: usize) -> Result<LegendrianKnot> {
        match self {
            CurveSpec::FiniteRCircle { p0, direction } => finite_r_circle(hpoint(*p0)?, direction[0], direction[1], n),
            CurveSpec::InfiniteRCircle { p0, direction, scale } => {
                let w = positive(*scale)?;
                infinite_r_circle(hpoint(*p0)?, direction[0], direction[1], (-w, w), n)
            }
            _ => {
                let c = self.planar()?.expect("lifted family");
                let name = match self {
                    CurveSpec::Fourier { .. } => "Fourier curve lift",
                    CurveSpec::Gerono { .. } => "Gerono lemniscate lift",
                    _ => "perturbed R-circle lift",
                };
                Ok(lift_closed(&c, n)?.with_provenance(name))
            }
        }
    }
}
