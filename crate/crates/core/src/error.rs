use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("point at infinity has no finite coordinates")]
    PointAtInfinity,
    #[error("coincident points")]
    CoincidentPoints,
    #[error("zero direction vector")]
    ZeroDirection,
    #[error("R-circle line passes through the origin")]
    LineThroughOrigin,
    #[error("matrix does not preserve the boundary form (residual {residual:e})")]
    FormViolation { residual: f64 },
    #[error("image of a boundary point left the boundary (residual {residual:e})")]
    BoundaryViolation { residual: f64 },
    #[error("planar curve is not immersed near t = {t}")]
    NotImmersed { t: f64 },
    #[error("lift does not close: signed area {area:e}")]
    ClosureFailed { area: f64 },
    #[error("knot is not embedded (margin {margin:e})")]
    NotEmbedded { margin: f64 },
    #[error("radius {radius:e} exceeds the safe chord window (t_max {t_max:e})")]
    OutsideSafeWindow { radius: f64, t_max: f64 },
    #[error("extrapolation unstable: relative slope spread {spread:e}")]
    UnstableExtrapolation { spread: f64 },
    #[error("least-squares fit is ill-conditioned (condition {condition:e})")]
    IllConditioned { condition: f64 },
    #[error("zeta = {re}{im:+}i is outside the supported domain")]
    ZetaOutOfDomain { re: f64, im: f64 },
    #[error("zeta is within {distance:e} of the pole at {pole}")]
    NearPole { pole: f64, distance: f64 },
    #[error("area gradient vanishes; cannot project onto the zero-area constraint")]
    DegenerateAreaGradient,
    #[error("zero-area projection did not converge (area {area:e})")]
    ProjectionFailed { area: f64 },
    #[error("moebius image of the knot is unbounded")]
    ImageUnbounded,
    #[error("tangent of the normalised image is degenerate")]
    DegenerateNeighbourhood,
    #[error("operation not supported: {0}")]
    Unsupported(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures of a numerical procedure on otherwise valid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::FormViolation { .. }
                | Error::BoundaryViolation { .. }
                | Error::ClosureFailed { .. }
                | Error::NotEmbedded { .. }
                | Error::UnstableExtrapolation { .. }
                | Error::IllConditioned { .. }
                | Error::DegenerateAreaGradient
                | Error::ProjectionFailed { .. }
                | Error::ImageUnbounded
                | Error::DegenerateNeighbourhood
                | Error::Numerical(_)
        )
    }
}
