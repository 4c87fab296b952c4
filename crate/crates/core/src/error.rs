use thiserror::Error;

/// Errors raised by the geometric and numerical layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector is null (|g(x,x)| = {norm_sq:e})")]
    NullVector { norm_sq: f64 },
    #[error("value {value} outside the range of the {law} angle law")]
    OutOfRange { law: &'static str, value: f64 },
    #[error("degenerate metric at ({u}, {v}): det = {det:e}")]
    DegenerateMetric { u: f64, v: f64, det: f64 },
    #[error("point ({u}, {v}) is outside the chart domain (with stencil margin)")]
    OutOfDomain { u: f64, v: f64 },
    #[error("curve speed falls below tolerance near t = {t}")]
    NullSegment { t: f64 },
    #[error("normal direction is null at t = {t}")]
    NullNormal { t: f64 },
    #[error("lifted curve is geodesic at t = {t} (curvature {kappa:e}); its normal is undefined")]
    GeodesicLift { t: f64, kappa: f64 },
    #[error("Frenet frame vector is null at t = {t}")]
    NullFrameVector { t: f64 },
    #[error("fiber field is not unit at t = {t}: g(X,X) = {norm_sq}")]
    FiberNotUnit { t: f64, norm_sq: f64 },
    #[error("lifted curve is null or changes causal character near t = {t}")]
    NullLift { t: f64 },
    #[error("g1(T,xi) = {value} is outside the range of the selected {law} law")]
    LawMismatch { law: &'static str, value: f64 },
    #[error("fiber decomposition has no real beta (radicand {radicand:e})")]
    ImaginaryBeta { radicand: f64 },
    #[error("covariant derivative of the fiber is null at t = {t}")]
    NullDerivative { t: f64 },
    #[error("sigma = {sigma} makes 15 - 16 sigma vanish")]
    SingularSigma { sigma: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

impl GeomError {
    /// Stable machine-readable name used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            GeomError::DimensionMismatch { .. } => "DimensionMismatch",
            GeomError::NullVector { .. } => "NullVector",
            GeomError::OutOfRange { .. } => "OutOfRange",
            GeomError::DegenerateMetric { .. } => "DegenerateMetric",
            GeomError::OutOfDomain { .. } => "OutOfDomain",
            GeomError::NullSegment { .. } => "NullSegment",
            GeomError::NullNormal { .. } => "NullNormal",
            GeomError::GeodesicLift { .. } => "GeodesicLift",
            GeomError::NullFrameVector { .. } => "NullFrameVector",
            GeomError::FiberNotUnit { .. } => "FiberNotUnit",
            GeomError::NullLift { .. } => "NullLift",
            GeomError::LawMismatch { .. } => "LawMismatch",
            GeomError::ImaginaryBeta { .. } => "ImaginaryBeta",
            GeomError::NullDerivative { .. } => "NullDerivative",
            GeomError::SingularSigma { .. } => "SingularSigma",
            GeomError::InvalidParams(_) => "InvalidParams",
        }
    }
}

pub type Result<T, E = GeomError> = std::result::Result<T, E>;
