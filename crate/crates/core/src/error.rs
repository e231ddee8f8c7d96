//! Error type shared by every module.

use thiserror::Error;

/// Every failure the library can report.
///
/// Variants map one-to-one onto the failure modes of the individual
/// operations; `is_undefined` separates the mathematically undefined
/// outcomes from ordinary input errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinkError {
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("pole too close to the curve (distance {distance:.3e} < {min:.3e})")]
    PoleTooClose { distance: f64, min: f64 },
    #[error("deformed curve self-intersects at sample resolution: {0}")]
    SelfIntersection(String),
    #[error("curve is not a planar circle: {0}")]
    NotPlanar(String),
    #[error("curves too close: distance {distance:.3e}")]
    CurvesTooClose { distance: f64 },
    #[error("linking integral {raw} is not close to an integer (residual {residual:.3e})")]
    NonIntegerResult { raw: f64, residual: f64 },
    #[error("framing not orthogonal to the tangent: max |<n,t>| = {0:.3e}")]
    FrameNotOrthogonal(f64),
    #[error(
        "finite-difference and monodromy eigenvalues disagree by {gap:.3e} (limit {limit:.3e})"
    )]
    DiscretizationTooCoarse { gap: f64, limit: f64 },
    #[error("adaptive quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("loop meets the critical set (distance {distance:.3e} <= {tol:.3e})")]
    LoopHitsCriticalSet { distance: f64, tol: f64 },
    #[error("spectral flow undefined: {0}")]
    UndefinedSpectralFlow(String),
    #[error("component {0} is not flagged as an unknot")]
    UnknotFlagMissing(usize),
    #[error("point is not critical for component {component}: {reason}")]
    NotCritical { component: usize, reason: String },
    #[error("radius {r} too large (must stay below {limit})")]
    RadiusTooLarge { r: f64, limit: f64 },
    #[error("unsupported knot class: {0}")]
    UnsupportedKnotClass(String),
    #[error("a tracked branch moved {moved:.3e} in one step (half spacing {half_spacing:.3e})")]
    StepTooCoarse { moved: f64, half_spacing: f64 },
    #[error("parameter search failed: {0}")]
    SearchFailed(String),
    #[error("flux {0} outside the open interval (0,1)")]
    FluxOutOfRange(f64),
    #[error("flux path hits the kernel surface at step {0}")]
    PathHitsKernel(usize),
}

impl LinkError {
    /// True for outcomes that are undefined rather than erroneous.
    pub fn is_undefined(&self) -> bool {
        matches!(
            self,
            LinkError::UndefinedSpectralFlow(_)
                | LinkError::UnsupportedKnotClass(_)
                | LinkError::LoopHitsCriticalSet { .. }
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LinkError::DegenerateCurve(_) => "DegenerateCurve",
            LinkError::InvalidParams(_) => "InvalidParams",
            LinkError::PoleTooClose { .. } => "PoleTooClose",
            LinkError::SelfIntersection(_) => "SelfIntersection",
            LinkError::NotPlanar(_) => "NotPlanar",
            LinkError::CurvesTooClose { .. } => "CurvesTooClose",
            LinkError::NonIntegerResult { .. } => "NonIntegerResult",
            LinkError::FrameNotOrthogonal(_) => "FrameNotOrthogonal",
            LinkError::DiscretizationTooCoarse { .. } => "DiscretizationTooCoarse",
            LinkError::QuadratureFailure(_) => "QuadratureFailure",
            LinkError::LoopHitsCriticalSet { .. } => "LoopHitsCriticalSet",
            LinkError::UndefinedSpectralFlow(_) => "UndefinedSpectralFlow",
            LinkError::UnknotFlagMissing(_) => "UnknotFlagMissing",
            LinkError::NotCritical { .. } => "NotCritical",
            LinkError::RadiusTooLarge { .. } => "RadiusTooLarge",
            LinkError::UnsupportedKnotClass(_) => "UnsupportedKnotClass",
            LinkError::StepTooCoarse { .. } => "StepTooCoarse",
            LinkError::SearchFailed(_) => "SearchFailed",
            LinkError::FluxOutOfRange(_) => "FluxOutOfRange",
            LinkError::PathHitsKernel(_) => "PathHitsKernel",
        }
    }
}

pub type Result<T> = std::result::Result<T, LinkError>;
