use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid value for `{field}`: {reason}")]
    InvalidField { field: String, reason: String },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("phases overlap at node {index} (f = {f}, g = {g})")]
    PhaseOverlap { index: usize, f: f64, g: f64 },

    #[error("minimum separation {value} is not attained inside the window [-{window}, {window}]")]
    MinimumOutsideWindow { value: f64, window: f64 },

    #[error("insufficient resolution: need at least {needed} nodes, got {got}")]
    InsufficientResolution { needed: usize, got: usize },

    #[error("self-intersection detected (chord {chord:e} at parameter offset {beta})")]
    SelfIntersection { chord: f64, beta: f64 },

    #[error("degenerate parametrization at node {index}")]
    DegenerateParametrization { index: usize },

    #[error("singular kernel evaluation at alpha = {alpha}, beta = {beta}")]
    SingularEvaluation { alpha: f64, beta: f64 },

    #[error("non-finite integrand value at beta = {beta}")]
    NonFinite { beta: f64 },

    #[error("region split undefined for separation {0} (needs S < 1)")]
    SplitUndefined(f64),

    #[error("splash detected: {0}")]
    SplashDetected(String),

    #[error("step rejected: dt = {dt} exceeds the CFL limit {limit}")]
    StepRejected { dt: f64, limit: f64 },

    #[error("envelope undefined for initial separation {0} (needs 0 < S0 < 1)")]
    EnvelopeDomain(f64),

    #[error("malformed series: {0}")]
    MalformedSeries(String),

    #[error("chart extraction failed: {0}")]
    Chart(String),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Short machine-readable code, used in series trailers.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Config(_) => "config",
            Error::InvalidField { .. } => "invalid_field",
            Error::Parse { .. } => "parse",
            Error::UnknownScenario(_) => "unknown_scenario",
            Error::PhaseOverlap { .. } => "phase_overlap",
            Error::MinimumOutsideWindow { .. } => "minimum_outside_window",
            Error::InsufficientResolution { .. } => "insufficient_resolution",
            Error::SelfIntersection { .. } => "self_intersection",
            Error::DegenerateParametrization { .. } => "degenerate_parametrization",
            Error::SingularEvaluation { .. } => "singular_evaluation",
            Error::NonFinite { .. } => "non_finite",
            Error::SplitUndefined(_) => "split_undefined",
            Error::SplashDetected(_) => "splash",
            Error::StepRejected { .. } => "step_rejected",
            Error::EnvelopeDomain(_) => "envelope_domain",
            Error::MalformedSeries(_) => "malformed_series",
            Error::Chart(_) => "chart",
            Error::Io { .. } => "io",
        }
    }

    /// True for errors that mean two interface branches met at sample resolution.
    pub fn is_splash(&self) -> bool {
        matches!(
            self,
            Error::SplashDetected(_)
                | Error::PhaseOverlap { .. }
                | Error::SelfIntersection { .. }
                | Error::SingularEvaluation { .. }
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
