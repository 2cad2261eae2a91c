use std::fmt;
use std::path::PathBuf;

/// One violated invariant, keyed by the dotted scenario path it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub key: String,
    pub message: String,
}

impl Violation {
    pub fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key, self.message)
    }
}

fn list(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("\n  - {v}"))
        .collect::<String>()
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{} invariant violation(s):{}", .0.len(), list(.0))]
    Invalid(Vec<Violation>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("grid window clips {fraction:.3e} of the pulse energy (limit {limit:.1e})")]
    EnergyClipped { fraction: f64, limit: f64 },

    #[error("index interface of width {width:e} m is underresolved by stencil step {step:e} m")]
    UnderresolvedInterface { width: f64, step: f64 },

    #[error("non-finite state at step {step}, cell ({i}, {j}, {k})")]
    NonFinite {
        step: usize,
        i: usize,
        j: usize,
        k: usize,
    },

    #[error("cells leaving the window carry speed {speed:e} m/s, above the wake-loss limit {limit:e} m/s")]
    WakeLoss { speed: f64, limit: f64 },

    #[error("atomic speed {speed:e} m/s breaks the nonrelativistic premise (|v|/c = {ratio:e})")]
    Relativistic { speed: f64, ratio: f64 },

    #[error("intensity {intensity:e} W/m^2 exceeds the breakdown threshold {threshold:e} W/m^2 by a factor {ratio:.3}")]
    AboveThreshold {
        intensity: f64,
        threshold: f64,
        ratio: f64,
    },

    #[error("absorption linearization invalid: alpha*L = {alpha_l:e} exceeds 0.1")]
    AbsorptionNotSmall { alpha_l: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line surface.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::Invalid(_)
            | Error::Precondition(_)
            | Error::EnergyClipped { .. }
            | Error::UnderresolvedInterface { .. }
            | Error::AboveThreshold { .. }
            | Error::AbsorptionNotSmall { .. } => 2,
            Error::NonFinite { .. } | Error::WakeLoss { .. } | Error::Relativistic { .. } => 3,
            Error::Io { .. } => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
