use std::path::PathBuf;

use num_complex::Complex64;
use thiserror::Error;

/// Failures reported by the numerical routines and the image/config I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{solver}: no convergence after {steps} steps (last residual {residual:e})")]
    NoConvergence {
        solver: &'static str,
        steps: usize,
        residual: f64,
    },

    #[error("{solver}: iterate left the guard region at step {step}")]
    Diverged { solver: &'static str, step: usize },

    #[error("converged to a point of minimal period {minimal}, requested period {requested}")]
    LowerPeriod { requested: usize, minimal: usize },

    #[error("parameter {c} lies in the Mandelbrot set (no escape within {max_iter} iterations)")]
    InsideSet { c: Complex64, max_iter: usize },

    #[error("potential {potential:e} at {c} is below the floor {floor:e}")]
    PotentialTooSmall {
        c: Complex64,
        potential: f64,
        floor: f64,
    },

    #[error("inverse Boettcher map failed for w = {w}; tried {seeds_tried} seeds")]
    InverseFailed { w: Complex64, seeds_tried: usize },

    #[error("multiplier {multiplier} is not within {tol:e} of a root of unity of order <= {max_order}")]
    NotRootOfUnity {
        multiplier: Complex64,
        tol: f64,
        max_order: usize,
    },

    #[error("fixed-point continuation lost its branch at step {step}")]
    BranchLost { step: usize },

    #[error("orbit trapped: {0}")]
    Trapped(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("pixel size {pixel:e} is below the double-precision cap {cap:e}")]
    PrecisionCap { pixel: f64, cap: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
