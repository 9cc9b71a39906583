use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical pipelines.
///
/// Variants carry the structured payload the caller needs to act on the
/// failure (the offending parameter, a witness point, a residual).
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("index set cutoffs differ ({left} vs {right})")]
    CutoffMismatch { left: f64, right: f64 },

    #[error("symbol evaluator returned a non-finite value at xi={xi:?}, lambda={lambda}")]
    NonFiniteSymbol { xi: Vec<f64>, lambda: Complex64 },

    #[error("symbol is not classical: {0}")]
    NonClassical(String),

    #[error("ellipticity violated: symbol value {value} lies in the sector at xi={xi:?}")]
    SectorViolation { xi: Vec<f64>, value: Complex64 },

    #[error("not invertible at xi={xi:?}, lambda={lambda}")]
    NotInvertible { xi: Vec<f64>, lambda: Complex64 },

    #[error("root finder did not converge for mode {mode} (residual {residual:e})")]
    RootFinder { mode: i32, residual: f64 },

    #[error("bracketing failed on [{lo}, {hi}]: {detail}")]
    Bracketing { lo: f64, hi: f64, detail: String },

    #[error("singular system at lambda={lambda}")]
    Singular { lambda: Complex64 },

    #[error("resolvent parameter {lambda} is too close to the spectrum (distance {distance:e})")]
    Conditioning { lambda: Complex64, distance: f64 },

    #[error("insufficient spectrum: tail bound {tail:e} exceeds tolerance at parameter {param}; need eigenvalues up to about {required_cutoff:.3e}")]
    InsufficientSpectrum {
        param: f64,
        tail: f64,
        required_cutoff: f64,
    },

    #[error("trace-class condition violated: N*mu - mu' = {margin} must exceed n = {n}")]
    NotTraceClass { margin: f64, n: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error {error:e}")]
    Quadrature { estimate: Complex64, error: f64 },

    #[error("ill-conditioned fit (condition {condition:e}); shrink the term list or the window")]
    IllConditioned { condition: f64 },

    #[error("fit needs at least {required} samples, got {got}")]
    TooFewSamples { required: usize, got: usize },

    #[error("evaluation at a pole z={z}")]
    Pole { z: Complex64 },

    #[error("line invertibility violated at sigma={sigma} (|det|={det_abs:e})")]
    LineNotInvertible { sigma: Complex64, det_abs: f64 },

    #[error("integrability violated: {0}")]
    NotIntegrable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
