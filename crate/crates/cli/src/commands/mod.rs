mod heat;
mod index;
mod resolvent;
mod spectrum;
mod verify;
mod zeta;

use std::fmt;

use cone_spectral::coneop::ConeOperator;
use cone_spectral::Error;

use crate::config::{Config, Tolerances};
use crate::output::{Artifacts, Check};

pub use heat::heat;
pub use index::index;
pub use resolvent::resolvent;
pub use spectrum::spectrum;
pub use verify::verify;
pub use zeta::zeta;

#[derive(Debug)]
pub enum RunError {
    Module(Error),
    Io(std::io::Error),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Module(e) => write!(f, "{e} [{e:?}]"),
            RunError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Module(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

pub type Run = Result<Vec<Check>, RunError>;

pub struct Context<'a> {
    pub cfg: &'a Config,
    pub tol: Tolerances,
    pub seed: u64,
    pub out: &'a mut Artifacts,
}

impl Context<'_> {
    pub fn operator(&self) -> ConeOperator {
        ConeOperator::laplace_type(self.cfg.dimension, self.cfg.a, self.cfg.mode_max)
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let l: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = l.len() as f64;
    let mx = l.iter().map(|p| p.0).sum::<f64>() / n;
    let my = l.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = l.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = l.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
