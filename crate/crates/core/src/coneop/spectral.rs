//! Eigenvalue tables per mode, from the Bessel oracle or from a discretization,
//! with a fitted counting function for tail control.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{ConeOperator, Discretization};
use crate::error::{Error, Result};
use crate::numeric::quad::{integrate_to_infinity, QuadOptions};
use crate::numeric::special::bessel_zeros;
use crate::numeric::special::bessel_zeros_below;

/// First `count` eigenvalues `j_{ν,k}²` of the frozen mode `x^{-2}(-(x∂_x)² + ν²)`
/// on `(0,1]` with Dirichlet condition at `x = 1`.
pub fn bessel_oracle(nu: f64, count: usize) -> Result<Vec<f64>> {
    if !(nu > 0.0) {
        return Err(Error::Config(format!("Bessel oracle needs nu > 0, got {nu}")));
    }
    Ok(bessel_zeros(nu, count)?.into_iter().map(|j| j * j).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Oracle,
    Discretization,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Oracle => "oracle",
            Provenance::Discretization => "discretization",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModeSpectrum {
    pub m: i32,
    pub nu: f64,
    /// `c_2`, so that oracle eigenvalues are `c_2 j_{ν,k}²`.
    pub scale: f64,
    pub eigenvalues: Vec<f64>,
}

/// Counting-function model `N(λ) ≈ c1 λ + c2 √λ + c0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylLaw {
    pub c1: f64,
    pub c2: f64,
    pub c0: f64,
}

impl WeylLaw {
    /// Least-squares fit of cumulative values `(λ_j, N_j)` with `λ_j ∈ [lo, hi]`.
    pub fn fit(points: &[(f64, f64)], lo: f64, hi: f64) -> Result<Self> {
        let sel: Vec<&(f64, f64)> = points.iter().filter(|p| p.0 >= lo && p.0 <= hi).collect();
        if sel.len() < 6 {
            return Err(Error::TooFewSamples { required: 6, got: sel.len() });
        }
        let a = DMatrix::from_fn(sel.len(), 3, |i, j| match j {
            0 => sel[i].0 / hi,
            1 => (sel[i].0 / hi).sqrt(),
            _ => 1.0,
        });
        let b = DVector::from_iterator(sel.len(), sel.iter().map(|p| p.1));
        let x = a
            .svd(true, true)
            .solve(&b, 1e-14)
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(WeylLaw {
            c1: x[0] / hi,
            c2: x[1] / hi.sqrt(),
            c0: x[2],
        })
    }

    pub fn density(&self, lambda: f64) -> f64 {
        self.c1 + 0.5 * self.c2 / lambda.sqrt()
    }

    /// `∫_Λ^∞ f(λ) dN(λ)` for the model counting function.
    pub fn tail_integral<F: FnMut(f64) -> Complex64>(&self, cutoff: f64, mut f: F) -> Result<Complex64> {
        let r = integrate_to_infinity(
            |v| f(cutoff * (1.0 + v)) * self.density(cutoff * (1.0 + v)) * cutoff,
            0.0,
            QuadOptions::with_tol(1e-300, 1e-10),
        )?;
        Ok(r.value)
    }
}

/// Tail estimate with an uncertainty from two fit windows.
#[derive(Debug, Clone, Copy)]
pub struct TailEstimate {
    pub value: Complex64,
    pub bound: f64,
}

/// Fits over `[Λ/4, Λ]` and `[Λ/2, Λ]`; the tail is the first fit. The bound
/// adds the fit discrepancy to `|f(Λ)|` times the largest counting-function
/// jump near the cutoff (the granularity a smooth density cannot resolve).
pub fn tail_with_bound<F: FnMut(f64) -> Complex64 + Clone>(
    points: &[(f64, f64)],
    cutoff: f64,
    mut f: F,
) -> Result<TailEstimate> {
    let wide = WeylLaw::fit(points, cutoff / 4.0, cutoff)?;
    let narrow = WeylLaw::fit(points, cutoff / 2.0, cutoff)?;
    let a = wide.tail_integral(cutoff, f.clone())?;
    let b = narrow.tail_integral(cutoff, f.clone())?;
    let jump = points
        .windows(2)
        .filter(|w| w[1].0 >= cutoff / 2.0)
        .map(|w| (w[1].1 - w[0].1).abs())
        .fold(0.0, f64::max);
    Ok(TailEstimate {
        value: a,
        bound: (a - b).norm() + jump * f(cutoff).norm(),
    })
}

#[derive(Debug, Clone)]
pub struct SpectralData {
    /// Modes in ascending `m`.
    pub modes: Vec<ModeSpectrum>,
    /// Every eigenvalue below `cutoff` is present.
    pub cutoff: f64,
    pub provenance: Provenance,
    /// Bound on the error of individual eigenvalues, when known.
    pub truncation_bound: Option<f64>,
}

impl SpectralData {
    /// Exact spectrum below `cutoff` of a frozen Laplace-type operator
    /// (`μ = 2`, `p_m(σ) = c_2 σ² + c_0(m)`), materializing every mode with
    /// an eigenvalue below the cutoff.
    pub fn from_bessel(op: &ConeOperator, cutoff: f64) -> Result<Self> {
        if op.mu != 2.0 || op.x_perturbation.is_some() {
            return Err(Error::Config("Bessel oracle needs frozen coefficients and mu = 2".into()));
        }
        let mut modes = Vec::new();
        let mut m: i32 = 0;
        loop {
            let mut any = false;
            let ms: Vec<i32> = if m == 0 { vec![0] } else { vec![-m, m] };
            for mm in ms {
                let (c2, c0) = op.symmetric_form(mm)?;
                let nu = (c0 / c2).sqrt();
                if !(nu > 0.0) {
                    return Err(Error::Config(format!("mode {mm}: indicial constant must be positive")));
                }
                if c2 * nu * nu >= cutoff {
                    continue;
                }
                let zeros = bessel_zeros_below(nu, (cutoff / c2).sqrt())?;
                let eigenvalues: Vec<f64> = zeros.iter().map(|j| c2 * j * j).filter(|&e| e < cutoff).collect();
                any |= !eigenvalues.is_empty();
                modes.push(ModeSpectrum { m: mm, nu, scale: c2, eigenvalues });
            }
            if !any && m > 0 {
                break;
            }
            m += 1;
            if m > 100_000 {
                return Err(Error::Config("mode range does not close below the cutoff".into()));
            }
        }
        modes.sort_by_key(|s| s.m);
        Ok(SpectralData {
            modes,
            cutoff,
            provenance: Provenance::Oracle,
            truncation_bound: Some(1e-13 * cutoff),
        })
    }

    /// Discrete eigenvalues below `cutoff` for the materialized modes.
    pub fn from_discretization(disc: &Discretization, cutoff: f64) -> Self {
        SpectralData {
            modes: disc
                .modes
                .iter()
                .map(|mm| ModeSpectrum {
                    m: mm.m,
                    nu: mm.nu,
                    scale: mm.scale,
                    eigenvalues: mm.eigenvalues_below(cutoff),
                })
                .collect(),
            cutoff,
            provenance: Provenance::Discretization,
            truncation_bound: None,
        }
    }

    pub fn count(&self) -> usize {
        self.modes.iter().map(|m| m.eigenvalues.len()).sum()
    }

    /// All eigenvalues, ascending.
    pub fn merged(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.modes.iter().flat_map(|m| m.eigenvalues.iter().copied()).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Cumulative counting points `(λ_j, j + 1/2)`.
    pub fn counting_points(&self) -> Vec<(f64, f64)> {
        self.merged()
            .into_iter()
            .enumerate()
            .map(|(j, l)| (l, j as f64 + 0.5))
            .collect()
    }

    pub fn is_positive(&self) -> bool {
        self.modes.iter().all(|m| m.eigenvalues.iter().all(|&e| e > 0.0))
    }

    /// `λ_k / k²` stays within a factor 10 over the upper half of each mode
    /// with at least 10 eigenvalues.
    pub fn weyl_growth_ok(&self) -> bool {
        self.modes.iter().filter(|m| m.eigenvalues.len() >= 10).all(|m| {
            let n = m.eigenvalues.len();
            let r: Vec<f64> = (n / 2..n)
                .map(|k| m.eigenvalues[k] / ((k + 1) as f64).powi(2))
                .collect();
            let lo = r.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = r.iter().copied().fold(0.0, f64::max);
            lo > 0.0 && hi / lo < 10.0
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("mode,k,eigenvalue,provenance\n");
        for m in &self.modes {
            for (k, e) in m.eigenvalues.iter().enumerate() {
                let _ = writeln!(s, "{},{},{:.17e},{}", m.m, k + 1, e, self.provenance.as_str());
            }
        }
        s
    }
}
