//! Weight operators `B = (1+m²)^{μ'/2} x^{-β} φ(x)` and the diagonal
//! matrix elements `⟨B u_j, u_j⟩` in an orthonormal eigenbasis.

use crate::coneop::{Discretization, Provenance, SpectralData};
use crate::error::{Error, Result};
use crate::numeric::quad::gauss_legendre;
use crate::numeric::smooth::{cutoff_one_near_zero, smooth_step};
use crate::numeric::special::bessel_j_and_derivative;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutoffProfile {
    /// `φ ≡ 1`.
    Identity,
    /// `φ = 1` on `[0, inner]`, `φ = 0` on `[outer, ∞)`.
    OneNearZero { inner: f64, outer: f64 },
    /// `φ = 0` on `[0, inner]`, `φ = 1` on `[outer, ∞)`.
    ZeroNearZero { inner: f64, outer: f64 },
}

impl CutoffProfile {
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            CutoffProfile::Identity => 1.0,
            CutoffProfile::OneNearZero { inner, outer } => cutoff_one_near_zero(x, inner, outer),
            CutoffProfile::ZeroNearZero { inner, outer } => smooth_step((x - inner) / (outer - inner)),
        }
    }

    /// Interval outside of which `φ` vanishes, intersected with `[0, 1]`.
    fn support(&self) -> (f64, f64) {
        match *self {
            CutoffProfile::Identity => (0.0, 1.0),
            CutoffProfile::OneNearZero { outer, .. } => (0.0, outer.min(1.0)),
            CutoffProfile::ZeroNearZero { inner, .. } => (inner.max(0.0), 1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightOperator {
    pub beta: f64,
    pub mu_prime: f64,
    pub profile: CutoffProfile,
}

impl WeightOperator {
    pub fn identity() -> Self {
        WeightOperator {
            beta: 0.0,
            mu_prime: 0.0,
            profile: CutoffProfile::Identity,
        }
    }

    /// `x^{-β} φ` with `φ = 1` on `[0, 0.2]` and `φ = 0` on `[0.4, 1]`, so the
    /// boundary at `x = 1` stays exponentially invisible at small `t`.
    pub fn singular_cutoff(beta: f64) -> Self {
        WeightOperator {
            beta,
            mu_prime: 0.0,
            profile: CutoffProfile::OneNearZero { inner: 0.2, outer: 0.4 },
        }
    }

    pub fn is_identity(&self) -> bool {
        self.beta == 0.0 && self.mu_prime == 0.0 && self.profile == CutoffProfile::Identity
    }

    pub fn mode_factor(&self, m: i32) -> f64 {
        (1.0 + (m as f64).powi(2)).powf(0.5 * self.mu_prime)
    }

    pub fn multiplier(&self, x: f64) -> f64 {
        x.powf(-self.beta) * self.profile.value(x)
    }
}

/// Eigenvalues with the matrix elements `⟨B u_j, u_j⟩`, ascending.
#[derive(Debug, Clone)]
pub struct WeightedSpectrum {
    pub eigenvalues: Vec<f64>,
    pub weights: Vec<f64>,
    pub cutoff: f64,
}

impl WeightedSpectrum {
    fn from_pairs(mut pairs: Vec<(f64, f64)>, cutoff: f64) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        WeightedSpectrum {
            eigenvalues: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
            cutoff,
        }
    }

    /// Unit weights (`B = 1`).
    pub fn unweighted(spec: &SpectralData) -> Self {
        let e = spec.merged();
        WeightedSpectrum {
            weights: vec![1.0; e.len()],
            eigenvalues: e,
            cutoff: spec.cutoff,
        }
    }

    /// Exact Bessel eigenfunctions `J_ν(jx) / (|J'_ν(j)|/√2)` in `L²(x dx)`.
    pub fn bessel(spec: &SpectralData, b: &WeightOperator) -> Result<Self> {
        if spec.provenance != Provenance::Oracle {
            return Err(Error::Config("Bessel weights need oracle spectral data".into()));
        }
        if b.is_identity() {
            return Ok(Self::unweighted(spec));
        }
        let (lo, hi) = b.profile.support();
        let (gx, gw) = gauss_legendre(16);
        let mut pairs = Vec::with_capacity(spec.count());
        for ms in &spec.modes {
            let mf = b.mode_factor(ms.m);
            for &e in &ms.eigenvalues {
                let j = (e / ms.scale).sqrt();
                let (_, dj) = bessel_j_and_derivative(ms.nu, j);
                let panels = ((hi - lo) * j / std::f64::consts::PI).ceil().max(1.0) as usize + 1;
                let width = (hi - lo) / panels as f64;
                let mut acc = 0.0;
                for p in 0..panels {
                    let a = lo + p as f64 * width;
                    for (x, w) in gx.iter().zip(&gw) {
                        let t = a + 0.5 * width * (x + 1.0);
                        let (jv, _) = bessel_j_and_derivative(ms.nu, j * t);
                        acc += w * 0.5 * width * b.multiplier(t) * jv * jv * t;
                    }
                }
                pairs.push((e, mf * acc / (0.5 * dj * dj)));
            }
        }
        Ok(Self::from_pairs(pairs, spec.cutoff))
    }

    /// Discrete eigenvectors, `W`-orthonormal, with `B` sampled at the nodes.
    pub fn discrete(disc: &Discretization, b: &WeightOperator, cutoff: f64) -> Self {
        let x = disc.x_grid();
        let mult: Vec<f64> = x.iter().map(|&t| b.multiplier(t)).collect();
        let mut pairs = Vec::new();
        for mm in &disc.modes {
            let mf = b.mode_factor(mm.m);
            for e in mm.eigenvalues_below(cutoff) {
                let w = if b.is_identity() {
                    1.0
                } else {
                    let v = mm.pencil.eigenvector(e);
                    mf * v
                        .iter()
                        .zip(&mm.pencil.weight)
                        .zip(&mult)
                        .map(|((a, wt), m)| a * a * wt * m)
                        .sum::<f64>()
                };
                pairs.push((e, w));
            }
        }
        Self::from_pairs(pairs, cutoff)
    }

    /// Cumulative weighted counting points `(λ_j, Σ_{k<j} e_k + e_j/2)`.
    pub fn counting_points(&self) -> Vec<(f64, f64)> {
        let mut acc = 0.0;
        self.eigenvalues
            .iter()
            .zip(&self.weights)
            .map(|(&l, &w)| {
                let p = (l, acc + 0.5 * w);
                acc += w;
                p
            })
            .collect()
    }
}
