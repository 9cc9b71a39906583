//! Model cone operators `A = x^{-μ} P(xD_x, m; x)` on `(0,1] × S¹`,
//! specified per Fourier mode `m` of the cross-section.
//!
//! Convention: trial functions `x^{iσ}`, so `xD_x ↦ σ` and the indicial
//! polynomial of mode `m` is `p_m(σ) = Σ_j c_j(m) σ^j`.

mod discretize;
mod spectral;

pub use discretize::{
    discretize, discretize_model, kappa_homogeneity, kappa_scale, Discretization, KappaCheck, KappaScaled, ModeMatrix,
    NormEstimate,
};
pub use spectral::{bessel_oracle, tail_with_bound, ModeSpectrum, Provenance, SpectralData, TailEstimate, WeylLaw};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::poly::Poly;
use crate::sector::Sector;

/// Additive `x`-dependent change of the coefficients:
/// `c_j(m, x) = c_j(m) + Σ_i coeffs[j][i] x^{i+1}` (vanishes at `x = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct XPerturbation {
    pub coeffs: Vec<Vec<f64>>,
}

impl XPerturbation {
    pub fn value(&self, j: usize, x: f64) -> f64 {
        self.coeffs
            .get(j)
            .map(|c| c.iter().rev().fold(0.0, |acc, &a| acc * x + a) * x)
            .unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeOperator {
    pub mu: f64,
    pub alpha: f64,
    /// Materialized modes are `-mode_max..=mode_max`.
    pub mode_max: i32,
    /// `coeffs[j]` is `c_j(m)` as a polynomial in `m` (ascending).
    pub coeffs: Vec<Vec<Complex64>>,
    pub x_perturbation: Option<XPerturbation>,
}

impl ConeOperator {
    /// `x^{-2}((xD_x)² - Δ_Y + (n-2)²/4 + a²)` with `Y = S¹`, weight line `α = 1`.
    pub fn laplace_type(n: u32, a: f64, mode_max: i32) -> Self {
        let shift = (n as f64 - 2.0).powi(2) / 4.0 + a * a;
        let c = |v: f64| Complex64::new(v, 0.0);
        ConeOperator {
            mu: 2.0,
            alpha: 1.0,
            mode_max,
            coeffs: vec![vec![c(shift), c(0.0), c(1.0)], vec![c(0.0)], vec![c(1.0)]],
            x_perturbation: None,
        }
    }

    pub fn modes(&self) -> impl Iterator<Item = i32> {
        -self.mode_max..=self.mode_max
    }

    /// `c_j(m)`.
    pub fn coefficient(&self, j: usize, m: i32) -> Complex64 {
        self.coeffs
            .get(j)
            .map(|p| {
                p.iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * m as f64 + c)
            })
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// `p_m(σ)` from the `x = 0` coefficients.
    pub fn indicial(&self, m: i32) -> Poly {
        Poly::new((0..self.coeffs.len()).map(|j| self.coefficient(j, m)).collect())
    }

    /// Real potential `q_m(x) = c_0(m, x)` of the second-order symmetric form
    /// `c_2 σ² + c_0`, or a configuration error for other shapes.
    pub(crate) fn symmetric_form(&self, m: i32) -> Result<(f64, f64)> {
        let p = self.indicial(m);
        let c = &p.coeffs;
        let ok = c.len() == 3
            && c[1].norm() == 0.0
            && c[0].im == 0.0
            && c[2].im == 0.0
            && c[2].re > 0.0;
        if !ok {
            return Err(Error::Config(format!(
                "mode {m}: discretization supports p_m(σ) = c2 σ² + c0 with real c0 and c2 > 0"
            )));
        }
        Ok((c[2].re, c[0].re))
    }

    pub fn without_perturbation(&self) -> Self {
        ConeOperator {
            x_perturbation: None,
            ..self.clone()
        }
    }
}

/// `p_m(σ)` for every materialized mode.
pub fn conormal_symbol(op: &ConeOperator) -> Vec<(i32, Poly)> {
    op.modes().map(|m| (m, op.indicial(m))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub sigma: Complex64,
    pub ord: u32,
    pub mode: i32,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundarySpectrum {
    pub poles: Vec<Pole>,
}

impl BoundarySpectrum {
    /// Distinct locations with the largest order found across modes.
    pub fn distinct_poles(&self) -> Vec<(Complex64, u32)> {
        let mut out: Vec<(Complex64, u32)> = Vec::new();
        for p in &self.poles {
            if let Some(e) = out
                .iter_mut()
                .find(|e| crate::indexsets::same_exponent(e.0, p.sigma))
            {
                e.1 = e.1.max(p.ord);
            } else {
                out.push((p.sigma, p.ord));
            }
        }
        out
    }

    /// `ord(σ)`, zero when `σ` is not a pole.
    pub fn order_at(&self, sigma: Complex64) -> u32 {
        self.poles
            .iter()
            .filter(|p| crate::indexsets::same_exponent(p.sigma, sigma))
            .map(|p| p.ord)
            .max()
            .unwrap_or(0)
    }

    /// Smallest `|Im σ|` among the poles.
    pub fn min_abs_im(&self) -> Option<f64> {
        self.poles.iter().map(|p| p.sigma.im.abs()).reduce(f64::min)
    }

    /// Distance from the line `Im σ = level` to the nearest pole.
    pub fn distance_to_line(&self, level: f64) -> f64 {
        self.poles
            .iter()
            .map(|p| (p.sigma.im - level).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Roots of `p_m` with `|Im σ| <= strip` for `|m| <= mode_cap`, ordered by
/// mode, then `(Im σ, Re σ)`.
pub fn boundary_spectrum(op: &ConeOperator, strip: f64, mode_cap: i32) -> Result<BoundarySpectrum> {
    let mut poles = Vec::new();
    for m in -mode_cap..=mode_cap {
        let p = op.indicial(m);
        if p.degree() == 0 {
            if p.coeffs[0].norm() == 0.0 {
                return Err(Error::Config(format!("indicial polynomial of mode {m} vanishes identically")));
            }
            continue;
        }
        let roots = p.roots().map_err(|residual| Error::RootFinder { mode: m, residual })?;
        let mut local: Vec<Pole> = roots
            .into_iter()
            .filter(|r| r.value.im.abs() <= strip + 1e-12)
            .map(|r| Pole {
                sigma: clean(r.value),
                ord: r.multiplicity as u32,
                mode: m,
            })
            .collect();
        local.sort_by(|a, b| {
            a.sigma
                .im
                .total_cmp(&b.sigma.im)
                .then(a.sigma.re.total_cmp(&b.sigma.re))
        });
        poles.extend(local);
    }
    Ok(BoundarySpectrum { poles })
}

fn clean(z: Complex64) -> Complex64 {
    let scale = 1e-14 * (1.0 + z.norm());
    Complex64::new(
        if z.re.abs() < scale { 0.0 } else { z.re },
        if z.im.abs() < scale { 0.0 } else { z.im },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Undecided,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

#[derive(Debug, Clone)]
pub struct EllipticityReport {
    pub symbol_ok: bool,
    pub model_ok: Verdict,
    pub clean_weight_line: bool,
    /// Relative change of the model solution under grid refinement, per sampled `λ`.
    pub refinement_changes: Vec<(Complex64, f64)>,
}

/// Parameter-ellipticity of `A - λ` on `Λ` with respect to `op.alpha`.
///
/// * `symbol_ok`: `p_m(ξ)` for real `ξ` avoids `Λ` on the sampled slice.
/// * `clean_weight_line`: no indicial root on `Im σ = -α`.
/// * `model_ok`: clean weight line, `Λ ∩ [0,∞) = ∅` (the frozen model is
///   positive self-adjoint), and truncated model solves for large `λ ∈ Λ`
///   converge under grid refinement; `Undecided` if the solves do not settle.
pub fn check_parameter_ellipticity(op: &ConeOperator, sector: &Sector) -> Result<EllipticityReport> {
    let model = op.without_perturbation();
    let mut symbol_ok = true;
    'modes: for m in model.modes() {
        let p = model.indicial(m);
        for k in 0..=200 {
            let r = if k == 0 { 0.0 } else { 1e-3 * 10f64.powf(k as f64 / 25.0) };
            for xi in [r, -r] {
                let v = p.eval(Complex64::new(xi, 0.0));
                if v.norm() == 0.0 || sector.contains(v) {
                    symbol_ok = false;
                    break 'modes;
                }
            }
        }
        // leading part on |ξ| = 1
        let lead = p.leading();
        for s in [1.0f64, -1.0] {
            let v = lead * s.powi(p.degree() as i32);
            if sector.contains(v) {
                symbol_ok = false;
                break 'modes;
            }
        }
    }
    let strip = op.alpha.abs() + 1.0;
    let spec = boundary_spectrum(&model, strip, model.mode_max)?;
    let clean_weight_line = spec.distance_to_line(-op.alpha) > 1e-10;

    let mut changes = Vec::new();
    let model_ok = if !clean_weight_line || sector.meets_positive_axis() {
        Verdict::False
    } else {
        let mut settled = true;
        for &th in &sector.rays(3) {
            for &r in &[1e2, 1e3] {
                let lambda = Complex64::from_polar(r, th);
                let change = model_refinement_change(&model, lambda)?;
                if !(change < 1e-2) {
                    settled = false;
                }
                changes.push((lambda, change));
            }
        }
        if settled {
            Verdict::True
        } else {
            Verdict::Undecided
        }
    };
    Ok(EllipticityReport {
        symbol_ok,
        model_ok,
        clean_weight_line,
        refinement_changes: changes,
    })
}

/// Relative change of the truncated model solution of `(A_∧ - λ)u = f`
/// between `n` and `2n+1` interior points (shared nodes compared).
fn model_refinement_change(op: &ConeOperator, lambda: Complex64) -> Result<f64> {
    let (s_min, s_max) = (-10.0, 4.0);
    let n = 400;
    let coarse = discretize_model(op, s_min, s_max, n)?;
    let fine = discretize_model(op, s_min, s_max, 2 * n + 1)?;
    let rhs = |s: f64| Complex64::new((-(s + 1.0).powi(2)).exp(), 0.0);
    let mut worst: f64 = 0.0;
    for (mc, mf) in coarse.modes.iter().zip(&fine.modes) {
        let fc: Vec<Complex64> = coarse.s_grid.iter().map(|&s| rhs(s)).collect();
        let ff: Vec<Complex64> = fine.s_grid.iter().map(|&s| rhs(s)).collect();
        let uc = coarse.resolvent_solve(mc, lambda, &fc)?;
        let uf = fine.resolvent_solve(mf, lambda, &ff)?;
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, u) in uc.iter().enumerate() {
            let v = uf[2 * i + 1];
            num += (u - v).norm_sqr();
            den += v.norm_sqr();
        }
        if den > 0.0 {
            worst = worst.max((num / den).sqrt());
        }
    }
    Ok(worst)
}
