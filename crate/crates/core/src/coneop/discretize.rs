//! Log-grid discretization `s = log x` of the per-mode problems
//! `c_2(-∂_s²) u + q_m(e^s) u = λ e^{μs} u` with Dirichlet ends.

use num_complex::Complex64;

use super::ConeOperator;
use crate::error::{Error, Result};
use crate::numeric::tridiag::TridiagPencil;

#[derive(Debug, Clone)]
pub struct ModeMatrix {
    pub m: i32,
    /// `√(c_0/c_2)` of the frozen coefficients.
    pub nu: f64,
    /// `c_2` of the frozen coefficients.
    pub scale: f64,
    pub pencil: TridiagPencil,
}

impl ModeMatrix {
    pub fn eigenvalues_below(&self, cutoff: f64) -> Vec<f64> {
        self.pencil.eigenvalues_below(cutoff)
    }

    pub fn all_eigenvalues(&self) -> Vec<f64> {
        let (_, hi) = self.pencil.gershgorin();
        self.pencil.eigenvalues_below(hi * (1.0 + 1e-12) + 1.0)
    }
}

#[derive(Debug, Clone)]
pub struct Discretization {
    /// Interior nodes.
    pub s_grid: Vec<f64>,
    pub h: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub mu: f64,
    /// `h · |s_min|`.
    pub resolution: f64,
    pub modes: Vec<ModeMatrix>,
}

#[derive(Debug, Clone, Copy)]
pub struct NormEstimate {
    pub value: f64,
    /// Eigenvalue of the mode closest to `λ`.
    pub nearest: f64,
}

/// Grid on `[s_min, 0]` (`x ∈ [e^{s_min}, 1]`) including the `x`-dependent coefficients.
pub fn discretize(op: &ConeOperator, s_min: f64, npoints: usize) -> Result<Discretization> {
    if !(s_min < -5.0) || npoints < 100 {
        return Err(Error::Config(format!(
            "discretize needs s_min < -5 and npoints >= 100 (got {s_min}, {npoints})"
        )));
    }
    build(op, s_min, 0.0, npoints, true)
}

/// Frozen-coefficient model `A_∧` truncated to `[s_min, s_max]`.
pub fn discretize_model(op: &ConeOperator, s_min: f64, s_max: f64, npoints: usize) -> Result<Discretization> {
    if !(s_max > s_min) || npoints < 3 {
        return Err(Error::Config(format!("empty model grid [{s_min}, {s_max}] with {npoints} points")));
    }
    build(op, s_min, s_max, npoints, false)
}

fn build(op: &ConeOperator, s_min: f64, s_max: f64, n: usize, perturbed: bool) -> Result<Discretization> {
    let h = (s_max - s_min) / (n + 1) as f64;
    let s_grid: Vec<f64> = (1..=n).map(|i| s_min + i as f64 * h).collect();
    let pert = if perturbed { op.x_perturbation.as_ref() } else { None };
    if let Some(p) = pert {
        if p.coeffs.get(1).is_some_and(|c| c.iter().any(|&v| v != 0.0)) || p.coeffs.len() > 3 {
            return Err(Error::Config(
                "x-perturbation may only modify the σ⁰ and σ² coefficients".into(),
            ));
        }
    }
    let weight: Vec<f64> = s_grid.iter().map(|&s| (op.mu * s).exp()).collect();
    let mut modes = Vec::new();
    for m in op.modes() {
        let (c2, c0) = op.symmetric_form(m)?;
        let c2_at = |s: f64| c2 + pert.map_or(0.0, |p| p.value(2, s.exp()));
        let q_at = |s: f64| c0 + pert.map_or(0.0, |p| p.value(0, s.exp()));
        let flux: Vec<f64> = (0..=n).map(|i| c2_at(s_min + (i as f64 + 0.5) * h)).collect();
        if flux.iter().any(|&c| !(c > 0.0)) {
            return Err(Error::Config(format!("mode {m}: σ² coefficient not positive on the grid")));
        }
        let diag = (0..n)
            .map(|i| (flux[i] + flux[i + 1]) / (h * h) + q_at(s_grid[i]))
            .collect();
        let off = (1..n).map(|i| -flux[i] / (h * h)).collect();
        modes.push(ModeMatrix {
            m,
            nu: (c0 / c2).max(0.0).sqrt(),
            scale: c2,
            pencil: TridiagPencil {
                diag,
                off,
                weight: weight.clone(),
            },
        });
    }
    Ok(Discretization {
        resolution: h * s_min.abs(),
        s_grid,
        h,
        s_min,
        s_max,
        mu: op.mu,
        modes,
    })
}

impl Discretization {
    pub fn mode(&self, m: i32) -> Option<&ModeMatrix> {
        self.modes.iter().find(|mm| mm.m == m)
    }

    /// `x_i = e^{s_i}`.
    pub fn x_grid(&self) -> Vec<f64> {
        self.s_grid.iter().map(|s| s.exp()).collect()
    }

    /// Discrete `L²(ds)` (that is `L²_b`) inner product.
    pub fn inner_b(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        u.iter().zip(v).map(|(a, b)| a * b.conj()).sum::<Complex64>() * self.h
    }

    /// Inner product weighted by `e^{μs}`, in which `A_h` is self-adjoint.
    pub fn inner_w(&self, mode: &ModeMatrix, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        u.iter()
            .zip(v)
            .zip(&mode.pencil.weight)
            .map(|((a, b), w)| a * b.conj() * *w)
            .sum::<Complex64>()
            * self.h
    }

    pub fn norm_w(&self, mode: &ModeMatrix, u: &[Complex64]) -> f64 {
        self.inner_w(mode, u, u).re.max(0.0).sqrt()
    }

    /// Solves `(A_h - λ) u = rhs`, i.e. `(K - λW) u = W rhs`, and checks the
    /// relative residual.
    pub fn resolvent_solve(&self, mode: &ModeMatrix, lambda: Complex64, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        let p = &mode.pencil;
        let b: Vec<Complex64> = rhs.iter().zip(&p.weight).map(|(r, w)| r * *w).collect();
        let u = p.solve_shifted(lambda, &b)?;
        let r = p.apply_shifted(lambda, &u);
        let num: f64 = r.iter().zip(&b).map(|(a, c)| (a - c).norm_sqr()).sum::<f64>().sqrt();
        let den: f64 = b.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(num <= 1e-10 * den.max(f64::MIN_POSITIVE)) {
            let distance = self.nearest_eigenvalue(mode, lambda).map_or(0.0, |e| (e - lambda).norm());
            return Err(Error::Conditioning { lambda, distance });
        }
        Ok(u)
    }

    fn nearest_eigenvalue(&self, mode: &ModeMatrix, lambda: Complex64) -> Option<f64> {
        let p = &mode.pencil;
        let n = p.len();
        if n == 0 {
            return None;
        }
        let k = p.count_below(lambda.re).min(n);
        let mut cands = Vec::new();
        if k > 0 {
            cands.push(p.eigenvalue(k - 1));
        }
        if k < n {
            cands.push(p.eigenvalue(k));
        }
        cands
            .into_iter()
            .min_by(|a, b| (Complex64::new(*a, 0.0) - lambda).norm().total_cmp(&(Complex64::new(*b, 0.0) - lambda).norm()))
    }

    /// `‖(A_h - λ)^{-1}‖` on one mode in the weighted space: `A_h` is
    /// self-adjoint there, so the norm is `1/dist(λ, spec A_h)`.
    pub fn resolvent_norm_mode(&self, mode: &ModeMatrix, lambda: Complex64) -> Result<NormEstimate> {
        let nearest = self
            .nearest_eigenvalue(mode, lambda)
            .ok_or_else(|| Error::Config("empty grid".into()))?;
        let d = (Complex64::new(nearest, 0.0) - lambda).norm();
        if d == 0.0 {
            return Err(Error::Singular { lambda });
        }
        Ok(NormEstimate { value: 1.0 / d, nearest })
    }

    /// Maximum of the per-mode norms (the operator is block diagonal in modes).
    pub fn resolvent_norm(&self, lambda: Complex64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for mode in &self.modes {
            worst = worst.max(self.resolvent_norm_mode(mode, lambda)?.value);
        }
        Ok(worst)
    }

    /// Power iteration on `R^* R` with `R = (A_h - λ)^{-1}`; an independent
    /// estimate that does not use the spectral theorem.
    pub fn resolvent_norm_power(&self, mode: &ModeMatrix, lambda: Complex64, iterations: usize) -> Result<f64> {
        let n = self.s_grid.len();
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(1.0 + ((i * 37) % 11) as f64 * 0.05, 0.0))
            .collect();
        let mut est = 0.0;
        for _ in 0..iterations {
            let nv = self.norm_w(mode, &v);
            v.iter_mut().for_each(|z| *z /= nv);
            let u = self.resolvent_solve(mode, lambda, &v)?;
            est = self.norm_w(mode, &u);
            // adjoint of R in the weighted space is (A_h - conj λ)^{-1}
            v = self.resolvent_solve(mode, lambda.conj(), &u)?;
        }
        Ok(est)
    }

    /// Largest `C` with `‖(A_h-λ)u‖ >= C (‖A_h u‖ + |λ| ‖u‖)` on one mode.
    pub fn injectivity_constant(&self, mode: &ModeMatrix, lambda: Complex64) -> f64 {
        let r = lambda.norm();
        mode.all_eigenvalues()
            .into_iter()
            .map(|e| (Complex64::new(e, 0.0) - lambda).norm() / (e.abs() + r))
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone)]
pub struct KappaScaled {
    pub values: Vec<Complex64>,
    /// Set when part of the support was pushed past the truncated domain.
    pub truncated: bool,
    /// `L²_b` mass lost by the shift, relative to the input.
    pub lost_fraction: f64,
}

/// `(κ_ϱ u)(s) = u(s + log ϱ)` on a uniform grid with zero Dirichlet
/// extension and linear interpolation between nodes.
pub fn kappa_scale(rho: f64, s_grid: &[f64], u: &[Complex64]) -> KappaScaled {
    let n = s_grid.len();
    let zero = Complex64::new(0.0, 0.0);
    if n < 2 {
        return KappaScaled { values: u.to_vec(), truncated: false, lost_fraction: 0.0 };
    }
    let h = s_grid[1] - s_grid[0];
    let shift = rho.ln() / h;
    let sample = |t: f64| -> Complex64 {
        // fractional node index t; nodes -1 and n are the Dirichlet ends
        let i = t.floor();
        let w = t - i;
        let at = |k: f64| -> Complex64 {
            if k < 0.0 || k >= n as f64 {
                zero
            } else {
                u[k as usize]
            }
        };
        if w < 1e-12 {
            at(i)
        } else if w > 1.0 - 1e-12 {
            at(i + 1.0)
        } else {
            at(i) * (1.0 - w) + at(i + 1.0) * w
        }
    };
    let values: Vec<Complex64> = (0..n).map(|i| sample(i as f64 + shift)).collect();
    let total: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let lost: f64 = (0..n)
        .filter(|&i| {
            let t = i as f64 - shift;
            t < -1.0 + 1e-12 || t > n as f64 - 1e-12
        })
        .map(|i| u[i].norm_sqr())
        .sum();
    let lost_fraction = if total > 0.0 { lost / total } else { 0.0 };
    KappaScaled {
        values,
        truncated: lost_fraction > 0.0,
        lost_fraction,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct KappaCheck {
    pub lambda: Complex64,
    /// `|‖(A_∧-λ)^{-1}‖ - |λ|^{-1}‖(A_∧-λ/|λ|)^{-1}‖|` relative to the left side.
    pub norm_deviation: f64,
    /// `(A_∧-λ̂)^{-1} f` against `ϱ^μ κ_ϱ^{-1}(A_∧-ϱ^μ λ̂)^{-1} κ_ϱ f` for a bump
    /// `f`, with `ϱ` rounded to a whole number of grid cells.
    pub vector_deviation: f64,
}

/// κ-homogeneity of the frozen model resolvent of mode `m` on the truncated
/// grid `[s_min, s_max]`.
pub fn kappa_homogeneity(
    op: &ConeOperator,
    m: i32,
    lambdas: &[Complex64],
    s_min: f64,
    s_max: f64,
    npoints: usize,
) -> Result<Vec<KappaCheck>> {
    let disc = discretize_model(op, s_min, s_max, npoints)?;
    let mode = disc
        .mode(m)
        .ok_or_else(|| Error::Config(format!("mode {m} is not materialized")))?;
    let centre = 0.5 * (s_min + s_max);
    let f: Vec<Complex64> = disc
        .s_grid
        .iter()
        .map(|&s| Complex64::new((-(s - centre).powi(2)).exp(), 0.0))
        .collect();
    let norm_b = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut out = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let r = lambda.norm();
        let unit = lambda / r;
        let lhs = disc.resolvent_norm_mode(mode, lambda)?.value;
        let rhs = disc.resolvent_norm_mode(mode, unit)?.value / r;
        let cells = (r.ln() / disc.mu / disc.h).round();
        let rho = (cells * disc.h).exp();
        let scaled = unit * rho.powf(disc.mu);
        let direct = disc.resolvent_solve(mode, unit, &f)?;
        let shifted = kappa_scale(rho, &disc.s_grid, &f);
        let solved = disc.resolvent_solve(mode, scaled, &shifted.values)?;
        let back = kappa_scale(1.0 / rho, &disc.s_grid, &solved);
        let diff: Vec<Complex64> = back
            .values
            .iter()
            .zip(&direct)
            .map(|(b, d)| b * rho.powf(disc.mu) - d)
            .collect();
        out.push(KappaCheck {
            lambda,
            norm_deviation: (lhs - rhs).abs() / lhs,
            vector_deviation: norm_b(&diff) / norm_b(&direct),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coneop::{bessel_oracle, XPerturbation};

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn construction_is_symmetric_tridiagonal() {
        let op = ConeOperator::laplace_type(2, 1.5, 0);
        let d = discretize(&op, -12.0, 200).unwrap();
        let p = &d.mode(0).unwrap().pencil;
        assert_eq!(p.off.len(), 199);
        assert!(p.weight.iter().all(|&w| w > 0.0));
        let expected = 2.0 / (d.h * d.h) + 2.25;
        assert!((p.diag[10] - expected).abs() < 1e-9 * expected);
        assert!((d.resolution - d.h * 12.0).abs() < 1e-15);
    }

    #[test]
    fn second_order_convergence_to_bessel() {
        let op = ConeOperator::laplace_type(2, 1.5, 0);
        let exact = bessel_oracle(1.5, 1).unwrap()[0];
        let err = |n| {
            let d = discretize(&op, -12.0, n).unwrap();
            (d.modes[0].pencil.eigenvalue(0) - exact).abs()
        };
        let (e1, e2) = (err(400), err(801));
        let ratio = e1 / e2;
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn real_perturbation_keeps_symmetry() {
        let mut op = ConeOperator::laplace_type(2, 1.5, 1);
        op.x_perturbation = Some(XPerturbation { coeffs: vec![vec![0.5], vec![], vec![0.2]] });
        let d = discretize(&op, -10.0, 150).unwrap();
        for mm in &d.modes {
            let v = mm.all_eigenvalues();
            assert_eq!(v.len(), 150);
            assert!(v.iter().all(|e| e.is_finite() && *e > 0.0));
        }
        op.x_perturbation = Some(XPerturbation { coeffs: vec![vec![], vec![1.0]] });
        assert!(discretize(&op, -10.0, 150).is_err());
    }

    #[test]
    fn resolvent_solve_negative_axis() {
        let op = ConeOperator::laplace_type(2, 1.5, 0);
        let d = discretize(&op, -10.0, 300).unwrap();
        let rhs: Vec<Complex64> = d.s_grid.iter().map(|&s| c((-(s + 2.0).powi(2)).exp())).collect();
        for r in [1e-3, 1.0, 1e3, 1e6] {
            assert!(d.resolvent_solve(&d.modes[0], c(-r), &rhs).is_ok());
        }
    }

    #[test]
    fn norm_estimates_agree() {
        let op = ConeOperator::laplace_type(2, 1.5, 0);
        let d = discretize(&op, -10.0, 300).unwrap();
        let mm = &d.modes[0];
        let lambda = Complex64::new(-50.0, 10.0);
        let exact = d.resolvent_norm_mode(mm, lambda).unwrap().value;
        let power = d.resolvent_norm_power(mm, lambda, 200).unwrap();
        assert!((exact - power).abs() < 1e-3 * exact, "{exact} {power}");
        let c1 = d.injectivity_constant(mm, c(-10.0));
        let c2 = d.injectivity_constant(mm, c(-1e4));
        assert!(c1 > 0.5 && c2 > 0.5);
    }

    #[test]
    fn model_resolvent_homogeneity() {
        let op = ConeOperator::laplace_type(2, 1.5, 0);
        let lambdas: Vec<Complex64> = [1e2, 1e3, 1e4]
            .iter()
            .flat_map(|&r| [Complex64::from_polar(r, std::f64::consts::PI), Complex64::from_polar(r, 0.75 * std::f64::consts::PI)])
            .collect();
        for k in kappa_homogeneity(&op, 0, &lambdas, -20.0, 12.0, 3200).unwrap() {
            assert!(k.norm_deviation < 0.02 && k.vector_deviation < 0.02, "{k:?}");
        }
    }

    #[test]
    fn kappa_identity_and_cell_shift() {
        let s: Vec<f64> = (0..50).map(|i| -5.0 + 0.1 * i as f64).collect();
        let u: Vec<Complex64> = s.iter().map(|&x| c((-(x + 2.5).powi(2)).exp())).collect();
        assert_eq!(kappa_scale(1.0, &s, &u).values, u);
        let k = kappa_scale(0.1f64.exp(), &s, &u);
        assert_eq!(&k.values[..49], &u[1..]);
        let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        assert!((norm(&k.values) - norm(&u) + u[0].norm_sqr()).abs() < 1e-14 * norm(&u));
        assert!(!kappa_scale(1.0, &s, &u).truncated);
        assert!(kappa_scale(100.0, &s, &u).truncated);
    }
}
