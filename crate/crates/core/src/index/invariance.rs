//! Numerical checks that the index does not see the `x`-dependence of the
//! coefficients near the tip, nor a small change of the weight.

use nalgebra::{DMatrix, DVector};

use crate::coneop::{boundary_spectrum, discretize, ConeOperator, ModeMatrix, Verdict};
use crate::error::{Error, Result};
use crate::numeric::smooth::cutoff_one_near_zero;

fn dense(m: &ModeMatrix) -> DMatrix<f64> {
    let p = &m.pencil;
    let n = p.diag.len();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = p.diag[i];
    }
    for (i, &o) in p.off.iter().enumerate() {
        a[(i, i + 1)] = o;
        a[(i + 1, i)] = o;
    }
    a
}

/// `W^{-1/2} K W^{-1/2}`: the mode operator in `L²(x^μ ds)`-orthonormal coordinates.
fn symmetric_operator(m: &ModeMatrix) -> DMatrix<f64> {
    let r: Vec<f64> = m.pencil.weight.iter().map(|w| 1.0 / w.sqrt()).collect();
    let mut a = dense(m);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            a[(i, j)] *= r[i] * r[j];
        }
    }
    a
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |s, p| (s.0 + p.0, s.1 + p.1));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = points
        .iter()
        .fold((0.0, 0.0), |s, p| (s.0 + (p.0 - mx) * (p.1 - my), s.1 + (p.0 - mx).powi(2)));
    sxy / sxx
}

#[derive(Debug, Clone)]
pub struct RedToConstReport {
    pub taus: Vec<f64>,
    /// `sup ‖(A - A_[τ])u‖ / ‖u‖_A` per `τ`, maximized over modes.
    pub ratios: Vec<f64>,
    /// Log-log slope of the ratios against `τ`; `None` if every ratio vanishes.
    pub slope: Option<f64>,
    pub pass: bool,
}

/// `A_[τ] = φ_τ A₀ + (1 - φ_τ) A` with `φ_τ = φ(x/τ)` and `A₀` the frozen
/// operator; measures the graph-norm distance to `A` and requires a decay
/// exponent of at least `1 - ε - 0.1`.
pub fn invariance_red_to_const(
    op: &ConeOperator,
    s_min: f64,
    npoints: usize,
    taus: &[f64],
    eps: f64,
) -> Result<RedToConstReport> {
    let full = discretize(op, s_min, npoints)?;
    let frozen = discretize(&op.without_perturbation(), s_min, npoints)?;
    let x = full.x_grid();
    let resolvable = x[0] * 4.0;
    if let Some(&t) = taus.iter().find(|&&t| !(t > resolvable && t <= 1.0)) {
        return Err(Error::Config(format!("tau = {t} outside the resolvable range ({resolvable:.2e}, 1]")));
    }
    let mut ratios = vec![0.0f64; taus.len()];
    for (mf, m0) in full.modes.iter().zip(&frozen.modes) {
        let a = symmetric_operator(mf);
        let diff = &a - symmetric_operator(m0);
        if diff.iter().all(|&v| v == 0.0) {
            continue;
        }
        // (1 + A²)^{-1/2} through the eigenbasis of A
        let eig = a.symmetric_eigen();
        let damp = DVector::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|l| 1.0 / (1.0 + l * l).sqrt()));
        let g = &eig.eigenvectors * DMatrix::from_diagonal(&damp) * eig.eigenvectors.transpose();
        let dg = &diff * g;
        for (k, &tau) in taus.iter().enumerate() {
            let mut m = dg.clone();
            for (i, xi) in x.iter().enumerate() {
                let phi = cutoff_one_near_zero(xi / tau, 0.5, 1.0);
                m.row_mut(i).scale_mut(phi);
            }
            let s = m.singular_values().iter().cloned().fold(0.0, f64::max);
            ratios[k] = ratios[k].max(s);
        }
    }
    let pts: Vec<(f64, f64)> = taus
        .iter()
        .zip(&ratios)
        .filter(|(_, &r)| r > 0.0)
        .map(|(&t, &r)| (t.ln(), r.ln()))
        .collect();
    let slope = (pts.len() >= 2).then(|| slope(&pts));
    let pass = match slope {
        Some(s) => s >= 1.0 - eps - 0.1,
        None => ratios.iter().all(|&r| r == 0.0),
    };
    Ok(RedToConstReport { taus: taus.to_vec(), ratios, slope, pass })
}

#[derive(Debug, Clone)]
pub struct SobolevRow {
    pub eps: f64,
    pub kernel_dim: usize,
    pub cokernel_dim: usize,
    /// Smallest singular value relative to the largest, over modes.
    pub min_rel_sv: f64,
    /// A boundary-spectrum line lies between the reference weight and the shifted one.
    pub crosses: bool,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct SobolevReport {
    /// Distance from the reference line to the boundary spectrum.
    pub margin: f64,
    pub rows: Vec<SobolevRow>,
    /// Dimensions agree with `ε = 0` for every `ε` below the margin.
    pub consistent: bool,
    pub verdict: Verdict,
}

const KERNEL_THRESHOLD: f64 = 1e-8;
const AMBIGUITY: f64 = 10.0;

/// Kernel and cokernel dimensions of `A` on `x^{α+ε} L²_b`, realized as
/// `x^{-(α+ε)} P x^{α+ε}` on the log grid, for each `ε`.
pub fn invariance_red_to_sobolev(op: &ConeOperator, s_min: f64, npoints: usize, eps_list: &[f64]) -> Result<SobolevReport> {
    let disc = discretize(&op.without_perturbation(), s_min, npoints)?;
    let strip = op.alpha + eps_list.iter().cloned().fold(0.0, f64::max).abs() + 1.0;
    let spec = boundary_spectrum(op, strip, op.mode_max)?;
    let level = -op.alpha;
    let margin = spec.distance_to_line(level);
    let mut rows = Vec::new();
    for &eps in eps_list {
        let gamma = op.alpha + eps;
        let mut kernel = 0;
        let mut cokernel = 0;
        let mut min_rel = f64::INFINITY;
        let mut ambiguous = false;
        for m in &disc.modes {
            let k = dense(m);
            let e: Vec<f64> = disc.s_grid.iter().map(|s| (gamma * s).exp()).collect();
            let t = DMatrix::from_fn(k.nrows(), k.ncols(), |i, j| k[(i, j)] * e[j] / e[i]);
            let svd = t.svd(false, false);
            let sv = &svd.singular_values;
            let smax = sv.iter().cloned().fold(0.0, f64::max);
            for &s in sv.iter() {
                let rel = s / smax;
                min_rel = min_rel.min(rel);
                if rel < KERNEL_THRESHOLD {
                    kernel += 1;
                    cokernel += 1;
                }
                if rel > KERNEL_THRESHOLD / AMBIGUITY && rel < KERNEL_THRESHOLD * AMBIGUITY {
                    ambiguous = true;
                }
            }
        }
        let lo = level.min(-gamma);
        let hi = level.max(-gamma);
        let crosses = spec.poles.iter().any(|p| p.sigma.im > lo && p.sigma.im < hi);
        rows.push(SobolevRow {
            eps,
            kernel_dim: kernel,
            cokernel_dim: cokernel,
            min_rel_sv: min_rel,
            crosses,
            verdict: if ambiguous { Verdict::Undecided } else { Verdict::True },
        });
    }
    let reference = rows.iter().find(|r| r.eps == 0.0).map(|r| (r.kernel_dim, r.cokernel_dim));
    let consistent = rows
        .iter()
        .filter(|r| r.eps.abs() < margin)
        .all(|r| reference.is_none_or(|d| d == (r.kernel_dim, r.cokernel_dim)));
    let verdict = if rows.iter().any(|r| r.verdict == Verdict::Undecided && r.eps.abs() < margin) {
        Verdict::Undecided
    } else {
        Verdict::from_bool(consistent)
    };
    Ok(SobolevReport { margin, rows, consistent, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coneop::XPerturbation;

    fn perturbed() -> ConeOperator {
        ConeOperator {
            x_perturbation: Some(XPerturbation { coeffs: vec![vec![1.0]] }),
            ..ConeOperator::laplace_type(2, 1.5, 1)
        }
    }

    #[test]
    fn graph_norm_decay() {
        let taus: Vec<f64> = (2..=7).map(|k| 0.5f64.powi(k)).collect();
        let r = invariance_red_to_const(&perturbed(), -14.0, 300, &taus, 0.1).unwrap();
        let s = r.slope.unwrap();
        assert!(r.pass && s >= 0.8, "{s} {:?}", r.ratios);
        assert!(r.ratios.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn unperturbed_is_exact() {
        let r = invariance_red_to_const(&ConeOperator::laplace_type(2, 1.5, 1), -14.0, 200, &[0.25, 0.125], 0.1).unwrap();
        assert!(r.ratios.iter().all(|&v| v == 0.0) && r.pass && r.slope.is_none());
    }

    #[test]
    fn weight_sweep() {
        let op = ConeOperator::laplace_type(2, 1.5, 1);
        let r = invariance_red_to_sobolev(&op, -40.0, 400, &[0.0, 0.1, 0.2, 0.3, 1.0]).unwrap();
        assert!((r.margin - 0.5).abs() < 1e-9);
        assert!(r.consistent, "{:?}", r.rows);
        assert_eq!(r.verdict, Verdict::True, "{:?}", r.rows);
        for row in &r.rows[..4] {
            assert_eq!((row.kernel_dim, row.cokernel_dim), (0, 0));
            assert!(!row.crosses);
        }
        let last = &r.rows[4];
        assert!(last.crosses);
        assert!(last.kernel_dim >= 1, "{last:?}");
    }
}
