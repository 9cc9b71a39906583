//! The component integrals `A_k(z) = ∫ χ(ξ) a_k(ξ, -z^{-μ}) d̄ξ` and the
//! Euler-type identity they satisfy.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::lemmas::assess;
use super::{FitOptions, LogPolyExpansion};
use crate::error::{Error, Result};
use crate::indexsets::IndexSet;
use crate::numeric::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::numeric::smooth::excision;
use crate::symbols::HomogComponent;

const ANGLES: usize = 8;

#[derive(Debug, Clone)]
pub struct AkReport {
    pub expansion: LogPolyExpansion,
    pub predicted: IndexSet,
    /// Largest relative defect of `(z∂_z - γ)A_k = -∫(ξ·∂_ξχ) a_k d̄ξ` on the grid.
    pub identity_residual: f64,
    pub gamma: f64,
    /// Smallest detected exponent.
    pub dominant: Option<f64>,
    pub pass: bool,
}

fn opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-12,
        max_intervals: 4000,
    }
}

/// `∫_{|ξ| ≥ r0} f(ξ) d̄ξ` for `n ∈ {1, 2}`, integrating radially in `ρ = z r`
/// beyond `r1` so that the scale `|ξ| ~ 1/z` is resolved.
fn radial_integral(
    n: usize,
    r0: f64,
    r1: f64,
    z: f64,
    f: &dyn Fn(&[f64]) -> Complex64,
    to_infinity: bool,
) -> Result<Complex64> {
    let dirs: Vec<Vec<f64>> = match n {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..ANGLES)
            .map(|i| {
                let t = TAU * i as f64 / ANGLES as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => return Err(Error::Config(format!("component integrals support n = 1, 2 (got {n})"))),
    };
    let angular = if n == 1 { 1.0 } else { TAU / ANGLES as f64 };
    let jac = |r: f64| if n == 1 { 1.0 } else { r };
    let mut total = Complex64::new(0.0, 0.0);
    for d in &dirs {
        let at = |r: f64| {
            let xi: Vec<f64> = d.iter().map(|c| c * r).collect();
            f(&xi) * jac(r)
        };
        total += integrate(&at, r0, r1, opts())?.value;
        if to_infinity {
            total += integrate_to_infinity(|rho| at(rho / z) / z, z * r1, opts())?.value;
        }
    }
    Ok(total * angular / (2.0 * PI).powi(n as i32))
}

/// Quadrature of `A_k` on `z_grid` (with `λ = -z^{-μ}`), fitted against
/// `(μN + μℕ₀) ∪̄ {Nμ - μ' - n + k}`, together with the identity check.
#[allow(clippy::too_many_arguments)]
pub fn trace_component_ak(
    a_k: &HomogComponent,
    chi_radius: f64,
    z_grid: &[f64],
    mu: f64,
    big_n: u32,
    mu_prime: f64,
    n: usize,
    k: u32,
    fit: &FitOptions,
) -> Result<AkReport> {
    let nf = n as f64;
    let expected = mu_prime - big_n as f64 * mu - k as f64;
    if (a_k.degree - expected).abs() > 1e-9 {
        return Err(Error::Config(format!(
            "component degree {} differs from mu' - N mu - k = {expected}",
            a_k.degree
        )));
    }
    if a_k.degree >= -nf {
        return Err(Error::NotIntegrable(format!("degree {} is not below -n = {}", a_k.degree, -nf)));
    }
    let gamma = big_n as f64 * mu - mu_prime - nf + k as f64;
    let lead = (big_n as f64 * mu).min(gamma);
    let cutoff = lead + 10.0;
    let mut lattice = Vec::new();
    let mut e = big_n as f64 * mu;
    while e <= cutoff {
        lattice.push((e, 0));
        e += mu;
    }
    let predicted = IndexSet::from_real(&lattice, cutoff).extended_union(&IndexSet::from_real(&[(gamma, 0)], cutoff))?;
    let dl = a_k.d_lambda();
    let chi = |xi: &[f64]| excision(crate::symbols::expr::norm(xi), chi_radius, 0);
    let euler = |xi: &[f64]| {
        let r = crate::symbols::expr::norm(xi);
        r * excision(r, chi_radius, 1)
    };
    let mut values = Vec::with_capacity(z_grid.len());
    let mut identity_residual = 0.0f64;
    for &z in z_grid {
        if !(z > 0.0) {
            return Err(Error::Config(format!("z = {z} must be positive")));
        }
        let lambda = Complex64::new(-z.powf(-mu), 0.0);
        let a = |xi: &[f64]| chi(xi) * a_k.eval(xi, lambda);
        let value = radial_integral(n, chi_radius, 2.0 * chi_radius, z, &a, true)?;
        let zd = |xi: &[f64]| chi(xi) * dl.eval(xi, lambda) * (-mu * lambda);
        let lhs = radial_integral(n, chi_radius, 2.0 * chi_radius, z, &zd, true)? - value * gamma;
        let rhs_f = |xi: &[f64]| -euler(xi) * a_k.eval(xi, lambda);
        let rhs = radial_integral(n, chi_radius, 2.0 * chi_radius, z, &rhs_f, false)?;
        let scale = (value * gamma).norm().max(lhs.norm()).max(f64::MIN_POSITIVE);
        identity_residual = identity_residual.max((lhs - rhs).norm() / scale);
        if value.im.abs() > 1e-10 * value.norm() {
            return Err(Error::Config("component integral is not real on the negative axis".into()));
        }
        values.push((z, value.re));
    }
    let report = assess(values, predicted, fit)?;
    let dominant = report
        .expansion
        .detected()
        .map(|t| t.gamma)
        .min_by(|a, b| a.total_cmp(b));
    Ok(AkReport {
        pass: report.pass && identity_residual < 1e-6,
        expansion: report.expansion,
        predicted: report.predicted,
        identity_residual,
        gamma,
        dominant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{homog_expand, Expr, ParamSymbol, SymbolOrders};
    use crate::traces::log_grid;

    fn resolvent_square(n: usize) -> HomogComponent {
        let s = ParamSymbol::from_expr(
            (Expr::norm_pow(2.0) - Expr::lambda()).pow(-2),
            SymbolOrders { mu: -4.0, p: -4.0, d: 2.0 },
            n,
            0.5,
        );
        homog_expand(&s, 1).unwrap().components.remove(0)
    }

    #[test]
    fn squared_resolvent_component() {
        let a = resolvent_square(1);
        let grid = log_grid(1e-3, 1e-1, 48);
        let r = trace_component_ak(&a, 0.5, &grid, 2.0, 2, 0.0, 1, 0, &FitOptions::default()).unwrap();
        assert!(r.pass, "{:?} {}", r.expansion.terms, r.identity_residual);
        assert_eq!(r.dominant, Some(3.0));
        // ∫ (ξ² + z^{-2})^{-2} dξ / 2π = z³/4
        assert!((r.expansion.term(3.0, 0).unwrap().coeff.re - 0.25).abs() < 1e-8);
        assert!(r.identity_residual < 1e-6);
    }

    #[test]
    fn exponents_are_cutoff_independent() {
        let a = resolvent_square(1);
        let grid = log_grid(1e-3, 1e-1, 48);
        let set = |radius: f64| {
            let r = trace_component_ak(&a, radius, &grid, 2.0, 2, 0.0, 1, 0, &FitOptions::default()).unwrap();
            assert!(r.pass, "{:?}", r.expansion.terms);
            // the higher terms shrink with the radius and drop below detection
            let d: Vec<(f64, u32)> = r.expansion.detected().filter(|t| t.gamma < 7.0).map(|t| (t.gamma, t.logpow)).collect();
            (d, r.expansion.term(4.0, 0).unwrap().coeff.re)
        };
        let (e1, c1) = set(0.5);
        let (e2, c2) = set(1.0);
        assert_eq!(e1, e2);
        assert!((c1 - c2).abs() > 1e-3 * c1.abs());
    }

    #[test]
    fn planar_component() {
        let a = resolvent_square(2);
        let grid = log_grid(1e-3, 1e-1, 48);
        let r = trace_component_ak(&a, 0.5, &grid, 2.0, 2, 0.0, 2, 0, &FitOptions::default()).unwrap();
        // γ = 2 = Nμ - n, ∫ (|ξ|² + z^{-2})^{-2} d²ξ / 4π² = z²/4π
        assert!(r.identity_residual < 1e-6);
        let c = r.expansion.term(2.0, 0).unwrap().coeff.re;
        assert!((c - 0.25 / PI).abs() < 1e-7, "{c}");
        assert!(r.pass, "{:?}", r.expansion.terms);
    }

    #[test]
    fn non_integrable_degree() {
        let s = ParamSymbol::from_expr(
            (Expr::norm_pow(2.0) - Expr::lambda()).pow(-1),
            SymbolOrders { mu: -2.0, p: -2.0, d: 2.0 },
            2,
            0.5,
        );
        let a = homog_expand(&s, 1).unwrap().components.remove(0);
        let r = trace_component_ak(&a, 0.5, &[0.01], 2.0, 1, 0.0, 2, 0, &FitOptions::default());
        assert!(matches!(r, Err(Error::NotIntegrable(_))));
    }
}
