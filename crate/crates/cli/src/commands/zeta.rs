use std::fmt::Write as _;

use cone_spectral::asymptotics::{
    columns, fit_expansion, fit_free_leading, predict_terms, zeta_continue, ExpansionKind, FitOptions, ZetaOptions,
};
use cone_spectral::coneop::SpectralData;
use cone_spectral::traces::{complex_power_sum, heat_trace, log_grid, TraceMeta, WeightOperator, WeightedSpectrum};
use num_complex::Complex64;

use super::{Context, Run};
use crate::output::Check;

/// Continuation of `ζ(z) = Tr A^z` from the heat-trace fit, with a pole report
/// and comparisons against the convergent eigen-sum.
pub fn zeta(ctx: &mut Context) -> Run {
    let cfg = ctx.cfg;
    let n = cfg.dimension as f64;
    let op = ctx.operator();
    let opts = FitOptions::default();
    let mut checks = Vec::new();

    let sd = SpectralData::from_bessel(&op, cfg.heat_cutoff)?;
    let window = (cfg.heat_t_min, cfg.zeta_t0);
    let grid = log_grid(window.0, window.1, cfg.heat_points);
    let ts = heat_trace(&sd, &grid, n, op.mu)?;
    let meta = TraceMeta::new(op.mu, n, &WeightOperator::identity(), 0);
    let cols = columns(&predict_terms(&meta, ExpansionKind::Heat, cfg.heat_k_max));
    let lead = cols[0].0;
    let rest: Vec<(f64, u32)> = cols.iter().copied().filter(|&c| c != (lead, 0)).collect();
    let (_, fit) = fit_free_leading(&ts, &rest, window, (lead - 0.5, lead + 0.5), &opts)?;
    ctx.out.csv("zeta_heat_fit.csv", &fit.to_csv())?;
    let zopts = ZetaOptions { t0: cfg.zeta_t0, ..ZetaOptions::new(n, op.mu) };
    let z = zeta_continue(&WeightedSpectrum::unweighted(&sd), &fit, &zopts)?;
    ctx.out.csv("zeta_poles.csv", &z.poles_to_csv())?;

    let target = Complex64::new(lead, 0.0);
    let near = z.poles.iter().min_by(|a, b| (a.z - target).norm().total_cmp(&(b.z - target).norm()));
    let simple = near.is_some_and(|p| (p.z - target).norm() < ctx.tol.pole_location && p.order == 1 && p.lattice_tag == "simple");
    checks.push(Check::bool(
        "leading_pole",
        near.map_or("none".to_string(), |p| format!("{:.6} order {} {}", p.z.re, p.order, p.lattice_tag)),
        format!("simple pole within {} of z = {lead}", ctx.tol.pole_location),
        simple,
    ));
    // the residue against an independent fixed-lattice fit of the t^{lead} coefficient
    let fixed = fit_expansion(&ts, &cols, window, &opts)?;
    let c_lead = fixed.term(lead, 0).map_or(0.0, |t| t.coeff.re);
    if let Some(p) = near {
        let rel = (p.residue.re + c_lead).abs() / c_lead.abs();
        checks.push(Check::bool(
            "leading_residue",
            format!("{:.6} vs {:.6}", p.residue.re, -c_lead),
            format!("relative difference <= {}", ctx.tol.residue_rel),
            rel <= ctx.tol.residue_rel,
        ));
    }
    let left = z.scan_poles((lead - 3.0, lead - ctx.tol.pole_location), (-1.0, 1.0), 0.25, 1e-6)?;
    checks.push(Check::bool("no_poles_left", left.len(), format!("no pole with Re z < {lead} - {}", ctx.tol.pole_location), left.is_empty()));

    let mut s = String::from("z,continued_re,continued_im,direct_re,direct_im,rel_diff\n");
    let mut worst = 0.0f64;
    for &x in &cfg.zeta_probes {
        let zz = Complex64::new(x, 0.0);
        let cont = z.eval(zz)?;
        let direct = complex_power_sum(&sd, zz, n, op.mu, 1e-9)?;
        let rel = (cont - direct).norm() / direct.norm();
        worst = worst.max(rel);
        let _ = writeln!(s, "{x},{:.15e},{:.15e},{:.15e},{:.15e},{rel:.3e}", cont.re, cont.im, direct.re, direct.im);
    }
    ctx.out.csv("zeta_values.csv", &s)?;
    checks.push(Check::bool(
        "direct_sum_agreement",
        format!("{worst:.3e}"),
        format!("max relative difference <= {:e}", ctx.tol.zeta_rel),
        worst <= ctx.tol.zeta_rel,
    ));
    Ok(checks)
}
