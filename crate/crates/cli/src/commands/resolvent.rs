use std::fmt::Write as _;

use cone_spectral::asymptotics::{columns, fit_expansion, fit_free_leading, predict_terms, ExpansionKind, FitOptions};
use cone_spectral::coneop::{discretize, SpectralData};
use cone_spectral::traces::{log_grid, resolvent_power_trace, TraceMeta, WeightOperator, WeightedSpectrum};
use num_complex::Complex64;

use super::{loglog_slope, Context, Run};
use crate::output::Check;
use crate::svg::{plot, Series};

/// Resolvent-norm decay on the discretized operator and power traces
/// `Tr B(A-λ)^{-N}` from the exact spectrum.
pub fn resolvent(ctx: &mut Context) -> Run {
    let cfg = ctx.cfg;
    let n = cfg.dimension as f64;
    let op = ctx.operator();
    let opts = FitOptions::default();
    let mut checks = Vec::new();

    let disc = discretize(&op, cfg.s_min, cfg.npoints)?;
    let radii = log_grid(cfg.resolvent_r_min, cfg.resolvent_r_max, cfg.resolvent_points);
    let mut s = String::from("abs_lambda,arg,norm,abs_lambda_times_norm\n");
    let mut pts = Vec::with_capacity(radii.len());
    for &r in &radii {
        let v = disc.resolvent_norm(Complex64::from_polar(r, cfg.resolvent_arg))?;
        let _ = writeln!(s, "{r:.12e},{},{v:.12e},{:.12e}", cfg.resolvent_arg, r * v);
        pts.push((r, v));
    }
    ctx.out.csv("resolvent_norms.csv", &s)?;
    let slope = loglog_slope(&pts);
    checks.push(Check::bool(
        "norm_decay_slope",
        format!("{slope:.6}"),
        format!("|slope + 1| <= {}", ctx.tol.slope_band),
        (slope + 1.0).abs() <= ctx.tol.slope_band,
    ));
    let svg = plot(
        "Resolvent norm along the ray",
        "|lambda|",
        "norm of (A - lambda)^-1",
        &[Series { label: "discretized operator", points: pts, markers: true }],
        true,
        true,
    );
    ctx.out.svg_file("resolvent_norms.svg", &svg)?;

    let sd = SpectralData::from_bessel(&op, cfg.weighted_cutoff)?;
    let window = (cfg.power_r_min, cfg.power_r_max);
    let pradii = log_grid(window.0, window.1, cfg.power_points);
    let meta = TraceMeta::new(op.mu, n, &WeightOperator::identity(), cfg.power_n);
    let series = resolvent_power_trace(&WeightedSpectrum::unweighted(&sd), meta, cfg.resolvent_arg, &pradii)?;
    ctx.out.csv("resolvent_trace.csv", &series.to_csv())?;
    let predicted = predict_terms(&meta, ExpansionKind::Resolvent, cfg.power_k_max);
    let cols = columns(&predicted);
    let fit = fit_expansion(&series, &cols, window, &opts)?;
    ctx.out.csv("resolvent_fit.csv", &fit.to_csv())?;
    // columns ascend, so the dominant term at large |λ| is the last
    let lead = predicted.last().map_or(f64::NAN, |t| t.gamma);
    let rest: Vec<(f64, u32)> = cols.iter().copied().filter(|&c| c != (lead, 0)).collect();
    let (g0, _) = fit_free_leading(&series, &rest, window, (lead - 0.5, lead + 0.5), &opts)?;
    checks.push(Check::bool(
        "resolvent_leading_exponent",
        format!("{g0:.6}"),
        format!("|gamma0 - ({lead})| <= {}", ctx.tol.leading_band),
        (g0 - lead).abs() <= ctx.tol.leading_band,
    ));

    let family_gamma = lead - 0.5;
    let mut seen = Vec::new();
    for (beta, name) in [(1.0, "weighted"), (0.0, "reference")] {
        let b = WeightOperator::singular_cutoff(beta);
        let ws = WeightedSpectrum::bessel(&sd, &b)?;
        let m = TraceMeta::new(op.mu, n, &b, cfg.power_n);
        let series = resolvent_power_trace(&ws, m, cfg.resolvent_arg, &pradii)?;
        ctx.out.csv(&format!("resolvent_{name}_trace.csv"), &series.to_csv())?;
        let f = fit_expansion(&series, &columns(&predict_terms(&m, ExpansionKind::Resolvent, cfg.power_k_max)), window, &opts)?;
        ctx.out.csv(&format!("resolvent_{name}_fit.csv"), &f.to_csv())?;
        seen.push(f.term(family_gamma, 0).is_some_and(|t| t.detected));
    }
    checks.push(Check::bool(
        "singular_family",
        format!("weighted={} reference={}", seen[0], seen[1]),
        format!("lambda^{family_gamma} detected for x^-1 phi and absent for phi"),
        seen[0] && !seen[1],
    ));
    Ok(checks)
}
