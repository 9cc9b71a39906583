use std::fmt::Write as _;

use cone_spectral::asymptotics::{
    columns, fit_expansion, fit_free_leading, logs_up_to, predict_terms, ExpansionKind, FitOptions, LogPolyExpansion,
};
use cone_spectral::coneop::{SpectralData, Verdict};
use cone_spectral::traces::{heat_trace, log_grid, weighted_heat_trace, TraceMeta, WeightOperator, WeightedSpectrum};

use super::{Context, Run};
use crate::output::Check;
use crate::svg::{plot, Series};

fn without(cols: &[(f64, u32)], drop: (f64, u32)) -> Vec<(f64, u32)> {
    cols.iter().copied().filter(|&c| c != drop).collect()
}

fn terms_rows(s: &mut String, label: &str, fit: &LogPolyExpansion) {
    for t in &fit.terms {
        let _ = writeln!(
            s,
            "{label},{},{},{:.12e},{:.12e},{},{:.3e}",
            t.gamma, t.logpow, t.coeff.re, t.coeff.im, t.detected, t.inflation
        );
    }
}

/// Heat traces of `A` and of `B e^{-tA}` with fits against the predicted lattice.
pub fn heat(ctx: &mut Context) -> Run {
    let cfg = ctx.cfg;
    let n = cfg.dimension as f64;
    let op = ctx.operator();
    let opts = FitOptions::default();
    let mut checks = Vec::new();
    let mut report = String::from("series,gamma,logpow,coeff_re,coeff_im,detected,inflation\n");

    let sd = SpectralData::from_bessel(&op, cfg.heat_cutoff)?;
    let window = (cfg.heat_t_min, cfg.heat_t_max);
    let grid = log_grid(window.0, window.1, cfg.heat_points);
    let ts = heat_trace(&sd, &grid, n, op.mu)?;
    ctx.out.csv("heat_trace.csv", &ts.to_csv())?;
    let meta = TraceMeta::new(op.mu, n, &WeightOperator::identity(), 0);
    let predicted = predict_terms(&meta, ExpansionKind::Heat, cfg.heat_k_max);
    let base = columns(&predicted);
    let fit = fit_expansion(&ts, &base, window, &opts)?;
    ctx.out.csv("heat_fit.csv", &fit.to_csv())?;
    terms_rows(&mut report, "identity", &fit);

    let lead = predicted[0].gamma;
    let (g0, _) = fit_free_leading(&ts, &without(&base, (lead, 0)), window, (lead - 0.5, lead + 0.5), &opts)?;
    checks.push(Check::bool(
        "leading_exponent",
        format!("{g0:.6}"),
        format!("|gamma0 - ({lead})| <= {}", ctx.tol.leading_band),
        (g0 - lead).abs() <= ctx.tol.leading_band,
    ));
    if let Some(second) = predicted.get(1).map(|p| p.gamma) {
        let (g1, _) = fit_free_leading(&ts, &without(&base, (second, 0)), window, (lead + 0.1, second + 0.4), &opts)?;
        checks.push(Check::bool(
            "second_exponent",
            format!("{g1:.6}"),
            format!("|gamma1 - ({second})| <= 0.05"),
            (g1 - second).abs() <= 0.05,
        ));
    }

    // log columns at lattice points where the prediction has none
    let wide = columns(&predict_terms(&meta, ExpansionKind::Heat, cfg.heat_k_max + 1));
    for p in predicted.iter().filter(|p| p.max_log == 0) {
        let mut cols = wide.clone();
        cols.push((p.gamma, 1));
        let check = match fit_expansion(&ts, &cols, window, &opts) {
            Ok(f) => {
                let t = f.term(p.gamma, 1).expect("column present");
                Check::bool(
                    &format!("excluded_log_{}", p.gamma),
                    format!("{:.3e}", t.coeff.re),
                    "not detected",
                    !t.detected,
                )
            }
            Err(e) => Check::new(&format!("excluded_log_{}", p.gamma), e, "fit must be well posed", Verdict::Undecided),
        };
        checks.push(check);
    }

    let sdw = SpectralData::from_bessel(&op, cfg.weighted_cutoff)?;
    let wwin = (cfg.weighted_t_min, cfg.weighted_t_max);
    let wgrid = log_grid(wwin.0, wwin.1, cfg.heat_points);
    let mut family = Vec::new();
    for (beta, name) in [(1.0, "weighted"), (0.0, "reference")] {
        let b = WeightOperator::singular_cutoff(beta);
        let ws = WeightedSpectrum::bessel(&sdw, &b)?;
        let series = weighted_heat_trace(&ws, &b, &wgrid, n, op.mu)?;
        ctx.out.csv(&format!("heat_{name}_trace.csv"), &series.to_csv())?;
        let m = TraceMeta::new(op.mu, n, &b, 0);
        let cols = logs_up_to(columns(&predict_terms(&m, ExpansionKind::Heat, cfg.weighted_k_max)), 0.0);
        let f = fit_expansion(&series, &cols, wwin, &opts)?;
        ctx.out.csv(&format!("heat_{name}_fit.csv"), &f.to_csv())?;
        terms_rows(&mut report, name, &f);
        family.push(f.term(-0.5, 0).is_some_and(|t| t.detected));
    }
    ctx.out.csv("heat_terms.csv", &report)?;
    checks.push(Check::bool(
        "singular_family",
        format!("weighted={} reference={}", family[0], family[1]),
        "t^-1/2 detected for x^-1 phi and absent for phi",
        family[0] && !family[1],
    ));

    let data: Vec<(f64, f64)> = ts.samples.iter().map(|s| (s.param, s.value.re)).collect();
    let model: Vec<(f64, f64)> = grid.iter().map(|&t| (t, fit.eval(t).re)).collect();
    let svg = plot(
        "Heat trace and fitted expansion",
        "t",
        "Tr exp(-tA)",
        &[
            Series { label: "trace", points: data, markers: true },
            Series { label: "fit", points: model, markers: false },
        ],
        true,
        true,
    );
    ctx.out.svg_file("heat.svg", &svg)?;
    Ok(checks)
}
