use std::fmt::Write as _;

use cone_spectral::coneop::{bessel_oracle, boundary_spectrum, discretize, SpectralData};

use super::{Context, Run};
use crate::output::Check;
use crate::svg::{plot, Series};

/// Boundary spectrum, discrete eigenvalues, and their comparison with Bessel zeros.
pub fn spectrum(ctx: &mut Context) -> Run {
    let cfg = ctx.cfg;
    let op = ctx.operator();
    let mut checks = Vec::new();

    let strip = cfg.a + 1.0;
    let bs = boundary_spectrum(&op, strip, cfg.mode_max)?;
    let mut s = String::from("mode,sigma_re,sigma_im,order\n");
    for p in &bs.poles {
        let _ = writeln!(s, "{},{:.15e},{:.15e},{}", p.mode, p.sigma.re, p.sigma.im, p.ord);
    }
    ctx.out.csv("boundary_spectrum.csv", &s)?;
    let min_im = bs.min_abs_im().unwrap_or(f64::INFINITY);
    checks.push(Check::bool("strip_avoidance", format!("{min_im:.12}"), "min |Im sigma| > alpha", min_im > op.alpha));

    let disc = discretize(&op, cfg.s_min, cfg.npoints)?;
    let sd = SpectralData::from_discretization(&disc, cfg.spectrum_cutoff);
    ctx.out.csv("eigenvalues.csv", &sd.to_csv())?;

    let mut s = String::from("mode,k,discrete,oracle,rel_error\n");
    let mut worst = 0.0f64;
    let mut compared = 0usize;
    let mut first_mode = Vec::new();
    for m in &sd.modes {
        let count = cfg.oracle_count.min(m.eigenvalues.len());
        if count == 0 {
            continue;
        }
        let oracle = bessel_oracle(m.nu, count)?;
        for (k, (&d, &o)) in m.eigenvalues.iter().zip(&oracle).enumerate() {
            let o = o * m.scale;
            let rel = (d - o).abs() / o;
            worst = worst.max(rel);
            compared += 1;
            let _ = writeln!(s, "{},{},{:.15e},{:.15e},{:.6e}", m.m, k + 1, d, o, rel);
            if m.m == 0 {
                first_mode.push((o, rel));
            }
        }
    }
    ctx.out.csv("oracle.csv", &s)?;
    checks.push(Check::bool(
        "bessel_oracle",
        format!("{worst:.3e}"),
        format!("max rel error over {compared} eigenvalues <= {:e}", ctx.tol.oracle_rel),
        compared > 0 && worst <= ctx.tol.oracle_rel,
    ));
    checks.push(Check::bool("spectrum_positive", sd.is_positive(), "all eigenvalues > 0", sd.is_positive()));

    let svg = plot(
        "Discrete vs Bessel eigenvalues, mode 0",
        "oracle eigenvalue",
        "relative error",
        &[Series { label: "mode 0", points: first_mode, markers: true }],
        true,
        true,
    );
    ctx.out.svg_file("oracle.svg", &svg)?;
    Ok(checks)
}
