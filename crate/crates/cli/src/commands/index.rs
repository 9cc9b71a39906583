use std::fmt::Write as _;

use cone_spectral::coneop::{ConeOperator, Verdict, XPerturbation};
use cone_spectral::index::{
    argument_census, eta_term, index_assemble, invariance_red_to_const, invariance_red_to_sobolev, mckean_singer,
    Factorization, MellinPerturbation,
};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Context, Run};
use crate::output::Check;

/// McKean–Singer supertraces, the eta term, their assembly, and the two
/// invariance sweeps.
pub fn index(ctx: &mut Context) -> Run {
    let cfg = ctx.cfg;
    let mut checks = Vec::new();

    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let b = DMatrix::from_fn(cfg.ms_rows, cfg.ms_cols, |_, _| rng.random_range(-1.0..1.0));
    let st = mckean_singer(&b, &cfg.ms_times);
    let mut s = String::from("t,supertrace\n");
    for (t, v) in cfg.ms_times.iter().zip(&st) {
        let _ = writeln!(s, "{t},{v:.15e}");
    }
    ctx.out.csv("mckean_singer.csv", &s)?;
    let expected = cfg.ms_cols as f64 - cfg.ms_rows as f64;
    let spread = st.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - st.iter().cloned().fold(f64::INFINITY, f64::min);
    let off = st.iter().map(|v| (v - expected).abs()).fold(0.0, f64::max);
    checks.push(Check::bool(
        "supertrace_constant",
        format!("spread {spread:.3e} offset {off:.3e}"),
        format!("spread and offset from {expected} <= {:e}", ctx.tol.supertrace_spread),
        spread <= ctx.tol.supertrace_spread && off <= ctx.tol.supertrace_spread,
    ));

    let h = MellinPerturbation::rank_one(cfg.eta_c, cfg.eta_b, cfg.eta_weight)?;
    let eta = eta_term(&h, cfg.eta_r_max, 0.0)?;
    let census = argument_census(&h)?;
    let s = format!(
        "eta,imag,quad_error,tail_bound,winding,poles_below,zeros_below\n{:.15e},{:.3e},{:.3e},{:.3e},{},{},{}\n",
        eta.eta, eta.imag, eta.quad_error, eta.tail_bound, census.winding, census.poles_below, census.zeros_below
    );
    ctx.out.csv("eta.csv", &s)?;
    let dist = (eta.eta - census.winding as f64).abs();
    checks.push(Check::bool(
        "eta_matches_census",
        format!("{:.9} vs {}", eta.eta, census.winding),
        format!("|eta - winding| <= {:e}", ctx.tol.integer),
        dist <= ctx.tol.integer,
    ));

    let f = Factorization {
        b,
        h,
        t_window: (0.1, 10.0),
        r_max: cfg.eta_r_max,
    };
    let rep = index_assemble(&f)?;
    ctx.out.csv("index.csv", &rep.to_csv())?;
    let assembled = if rep.verdict == Verdict::Undecided {
        Verdict::Undecided
    } else {
        Verdict::from_bool(rep.integer_distance <= ctx.tol.integer && rep.flags.is_empty())
    };
    checks.push(Check::new(
        "index_integer",
        format!("{:.9} flags [{}]", rep.index, rep.flags.join(" ")),
        format!("integer within {:e}, no flags", ctx.tol.integer),
        assembled,
    ));

    let perturbed = ConeOperator {
        x_perturbation: Some(XPerturbation { coeffs: vec![vec![cfg.perturbation]] }),
        ..ConeOperator::laplace_type(cfg.dimension, cfg.a, cfg.index_mode_max)
    };
    let rc = invariance_red_to_const(&perturbed, cfg.index_s_min, cfg.index_npoints, &cfg.taus, cfg.eps)?;
    let mut s = String::from("tau,ratio\n");
    for (t, r) in rc.taus.iter().zip(&rc.ratios) {
        let _ = writeln!(s, "{t:e},{r:.12e}");
    }
    ctx.out.csv("red_to_const.csv", &s)?;
    checks.push(Check::bool(
        "graph_norm_decay",
        rc.slope.map_or("n/a".to_string(), |v| format!("{v:.6}")),
        format!("slope >= {:.2}", 1.0 - cfg.eps - 0.1),
        rc.pass,
    ));

    let sob = invariance_red_to_sobolev(&perturbed, cfg.sobolev_s_min, cfg.sobolev_npoints, &cfg.sobolev_eps)?;
    let mut s = String::from("eps,kernel_dim,cokernel_dim,min_rel_sv,crosses,margin,verdict\n");
    for r in &sob.rows {
        let _ = writeln!(
            s,
            "{},{},{},{:.3e},{},{},{:?}",
            r.eps, r.kernel_dim, r.cokernel_dim, r.min_rel_sv, r.crosses, sob.margin, r.verdict
        );
    }
    ctx.out.csv("sobolev.csv", &s)?;
    checks.push(Check::new("sobolev_invariance", sob.consistent, format!("dimensions constant for eps < {}", sob.margin), sob.verdict));
    Ok(checks)
}
