use std::fmt::Write as _;

use cone_spectral::asymptotics::{ode_fund1, pushforward_fund2, trace_component_ak, FitOptions};
use cone_spectral::indexsets::{compose_family, IndexFamily4, IndexSet};
use cone_spectral::numeric::quad::{integrate_real, QuadOptions};
use cone_spectral::numeric::smooth::cutoff_one_near_zero;
use cone_spectral::sector::Sector;
use cone_spectral::symbols::{homog_expand, resolvent_symbol, seminorm_check, Expr, ParamSymbol, SeminormGrid, SymbolOrders};
use cone_spectral::traces::log_grid;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Context, Run};
use crate::output::Check;

const CUTOFF: f64 = 3.0;

fn random_set(rng: &mut ChaCha8Rng) -> IndexSet {
    let count = rng.random_range(0..4);
    let entries: Vec<(Complex64, u32)> = (0..count)
        .map(|_| {
            let re = rng.random_range(0..=6) as f64 * 0.5;
            let im = [0.0, 0.0, 0.5, -0.5][rng.random_range(0..4)];
            (Complex64::new(re, im), rng.random_range(0..=2))
        })
        .collect();
    IndexSet::from_entries(entries, CUTOFF, false)
}

fn subset(a: &IndexSet, b: &IndexSet) -> bool {
    a.entries().iter().all(|e| b.contains(e.z, e.k))
}

type Law = (&'static str, fn(&IndexSet, &IndexSet, &IndexSet) -> bool);

fn laws() -> Vec<Law> {
    vec![
        ("extended_union_commutes", |e, f, _| e.extended_union(f).unwrap() == f.extended_union(e).unwrap()),
        ("extended_union_associates", |e, f, g| {
            e.extended_union(&f.extended_union(g).unwrap()).unwrap() == e.extended_union(f).unwrap().extended_union(g).unwrap()
        }),
        ("union_below_extended_union", |e, f, _| subset(&e.union(f).unwrap(), &e.extended_union(f).unwrap())),
        ("sum_commutes", |e, f, _| e.sum(f).unwrap() == f.sum(e).unwrap()),
        ("sum_associates", |e, f, g| e.sum(&f.sum(g).unwrap()).unwrap() == e.sum(f).unwrap().sum(g).unwrap()),
        ("sum_distributes_over_union", |e, f, g| {
            e.sum(&f.union(g).unwrap()).unwrap() == e.sum(f).unwrap().union(&e.sum(g).unwrap()).unwrap()
        }),
        ("text_round_trip", |e, _, _| IndexSet::from_text(&e.to_text()).unwrap() == *e),
        ("compose_with_empty", |e, f, g| {
            let a = IndexFamily4 { lb: e.clone(), rb: f.clone(), ff: g.clone(), fi: None };
            let c = compose_family(&a, &IndexFamily4::empty(CUTOFF)).unwrap();
            c.lb == *e && c.rb.is_empty() && c.ff.is_empty() && c.fi.is_none()
        }),
    ]
}

fn index_set_laws(ctx: &mut Context, rng: &mut ChaCha8Rng) -> Run {
    let triples: Vec<[IndexSet; 3]> = (0..ctx.cfg.verify_cases)
        .map(|_| [random_set(rng), random_set(rng), random_set(rng)])
        .collect();
    let mut s = String::from("law,cases,failures\n");
    let mut checks = Vec::new();
    for (name, law) in laws() {
        let failures = triples.iter().filter(|t| !law(&t[0], &t[1], &t[2])).count();
        let _ = writeln!(s, "{name},{},{failures}", triples.len());
        checks.push(Check::bool(name, failures, "0 failures", failures == 0));
    }
    ctx.out.csv("indexset_laws.csv", &s)?;
    Ok(checks)
}

fn symbol_suite(ctx: &mut Context) -> Run {
    let sector = Sector::left_half_plane();
    let s = resolvent_symbol(&Expr::norm_pow(2.0), &Expr::one(), 1, &sector, 1, 0.5)?;
    let grid = SeminormGrid::for_sector(&sector);
    let good = seminorm_check(&s, 2, 2, &grid)?;
    let wrong = s.with_orders(SymbolOrders { mu: -3.0, p: -2.0, d: 2.0 });
    let bad = seminorm_check(&wrong, 2, 2, &grid)?;
    ctx.out.csv("seminorms.csv", &good.to_csv())?;
    ctx.out.csv("seminorms_misdeclared.csv", &bad.to_csv())?;
    Ok(vec![
        Check::bool("resolvent_symbol_class", good.pass, "seminorms bounded for |alpha|, |beta| <= 2", good.pass),
        Check::bool(
            "misdeclared_order_fails",
            format!("{:.4}", bad.max_slope()),
            "fails with growth slope >= 0.9",
            !bad.pass && bad.max_slope() >= 0.9,
        ),
    ])
}

fn phi(x: f64) -> f64 {
    cutoff_one_near_zero(x, 1.0 / 3.0, 2.0 / 3.0)
}

/// `∫_{1/3}^{1} φ(s) s^p ds`.
fn c_int(p: f64) -> f64 {
    integrate_real(|s| phi(s) * s.powf(p), 1.0 / 3.0, 1.0, QuadOptions::with_tol(1e-15, 1e-13))
        .map(|r| r.0)
        .unwrap_or(f64::NAN)
}

fn lemma_suite(ctx: &mut Context, rng: &mut ChaCha8Rng) -> Run {
    let tol = ctx.tol.lemma_coeff;
    let grid = log_grid(1e-4, 0.1, 40);
    let opts = FitOptions::default();
    let mut s = String::from("case,a,b,coincident,contained,log_detected,coeff_error\n");
    let mut failures = 0;
    for case in 0..ctx.cfg.lemma_cases {
        let a = rng.random_range(1..20) as f64 / 10.0;
        let coincident = case % 4 == 0;
        let b = if coincident {
            a
        } else {
            let mut b = a;
            while (b - a).abs() < 0.1 {
                b = rng.random_range(1..20) as f64 / 10.0;
            }
            b
        };
        let u = move |x: f64, y: f64| phi(x) * phi(y) * x.powf(a) * y.powf(b);
        let r = pushforward_fund2(
            &u,
            &IndexSet::from_real(&[(a, 0)], CUTOFF),
            &IndexSet::from_real(&[(b, 0)], CUTOFF),
            &grid,
            &opts,
        )?;
        let log_detected = r.expansion.detected().any(|t| t.logpow > 0);
        let err = if coincident {
            let lc = r.expansion.term(a, 1).map_or(f64::NAN, |t| t.coeff.re);
            let c0 = r.expansion.term(a, 0).map_or(f64::NAN, |t| t.coeff.re);
            (lc + 1.0).abs().max((c0 - (2.0 * c_int(-1.0) - 2.0 * 3f64.ln())).abs())
        } else {
            let d = b - a;
            let ca = (1.0f64 / 3.0).powf(d) / d + c_int(d - 1.0);
            let cb = c_int(-d - 1.0) - 3f64.powf(d) / d;
            let ta = r.expansion.term(a, 0).map_or(f64::NAN, |t| t.coeff.re);
            let tb = r.expansion.term(b, 0).map_or(f64::NAN, |t| t.coeff.re);
            ((ta - ca).abs() / ca.abs()).max((tb - cb).abs() / cb.abs())
        };
        let ok = r.pass && log_detected == coincident && err <= tol;
        failures += usize::from(!ok);
        let _ = writeln!(s, "{case},{a},{b},{coincident},{},{log_detected},{err:.3e}", r.pass);
    }
    let mut checks = vec![Check::bool("pushforward_cases", failures, "0 failures", failures == 0)];

    // f = x^a log x + C x^a solves (x∂_x - a) f = x^a near 0
    let a = 0.6;
    let g = move |x: f64| phi(x) * x.powf(a);
    let r = ode_fund1(&g, &IndexSet::from_real(&[(a, 0)], CUTOFF), a, &grid, &opts)?;
    let lc = r.expansion.term(a, 1).map_or(f64::NAN, |t| t.coeff.re);
    let c0 = r.expansion.term(a, 0).map_or(f64::NAN, |t| t.coeff.re);
    let c_explicit = 3f64.ln() - integrate_real(|y| phi(y) / y, 1.0 / 3.0, 1.0, QuadOptions::with_tol(1e-15, 1e-13))?.0;
    let err = (lc - 1.0).abs().max((c0 - c_explicit).abs());
    let _ = writeln!(s, "ode,{a},{a},true,{},true,{err:.3e}", r.pass);
    ctx.out.csv("lemmas.csv", &s)?;
    checks.push(Check::bool("ode_resonant", format!("log coeff {lc:.10}"), format!("explicit solution within {tol:e}"), r.pass && err <= tol));
    Ok(checks)
}

fn ak_suite(ctx: &mut Context) -> Run {
    let s = ParamSymbol::from_expr(
        (Expr::norm_pow(2.0) - Expr::lambda()).pow(-2),
        SymbolOrders { mu: -4.0, p: -4.0, d: 2.0 },
        1,
        0.5,
    );
    let a0 = homog_expand(&s, 1)?.components.remove(0);
    let grid = log_grid(1e-3, 1e-1, 48);
    let r = trace_component_ak(&a0, 0.5, &grid, 2.0, 2, 0.0, 1, 0, &FitOptions::default())?;
    let c3 = r.expansion.term(3.0, 0).map_or(f64::NAN, |t| t.coeff.re);
    ctx.out.csv(
        "ak.csv",
        &format!(
            "identity_residual,gamma,coeff_z3,oracle_z3,contained\n{:.3e},{},{c3:.12e},0.25,{}\n",
            r.identity_residual, r.gamma, r.pass
        ),
    )?;
    Ok(vec![
        Check::bool(
            "ak_identity",
            format!("{:.3e}", r.identity_residual),
            format!("residual <= {:e}", ctx.tol.identity),
            r.identity_residual <= ctx.tol.identity,
        ),
        Check::bool(
            "ak_expansion",
            format!("{c3:.10}"),
            format!("contained; z^3 coefficient 1/4 within {:e}", ctx.tol.lemma_coeff),
            r.pass && (c3 - 0.25).abs() <= ctx.tol.lemma_coeff,
        ),
    ])
}

/// Property suite: index-set laws, symbol seminorms, lemma oracles, and the
/// `A_k` identity.
pub fn verify(ctx: &mut Context) -> Run {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut checks = index_set_laws(ctx, &mut rng)?;
    checks.extend(symbol_suite(ctx)?);
    checks.extend(lemma_suite(ctx, &mut rng)?);
    checks.extend(ak_suite(ctx)?);
    Ok(checks)
}
