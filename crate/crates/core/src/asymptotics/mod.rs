//! Log-polynomial expansions: predicted exponent lattices, weighted
//! least-squares fitting with term detection, and the oracles built on them.

mod components;
mod lemmas;
mod zeta;

pub use components::{trace_component_ak, AkReport};
pub use lemmas::{ode_fund1, pushforward_fund2, LemmaReport};
pub use zeta::{mellin_head, zeta_continue, PoleReport, ZetaFunction, ZetaOptions};

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::traces::{TraceKind, TraceMeta, TraceSeries};

const LATTICE_TOL: f64 = 1e-9;

pub(crate) fn in_nat0(x: f64) -> bool {
    x > -LATTICE_TOL && (x - x.round()).abs() < LATTICE_TOL
}

pub(crate) fn same(a: f64, b: f64) -> bool {
    (a - b).abs() < LATTICE_TOL * (1.0 + a.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionKind {
    /// Powers of `t` as `t → 0⁺`.
    Heat,
    /// Powers of `λ` as `|λ| → ∞`.
    Resolvent,
}

/// An admissible exponent with the largest admissible log power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedTerm {
    pub gamma: f64,
    pub max_log: u32,
}

/// Exponent families with their log-power lattices, merged on collision.
///
/// Heat: `t^{(k-μ'-n)/μ}` (log if `k-μ'-n+β ∈ ℕ₀` or `(k-μ'-n)/μ ∈ ℕ₀`,
/// log² if both `(k-μ'-n)/μ ∈ ℕ₀` and `k-μ'-n+β ∈ ℕ₀`), `t^{(k-β)/μ}`
/// (log if `(k-β)/μ ∈ ℕ₀`), `t^k`; exponents up to `(k_max-μ'-n)/μ`.
/// Resolvent: the same families in `λ` with exponents negated and shifted
/// by `-N`, down to `(μ'+n-k_max)/μ - N`.
pub fn predict_terms(meta: &TraceMeta, kind: ExpansionKind, k_max: u32) -> Vec<PredictedTerm> {
    let TraceMeta { mu, mu_prime, beta, n, big_n } = *meta;
    let bound = (k_max as f64 - mu_prime - n) / mu;
    let mut raw: Vec<(f64, u32)> = Vec::new();
    let mut k = 0u32;
    loop {
        let kf = k as f64;
        let g1 = (kf - mu_prime - n) / mu;
        let g2 = (kf - beta) / mu;
        let g3 = kf;
        let mut any = false;
        if g1 <= bound + LATTICE_TOL {
            let v = kf - mu_prime - n;
            let log1 = in_nat0(v + beta) || in_nat0(v / mu);
            let log2 = in_nat0(v / mu) && in_nat0(v + beta);
            raw.push((g1, if log2 { 2 } else { log1 as u32 }));
            any = true;
        }
        if g2 <= bound + LATTICE_TOL {
            raw.push((g2, in_nat0(g2) as u32));
            any = true;
        }
        if g3 <= bound + LATTICE_TOL {
            raw.push((g3, 0));
            any = true;
        }
        if !any {
            break;
        }
        k += 1;
    }
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<PredictedTerm> = Vec::new();
    for (g, l) in raw {
        match merged.last_mut() {
            Some(last) if same(last.gamma, g) => last.max_log = last.max_log.max(l),
            _ => merged.push(PredictedTerm { gamma: g, max_log: l }),
        }
    }
    if kind == ExpansionKind::Resolvent {
        for t in merged.iter_mut() {
            t.gamma = -t.gamma - big_n as f64;
        }
        merged.reverse();
    }
    merged
}

/// `(γ, j)` columns for every admissible log power.
pub fn columns(terms: &[PredictedTerm]) -> Vec<(f64, u32)> {
    terms
        .iter()
        .flat_map(|t| (0..=t.max_log).map(move |j| (t.gamma, j)))
        .collect()
}

/// Drops the log columns above `gamma_max`; the rest of the lattice keeps
/// its pure powers.
pub fn logs_up_to(cols: Vec<(f64, u32)>, gamma_max: f64) -> Vec<(f64, u32)> {
    cols.into_iter().filter(|c| c.1 == 0 || c.0 <= gamma_max + 1e-12).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionTerm {
    pub gamma: f64,
    pub logpow: u32,
    pub coeff: Complex64,
    pub detected: bool,
    /// Residual ratio when the term is dropped from the selected model
    /// (or, for eliminated terms, at the time of elimination).
    pub inflation: f64,
}

#[derive(Debug, Clone)]
pub struct LogPolyExpansion {
    pub kind: ExpansionKind,
    /// Ray argument of the resolvent variable (zero for heat).
    pub arg: f64,
    pub terms: Vec<ExpansionTerm>,
    pub fit_window: (f64, f64),
    pub residual: f64,
    pub conditioning: f64,
}

impl LogPolyExpansion {
    pub fn term(&self, gamma: f64, logpow: u32) -> Option<&ExpansionTerm> {
        self.terms.iter().find(|t| same(t.gamma, gamma) && t.logpow == logpow)
    }

    pub fn detected(&self) -> impl Iterator<Item = &ExpansionTerm> {
        self.terms.iter().filter(|t| t.detected)
    }

    pub fn eval(&self, param: f64) -> Complex64 {
        let v = variable(self.kind, self.arg, param);
        self.terms.iter().map(|t| t.coeff * basis(v, t.gamma, t.logpow)).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("gamma,logpow,coeff_re,coeff_im,detected\n");
        for t in &self.terms {
            let _ = writeln!(s, "{},{},{:.17e},{:.17e},{}", t.gamma, t.logpow, t.coeff.re, t.coeff.im, t.detected);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub detection_ratio: f64,
    pub max_condition: f64,
    /// Residual floor used when computing inflation ratios.
    pub residual_floor: f64,
    pub samples_per_term: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            detection_ratio: 10.0,
            max_condition: 1e12,
            residual_floor: 1e-13,
            samples_per_term: 4,
        }
    }
}

fn variable(kind: ExpansionKind, arg: f64, param: f64) -> Complex64 {
    match kind {
        ExpansionKind::Heat => Complex64::new(param, 0.0),
        ExpansionKind::Resolvent => Complex64::from_polar(param, arg),
    }
}

/// `v^γ log^j v` on the principal branch.
fn basis(v: Complex64, gamma: f64, j: u32) -> Complex64 {
    let l = Complex64::new(v.norm().ln(), v.arg());
    (l * gamma).exp() * l.powu(j)
}

struct Solve {
    coeffs: Vec<Complex64>,
    residual: f64,
    condition: f64,
}

fn solve_weighted(points: &[(Complex64, Complex64)], cols: &[(f64, u32)]) -> Result<Solve> {
    let m = points.len();
    let k = cols.len();
    if k == 0 {
        // every weighted row of the empty model has unit residual
        return Ok(Solve { coeffs: vec![], residual: if m == 0 { 0.0 } else { 1.0 }, condition: 1.0 });
    }
    let mut a = DMatrix::<Complex64>::zeros(m, k);
    let mut b = DVector::<Complex64>::zeros(m);
    for (i, (v, y)) in points.iter().enumerate() {
        let w = 1.0 / y.norm().max(f64::MIN_POSITIVE);
        for (c, &(g, j)) in cols.iter().enumerate() {
            a[(i, c)] = basis(*v, g, j) * w;
        }
        b[i] = y * w;
    }
    let scales: Vec<f64> = (0..k).map(|c| a.column(c).norm().max(f64::MIN_POSITIVE)).collect();
    for (c, s) in scales.iter().enumerate() {
        a.column_mut(c).unscale_mut(*s);
    }
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let x = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::Config(format!("least squares failed: {e}")))?;
    let r = &a * &x - &b;
    let residual = (r.norm_squared() / m as f64).sqrt();
    let coeffs = (0..k).map(|c| x[c] / scales[c]).collect();
    Ok(Solve { coeffs, residual, condition })
}

fn window_points(series: &TraceSeries, window: (f64, f64)) -> Vec<(Complex64, Complex64)> {
    series
        .restrict(window.0, window.1)
        .samples
        .iter()
        .map(|s| (series.variable(s.param), s.value))
        .collect()
}

fn kind_of(series: &TraceSeries) -> (ExpansionKind, f64) {
    match series.kind {
        TraceKind::Heat => (ExpansionKind::Heat, 0.0),
        TraceKind::Resolvent { arg } => (ExpansionKind::Resolvent, arg),
    }
}

/// Relatively weighted least squares on columns `v^γ log^j v` with backward
/// elimination: the column whose removal inflates the residual least is
/// dropped while the residual stays below the detection ratio times the
/// residual of the full design. Surviving
/// columns are the detected terms and carry the coefficients of the final
/// fit; dropped columns keep their inflation at removal and a zero coefficient.
pub fn fit_expansion(
    series: &TraceSeries,
    cols: &[(f64, u32)],
    window: (f64, f64),
    opts: &FitOptions,
) -> Result<LogPolyExpansion> {
    let points = window_points(series, window);
    fit_points(&points, kind_of(series), cols, window, opts)
}

pub(crate) fn fit_points(
    points: &[(Complex64, Complex64)],
    (kind, arg): (ExpansionKind, f64),
    cols: &[(f64, u32)],
    window: (f64, f64),
    opts: &FitOptions,
) -> Result<LogPolyExpansion> {
    let mut cols: Vec<(f64, u32)> = cols.to_vec();
    cols.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    for w in cols.windows(2) {
        if same(w[0].0, w[1].0) && w[0].1 == w[1].1 {
            return Err(Error::Config(format!("duplicate term ({}, {})", w[0].0, w[0].1)));
        }
    }
    let required = opts.samples_per_term * cols.len().max(1);
    if points.len() < required {
        return Err(Error::TooFewSamples { required, got: points.len() });
    }
    let full = solve_weighted(points, &cols)?;
    if !(full.condition <= opts.max_condition) {
        return Err(Error::IllConditioned { condition: full.condition });
    }
    let condition = full.condition;
    let mut active: Vec<usize> = (0..cols.len()).collect();
    let mut inflation = vec![0.0; cols.len()];
    let base = full.residual.max(opts.residual_floor);
    let mut current = full;
    while !active.is_empty() {
        let mut ratios = Vec::with_capacity(active.len());
        for &i in &active {
            let reduced: Vec<(f64, u32)> = active.iter().filter(|&&c| c != i).map(|&c| cols[c]).collect();
            ratios.push(solve_weighted(points, &reduced)?.residual / base);
        }
        let (weakest, ratio) = ratios
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |b, (p, &r)| if r < b.1 { (p, r) } else { b });
        if ratio >= opts.detection_ratio {
            for (p, &i) in active.iter().enumerate() {
                inflation[i] = ratios[p];
            }
            break;
        }
        inflation[active[weakest]] = ratio;
        active.remove(weakest);
        let kept: Vec<(f64, u32)> = active.iter().map(|&c| cols[c]).collect();
        current = solve_weighted(points, &kept)?;
    }
    let terms = cols
        .iter()
        .enumerate()
        .map(|(i, &(g, j))| {
            let pos = active.iter().position(|&c| c == i);
            ExpansionTerm {
                gamma: g,
                logpow: j,
                coeff: pos.map_or(Complex64::new(0.0, 0.0), |p| current.coeffs[p]),
                detected: pos.is_some(),
                inflation: inflation[i],
            }
        })
        .collect();
    Ok(LogPolyExpansion {
        kind,
        arg,
        terms,
        fit_window: window,
        residual: current.residual,
        conditioning: condition,
    })
}

/// Fits with a free leading exponent `γ₀ ∈ bracket` (golden-section search
/// on the residual) followed by the fixed columns `rest`.
pub fn fit_free_leading(
    series: &TraceSeries,
    rest: &[(f64, u32)],
    window: (f64, f64),
    bracket: (f64, f64),
    opts: &FitOptions,
) -> Result<(f64, LogPolyExpansion)> {
    let points = window_points(series, window);
    let kind = kind_of(series);
    let resid = |g: f64| -> f64 {
        let mut cols = vec![(g, 0)];
        cols.extend(rest.iter().copied().filter(|t| !same(t.0, g) || t.1 != 0));
        solve_weighted(&points, &cols).map(|s| s.residual).unwrap_or(f64::INFINITY)
    };
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = bracket;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (resid(c), resid(d));
    while b - a > 1e-10 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = resid(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = resid(d);
        }
    }
    let g = 0.5 * (a + b);
    let mut cols = vec![(g, 0)];
    cols.extend(rest.iter().copied().filter(|t| !same(t.0, g) || t.1 != 0));
    let fit = fit_points(&points, kind, &cols, window, opts)?;
    Ok((g, fit))
}
