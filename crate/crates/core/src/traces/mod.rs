//! Heat traces, weighted heat traces, resolvent-power traces and complex
//! power sums from eigenvalue data, with Weyl-tail truncation control.

mod weights;

pub use weights::{CutoffProfile, WeightOperator, WeightedSpectrum};

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::coneop::{tail_with_bound, Discretization, SpectralData};
use crate::error::{Error, Result};
use crate::numeric::quad::{integrate, QuadOptions};

/// Largest admissible ratio of truncation bound to trace value.
pub const TAIL_REL_TOL: f64 = 0.01;
/// Largest share of a sample that may come from the extrapolated tail.
pub const TAIL_SHARE_MAX: f64 = 0.5;

/// Order bookkeeping `(μ, μ', β, n, N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceMeta {
    pub mu: f64,
    pub mu_prime: f64,
    pub beta: f64,
    pub n: f64,
    pub big_n: u32,
}

impl TraceMeta {
    pub fn new(mu: f64, n: f64, b: &WeightOperator, big_n: u32) -> Self {
        TraceMeta {
            mu,
            mu_prime: b.mu_prime,
            beta: b.beta,
            n,
            big_n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceKind {
    /// Parameter is `t > 0`.
    Heat,
    /// Parameter is `|λ|` with `λ = |λ| e^{i arg}`.
    Resolvent { arg: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub param: f64,
    pub value: Complex64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone)]
pub struct TraceSeries {
    pub kind: TraceKind,
    pub meta: TraceMeta,
    pub samples: Vec<TraceSample>,
}

impl TraceSeries {
    /// The expansion variable at a sample: `t`, or `λ` on the ray.
    pub fn variable(&self, param: f64) -> Complex64 {
        match self.kind {
            TraceKind::Heat => Complex64::new(param, 0.0),
            TraceKind::Resolvent { arg } => Complex64::from_polar(param, arg),
        }
    }

    pub fn restrict(&self, lo: f64, hi: f64) -> Self {
        TraceSeries {
            samples: self
                .samples
                .iter()
                .filter(|s| s.param >= lo * (1.0 - 1e-12) && s.param <= hi * (1.0 + 1e-12))
                .copied()
                .collect(),
            ..self.clone()
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("param,value_re,value_im,tail_bound\n");
        for p in &self.samples {
            let _ = writeln!(s, "{:.17e},{:.17e},{:.17e},{:.6e}", p.param, p.value.re, p.value.im, p.tail_bound);
        }
        s
    }
}

/// `n` log-spaced points in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn weighted_sum(ws: &WeightedSpectrum, f: impl Fn(f64) -> Complex64) -> Complex64 {
    // ascending magnitude for the heat kernel; plain order otherwise
    ws.eigenvalues
        .iter()
        .zip(&ws.weights)
        .rev()
        .map(|(&l, &w)| f(l) * w)
        .sum()
}

fn checked_sample(
    ws: &WeightedSpectrum,
    param: f64,
    f: impl Fn(f64) -> Complex64 + Clone,
    required_cutoff: f64,
) -> Result<TraceSample> {
    let head = weighted_sum(ws, f.clone());
    let tail = tail_with_bound(&ws.counting_points(), ws.cutoff, f)?;
    let value = head + tail.value;
    let limit = TAIL_REL_TOL * value.norm();
    if !(tail.bound <= limit && tail.value.norm() <= TAIL_SHARE_MAX * value.norm()) {
        return Err(Error::InsufficientSpectrum {
            param,
            tail: tail.bound.max(tail.value.norm()),
            required_cutoff,
        });
    }
    Ok(TraceSample {
        param,
        value,
        tail_bound: tail.bound,
    })
}

/// `Tr e^{-tA} = Σ_j e^{-tλ_j}` plus the fitted tail.
pub fn heat_trace(spec: &SpectralData, t_grid: &[f64], n: f64, mu: f64) -> Result<TraceSeries> {
    let ws = WeightedSpectrum::unweighted(spec);
    weighted_heat_trace(&ws, &WeightOperator::identity(), t_grid, n, mu)
}

/// `Tr B e^{-tA} = Σ_j e^{-tλ_j} ⟨B u_j, u_j⟩` plus the fitted tail.
pub fn weighted_heat_trace(
    ws: &WeightedSpectrum,
    b: &WeightOperator,
    t_grid: &[f64],
    n: f64,
    mu: f64,
) -> Result<TraceSeries> {
    let mut samples = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if !(t > 0.0) {
            return Err(Error::Config(format!("heat parameter must be positive, got {t}")));
        }
        let f = move |l: f64| Complex64::new((-t * l).exp(), 0.0);
        samples.push(checked_sample(ws, t, f, 10.0 / t)?);
    }
    Ok(TraceSeries {
        kind: TraceKind::Heat,
        meta: TraceMeta::new(mu, n, b, 0),
        samples,
    })
}

fn trace_class_check(meta: &TraceMeta) -> Result<()> {
    let margin = meta.big_n as f64 * meta.mu - meta.mu_prime;
    if !(margin > meta.n) {
        return Err(Error::NotTraceClass { margin, n: meta.n });
    }
    Ok(())
}

fn conditioning_check(ws: &WeightedSpectrum, lambda: Complex64) -> Result<()> {
    let distance = ws
        .eigenvalues
        .iter()
        .map(|&e| (Complex64::new(e, 0.0) - lambda).norm())
        .fold(f64::INFINITY, f64::min);
    if distance < 1e-8 * (1.0 + lambda.norm()) {
        return Err(Error::Conditioning { lambda, distance });
    }
    Ok(())
}

/// `Tr B(A-λ)^{-N}` along the ray `λ = r e^{i arg}`.
pub fn resolvent_power_trace(
    ws: &WeightedSpectrum,
    meta: TraceMeta,
    arg: f64,
    radii: &[f64],
) -> Result<TraceSeries> {
    trace_class_check(&meta)?;
    let big_n = meta.big_n as i32;
    let mut samples = Vec::with_capacity(radii.len());
    for &r in radii {
        let lambda = Complex64::from_polar(r, arg);
        conditioning_check(ws, lambda)?;
        let f = move |l: f64| (Complex64::new(l, 0.0) - lambda).powi(-big_n);
        samples.push(checked_sample(ws, r, f, 100.0 * r.max(ws.cutoff))?);
    }
    Ok(TraceSeries {
        kind: TraceKind::Resolvent { arg },
        meta,
        samples,
    })
}

/// `Tr B(A_h-λ)^{-N}` of the discretized operator from `N` repeated
/// resolvent solves per unit vector (no eigen-decomposition).
pub fn resolvent_power_trace_solves(
    disc: &Discretization,
    b: &WeightOperator,
    big_n: u32,
    lambda: Complex64,
) -> Result<Complex64> {
    let x = disc.x_grid();
    let n = x.len();
    let mut total = Complex64::new(0.0, 0.0);
    for mm in &disc.modes {
        let mf = b.mode_factor(mm.m);
        for i in 0..n {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v[i] = Complex64::new(1.0, 0.0);
            for _ in 0..big_n {
                v = disc.resolvent_solve(mm, lambda, &v)?;
            }
            total += v[i] * mf * b.multiplier(x[i]);
        }
    }
    Ok(total)
}

/// Contour `Υ = a + {arg = ±δ}`, counter-clockwise around the spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub a: f64,
    pub delta: f64,
    pub big_n: u32,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec {
            a: -1.0,
            delta: std::f64::consts::FRAC_PI_4,
            big_n: 2,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ContourResult {
    pub value: Complex64,
    pub quad_error: f64,
    /// Contribution of the last ray segment before truncation.
    pub remainder: f64,
    pub radius: f64,
}

/// `e^{-tA}` trace as `(i/2π) (N-1)!/t^{N-1} ∫_Υ e^{-tλ} Tr B(A-λ)^{-N} dλ`,
/// with the resolvent trace taken from the weighted eigenvalue list.
pub fn heat_trace_contour(ws: &WeightedSpectrum, t: f64, contour: ContourSpec) -> Result<ContourResult> {
    if contour.big_n < 1 || !(contour.a < 0.0) || !(contour.delta > 0.0 && contour.delta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Config(format!("invalid contour {contour:?}")));
    }
    if ws.eigenvalues.first().is_some_and(|&e| e <= contour.a) {
        return Err(Error::Config("contour vertex must lie left of the spectrum".into()));
    }
    let big_n = contour.big_n as i32;
    let tr = |lambda: Complex64| -> Complex64 {
        ws.eigenvalues
            .iter()
            .zip(&ws.weights)
            .map(|(&e, &w)| (Complex64::new(e, 0.0) - lambda).powi(-big_n) * w)
            .sum()
    };
    let ray = |sign: f64| -> Result<(Complex64, f64, f64, f64)> {
        let dir = Complex64::from_polar(1.0, sign * contour.delta);
        let f = |r: f64| {
            let lambda = contour.a + dir * r;
            (-t * lambda).exp() * tr(lambda) * dir
        };
        let opts = QuadOptions::with_tol(1e-300, 1e-11);
        let mut total = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        let mut lo = 0.0;
        let mut hi = 1.0;
        loop {
            let seg = integrate(f, lo, hi, opts)?;
            total += seg.value;
            err += seg.error;
            if seg.value.norm() < 1e-12 * total.norm() && hi * t * contour.delta.cos() > 30.0 {
                return Ok((total, err, seg.value.norm(), hi));
            }
            if hi > 1e12 {
                return Err(Error::Quadrature { estimate: total, error: seg.value.norm() });
            }
            lo = hi;
            hi *= 2.0;
        }
    };
    let (lower, e1, r1, h1) = ray(-1.0)?;
    let (upper, e2, r2, h2) = ray(1.0)?;
    let integral = lower - upper;
    let factorial: f64 = (1..contour.big_n).map(|k| k as f64).product();
    let pref = Complex64::new(0.0, 1.0 / (2.0 * std::f64::consts::PI)) * factorial / t.powi(big_n - 1);
    let scale = pref.norm();
    Ok(ContourResult {
        value: pref * integral,
        quad_error: scale * (e1 + e2),
        remainder: scale * (r1 + r2),
        radius: h1.max(h2),
    })
}

/// `Σ_j λ_j^z` plus the fitted tail; needs `Re z < -n/μ - 1/2`.
pub fn complex_power_sum(spec: &SpectralData, z: Complex64, n: f64, mu: f64, rel_tol: f64) -> Result<Complex64> {
    if !(z.re < -n / mu - 0.5) {
        return Err(Error::Config(format!("power sum needs Re z < {}, got {z}", -n / mu - 0.5)));
    }
    let ws = WeightedSpectrum::unweighted(spec);
    let f = move |l: f64| Complex64::new(l, 0.0).powc(z);
    let head = weighted_sum(&ws, f);
    let tail = tail_with_bound(&ws.counting_points(), ws.cutoff, f)?;
    let value = head + tail.value;
    if !(tail.bound <= rel_tol * value.norm()) {
        return Err(Error::InsufficientSpectrum {
            param: z.re,
            tail: tail.bound,
            required_cutoff: ws.cutoff * 4.0,
        });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coneop::{discretize, ConeOperator, Provenance};
    use crate::coneop::ModeSpectrum;

    /// Single mode with eigenvalues `(kπ)²` below the cutoff.
    fn theta_spec(cutoff: f64) -> SpectralData {
        let pi = std::f64::consts::PI;
        let e: Vec<f64> = (1..).map(|k| (k as f64 * pi).powi(2)).take_while(|&e| e < cutoff).collect();
        SpectralData {
            modes: vec![ModeSpectrum { m: 0, nu: 0.5, scale: 1.0, eigenvalues: e }],
            cutoff,
            provenance: Provenance::Oracle,
            truncation_bound: None,
        }
    }

    #[test]
    fn theta_partial_sums() {
        let sd = theta_spec(4e4);
        let ts = heat_trace(&sd, &[0.01, 0.1], 1.0, 2.0).unwrap();
        for s in &ts.samples {
            let exact: f64 = (1..2000).map(|k| (-s.param * (k as f64 * std::f64::consts::PI).powi(2)).exp()).sum();
            assert!((s.value.re - exact).abs() < 1e-12, "{} {}", s.value.re, exact);
        }
        // Jacobi transformation as an independent closed form
        let t: f64 = 0.01;
        let dual: f64 = (1..50).map(|k| (-(k as f64).powi(2) / t).exp()).sum();
        let jacobi = 0.5 * ((1.0 / (std::f64::consts::PI * t)).sqrt() * (1.0 + 2.0 * dual) - 1.0);
        assert!((ts.samples[0].value.re - jacobi).abs() < 1e-12);
    }

    #[test]
    fn heat_trace_monotone_and_refuses_small_t() {
        let sd = theta_spec(1e4);
        let grid = log_grid(0.005, 10.0, 30);
        let ts = heat_trace(&sd, &grid, 1.0, 2.0).unwrap();
        for w in ts.samples.windows(2) {
            assert!(w[1].value.re < w[0].value.re && w[1].value.re > 0.0);
        }
        match heat_trace(&sd, &[1e-6], 1.0, 2.0) {
            Err(Error::InsufficientSpectrum { required_cutoff, .. }) => assert!(required_cutoff > 1e6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zeta_four_closed_form() {
        let sd = theta_spec(1e6);
        let v = complex_power_sum(&sd, Complex64::new(-2.0, 0.0), 1.0, 2.0, 1e-6).unwrap();
        assert!((v.re - 1.0 / 90.0).abs() < 1e-12);
        assert!(complex_power_sum(&sd, Complex64::new(-0.9, 0.0), 1.0, 2.0, 1e-6).is_err());
        let far = complex_power_sum(&sd, Complex64::new(-40.0, 0.0), 1.0, 2.0, 1e-6).unwrap();
        let first = sd.modes[0].eigenvalues[0].powf(-40.0);
        assert!((far.re / first - 1.0).abs() < 1e-10);
    }

    #[test]
    fn identity_weight_reduces_to_heat_trace() {
        let op = ConeOperator::laplace_type(2, 1.5, 0);
        let sd = SpectralData::from_bessel(&op, 3000.0).unwrap();
        let a = heat_trace(&sd, &[0.01], 2.0, 2.0).unwrap();
        let ws = WeightedSpectrum::bessel(&sd, &WeightOperator::identity()).unwrap();
        let b = weighted_heat_trace(&ws, &WeightOperator::identity(), &[0.01], 2.0, 2.0).unwrap();
        assert_eq!(a.samples[0].value, b.samples[0].value);
        let ws = WeightedSpectrum::bessel(&sd, &WeightOperator::singular_cutoff(1.0)).unwrap();
        let c = weighted_heat_trace(&ws, &WeightOperator::singular_cutoff(1.0), &log_grid(0.01, 1.0, 5), 2.0, 2.0).unwrap();
        assert!(c.samples.iter().all(|s| s.value.re > 0.0));
    }

    #[test]
    fn resolvent_trace_formula_and_solves() {
        let op = ConeOperator::laplace_type(2, 1.5, 1);
        let disc = discretize(&op, -8.0, 120).unwrap();
        let b = WeightOperator::singular_cutoff(1.0);
        let ws = WeightedSpectrum::discrete(&disc, &b, f64::INFINITY);
        let lambda = Complex64::new(-30.0, 5.0);
        let direct: Complex64 = ws
            .eigenvalues
            .iter()
            .zip(&ws.weights)
            .map(|(&e, &w)| (Complex64::new(e, 0.0) - lambda).powi(-2) * w)
            .sum();
        let solves = resolvent_power_trace_solves(&disc, &b, 2, lambda).unwrap();
        assert!((direct - solves).norm() < 1e-10 * direct.norm(), "{direct} {solves}");
    }

    #[test]
    fn trace_class_is_enforced() {
        let sd = theta_spec(1e4);
        let ws = WeightedSpectrum::unweighted(&sd);
        let meta = TraceMeta { mu: 2.0, mu_prime: 0.0, beta: 0.0, n: 2.0, big_n: 1 };
        assert!(matches!(
            resolvent_power_trace(&ws, meta, std::f64::consts::PI, &[10.0]),
            Err(Error::NotTraceClass { .. })
        ));
        let meta = TraceMeta { big_n: 2, n: 1.0, ..meta };
        let ts = resolvent_power_trace(&ws, meta, std::f64::consts::PI, &[10.0, 100.0]).unwrap();
        let exact: f64 = (1..100000).map(|k| ((k as f64 * std::f64::consts::PI).powi(2) + 10.0).powi(-2)).sum();
        assert!((ts.samples[0].value.re - exact).abs() <= ts.samples[0].tail_bound);
        assert!(ts.samples[0].tail_bound < 1e-5 * exact);
        assert!(matches!(
            resolvent_power_trace(&ws, meta, 0.0, &[std::f64::consts::PI.powi(2)]),
            Err(Error::Conditioning { .. })
        ));
    }

    #[test]
    fn contour_matches_eigen_sum_for_several_orders() {
        let sd = theta_spec(2e4);
        let ws = WeightedSpectrum::unweighted(&sd);
        let t = 0.01;
        let direct = heat_trace(&sd, &[t], 1.0, 2.0).unwrap().samples[0].value.re;
        let head: f64 = sd.modes[0].eigenvalues.iter().map(|e| (-t * e).exp()).sum();
        for big_n in [2, 3, 4] {
            let r = heat_trace_contour(&ws, t, ContourSpec { big_n, ..Default::default() }).unwrap();
            assert!((r.value.re - head).abs() < 1e-8 * head, "N={big_n}: {} vs {head}", r.value.re);
            assert!(r.value.im.abs() < 1e-8 * head);
            assert!((r.value.re - direct).abs() < 1e-6 * direct);
        }
        // scalar check of orientation and normalization
        let one = WeightedSpectrum { eigenvalues: vec![3.0], weights: vec![1.0], cutoff: 4.0 };
        let r = heat_trace_contour(&one, 0.7, ContourSpec { big_n: 3, ..Default::default() }).unwrap();
        assert!((r.value - Complex64::new((-2.1f64).exp(), 0.0)).norm() < 1e-10);
    }
}
