//! Index invariants: McKean–Singer supertraces, the constant term `ω`,
//! the eta term of a smoothing Mellin perturbation, their assembly, and the
//! two invariance sweeps.

mod eta;
mod invariance;

pub use eta::{argument_census, eta_term, ArgumentCensus, EtaReport, MellinPerturbation, RationalEntry};
pub use invariance::{
    invariance_red_to_const, invariance_red_to_sobolev, RedToConstReport, SobolevReport, SobolevRow,
};

use std::fmt::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::asymptotics::{fit_expansion, FitOptions, LogPolyExpansion};
use crate::coneop::Verdict;
use crate::error::Result;
use crate::traces::{log_grid, TraceKind, TraceMeta, TraceSample, TraceSeries};

/// `Tr e^{-tB*B} - Tr e^{-tBB*}` for each `t`, from the two Gram spectra
/// computed separately.
pub fn mckean_singer(b: &DMatrix<f64>, t_list: &[f64]) -> Vec<f64> {
    let left = b.transpose() * b;
    let right = b * b.transpose();
    let el = left.symmetric_eigenvalues();
    let er = right.symmetric_eigenvalues();
    let tr = |ev: &nalgebra::DVector<f64>, t: f64| ev.iter().map(|&l| (-t * l.max(0.0)).exp()).sum::<f64>();
    t_list.iter().map(|&t| tr(&el, t) - tr(&er, t)).collect()
}

#[derive(Debug, Clone)]
pub struct OmegaReport {
    pub omega: f64,
    /// `None` when the difference series vanishes identically.
    pub fit: Option<LogPolyExpansion>,
    /// Detected `(0, j)` terms with `j ≥ 1`.
    pub log_terms: Vec<u32>,
    pub verdict: Verdict,
}

/// Columns `t^{-1}, t^{-1/2}, 1, log t, log² t, t^{1/2}, t` for a supertrace
/// of a second-order problem in two dimensions.
pub fn omega_columns() -> Vec<(f64, u32)> {
    vec![(-1.0, 0), (-0.5, 0), (0.0, 0), (0.0, 1), (0.0, 2), (0.5, 0), (1.0, 0)]
}

/// `ω` as the fitted `(0, 0)` coefficient of a supertrace series; `Undecided`
/// if the constant is not detected above the residual.
pub fn omega_from_series(series: &TraceSeries, cols: &[(f64, u32)], opts: &FitOptions) -> Result<OmegaReport> {
    let scale = series.samples.iter().map(|s| s.value.norm()).fold(0.0, f64::max);
    if scale < 1e-12 {
        return Ok(OmegaReport { omega: 0.0, fit: None, log_terms: Vec::new(), verdict: Verdict::True });
    }
    let window = series
        .samples
        .iter()
        .fold((f64::INFINITY, 0.0f64), |w, s| (w.0.min(s.param), w.1.max(s.param)));
    let fit = fit_expansion(series, cols, window, opts)?;
    let constant = fit.term(0.0, 0);
    let log_terms = fit.detected().filter(|t| t.gamma == 0.0 && t.logpow > 0).map(|t| t.logpow).collect();
    let (omega, verdict) = match constant {
        Some(t) if t.detected => (t.coeff.re, Verdict::True),
        _ => (0.0, Verdict::Undecided),
    };
    Ok(OmegaReport { omega, fit: Some(fit), log_terms, verdict })
}

/// `ω(B, B⋆)` for a matrix realization, from the McKean–Singer series on a
/// log grid over `t_window`.
pub fn omega_constant(b: &DMatrix<f64>, t_window: (f64, f64)) -> Result<OmegaReport> {
    let grid = log_grid(t_window.0, t_window.1, 40);
    let values = mckean_singer(b, &grid);
    let series = TraceSeries {
        kind: TraceKind::Heat,
        meta: TraceMeta { mu: 2.0, mu_prime: 0.0, beta: 0.0, n: 2.0, big_n: 0 },
        samples: grid
            .iter()
            .zip(values)
            .map(|(&t, v)| TraceSample { param: t, value: Complex64::new(v, 0.0), tail_bound: 0.0 })
            .collect(),
    };
    omega_from_series(&series, &omega_columns(), &FitOptions::default())
}

/// A hand-built factorization `A = B(1 + H)` given by its constituents.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub b: DMatrix<f64>,
    pub h: MellinPerturbation,
    pub t_window: (f64, f64),
    pub r_max: f64,
}

#[derive(Debug, Clone)]
pub struct IndexReport {
    pub omega: f64,
    pub eta: f64,
    pub index: f64,
    pub integer_distance: f64,
    pub flags: Vec<String>,
    pub verdict: Verdict,
}

impl IndexReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("omega,eta,index,integer_distance,flags\n");
        let _ = writeln!(
            s,
            "{:.12},{:.12},{:.12},{:.3e},{}",
            self.omega,
            self.eta,
            self.index,
            self.integer_distance,
            self.flags.join(";")
        );
        s
    }
}

/// `Ind A = ω(B, B⋆) - η`.
pub fn index_assemble(f: &Factorization) -> Result<IndexReport> {
    let om = omega_constant(&f.b, f.t_window)?;
    let et = eta_term(&f.h, f.r_max, 0.0)?;
    let census = argument_census(&f.h)?;
    let index = om.omega - et.eta;
    let mut flags = Vec::new();
    if om.verdict == Verdict::Undecided {
        flags.push("omega_undecided".to_string());
    }
    if !om.log_terms.is_empty() {
        flags.push(format!("log_terms_at_zero:{:?}", om.log_terms));
    }
    if (et.eta - census.winding as f64).abs() > 1e-6 {
        flags.push(format!("eta_census_mismatch:{}", census.winding));
    }
    let integer_distance = (index - index.round()).abs();
    if integer_distance > 1e-6 {
        flags.push("non_integer".to_string());
    }
    let verdict = if om.verdict == Verdict::Undecided {
        Verdict::Undecided
    } else {
        Verdict::from_bool(flags.is_empty())
    };
    Ok(IndexReport { omega: om.omega, eta: et.eta, index, integer_distance, flags, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rows: usize, cols: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn rectangular_supertrace() {
        let b = random(40, 60, 7);
        let v = mckean_singer(&b, &[0.1, 1.0, 10.0]);
        for x in &v {
            assert!((x - 20.0).abs() < 1e-8, "{v:?}");
        }
        let spread = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - v.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread < 1e-8);
        let w = mckean_singer(&b.transpose(), &[1.0]);
        assert!((w[0] + 20.0).abs() < 1e-8);
    }

    #[test]
    fn square_invertible_supertrace_vanishes() {
        let b = random(30, 30, 3);
        for v in mckean_singer(&b, &[0.1, 1.0, 10.0]) {
            assert!(v.abs() < 1e-9);
        }
    }

    #[test]
    fn omega_of_matrix_models() {
        let sym = {
            let a = random(12, 12, 1);
            &a + a.transpose()
        };
        let r = omega_constant(&sym, (0.1, 10.0)).unwrap();
        assert_eq!(r.omega, 0.0);
        // kernel gap 3
        let b = random(9, 12, 2);
        let r = omega_constant(&b, (0.1, 10.0)).unwrap();
        assert_eq!(r.verdict, Verdict::True);
        assert!((r.omega - 3.0).abs() < 1e-9, "{}", r.omega);
        let r2 = omega_constant(&b, (0.05, 2.0)).unwrap();
        assert!((r.omega - r2.omega).abs() < 1e-3);
    }

    #[test]
    fn omega_undecided_without_constant() {
        let grid = log_grid(0.01, 1.0, 30);
        let series = TraceSeries {
            kind: TraceKind::Heat,
            meta: TraceMeta { mu: 2.0, mu_prime: 0.0, beta: 0.0, n: 2.0, big_n: 0 },
            samples: grid
                .iter()
                .map(|&t| TraceSample { param: t, value: Complex64::new(0.25 / t, 0.0), tail_bound: 0.0 })
                .collect(),
        };
        let r = omega_from_series(&series, &omega_columns(), &FitOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Undecided);
    }

    #[test]
    fn assembly() {
        let sym = {
            let a = random(10, 10, 5);
            &a + a.transpose()
        };
        let f = Factorization {
            b: sym,
            h: MellinPerturbation::rank_one(2.0, 0.5, 1.0).unwrap(),
            t_window: (0.1, 10.0),
            r_max: 1e5,
        };
        let r = index_assemble(&f).unwrap();
        assert!((r.index + 1.0).abs() < 1e-6 && r.integer_distance < 1e-6, "{r:?}");
        assert_eq!(r.verdict, Verdict::True);
        assert!(r.to_csv().starts_with("omega,eta,index,integer_distance,flags\n"));
        // H = 0 leaves ω
        let g = Factorization { h: MellinPerturbation::zero(1, 1.0), b: random(7, 9, 4), ..f };
        let r = index_assemble(&g).unwrap();
        assert!((r.index - 2.0).abs() < 1e-9);
        // Ind(1 + H) = -η
        let one = Factorization { b: DMatrix::identity(4, 4), ..f.clone() };
        let r = index_assemble(&one).unwrap();
        assert!((r.index + r.eta).abs() < 1e-12);
    }
}
