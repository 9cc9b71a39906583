use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Flat experiment configuration; every key has the shipped default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    // operator
    pub dimension: u32,
    pub a: f64,
    pub mode_max: i32,

    // spectrum
    pub s_min: f64,
    pub npoints: usize,
    pub spectrum_cutoff: f64,
    pub oracle_count: usize,

    // heat
    pub heat_cutoff: f64,
    pub heat_t_min: f64,
    pub heat_t_max: f64,
    pub heat_points: usize,
    pub heat_k_max: u32,
    pub weighted_cutoff: f64,
    pub weighted_t_min: f64,
    pub weighted_t_max: f64,
    pub weighted_k_max: u32,

    // resolvent
    pub resolvent_arg: f64,
    pub resolvent_r_min: f64,
    pub resolvent_r_max: f64,
    pub resolvent_points: usize,
    pub power_n: u32,
    pub power_r_min: f64,
    pub power_r_max: f64,
    pub power_points: usize,
    pub power_k_max: u32,

    // zeta
    pub zeta_t0: f64,
    pub zeta_probes: Vec<f64>,

    // index
    pub ms_rows: usize,
    pub ms_cols: usize,
    pub ms_times: Vec<f64>,
    pub eta_c: f64,
    pub eta_b: f64,
    pub eta_weight: f64,
    pub eta_r_max: f64,
    pub perturbation: f64,
    pub index_mode_max: i32,
    pub index_s_min: f64,
    pub index_npoints: usize,
    pub taus: Vec<f64>,
    pub eps: f64,
    pub sobolev_s_min: f64,
    pub sobolev_npoints: usize,
    pub sobolev_eps: Vec<f64>,

    // verify
    pub verify_cases: usize,
    pub lemma_cases: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            dimension: 2,
            a: 1.5,
            mode_max: 8,
            s_min: -12.0,
            npoints: 2000,
            spectrum_cutoff: 120.0,
            oracle_count: 2,
            heat_cutoff: 2e4,
            heat_t_min: 1e-3,
            heat_t_max: 2e-2,
            heat_points: 60,
            heat_k_max: 3,
            weighted_cutoff: 4e4,
            weighted_t_min: 5e-4,
            weighted_t_max: 5e-3,
            weighted_k_max: 6,
            resolvent_arg: std::f64::consts::PI,
            resolvent_r_min: 1e2,
            resolvent_r_max: 1e6,
            resolvent_points: 25,
            power_n: 2,
            power_r_min: 300.0,
            power_r_max: 4000.0,
            power_points: 60,
            power_k_max: 3,
            zeta_t0: 0.02,
            zeta_probes: vec![-4.0, -3.5, -3.0],
            ms_rows: 40,
            ms_cols: 60,
            ms_times: vec![0.1, 1.0, 10.0],
            eta_c: 2.0,
            eta_b: 0.5,
            eta_weight: 1.0,
            eta_r_max: 1e5,
            perturbation: 1.0,
            index_mode_max: 1,
            index_s_min: -14.0,
            index_npoints: 300,
            taus: (2..=7).map(|k| 0.5f64.powi(k)).collect(),
            eps: 0.1,
            sobolev_s_min: -40.0,
            sobolev_npoints: 400,
            sobolev_eps: vec![0.0, 0.1, 0.2, 0.3, 1.0],
            verify_cases: 2000,
            lemma_cases: 20,
        }
    }
}

fn positive(errs: &mut Vec<String>, name: &str, v: f64) {
    if !(v > 0.0 && v.is_finite()) {
        errs.push(format!("{name} must be positive and finite (got {v})"));
    }
}

fn window(errs: &mut Vec<String>, name: &str, lo: f64, hi: f64) {
    positive(errs, &format!("{name} lower end"), lo);
    if !(hi > lo) {
        errs.push(format!("{name}: upper end {hi} must exceed lower end {lo}"));
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
    }

    /// SHA-256 of the canonical serialization, so equivalent files share a digest.
    pub fn digest(&self) -> String {
        let canonical = toml::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    /// Every violated precondition, checked before any computation.
    pub fn validate(&self) -> Vec<String> {
        let mut e = Vec::new();
        if !(1..=8).contains(&self.dimension) {
            e.push(format!("dimension must lie in 1..=8 (got {})", self.dimension));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            e.push(format!("a must be positive (got {})", self.a));
        }
        if self.mode_max < 0 || self.index_mode_max < 0 {
            e.push("mode caps must be non-negative".into());
        }
        if !(self.s_min < -5.0) || self.npoints < 100 {
            e.push(format!("spectrum grid needs s_min < -5 and npoints >= 100 (got {}, {})", self.s_min, self.npoints));
        }
        positive(&mut e, "spectrum_cutoff", self.spectrum_cutoff);
        if self.oracle_count == 0 {
            e.push("oracle_count must be at least 1".into());
        }
        positive(&mut e, "heat_cutoff", self.heat_cutoff);
        positive(&mut e, "weighted_cutoff", self.weighted_cutoff);
        window(&mut e, "heat window", self.heat_t_min, self.heat_t_max);
        window(&mut e, "weighted heat window", self.weighted_t_min, self.weighted_t_max);
        if self.heat_points < 10 || self.resolvent_points < 3 || self.power_points < 10 {
            e.push("sample counts too small (heat >= 10, resolvent >= 3, power >= 10)".into());
        }
        if !(self.resolvent_arg.abs() > 0.0 && self.resolvent_arg.abs() <= std::f64::consts::PI) {
            e.push(format!("resolvent_arg must lie in [-pi, pi] away from 0 (got {})", self.resolvent_arg));
        }
        window(&mut e, "resolvent radii", self.resolvent_r_min, self.resolvent_r_max);
        window(&mut e, "power-trace radii", self.power_r_min, self.power_r_max);
        if 2.0 * self.power_n as f64 <= self.dimension as f64 {
            e.push(format!(
                "power_n = {} is not trace class: 2N must exceed the dimension {}",
                self.power_n, self.dimension
            ));
        }
        if !(self.zeta_t0 > self.heat_t_min && self.zeta_t0 <= self.heat_t_max) {
            e.push(format!("zeta_t0 = {} must lie in the heat window", self.zeta_t0));
        }
        if self.zeta_probes.iter().any(|&z| !(z < -1.0)) {
            e.push("zeta probes must satisfy z < -1 so the eigen-sum converges".into());
        }
        if self.ms_rows == 0 || self.ms_cols == 0 || self.ms_times.iter().any(|&t| !(t > 0.0)) {
            e.push("McKean-Singer matrix must be non-empty with positive times".into());
        }
        positive(&mut e, "eta_c", self.eta_c);
        positive(&mut e, "eta_b", self.eta_b);
        positive(&mut e, "eta_r_max", self.eta_r_max);
        if self.taus.len() < 2 || self.taus.iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
            e.push("taus need at least two values in (0, 1]".into());
        }
        if !(self.eps >= 0.0 && self.eps < 1.0) {
            e.push(format!("eps must lie in [0, 1) (got {})", self.eps));
        }
        if !(self.index_s_min < -5.0 && self.sobolev_s_min < -5.0) || self.index_npoints < 100 || self.sobolev_npoints < 100 {
            e.push("index grids need s_min < -5 and at least 100 points".into());
        }
        if self.sobolev_eps.is_empty() {
            e.push("sobolev_eps must not be empty".into());
        }
        if self.verify_cases == 0 || self.lemma_cases == 0 {
            e.push("verify case counts must be positive".into());
        }
        e
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Profile {
    Default,
    Strict,
}

/// Acceptance thresholds for the checks each subcommand reports.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub oracle_rel: f64,
    pub slope_band: f64,
    pub leading_band: f64,
    pub zeta_rel: f64,
    pub pole_location: f64,
    pub residue_rel: f64,
    pub integer: f64,
    pub supertrace_spread: f64,
    pub lemma_coeff: f64,
    pub identity: f64,
}

impl Profile {
    pub fn tolerances(self) -> Tolerances {
        match self {
            Profile::Default => Tolerances {
                oracle_rel: 1e-4,
                slope_band: 0.05,
                leading_band: 0.02,
                zeta_rel: 1e-6,
                pole_location: 0.05,
                residue_rel: 0.05,
                integer: 1e-6,
                supertrace_spread: 1e-8,
                lemma_coeff: 1e-6,
                identity: 1e-6,
            },
            Profile::Strict => Tolerances {
                oracle_rel: 2e-5,
                slope_band: 0.02,
                leading_band: 0.005,
                zeta_rel: 1e-8,
                pole_location: 0.01,
                residue_rel: 0.01,
                integer: 1e-9,
                supertrace_spread: 1e-10,
                lemma_coeff: 1e-8,
                identity: 1e-8,
            },
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Profile::Default => "default",
            Profile::Strict => "strict",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_file_matches_defaults() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/laplace_type.toml");
        let c = Config::load(&path).unwrap();
        assert_eq!(c, Config::default());
        assert_eq!(c.digest(), Config::default().digest());
        assert!(c.validate().is_empty(), "{:?}", c.validate());
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(toml::from_str::<Config>("bogus = 1").is_err());
        let c: Config = toml::from_str("a = -1.0\nzeta_t0 = 0.5\npower_n = 1").unwrap();
        let errs = c.validate();
        assert_eq!(errs.len(), 3, "{errs:?}");
    }

    #[test]
    fn digest_tracks_content() {
        let mut c = Config::default();
        let d = c.digest();
        c.a = 2.0;
        assert_ne!(c.digest(), d);
        assert_eq!(d.len(), 64);
    }
}
