//! Meromorphic continuation of `ζ(z) = 𝓜(f)(-z) / Γ(-z)` from a fitted
//! small-`t` expansion of the heat trace `f` and the spectrum on `[t₀, ∞)`.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;

use super::{in_nat0, same, ExpansionKind, LogPolyExpansion};
use crate::error::{Error, Result};
use crate::numeric::quad::gauss_legendre;
use crate::numeric::special::recip_gamma;
use crate::traces::WeightedSpectrum;

const PANELS: usize = 240;
const NODES: usize = 16;
const CIRCLE_POINTS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaOptions {
    pub t0: f64,
    /// Distance within which a fitted exponent is identified with a lattice point.
    pub lattice_tol: f64,
    /// Dimension and order used for the lattice tags.
    pub n: f64,
    pub mu: f64,
}

impl ZetaOptions {
    pub fn new(n: f64, mu: f64) -> Self {
        ZetaOptions { t0: 0.1, lattice_tol: 1e-3, n, mu }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleReport {
    pub z: Complex64,
    pub order: u32,
    pub residue: Complex64,
    /// `simple`, `triple`, or `off-lattice`.
    pub lattice_tag: &'static str,
    /// Order estimated from `|ζ(z₀+ρ/2)| / |ζ(z₀+ρ)|`.
    pub laurent_order: f64,
}

#[derive(Debug, Clone)]
pub struct ZetaFunction {
    terms: Vec<(f64, u32, Complex64)>,
    t0: f64,
    /// Quadrature nodes `t_i` with `w_i f(t_i)` on `[t₀, T]`.
    tail: Vec<(f64, f64)>,
    pub poles: Vec<PoleReport>,
}

/// `∫₀^{t₀} t^{s-1} log^j t dt = ∂_s^j (t₀^s / s)`.
pub fn mellin_head(s: Complex64, j: u32, t0: f64) -> Complex64 {
    let l = t0.ln();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut binom = 1.0;
    let mut fact = 1.0;
    for i in 0..=j {
        if i > 0 {
            binom *= (j - i + 1) as f64 / i as f64;
            fact *= i as f64;
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc += binom * l.powi((j - i) as i32) * sign * fact / s.powu(i + 1);
    }
    acc * (s * l).exp()
}

fn lattice_tag(g: f64, order: u32, o: &ZetaOptions) -> &'static str {
    let near = |x: f64| (x - x.round()).abs() < o.lattice_tol && x > -o.lattice_tol;
    if order <= 1 && near(g * o.mu + o.n) {
        "simple"
    } else if order <= 3 && near(g * o.mu) && !near(g) {
        "triple"
    } else {
        "off-lattice"
    }
}

/// Continue `ζ` using the fitted expansion on `(0, t₀]` and the weighted
/// spectrum beyond `t₀`. Every fitted term enters the evaluation; the pole
/// report lists the detected ones.
pub fn zeta_continue(ws: &WeightedSpectrum, fit: &LogPolyExpansion, opts: &ZetaOptions) -> Result<ZetaFunction> {
    if fit.kind != ExpansionKind::Heat {
        return Err(Error::Config("zeta continuation needs a heat-trace expansion".into()));
    }
    let t0 = opts.t0;
    if fit.fit_window.1 < t0 * (1.0 - 1e-12) {
        return Err(Error::Config(format!(
            "split point t0 = {t0} lies outside the fit window {:?}",
            fit.fit_window
        )));
    }
    let lmin = ws.eigenvalues.first().copied().unwrap_or(0.0);
    if !(lmin > 0.0) {
        return Err(Error::Config("zeta continuation needs a positive spectrum".into()));
    }
    let t_end = t0 + 80.0 / lmin;
    let (gx, gw) = gauss_legendre(NODES);
    let width = (t_end - t0) / PANELS as f64;
    let mut tail = Vec::with_capacity(PANELS * NODES);
    for p in 0..PANELS {
        let a = t0 + p as f64 * width;
        for (x, w) in gx.iter().zip(&gw) {
            let t = a + 0.5 * width * (x + 1.0);
            let f: f64 = ws
                .eigenvalues
                .iter()
                .zip(&ws.weights)
                .map(|(l, wt)| wt * (-t * l).exp())
                .sum();
            tail.push((t, 0.5 * width * w * f));
        }
    }
    let terms: Vec<(f64, u32, Complex64)> = fit
        .terms
        .iter()
        .filter(|t| t.coeff != Complex64::new(0.0, 0.0))
        .map(|t| (t.gamma, t.logpow, t.coeff))
        .collect();
    let mut zeta = ZetaFunction { terms, t0, tail, poles: Vec::new() };
    let mut locations: Vec<(f64, u32)> = Vec::new();
    for (g, j) in fit.detected().map(|t| (t.gamma, t.logpow)) {
        match locations.iter_mut().find(|p| same(p.0, g)) {
            Some(p) => p.1 = p.1.max(j + 1),
            None => locations.push((g, j + 1)),
        }
    }
    locations.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut poles = Vec::new();
    for (i, &(g, raw)) in locations.iter().enumerate() {
        let order = if in_nat0(g) { raw - 1 } else { raw };
        if order == 0 {
            continue;
        }
        let gap = locations
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, p)| (p.0 - g).abs())
            .fold(f64::INFINITY, f64::min);
        let rho = (0.3 * gap).min(1e-2);
        let z0 = Complex64::new(g, 0.0);
        let (residue, _) = zeta.moments(z0, rho)?;
        let a1 = zeta.eval_unchecked(z0 + rho)?.norm();
        let a2 = zeta.eval_unchecked(z0 + 0.5 * rho)?.norm();
        poles.push(PoleReport {
            z: z0,
            order,
            residue,
            lattice_tag: lattice_tag(g, order, opts),
            laurent_order: (a2 / a1).log2(),
        });
    }
    zeta.poles = poles;
    Ok(zeta)
}

impl ZetaFunction {
    fn mellin(&self, z: Complex64) -> Complex64 {
        let head: Complex64 = self
            .terms
            .iter()
            .map(|&(g, j, c)| c * mellin_head(Complex64::new(g, 0.0) - z, j, self.t0))
            .sum();
        let tail: Complex64 = self
            .tail
            .iter()
            .map(|&(t, wf)| (-(z + 1.0) * t.ln()).exp() * wf)
            .sum();
        head + tail
    }

    fn eval_unchecked(&self, z: Complex64) -> Result<Complex64> {
        let v = recip_gamma(-z) * self.mellin(z);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Pole { z })
        }
    }

    /// `ζ(z)`; at an exponent whose pole is cancelled by `1/Γ(-z)` the value
    /// is the symmetric limit.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if self.poles.iter().any(|p| (p.z - z).norm() < 1e-9) {
            return Err(Error::Pole { z });
        }
        if self.terms.iter().any(|t| (Complex64::new(t.0, 0.0) - z).norm() < 1e-9) {
            let d = 1e-5;
            return Ok(0.5 * (self.eval_unchecked(z + d)? + self.eval_unchecked(z - d)?));
        }
        self.eval_unchecked(z)
    }

    /// `(1/2πi)∮ ζ dz` and `(1/2πi)∮ z ζ dz` on the circle `|z - c| = r`.
    pub fn moments(&self, c: Complex64, r: f64) -> Result<(Complex64, Complex64)> {
        let mut m0 = Complex64::new(0.0, 0.0);
        let mut m1 = Complex64::new(0.0, 0.0);
        for k in 0..CIRCLE_POINTS {
            let th = TAU * (k as f64 + 0.5) / CIRCLE_POINTS as f64;
            let e = Complex64::from_polar(r, th);
            let z = c + e;
            let v = self.eval_unchecked(z)? * e / CIRCLE_POINTS as f64;
            m0 += v;
            m1 += v * z;
        }
        Ok((m0, m1))
    }

    /// Pole candidates in a rectangle found by contour moments on a cover
    /// of overlapping circles: `(m1/m0, m0)` for every circle with
    /// `|m0| > threshold` whose estimate lies in the rectangle, merged within
    /// one spacing. The location estimate is exact for simple poles.
    pub fn scan_poles(&self, re: (f64, f64), im: (f64, f64), spacing: f64, threshold: f64) -> Result<Vec<(Complex64, Complex64)>> {
        let r = 0.75 * spacing;
        let mut found: Vec<(Complex64, Complex64)> = Vec::new();
        let nx = ((re.1 - re.0) / spacing).ceil() as usize + 1;
        let ny = ((im.1 - im.0) / spacing).ceil() as usize + 1;
        for i in 0..nx {
            for k in 0..ny {
                // irrational offset keeps circles away from lattice points
                let c = Complex64::new(re.0 + (i as f64 + 0.0123) * spacing, im.0 + (k as f64 + 0.0071) * spacing);
                let (m0, m1) = self.moments(c, r)?;
                if m0.norm() <= threshold {
                    continue;
                }
                let z = m1 / m0;
                let inside = z.re >= re.0 && z.re <= re.1 && z.im >= im.0 && z.im <= im.1;
                if !inside || (z - c).norm() > 0.8 * r {
                    continue;
                }
                if !found.iter().any(|f| (f.0 - z).norm() < spacing) {
                    found.push((z, m0));
                }
            }
        }
        Ok(found)
    }

    pub fn poles_to_csv(&self) -> String {
        let mut s = String::from("z_re,z_im,order,residue_re,residue_im,lattice_tag\n");
        for p in &self.poles {
            let _ = writeln!(
                s,
                "{:.12e},{:.12e},{},{:.12e},{:.12e},{}",
                p.z.re, p.z.im, p.order, p.residue.re, p.residue.im, p.lattice_tag
            );
        }
        s
    }
}
