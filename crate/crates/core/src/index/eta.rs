//! Smoothing Mellin perturbations `Ĥ(σ)` and the eta contour integral
//! along `Im σ = -w`, with an argument-principle census as oracle.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::poly::Poly;
use crate::numeric::quad::{integrate, QuadOptions};

const LINE_SAMPLES: usize = 4001;
const DET_FLOOR: f64 = 1e-10;

/// `r(σ) M` with `r = num/den`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalEntry {
    pub num: Poly,
    pub den: Poly,
    pub matrix: DMatrix<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MellinPerturbation {
    dim: usize,
    /// The integration line is `Im σ = -weight`.
    weight: f64,
    entries: Vec<RationalEntry>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `conj(p(conj(σ) + shift))` as a polynomial in `σ`.
fn conj_shift(p: &Poly, shift: Complex64) -> Poly {
    let lin = Poly::new(vec![shift.conj(), c(1.0)]);
    p.coeffs
        .iter()
        .rev()
        .fold(Poly::new(vec![c(0.0)]), |acc, &a| acc.mul(&lin).add(&Poly::new(vec![a.conj()])))
}

impl MellinPerturbation {
    /// `Ĥ(σ) = Σ_k (num_k/den_k)(σ) M_k`; every entry must decay like
    /// `|σ|^{-2}` or faster and `1 + Ĥ` must be invertible on the line.
    pub fn rational(dim: usize, weight: f64, entries: Vec<RationalEntry>) -> Result<Self> {
        for (k, e) in entries.iter().enumerate() {
            if e.matrix.nrows() != dim || e.matrix.ncols() != dim {
                return Err(Error::Config(format!("entry {k}: matrix is not {dim}x{dim}")));
            }
            let zero_num = e.num.coeffs.iter().all(|a| a.norm() == 0.0);
            if !zero_num && e.den.degree() < e.num.degree() + 2 {
                return Err(Error::Config(format!(
                    "entry {k}: degree gap {} < 2, no O(|σ|^-2) decay",
                    e.den.degree() as i64 - e.num.degree() as i64
                )));
            }
        }
        let h = MellinPerturbation { dim, weight, entries };
        h.check_line()?;
        Ok(h)
    }

    /// `c/(σ² + b²)` on a one-dimensional space.
    pub fn rank_one(cc: f64, b: f64, weight: f64) -> Result<Self> {
        Self::rational(
            1,
            weight,
            vec![RationalEntry {
                num: Poly::from_real(&[cc]),
                den: Poly::from_real(&[b * b, 0.0, 1.0]),
                matrix: DMatrix::from_element(1, 1, c(1.0)),
            }],
        )
    }

    pub fn zero(dim: usize, weight: f64) -> Self {
        MellinPerturbation { dim, weight, entries: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Mirror image across the integration line, `conj(Ĥ(conj(σ) - 2iw))`:
    /// zeros and poles above and below the line trade places.
    pub fn reflected(&self) -> Self {
        let shift = Complex64::new(0.0, -2.0 * self.weight);
        MellinPerturbation {
            dim: self.dim,
            weight: self.weight,
            entries: self
                .entries
                .iter()
                .map(|e| RationalEntry {
                    num: conj_shift(&e.num, shift),
                    den: conj_shift(&e.den, shift),
                    matrix: e.matrix.map(|z| z.conj()),
                })
                .collect(),
        }
    }

    pub fn eval(&self, sigma: Complex64) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for e in &self.entries {
            m += &e.matrix * (e.num.eval(sigma) / e.den.eval(sigma));
        }
        m
    }

    pub fn derivative(&self, sigma: Complex64) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for e in &self.entries {
            let q = e.den.eval(sigma);
            let r = (e.num.derivative().eval(sigma) * q - e.num.eval(sigma) * e.den.derivative().eval(sigma)) / (q * q);
            m += &e.matrix * r;
        }
        m
    }

    /// `det(1 + Ĥ(σ))`.
    pub fn det(&self, sigma: Complex64) -> Complex64 {
        (DMatrix::identity(self.dim, self.dim) + self.eval(sigma)).determinant()
    }

    /// Product of the denominators; its zeros carry every pole of `Ĥ`.
    fn pole_polynomial(&self) -> Poly {
        self.entries
            .iter()
            .fold(Poly::from_real(&[1.0]), |acc, e| acc.mul(&e.den))
    }

    fn scale(&self) -> f64 {
        let mut s = 1.0 + self.weight.abs();
        for e in &self.entries {
            for r in e.den.roots().unwrap_or_default() {
                s = s.max(r.value.norm());
            }
        }
        s
    }

    fn line_point(&self, s: f64) -> Complex64 {
        Complex64::new(s, -self.weight)
    }

    fn check_line(&self) -> Result<()> {
        let r = 1e3 * self.scale();
        for i in 0..LINE_SAMPLES {
            // sinh spacing concentrates samples near the origin
            let u = -1.0 + 2.0 * i as f64 / (LINE_SAMPLES - 1) as f64;
            let s = r * (8.0 * u).sinh() / 8f64.sinh();
            let sigma = self.line_point(s);
            let d = self.det(sigma);
            let poles = self.entries.iter().any(|e| e.den.eval(sigma).norm() < 1e-12);
            if poles || !(d.norm() > DET_FLOOR) {
                return Err(Error::LineNotInvertible { sigma, det_abs: d.norm() });
            }
        }
        Ok(())
    }

    /// `Tr(Ĥ'(σ)(1 + Ĥ(σ))^{-1})`.
    fn log_det_derivative(&self, sigma: Complex64) -> Result<Complex64> {
        if self.entries.is_empty() {
            return Ok(c(0.0));
        }
        let a = DMatrix::identity(self.dim, self.dim) + self.eval(sigma);
        let inv = a
            .try_inverse()
            .ok_or(Error::LineNotInvertible { sigma, det_abs: 0.0 })?;
        Ok((self.derivative(sigma) * inv).trace())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaReport {
    pub eta: f64,
    /// Imaginary part of the computed value; zero up to quadrature error.
    pub imag: f64,
    pub quad_error: f64,
    /// Estimate of the neglected `|Re σ| > R_max` contribution for `O(|σ|^{-3})` decay.
    pub tail_bound: f64,
}

/// `η = (1/2πi) ∫ Tr(Ĥ'(1+Ĥ)^{-1}) dσ` along `Im σ = -w`, oriented as the
/// boundary of the half-plane below the line (so `η` counts zeros minus
/// poles of `det(1+Ĥ)` there), truncated to `|Re σ| ≤ r_max`. A real
/// `shift` reparametrizes the line without moving it.
pub fn eta_term(h: &MellinPerturbation, r_max: f64, shift: f64) -> Result<EtaReport> {
    if !(r_max > 0.0) {
        return Err(Error::Config(format!("r_max = {r_max} must be positive")));
    }
    h.check_line()?;
    let f = |s: f64| h.log_det_derivative(h.line_point(s + shift));
    let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-12, max_intervals: 20000 };
    let inner = (10.0 * h.scale()).min(r_max);
    let mut total = c(0.0);
    let mut err = 0.0;
    let mut failure = None;
    for (a, b) in [(-r_max, -inner), (-inner, inner), (inner, r_max)] {
        if b <= a {
            continue;
        }
        let r = integrate(
            |s| match f(s) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    c(0.0)
                }
            },
            a,
            b,
            opts,
        )?;
        total += r.value;
        err += r.error;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let tail_bound = r_max * (f(r_max)?.norm() + f(-r_max)?.norm());
    // right-to-left traversal: (1/2πi)·(-∫ ds)
    let value = total * Complex64::new(0.0, 1.0 / (2.0 * PI));
    Ok(EtaReport {
        eta: value.re,
        imag: value.im,
        quad_error: err / (2.0 * PI),
        tail_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArgumentCensus {
    /// Winding number of `det(1 + Ĥ)` around the region below the line.
    pub winding: i64,
    pub poles_below: i64,
    pub zeros_below: i64,
}

/// Phase increment of `g` from `a` to `b`, refined until each step turns by
/// less than a quarter turn.
fn phase_change(g: &dyn Fn(Complex64) -> Complex64, a: Complex64, b: Complex64, depth: u32) -> Result<f64> {
    let (ga, gb) = (g(a), g(b));
    let d = (gb / ga).arg();
    if d.abs() < 0.5 && depth > 2 {
        return Ok(d);
    }
    if depth > 60 {
        return Err(Error::LineNotInvertible { sigma: a, det_abs: ga.norm().min(gb.norm()) });
    }
    let m = (a + b) * 0.5;
    Ok(phase_change(g, a, m, depth + 1)? + phase_change(g, m, b, depth + 1)?)
}

fn winding_below(g: &dyn Fn(Complex64) -> Complex64, level: f64, r: f64) -> Result<i64> {
    let corners = [
        Complex64::new(r, level),
        Complex64::new(-r, level),
        Complex64::new(-r, level - r),
        Complex64::new(r, level - r),
    ];
    let mut total = 0.0;
    for i in 0..4 {
        total += phase_change(g, corners[i], corners[(i + 1) % 4], 0)?;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

/// Zero and pole count of `det(1 + Ĥ)` below the line by phase tracking
/// around a large rectangle.
pub fn argument_census(h: &MellinPerturbation) -> Result<ArgumentCensus> {
    let r = 1e3 * h.scale();
    let level = -h.weight;
    let det = |s: Complex64| h.det(s);
    let winding = winding_below(&det, level, r)?;
    let q = h.pole_polynomial();
    let poles_below = winding_below(&|s| q.eval(s), level, r)?;
    Ok(ArgumentCensus {
        winding,
        poles_below,
        zeros_below: winding + poles_below,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // b < w < √(b² + c): one zero below the line, no pole
    fn example() -> MellinPerturbation {
        MellinPerturbation::rank_one(2.0, 0.5, 1.0).unwrap()
    }

    #[test]
    fn zero_perturbation() {
        let h = MellinPerturbation::zero(3, 1.0);
        let r = eta_term(&h, 1e3, 0.0).unwrap();
        assert_eq!(r.eta, 0.0);
        assert_eq!(argument_census(&h).unwrap().winding, 0);
    }

    #[test]
    fn rank_one_eta_is_one() {
        let h = example();
        let r = eta_term(&h, 1e5, 0.0).unwrap();
        assert!((r.eta - 1.0).abs() < 1e-6, "{r:?}");
        assert!(r.imag.abs() < 1e-6 && r.tail_bound < 1e-6);
        let census = argument_census(&h).unwrap();
        assert_eq!(census, ArgumentCensus { winding: 1, poles_below: 0, zeros_below: 1 });
        assert_eq!(r.eta.round() as i64, census.winding);
    }

    #[test]
    fn census_by_hand() {
        // zeros ±1.5i, poles ±0.5i
        let h = example();
        for (sigma, zero) in [(Complex64::new(0.0, -1.5), true), (Complex64::new(0.0, 1.5), true)] {
            assert_eq!(h.det(sigma).norm() < 1e-12, zero);
        }
        let q = h.pole_polynomial();
        assert!(q.eval(Complex64::new(0.0, 0.5)).norm() < 1e-12);
    }

    #[test]
    fn reflection_flips_the_census() {
        let h = example().reflected();
        // zeros at -2i ± 1.5i, poles at -2i ± 0.5i: below -1 are -3.5i, -2.5i, -1.5i
        let census = argument_census(&h).unwrap();
        assert_eq!(census.poles_below, 2);
        assert_eq!(census.zeros_below, 1);
        let r = eta_term(&h, 1e5, 0.0).unwrap();
        assert!((r.eta - census.winding as f64).abs() < 1e-6, "{r:?} {census:?}");
        assert!((r.eta + 1.0).abs() < 1e-6);
    }

    #[test]
    fn shift_invariance() {
        let h = example();
        let a = eta_term(&h, 1e5, 0.0).unwrap().eta;
        let b = eta_term(&h, 1e5, 0.37).unwrap().eta;
        assert!((a - b).abs() < 1e-6);
    }

    #[test]
    fn matrix_family() {
        // diagonal 2x2: one entry has its zero below the line, the other not
        let m1 = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        let m2 = DMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(0.0), c(1.0)]);
        let h = MellinPerturbation::rational(
            2,
            1.0,
            vec![
                RationalEntry { num: Poly::from_real(&[2.0]), den: Poly::from_real(&[0.25, 0.0, 1.0]), matrix: m1 },
                RationalEntry { num: Poly::from_real(&[0.2]), den: Poly::from_real(&[0.25, 0.0, 1.0]), matrix: m2 },
            ],
        )
        .unwrap();
        let r = eta_term(&h, 1e5, 0.0).unwrap();
        assert!((r.eta - 1.0).abs() < 1e-6, "{r:?}");
        assert_eq!(argument_census(&h).unwrap().winding, 1);
    }

    #[test]
    fn line_violation_has_witness() {
        // zero of 1 + c/(σ² + b²) at σ = -i exactly on the line
        match MellinPerturbation::rank_one(0.75, 0.5, 1.0) {
            Err(Error::LineNotInvertible { sigma, .. }) => assert!((sigma.im + 1.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert!(MellinPerturbation::rational(
            1,
            1.0,
            vec![RationalEntry {
                num: Poly::from_real(&[0.0, 1.0]),
                den: Poly::from_real(&[1.0, 0.0, 1.0]),
                matrix: DMatrix::from_element(1, 1, c(1.0)),
            }]
        )
        .is_err());
    }
}
