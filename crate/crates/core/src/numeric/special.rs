//! Special functions: complex Gamma (Lanczos) and Bessel functions of the
//! first kind with real order, plus bracketed zeros of `J_nu`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function on the complex plane.
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return Complex64::new(PI, 0.0) / (s * gamma(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * ((z + 0.5) * t.ln() - t).exp() * acc
}

/// `log Γ(x)` for real `x > 0`.
pub fn ln_gamma_real(x: f64) -> f64 {
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma_real(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// `1/Gamma(z)`, entire; exact zeros at the non-positive integers.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let nearest = z.re.round();
        if z.im == 0.0 && z.re == nearest && nearest <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        return (z * PI).sin() * gamma(Complex64::new(1.0, 0.0) - z) / PI;
    }
    Complex64::new(1.0, 0.0) / gamma(z)
}

pub fn gamma_real(x: f64) -> f64 {
    gamma(Complex64::new(x, 0.0)).re
}

/// `J_nu(x)` for real `nu >= 0` and `x >= 0`.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    if x < 2.0 {
        bessel_j_series(nu, x)
    } else {
        bessel_jy_steed(nu, x).0
    }
}

/// `(J_nu(x), J_nu'(x))`.
pub fn bessel_j_and_derivative(nu: f64, x: f64) -> (f64, f64) {
    if x < 2.0 {
        // J' = J_{nu-1} - (nu/x) J_nu, expressed through J_{nu+1} to stay in nu >= 0
        let j = bessel_j_series(nu, x);
        let j1 = bessel_j_series(nu + 1.0, x);
        (j, nu / x * j - j1)
    } else {
        let (j, _, jp, _) = bessel_jy_steed(nu, x);
        (j, jp)
    }
}

fn bessel_j_series(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = (nu * half.ln() - ln_gamma_real(nu + 1.0)).exp();
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Steed/Temme evaluation of `J_nu, Y_nu` and their derivatives for `x >= 2`:
/// continued fraction CF1 for `J'/J`, downward recurrence to `|mu| <= 1/2`,
/// complex continued fraction CF2 for `(Y' + iJ')/(Y + iJ)` and the Wronskian
/// for normalisation.
fn bessel_jy_steed(nu: f64, x: f64) -> (f64, f64, f64, f64) {
    const EPS: f64 = 1e-16;
    const FPMIN: f64 = 1e-300;
    const MAXIT: usize = 100_000;
    debug_assert!(x >= 2.0 && nu >= 0.0);

    let nl = ((nu - x + 1.5).floor()).max(0.0) as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            break;
        }
    }

    let mut rjl = isign * FPMIN * 1e100;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let rjp1 = rjpl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let mut a = 0.25 - xmu2;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fct = a * xi / (p * p + q * q);
    let mut cr = br + q * fct;
    let mut ci = bi + p * fct;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for i in 1..MAXIT {
        a += 2.0 * i as f64;
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fct = a / (cr * cr + ci * ci);
        cr = br + cr * fct;
        ci = bi - ci * fct;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - 1.0).abs() + dli.abs() < EPS {
            break;
        }
    }
    let gam = (p - f) / q;
    let mut rjmu = (w / ((p - f) * gam + q)).sqrt();
    if rjl < 0.0 {
        rjmu = -rjmu;
    }
    let mut rymu = rjmu * gam;
    let rymup = rymu * (p + q / gam);
    let mut ry1 = xmu * xi * rymu - rymup;

    let scale = rjmu / rjl;
    let rj = rjl1 * scale;
    let rjp = rjp1 * scale;
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    let ry = rymu;
    let ryp = nu * xi * rymu - ry1;
    (rj, ry, rjp, ryp)
}

/// Refine a sign-changing bracket of `J_nu` by safeguarded Newton.
fn refine_zero(nu: f64, mut lo: f64, mut hi: f64, mut flo: f64) -> Result<f64> {
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (f, fp) = bessel_j_and_derivative(nu, x);
        if f == 0.0 {
            return Ok(x);
        }
        if (f < 0.0) == (flo < 0.0) {
            lo = x;
            flo = f;
        } else {
            hi = x;
        }
        let newton = x - f / fp;
        let next = if fp != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 1e-15 * x.abs() || hi - lo <= 4e-16 * hi {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Bracketing {
        lo,
        hi,
        detail: format!("no convergence for J_{nu}"),
    })
}

/// Positive zeros of `J_nu` that are `<= x_max`, ascending.
///
/// Zeros are bracketed by a scan with step `pi/4` starting at
/// `max(nu, 2)` (no zero lies below), then refined to relative `1e-15`.
pub fn bessel_zeros_below(nu: f64, x_max: f64) -> Result<Vec<f64>> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Config(format!("Bessel order must be >= 0, got {nu}")));
    }
    let step = PI / 4.0;
    let mut zeros = Vec::new();
    let mut a = nu.max(2.0);
    let mut fa = bessel_j(nu, a);
    while a < x_max {
        let b = (a + step).min(x_max);
        let fb = bessel_j(nu, b);
        if fa == 0.0 {
            zeros.push(a);
        } else if (fa < 0.0) != (fb < 0.0) && fb != 0.0 {
            zeros.push(refine_zero(nu, a, b, fa)?);
        }
        a = b;
        fa = fb;
    }
    if fa == 0.0 && a <= x_max {
        zeros.push(a);
    }
    Ok(zeros)
}

/// The first `count` positive zeros `j_{nu,k}` of `J_nu`.
pub fn bessel_zeros(nu: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    // McMahon: j_{nu,k} ~ (k + nu/2 - 1/4) pi; pad generously and trim.
    let mut x_max = (count as f64 + nu / 2.0 + 2.0) * PI + nu;
    loop {
        let zeros = bessel_zeros_below(nu, x_max)?;
        if zeros.len() >= count {
            return Ok(zeros[..count].to_vec());
        }
        x_max *= 1.5;
        if x_max > 1e7 {
            return Err(Error::Bracketing {
                lo: 0.0,
                hi: x_max,
                detail: format!("only {} zeros of J_{nu} found", zeros.len()),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_known_values() {
        assert!((gamma_real(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma_real(0.5) - PI.sqrt()).abs() < 1e-14);
        let g = gamma(Complex64::new(-0.5, 0.0));
        assert!((g.re + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert_eq!(recip_gamma(Complex64::new(-3.0, 0.0)), Complex64::new(0.0, 0.0));
        assert_eq!(recip_gamma(Complex64::new(0.0, 0.0)), Complex64::new(0.0, 0.0));
        // Gamma(1+i) from the reflection / recurrence identity |Gamma(i)|^2 = pi/sinh(pi)
        let gi = gamma(Complex64::new(0.0, 1.0));
        assert!((gi.norm_sqr() - PI / PI.sinh()).abs() < 1e-13);
    }

    #[test]
    fn large_arguments_stay_finite() {
        let direct: f64 = (1..=200).map(|k| (k as f64).ln()).sum();
        assert!((ln_gamma_real(201.0) - direct).abs() < 1e-12 * direct);
        assert!((gamma_real(151.0).ln() - ln_gamma_real(151.0)).abs() < 1e-11 * ln_gamma_real(151.0));
        // J_ν(x) ≈ (x/2)^ν / Γ(ν+1) · (1 - x²/(4(ν+1))) for ν ≫ x
        for &nu in &[150.0, 199.5, 400.0] {
            let x: f64 = 1.0;
            let lead = (nu * (0.5 * x).ln() - ln_gamma_real(nu + 1.0)).exp() * (1.0 - 0.25 / (nu + 1.0));
            let (j, d) = bessel_j_and_derivative(nu, x);
            assert!(j.is_finite() && d.is_finite());
            assert!((j - lead).abs() <= 1e-4 * lead.abs(), "{nu}: {j} vs {lead}");
        }
    }

    #[test]
    fn half_order_bessel_closed_form() {
        for &x in &[0.3, 1.7, 2.0, 5.5, 40.0, 170.0] {
            let exact = (2.0 / (PI * x)).sqrt() * x.sin();
            assert!((bessel_j(0.5, x) - exact).abs() < 1e-13, "x={x}");
            let exact15 = (2.0 / (PI * x)).sqrt() * (x.sin() / x - x.cos());
            assert!((bessel_j(1.5, x) - exact15).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn series_and_steed_agree_at_switch() {
        for &nu in &[0.0, 0.7, 1.5, 3.25, 10.0] {
            let a = bessel_j_series(nu, 2.0);
            let b = bessel_jy_steed(nu, 2.0).0;
            assert!((a - b).abs() < 1e-14 * (1.0 + a.abs()), "nu={nu}: {a} vs {b}");
        }
    }

    #[test]
    fn wronskian_holds() {
        for &(nu, x) in &[(1.5, 3.0), (20.3, 10.0), (80.0, 120.0), (2.5, 250.0)] {
            let (j, y, jp, yp) = bessel_jy_steed(nu, x);
            let wr = j * yp - y * jp;
            assert!((wr - 2.0 / (PI * x)).abs() < 1e-12 * (2.0 / (PI * x)) * 1e3);
        }
    }

    #[test]
    fn half_order_zeros_are_multiples_of_pi() {
        let z = bessel_zeros(0.5, 30).unwrap();
        for (k, zk) in z.iter().enumerate() {
            assert!((zk - (k + 1) as f64 * PI).abs() < 1e-12 * zk);
        }
    }
}
