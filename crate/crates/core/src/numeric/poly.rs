//! Complex polynomials with ascending coefficients and a root finder that
//! reports multiplicities.

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    /// `coeffs[j]` multiplies `x^j`.
    pub coeffs: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Monic polynomial with the given roots (repeated as listed).
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (j, &cj) in c.iter().enumerate() {
                next[j + 1] += cj;
                next[j] -= cj * r;
            }
            c = next;
        }
        Poly::new(c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![Complex64::new(0.0, 0.0)]);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| c * j as f64)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut c = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        Poly::new(
            (0..n)
                .map(|j| {
                    self.coeffs.get(j).copied().unwrap_or(zero)
                        + other.coeffs.get(j).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }

    /// Roots with multiplicities, or `Err(residual)` if the iteration failed.
    ///
    /// Aberth–Ehrlich simultaneous iteration, followed by clustering of
    /// nearby approximations and Newton refinement of each cluster centre on
    /// the `(k-1)`-th derivative.
    pub fn roots(&self) -> std::result::Result<Vec<Root>, f64> {
        let deg = self.degree();
        if deg == 0 {
            return Ok(Vec::new());
        }
        let lead = self.leading();
        let monic: Vec<Complex64> = self.coeffs.iter().map(|c| c / lead).collect();
        let p = Poly { coeffs: monic };
        let dp = p.derivative();

        // Cauchy bound for the initial circle.
        let radius = 1.0
            + p.coeffs[..deg]
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
        let mut z: Vec<Complex64> = (0..deg)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.4;
                Complex64::from_polar(0.5 * radius, th)
            })
            .collect();
        for _ in 0..500 {
            let mut max_step: f64 = 0.0;
            for i in 0..deg {
                let pv = p.eval(z[i]);
                if pv.norm() == 0.0 {
                    continue;
                }
                let ratio = pv / dp.eval(z[i]);
                let mut sum = Complex64::new(0.0, 0.0);
                for j in 0..deg {
                    if j != i {
                        let d = z[i] - z[j];
                        if d.norm() > 0.0 {
                            sum += 1.0 / d;
                        }
                    }
                }
                let denom = 1.0 - ratio * sum;
                let step = if denom.norm() > 0.0 { ratio / denom } else { ratio };
                if step.re.is_finite() && step.im.is_finite() {
                    z[i] -= step;
                    max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
                }
            }
            if max_step < 1e-15 {
                break;
            }
        }

        let scale = 1.0 + z.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let mut used = vec![false; deg];
        let mut out = Vec::new();
        for i in 0..deg {
            if used[i] {
                continue;
            }
            used[i] = true;
            let mut members = vec![z[i]];
            for j in (i + 1)..deg {
                if !used[j] && (z[j] - z[i]).norm() < 1e-5 * scale {
                    used[j] = true;
                    members.push(z[j]);
                }
            }
            let k = members.len();
            let mut r = members.iter().sum::<Complex64>() / k as f64;
            let mut q = p.clone();
            for _ in 1..k {
                q = q.derivative();
            }
            let dq = q.derivative();
            for _ in 0..50 {
                let d = dq.eval(r);
                if d.norm() == 0.0 {
                    break;
                }
                let step = q.eval(r) / d;
                r -= step;
                if step.norm() < 1e-16 * (1.0 + r.norm()) {
                    break;
                }
            }
            let residual = p.eval(r).norm();
            let tol = 1e-8 * p.coeffs.iter().map(|c| c.norm()).sum::<f64>() * (1.0 + r.norm()).powi(deg as i32);
            if !(residual <= tol) {
                return Err(residual);
            }
            out.push(Root {
                value: r,
                multiplicity: k,
            });
        }
        Ok(out)
    }
}
