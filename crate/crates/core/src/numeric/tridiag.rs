//! Symmetric tridiagonal pencils `K - lambda W` with positive diagonal `W`:
//! Sturm-count bisection, inverse iteration and complex Thomas solves.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TridiagPencil {
    /// Diagonal of `K`.
    pub diag: Vec<f64>,
    /// Off-diagonal of `K` (length `n - 1`).
    pub off: Vec<f64>,
    /// Diagonal positive weight `W`.
    pub weight: Vec<f64>,
}

impl TridiagPencil {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues of `W^{-1} K` strictly below `lambda`
    /// (negative pivots of the `LDL^T` factorization of `K - lambda W`).
    pub fn count_below(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.diag.len() {
            let a = self.diag[i] - lambda * self.weight[i];
            d = if i == 0 {
                a
            } else {
                let e = self.off[i - 1];
                a - e * e / d
            };
            if d == 0.0 {
                d = -f64::MIN_POSITIVE;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval of the symmetrized matrix `W^{-1/2} K W^{-1/2}`.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let w = self.weight[i];
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs() / (w * self.weight[i - 1]).sqrt();
            }
            if i + 1 < n {
                r += self.off[i].abs() / (w * self.weight[i + 1]).sqrt();
            }
            let c = self.diag[i] / w;
            lo = lo.min(c - r);
            hi = hi.max(c + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 2e-16 * lo.abs().max(hi.abs()) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// All eigenvalues strictly below `cutoff`, ascending.
    pub fn eigenvalues_below(&self, cutoff: f64) -> Vec<f64> {
        let count = self.count_below(cutoff);
        (0..count).map(|k| self.eigenvalue(k)).collect()
    }

    /// Eigenvector for a (converged) eigenvalue by inverse iteration,
    /// normalized so that `v^T W v = 1` with a positive first large entry.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        let shift = lambda * (1.0 + 1e-13) + 1e-300;
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
        for _ in 0..4 {
            let rhs: Vec<f64> = v.iter().zip(&self.weight).map(|(a, w)| a * w).collect();
            v = self.solve_real_shifted(shift, &rhs);
            let norm = v
                .iter()
                .zip(&self.weight)
                .map(|(a, w)| a * a * w)
                .sum::<f64>()
                .sqrt();
            for x in v.iter_mut() {
                *x /= norm;
            }
        }
        let imax = v
            .iter()
            .enumerate()
            .fold((0, 0.0), |b, (i, x)| if x.abs() > b.1 { (i, x.abs()) } else { b })
            .0;
        if v[imax] < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
        v
    }

    fn solve_real_shifted(&self, lambda: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let tiny = 1e-300;
        let mut piv = self.diag[0] - lambda * self.weight[0];
        if piv.abs() < tiny {
            piv = tiny;
        }
        d[0] = rhs[0] / piv;
        for i in 1..n {
            c[i - 1] = self.off[i - 1] / piv;
            piv = self.diag[i] - lambda * self.weight[i] - self.off[i - 1] * c[i - 1];
            if piv.abs() < tiny {
                piv = tiny;
            }
            d[i] = (rhs[i] - self.off[i - 1] * d[i - 1]) / piv;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        d
    }

    /// Apply `K - lambda W` to a complex vector.
    pub fn apply_shifted(&self, lambda: Complex64, u: &[Complex64]) -> Vec<Complex64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = (self.diag[i] - lambda * self.weight[i]) * u[i];
                if i > 0 {
                    s += self.off[i - 1] * u[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * u[i + 1];
                }
                s
            })
            .collect()
    }

    /// Solve `(K - lambda W) u = rhs` by the Thomas algorithm.
    pub fn solve_shifted(&self, lambda: Complex64, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.len();
        let scale = self
            .diag
            .iter()
            .zip(&self.weight)
            .map(|(d, w)| d.abs() + lambda.norm() * w)
            .fold(0.0, f64::max);
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        let mut d = vec![Complex64::new(0.0, 0.0); n];
        let mut piv = self.diag[0] - lambda * self.weight[0];
        if piv.norm() <= 1e-14 * scale {
            return Err(Error::Singular { lambda });
        }
        d[0] = rhs[0] / piv;
        for i in 1..n {
            c[i - 1] = self.off[i - 1] / piv;
            piv = self.diag[i] - lambda * self.weight[i] - self.off[i - 1] * c[i - 1];
            if piv.norm() <= 1e-14 * scale || !piv.re.is_finite() {
                return Err(Error::Singular { lambda });
            }
            d[i] = (rhs[i] - self.off[i - 1] * d[i - 1]) / piv;
        }
        for i in (0..n - 1).rev() {
            let next = d[i + 1];
            d[i] -= c[i] * next;
        }
        Ok(d)
    }
}
