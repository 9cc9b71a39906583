//! The smooth step `psi(t) = g(t) / (g(t) + g(1-t))`, `g(t) = exp(-1/t)`,
//! and its derivatives in closed form.

/// Polynomials `P_k` with `g^{(k)}(t) = P_k(1/t) e^{-1/t}` (ascending coefficients).
fn g_polys(order: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![1.0]];
    for k in 0..order {
        let p = &out[k];
        // P_{k+1}(u) = u^2 (P_k(u) - P_k'(u))
        let mut q = vec![0.0; p.len() + 2];
        for (j, &c) in p.iter().enumerate() {
            q[j + 2] += c;
            if j > 0 {
                q[j + 1] -= j as f64 * c;
            }
        }
        out.push(q);
    }
    out
}

fn g_derivs(t: f64, order: usize, polys: &[Vec<f64>]) -> Vec<f64> {
    if t <= 0.0 {
        return vec![0.0; order + 1];
    }
    let u = 1.0 / t;
    let e = (-u).exp();
    polys[..=order]
        .iter()
        .map(|p| e * p.iter().rev().fold(0.0, |acc, &c| acc * u + c))
        .collect()
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `psi^{(k)}(t)` for `k = 0..=order`; `psi = 0` for `t <= 0`, `1` for `t >= 1`.
pub fn smooth_step_derivs(t: f64, order: usize) -> Vec<f64> {
    let mut out = vec![0.0; order + 1];
    if t <= 0.0 {
        return out;
    }
    if t >= 1.0 {
        out[0] = 1.0;
        return out;
    }
    let polys = g_polys(order);
    let g = g_derivs(t, order, &polys);
    let h: Vec<f64> = g_derivs(1.0 - t, order, &polys)
        .iter()
        .enumerate()
        .map(|(k, v)| if k % 2 == 0 { *v } else { -*v })
        .collect();
    let d: Vec<f64> = g.iter().zip(&h).map(|(a, b)| a + b).collect();
    for k in 0..=order {
        let mut num = g[k];
        for i in 0..k {
            num -= binom(k, i) * out[i] * d[k - i];
        }
        out[k] = num / d[0];
    }
    out
}

pub fn smooth_step(t: f64) -> f64 {
    smooth_step_derivs(t, 0)[0]
}

/// Excision function in the radial variable: `0` for `r <= radius`,
/// `1` for `r >= 2 radius`; returns the `order`-th derivative in `r`.
pub fn excision(r: f64, radius: f64, order: usize) -> f64 {
    let d = smooth_step_derivs(r / radius - 1.0, order);
    d[order] / radius.powi(order as i32)
}

/// Cut-off equal to `1` on `[0, inner]` and `0` on `[outer, inf)`.
pub fn cutoff_one_near_zero(x: f64, inner: f64, outer: f64) -> f64 {
    1.0 - smooth_step((x - inner) / (outer - inner))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_match_finite_differences() {
        for &t in &[0.13, 0.5, 0.77, 0.95] {
            let d = smooth_step_derivs(t, 3);
            for k in 0..3 {
                let h = 1e-5;
                let fd = (smooth_step_derivs(t + h, k)[k] - smooth_step_derivs(t - h, k)[k]) / (2.0 * h);
                assert!((fd - d[k + 1]).abs() < 1e-6 * (1.0 + d[k + 1].abs()), "t={t} k={k}");
            }
        }
    }

    #[test]
    fn symmetry_and_limits() {
        for &t in &[0.1, 0.3, 0.5] {
            assert!((smooth_step(t) + smooth_step(1.0 - t) - 1.0).abs() < 1e-15);
        }
        assert_eq!(smooth_step(0.0), 0.0);
        assert_eq!(smooth_step(1.0), 1.0);
        assert_eq!(excision(0.3, 0.5, 0), 0.0);
        assert_eq!(excision(1.2, 0.5, 0), 1.0);
        assert_eq!(excision(1.2, 0.5, 2), 0.0);
    }
}
