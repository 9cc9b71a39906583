//! Parameter-dependent symbols `a(ξ, λ)` in the classes `S^{μ,p,d}`:
//! sampled seminorm verification, homogeneous expansion, resolvent symbols
//! and the leading parametrix.

pub mod expr;

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sector::Sector;
pub use expr::Expr;
use expr::norm;

/// Orders `(μ, p, d)` of `S^{μ,p,d}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolOrders {
    pub mu: f64,
    pub p: f64,
    pub d: f64,
}

type NumericFn = Arc<dyn Fn(&[f64], Complex64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
pub enum Evaluator {
    Expr(Expr),
    Numeric(NumericFn),
}

#[derive(Clone)]
pub struct ParamSymbol {
    pub eval: Evaluator,
    pub orders: SymbolOrders,
    pub n: usize,
    pub cutoff_radius: f64,
}

impl std::fmt::Debug for ParamSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParamSymbol")
            .field("orders", &self.orders)
            .field("n", &self.n)
            .field("closed_form", &matches!(self.eval, Evaluator::Expr(_)))
            .finish()
    }
}

impl ParamSymbol {
    pub fn from_expr(expr: Expr, orders: SymbolOrders, n: usize, cutoff_radius: f64) -> Self {
        ParamSymbol {
            eval: Evaluator::Expr(expr),
            orders,
            n,
            cutoff_radius,
        }
    }

    pub fn zero(orders: SymbolOrders, n: usize) -> Self {
        Self::from_expr(Expr::zero(), orders, n, 0.5)
    }

    pub fn with_orders(&self, orders: SymbolOrders) -> Self {
        ParamSymbol {
            orders,
            ..self.clone()
        }
    }

    pub fn expr(&self) -> Option<&Expr> {
        match &self.eval {
            Evaluator::Expr(e) => Some(e),
            Evaluator::Numeric(_) => None,
        }
    }

    pub fn value(&self, xi: &[f64], lambda: Complex64) -> Complex64 {
        match &self.eval {
            Evaluator::Expr(e) => e.eval(xi, lambda),
            Evaluator::Numeric(f) => f(xi, lambda),
        }
    }

    /// `∂_ξ^α ∂_λ^β` by central finite differences with one Richardson step;
    /// steps are order-adaptive, `h = ε_mach^{1/(m+4)} · max(1, scale)`.
    pub fn fd_derivative(&self, alpha: &[u32], beta: u32, xi: &[f64], lambda: Complex64) -> Complex64 {
        let total = alpha.iter().sum::<u32>() + beta;
        if total == 0 {
            return self.value(xi, lambda);
        }
        let base = f64::EPSILON.powf(1.0 / (total as f64 + 4.0));
        let coarse = self.fd_stencil(alpha, beta, xi, lambda, base);
        let fine = self.fd_stencil(alpha, beta, xi, lambda, 0.5 * base);
        (4.0 * fine - coarse) / 3.0
    }

    fn fd_stencil(&self, alpha: &[u32], beta: u32, xi: &[f64], lambda: Complex64, base: f64) -> Complex64 {
        let hx = base * norm(xi).max(1.0);
        let hl = base * lambda.norm().max(1.0);
        let mut orders: Vec<u32> = alpha.to_vec();
        orders.push(beta);
        let steps: Vec<f64> = (0..orders.len()).map(|i| if i < alpha.len() { hx } else { hl }).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = vec![0u32; orders.len()];
        loop {
            let mut w = 1.0;
            let mut x = xi.to_vec();
            let mut l = lambda;
            for (v, (&m, &k)) in orders.iter().zip(&idx).enumerate() {
                if m == 0 {
                    continue;
                }
                w *= binom(m, k) * if k % 2 == 1 { -1.0 } else { 1.0 } / steps[v].powi(m as i32);
                let off = (m as f64 / 2.0 - k as f64) * steps[v];
                if v < alpha.len() {
                    x[v] += off;
                } else {
                    l += off;
                }
            }
            acc += self.value(&x, l) * w;
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    return acc;
                }
                if idx[pos] < orders[pos] {
                    idx[pos] += 1;
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Class bound `(1+|ξ|)^{μ-p-|α|} (1+|ξ|+|λ|^{1/d})^{p-d|β|}`.
pub fn class_bound(orders: &SymbolOrders, abs_alpha: u32, beta: u32, xi_norm: f64, lambda: Complex64) -> f64 {
    let a = 1.0 + xi_norm;
    let b = 1.0 + xi_norm + lambda.norm().powf(1.0 / orders.d);
    a.powf(orders.mu - orders.p - abs_alpha as f64) * b.powf(orders.p - orders.d * beta as f64)
}

/// Sample grid for [`seminorm_check`].
#[derive(Debug, Clone)]
pub struct SeminormGrid {
    /// `|ξ|` runs over `{0} ∪ [xi_min_positive, xi_max]`.
    pub xi_min_positive: f64,
    pub xi_max: f64,
    /// `|λ|^{1/d}` runs over `[lam_root_min, lam_root_max]`.
    pub lam_root_min: f64,
    pub lam_root_max: f64,
    pub per_decade: usize,
    /// Arguments of the sampled `λ` rays.
    pub rays: Vec<f64>,
    /// Number of sampled directions of `ξ` when `n >= 2`.
    pub directions: usize,
}

impl SeminormGrid {
    pub fn for_sector(sector: &Sector) -> Self {
        SeminormGrid {
            xi_min_positive: 1e-2,
            xi_max: 1e3,
            lam_root_min: 1.0,
            lam_root_max: 1e3,
            per_decade: 40,
            rays: sector.rays(3),
            directions: 3,
        }
    }

    /// One more decade in each range at twice the density.
    pub fn refined(&self) -> Self {
        SeminormGrid {
            xi_max: self.xi_max * 10.0,
            lam_root_max: self.lam_root_max * 10.0,
            per_decade: self.per_decade * 2,
            ..self.clone()
        }
    }

    fn geometric(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
        let decades = (hi / lo).log10();
        let count = (decades * per_decade as f64).round() as usize;
        (0..=count)
            .map(|i| lo * 10f64.powf(decades * i as f64 / count.max(1) as f64))
            .collect()
    }

    fn xi_radii(&self) -> Vec<f64> {
        let mut r = vec![0.0];
        r.extend(Self::geometric(self.xi_min_positive, self.xi_max, self.per_decade));
        r
    }

    fn xi_directions(&self, n: usize) -> Vec<Vec<f64>> {
        if n == 1 {
            return vec![vec![1.0], vec![-1.0]];
        }
        (0..self.directions)
            .map(|k| {
                let th = 0.3 + std::f64::consts::PI * k as f64 / self.directions as f64;
                let mut v = vec![0.0; n];
                v[0] = th.cos();
                v[1] = th.sin();
                v
            })
            .collect()
    }

    fn lambdas(&self, d: f64) -> Vec<Complex64> {
        let roots = Self::geometric(self.lam_root_min, self.lam_root_max, self.per_decade);
        let mut out = Vec::with_capacity(roots.len() * self.rays.len());
        for &th in &self.rays {
            for &r in &roots {
                out.push(Complex64::from_polar(r.powf(d), th));
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct SeminormRow {
    pub alpha: Vec<u32>,
    pub beta: u32,
    pub worst_ratio: f64,
    pub refined_ratio: f64,
    /// Fitted slope of `log sup ratio` against `log(1+|ξ|)` for `|ξ| >= 1`.
    pub growth_slope: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct SeminormReport {
    pub rows: Vec<SeminormRow>,
    pub pass: bool,
}

impl SeminormReport {
    pub fn max_slope(&self) -> f64 {
        self.rows.iter().map(|r| r.growth_slope).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,beta,worst_ratio,grid_refined_ratio,pass\n");
        for r in &self.rows {
            let a: Vec<String> = r.alpha.iter().map(u32::to_string).collect();
            out.push_str(&format!(
                "{},{},{:e},{:e},{}\n",
                a.join(" "),
                r.beta,
                r.worst_ratio,
                r.refined_ratio,
                r.pass
            ));
        }
        out
    }
}

fn multi_indices(n: usize, max_total: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &out {
            let used: u32 = v.iter().sum();
            for a in 0..=(max_total - used) {
                let mut w = v.clone();
                w.push(a);
                next.push(w);
            }
        }
        out = next;
    }
    out.sort_by_key(|v| (v.iter().sum::<u32>(), v.iter().rev().cloned().collect::<Vec<_>>()));
    out
}

/// Sup of the ratio per `|ξ|` radius (max over directions, `λ`).
fn ratio_profile(
    s: &ParamSymbol,
    derivs: &[Option<Expr>],
    combos: &[(Vec<u32>, u32)],
    grid: &SeminormGrid,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let radii = grid.xi_radii();
    let dirs = grid.xi_directions(s.n);
    let lambdas = grid.lambdas(s.orders.d);
    let mut profile = vec![vec![0.0f64; radii.len()]; combos.len()];
    let mut xi = vec![0.0; s.n];
    for (ri, &r) in radii.iter().enumerate() {
        for dir in &dirs {
            for (x, d) in xi.iter_mut().zip(dir) {
                *x = r * d;
            }
            for &lambda in &lambdas {
                for (ci, (alpha, beta)) in combos.iter().enumerate() {
                    let v = match &derivs[ci] {
                        Some(e) => e.eval(&xi, lambda),
                        None => s.fd_derivative(alpha, *beta, &xi, lambda),
                    };
                    if !v.re.is_finite() || !v.im.is_finite() {
                        return Err(Error::NonFiniteSymbol { xi: xi.clone(), lambda });
                    }
                    let bound = class_bound(&s.orders, alpha.iter().sum(), *beta, r, lambda);
                    let ratio = v.norm() / bound;
                    if ratio > profile[ci][ri] {
                        profile[ci][ri] = ratio;
                    }
                }
            }
        }
    }
    Ok((radii, profile))
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x >= 1.0 && **y > 0.0)
        .map(|(x, y)| ((1.0 + x).ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Sampled seminorm ratios `sup |∂_ξ^α ∂_λ^β s| / bound` for `|α| <= max_alpha`,
/// `β <= max_beta`. A row passes when the ratio is finite and grows by at most
/// 10% from `grid` to `grid.refined()`.
pub fn seminorm_check(s: &ParamSymbol, max_alpha: u32, max_beta: u32, grid: &SeminormGrid) -> Result<SeminormReport> {
    let mut combos = Vec::new();
    for beta in 0..=max_beta {
        for alpha in multi_indices(s.n, max_alpha) {
            combos.push((alpha, beta));
        }
    }
    let derivs: Vec<Option<Expr>> = combos
        .iter()
        .map(|(a, b)| s.expr().map(|e| e.derivative(a, *b)))
        .collect();
    let (_, coarse) = ratio_profile(s, &derivs, &combos, grid)?;
    let (radii, fine) = ratio_profile(s, &derivs, &combos, &grid.refined())?;
    let mut rows = Vec::new();
    for (ci, (alpha, beta)) in combos.iter().enumerate() {
        let worst = coarse[ci].iter().cloned().fold(0.0, f64::max);
        let refined = fine[ci].iter().cloned().fold(0.0, f64::max);
        let pass = worst.is_finite() && refined.is_finite() && refined <= 1.1 * worst + 1e-300;
        rows.push(SeminormRow {
            alpha: alpha.clone(),
            beta: *beta,
            worst_ratio: worst,
            refined_ratio: refined,
            growth_slope: loglog_slope(&radii, &fine[ci]),
            pass,
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(SeminormReport { rows, pass })
}

/// Anisotropic homogeneous component `a_{μ-j}` of a closed-form symbol.
#[derive(Debug, Clone)]
pub struct HomogComponent {
    pub degree: f64,
    pub d: f64,
    source: Expr,
    top_grade: f64,
    taylor_index: Option<usize>,
}

const CAUCHY_POINTS: usize = 64;
const CAUCHY_RADIUS: f64 = 0.2;

impl HomogComponent {
    fn taylor(&self, xi: &[f64], lambda: Complex64, radius: f64) -> Result<Complex64> {
        let j = match self.taylor_index {
            Some(j) => j,
            None => return Ok(Complex64::new(0.0, 0.0)),
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..CAUCHY_POINTS {
            let th = std::f64::consts::TAU * (k as f64 + 0.5) / CAUCHY_POINTS as f64;
            let eps = Complex64::from_polar(radius, th);
            let (c, g) = self.source.graded(xi, lambda, eps, self.d)?;
            if g == f64::NEG_INFINITY {
                continue;
            }
            let shift = self.top_grade - g;
            acc += c * eps.powi(shift.round() as i32) * eps.powi(-(j as i32));
        }
        Ok(acc / CAUCHY_POINTS as f64)
    }

    fn normalize(&self, xi: &[f64], lambda: Complex64) -> (f64, Vec<f64>, Complex64) {
        let r = norm(xi);
        let scale = (r.powf(2.0 * self.d) + lambda.norm_sqr()).powf(1.0 / (2.0 * self.d));
        if scale == 0.0 {
            return (0.0, xi.to_vec(), lambda);
        }
        (
            scale,
            xi.iter().map(|x| x / scale).collect(),
            lambda / scale.powf(self.d),
        )
    }

    pub fn try_eval(&self, xi: &[f64], lambda: Complex64) -> Result<Complex64> {
        let (scale, xs, ls) = self.normalize(xi, lambda);
        if scale == 0.0 {
            return Ok(Complex64::new(f64::NAN, 0.0));
        }
        Ok(self.taylor(&xs, ls, CAUCHY_RADIUS)? * scale.powf(self.degree))
    }

    pub fn eval(&self, xi: &[f64], lambda: Complex64) -> Complex64 {
        self.try_eval(xi, lambda).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    /// Component of the same index for `∂_λ` of the source symbol
    /// (degree lowered by `d`).
    pub fn d_lambda(&self) -> HomogComponent {
        HomogComponent {
            degree: self.degree - self.d,
            d: self.d,
            source: self.source.d_lambda(),
            top_grade: self.top_grade - self.d,
            taylor_index: self.taylor_index,
        }
    }

    /// Relative disagreement between Cauchy radii `r` and `r/2` at a point.
    fn cauchy_consistency(&self, xi: &[f64], lambda: Complex64) -> Result<f64> {
        let (scale, xs, ls) = self.normalize(xi, lambda);
        if scale == 0.0 {
            return Ok(0.0);
        }
        let a = self.taylor(&xs, ls, CAUCHY_RADIUS)?;
        let b = self.taylor(&xs, ls, 0.5 * CAUCHY_RADIUS)?;
        Ok((a - b).norm() / (1.0 + a.norm().max(b.norm())))
    }
}

pub struct HomogExpansion {
    pub components: Vec<HomogComponent>,
    pub remainder: ParamSymbol,
}

/// Top anisotropic grade of an expression (its degree of homogeneity at infinity).
pub fn leading_grade(e: &Expr, n: usize, d: f64) -> Result<f64> {
    let xi: Vec<f64> = (0..n.max(1)).map(|i| 0.7 - 0.2 * i as f64).collect();
    let (_, g) = e.graded(&xi, Complex64::new(-1.3, 0.4), Complex64::new(0.0, 0.0), d)?;
    Ok(g)
}

/// `s ~ Σ_{j<N} χ a_{μ-j} + r_N` with `a_{μ-j}` extracted as Taylor
/// coefficients of `ε^μ s(ξ/ε, λ/ε^d)` at `ε = 0`.
pub fn homog_expand(s: &ParamSymbol, big_n: usize) -> Result<HomogExpansion> {
    let expr = s
        .expr()
        .ok_or_else(|| Error::NonClassical("homogeneous expansion needs a closed-form symbol".into()))?
        .clone();
    let d = s.orders.d;
    let mu = s.orders.mu;
    let top = leading_grade(&expr, s.n, d)?;
    let mut components = Vec::new();
    if big_n > 0 {
        if top == f64::NEG_INFINITY {
            for j in 0..big_n {
                components.push(HomogComponent {
                    degree: mu - j as f64,
                    d,
                    source: expr.clone(),
                    top_grade: mu,
                    taylor_index: None,
                });
            }
        } else {
            let gap = mu - top;
            if gap < -1e-9 || (gap - gap.round()).abs() > 1e-9 {
                return Err(Error::NonClassical(format!(
                    "leading degree {top} incompatible with declared order {mu}"
                )));
            }
            let gap = gap.round() as usize;
            for j in 0..big_n {
                components.push(HomogComponent {
                    degree: mu - j as f64,
                    d,
                    source: expr.clone(),
                    top_grade: top,
                    taylor_index: j.checked_sub(gap),
                });
            }
            // Scaling limits must be stable under a change of Cauchy radius.
            let probes = [
                (vec![1.0; s.n], Complex64::new(-1.0, 0.0)),
                (vec![0.3; s.n], Complex64::new(0.0, 2.0)),
                (vec![2.0; s.n], Complex64::new(-0.5, -0.5)),
            ];
            for c in &components {
                for (xi, l) in &probes {
                    let err = c.cauchy_consistency(xi, *l)?;
                    if !(err < 1e-9) {
                        return Err(Error::NonClassical(format!(
                            "scaling limit of degree {} does not converge (discrepancy {err:e})",
                            c.degree
                        )));
                    }
                }
            }
        }
    }
    let remainder = if components.is_empty() {
        s.clone()
    } else {
        let comps = components.clone();
        let chi = Expr::chi(s.cutoff_radius);
        let src = expr.clone();
        ParamSymbol {
            eval: Evaluator::Numeric(Arc::new(move |xi: &[f64], l: Complex64| {
                let c = chi.eval(xi, l);
                let mut v = src.eval(xi, l);
                if c != Complex64::new(0.0, 0.0) {
                    for comp in &comps {
                        v -= c * comp.eval(xi, l);
                    }
                }
                v
            })),
            orders: SymbolOrders {
                mu: mu - big_n as f64,
                ..s.orders
            },
            n: s.n,
            cutoff_radius: s.cutoff_radius,
        }
    };
    Ok(HomogExpansion { components, remainder })
}

fn unit_sphere_samples(n: usize) -> Vec<Vec<f64>> {
    if n == 1 {
        return vec![vec![1.0], vec![-1.0]];
    }
    (0..64)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / 64.0;
            let mut v = vec![0.0; n];
            v[0] = th.cos();
            v[1] = th.sin();
            v
        })
        .collect()
}

/// `χ(ξ) b(ξ) (a(ξ) - λ)^{-ℓ}` with orders `(μ' - ℓμ, -ℓμ, μ)`, where `μ`
/// and `μ'` are the degrees of `a` and `b`.
pub fn resolvent_symbol(a_mu: &Expr, b: &Expr, ell: u32, sector: &Sector, n: usize, chi_radius: f64) -> Result<ParamSymbol> {
    for xi in unit_sphere_samples(n) {
        let v = a_mu.eval(&xi, Complex64::new(0.0, 0.0));
        if v.norm() == 0.0 || sector.contains(v) {
            return Err(Error::SectorViolation { xi, value: v });
        }
    }
    let mu = leading_grade(a_mu, n, 1.0)?;
    let mu_b = leading_grade(b, n, 1.0)?;
    let expr = Expr::chi(chi_radius) * b.clone() * (a_mu.clone() - Expr::lambda()).pow(-(ell as i32));
    Ok(ParamSymbol::from_expr(
        expr,
        SymbolOrders {
            mu: mu_b - ell as f64 * mu,
            p: -(ell as f64) * mu,
            d: mu,
        },
        n,
        chi_radius,
    ))
}

/// `b_{-μ} = χ(ξ) (a_μ(ξ) - x^μ λ)^{-1}` for the one-dimensional model at a
/// fixed `x`.
pub fn parametrix_leading(a_mu: &Expr, mu: f64, x: f64, sector: &Sector, eps: f64) -> Result<ParamSymbol> {
    for xi in parametrix_grid() {
        let v = a_mu.eval(&[xi], Complex64::new(0.0, 0.0));
        if v.norm() == 0.0 || sector.contains(v) {
            return Err(Error::NotInvertible {
                xi: vec![xi],
                lambda: v / x.powf(mu),
            });
        }
    }
    let xmu = Expr::constant(x.powf(mu));
    let expr = Expr::chi(eps) * (a_mu.clone() - xmu * Expr::lambda()).pow(-1);
    Ok(ParamSymbol::from_expr(
        expr,
        SymbolOrders { mu: -mu, p: -mu, d: mu },
        1,
        eps,
    ))
}

fn parametrix_grid() -> Vec<f64> {
    let mut g = vec![0.0];
    for i in 0..=140 {
        let r = 1e-3 * 10f64.powf(i as f64 / 20.0);
        g.push(r);
        g.push(-r);
    }
    g
}

/// Max over the grid of `|(a_μ - x^μ λ) b - χ|`, i.e. the defect in
/// `(a_μ - x^μ λ) b_{-μ} = 1 + (χ - 1)`.
pub fn parametrix_identity_residual(a_mu: &Expr, b: &ParamSymbol, mu: f64, x: f64, lambdas: &[Complex64]) -> f64 {
    let chi = Expr::chi(b.cutoff_radius);
    let mut worst: f64 = 0.0;
    for xi in parametrix_grid() {
        for &l in lambdas {
            let lhs = (a_mu.eval(&[xi], l) - x.powf(mu) * l) * b.value(&[xi], l);
            let rhs = chi.eval(&[xi], l);
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

pub struct NeumannRefinement {
    /// `b0 (1 + Σ_{j=1}^{J} s0^j)`.
    pub symbol: ParamSymbol,
    /// `(1 - s0)(1 + Σ s0^j) - 1 = -s0^{J+1}`.
    pub error_symbol: ParamSymbol,
}

pub fn neumann_refine(b0: &ParamSymbol, s0: &ParamSymbol, steps: i32) -> Result<NeumannRefinement> {
    if steps < 1 {
        return Err(Error::Config(format!("neumann_refine needs steps >= 1, got {steps}")));
    }
    let (b, s) = match (b0.expr(), s0.expr()) {
        (Some(b), Some(s)) => (b.clone(), s.clone()),
        _ => return Err(Error::Config("neumann_refine needs closed-form symbols".into())),
    };
    let mut series = vec![Expr::one()];
    for j in 1..=steps {
        series.push(s.clone().pow(j));
    }
    let symbol = ParamSymbol::from_expr(b * Expr::sum(series), b0.orders, b0.n, b0.cutoff_radius);
    let error = -(s.pow(steps + 1));
    let error_symbol = ParamSymbol::from_expr(
        error,
        SymbolOrders {
            mu: s0.orders.mu * (steps + 1) as f64,
            ..s0.orders
        },
        s0.n,
        s0.cutoff_radius,
    );
    Ok(NeumannRefinement { symbol, error_symbol })
}

/// Least-squares slope of `log |s(ξ, λ)|` against `log(1+|ξ|)` for
/// `|ξ|` geometric in `[lo, hi]` along the first coordinate axis.
pub fn decay_slope(s: &ParamSymbol, lambda: Complex64, lo: f64, hi: f64) -> f64 {
    let radii = SeminormGrid::geometric(lo, hi, 20);
    let vals: Vec<f64> = radii
        .iter()
        .map(|&r| {
            let mut xi = vec![0.0; s.n];
            xi[0] = r;
            s.value(&xi, lambda).norm()
        })
        .collect();
    loglog_slope(&radii, &vals)
}
