//! Closed-form symbol expressions in `(ξ, λ)` with exact differentiation and
//! graded evaluation along the anisotropic dilation `(ξ, λ) -> (ξ/ε, λ/ε^d)`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::smooth::excision;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Lambda,
    Xi(usize),
    /// `|ξ|^p`
    NormPow(f64),
    /// `order`-th radial derivative of the excision function `χ(|ξ|)`.
    Chi { radius: f64, order: u32 },
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, i32),
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(Complex64::new(c, 0.0))
    }

    pub fn zero() -> Expr {
        Expr::Const(ZERO)
    }

    pub fn one() -> Expr {
        Expr::Const(ONE)
    }

    pub fn lambda() -> Expr {
        Expr::Lambda
    }

    pub fn xi(i: usize) -> Expr {
        Expr::Xi(i)
    }

    pub fn norm_pow(p: f64) -> Expr {
        if p == 0.0 {
            Expr::one()
        } else {
            Expr::NormPow(p)
        }
    }

    pub fn chi(radius: f64) -> Expr {
        Expr::Chi { radius, order: 0 }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == ZERO)
    }

    pub fn pow(self, n: i32) -> Expr {
        match (n, self) {
            (0, _) => Expr::one(),
            (1, e) => e,
            (_, Expr::Const(c)) => Expr::Const(c.powi(n)),
            (_, Expr::Pow(inner, m)) => Expr::Pow(inner, m * n),
            (_, e) => Expr::Pow(Box::new(e), n),
        }
    }

    pub fn sum(terms: Vec<Expr>) -> Expr {
        let mut flat = Vec::new();
        let mut constant = ZERO;
        for t in terms {
            match t {
                Expr::Const(c) => constant += c,
                Expr::Sum(inner) => {
                    for u in inner {
                        if let Expr::Const(c) = u {
                            constant += c;
                        } else {
                            flat.push(u);
                        }
                    }
                }
                other => flat.push(other),
            }
        }
        if constant != ZERO {
            flat.push(Expr::Const(constant));
        }
        match flat.len() {
            0 => Expr::zero(),
            1 => flat.pop().unwrap(),
            _ => Expr::Sum(flat),
        }
    }

    pub fn product(factors: Vec<Expr>) -> Expr {
        let mut flat = Vec::new();
        let mut constant = ONE;
        for f in factors {
            match f {
                Expr::Const(c) => constant *= c,
                Expr::Product(inner) => {
                    for u in inner {
                        if let Expr::Const(c) = u {
                            constant *= c;
                        } else {
                            flat.push(u);
                        }
                    }
                }
                other => flat.push(other),
            }
        }
        if constant == ZERO {
            return Expr::zero();
        }
        if constant != ONE || flat.is_empty() {
            flat.insert(0, Expr::Const(constant));
        }
        match flat.len() {
            1 => flat.pop().unwrap(),
            _ => Expr::Product(flat),
        }
    }

    /// Largest `ξ` index referenced, plus one.
    pub fn dimension_hint(&self) -> usize {
        match self {
            Expr::Xi(i) => i + 1,
            Expr::Sum(v) | Expr::Product(v) => v.iter().map(Expr::dimension_hint).max().unwrap_or(0),
            Expr::Pow(e, _) => e.dimension_hint(),
            _ => 0,
        }
    }

    pub fn eval(&self, xi: &[f64], lambda: Complex64) -> Complex64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Lambda => lambda,
            Expr::Xi(i) => Complex64::new(xi[*i], 0.0),
            Expr::NormPow(p) => {
                let r = norm(xi);
                Complex64::new(r.powf(*p), 0.0)
            }
            Expr::Chi { radius, order } => Complex64::new(excision(norm(xi), *radius, *order as usize), 0.0),
            Expr::Sum(v) => v.iter().map(|e| e.eval(xi, lambda)).sum(),
            Expr::Product(v) => {
                let mut acc = ONE;
                let mut any_zero = false;
                for e in v {
                    let x = e.eval(xi, lambda);
                    if x == ZERO {
                        any_zero = true;
                        break;
                    }
                    acc *= x;
                }
                if any_zero {
                    ZERO
                } else {
                    acc
                }
            }
            Expr::Pow(e, n) => e.eval(xi, lambda).powi(*n),
        }
    }

    pub fn d_xi(&self, i: usize) -> Expr {
        match self {
            Expr::Const(_) | Expr::Lambda => Expr::zero(),
            Expr::Xi(j) => {
                if *j == i {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Expr::NormPow(p) => Expr::product(vec![Expr::constant(*p), Expr::Xi(i), Expr::norm_pow(p - 2.0)]),
            Expr::Chi { radius, order } => Expr::product(vec![
                Expr::Chi {
                    radius: *radius,
                    order: order + 1,
                },
                Expr::Xi(i),
                Expr::NormPow(-1.0),
            ]),
            Expr::Sum(v) => Expr::sum(v.iter().map(|e| e.d_xi(i)).collect()),
            Expr::Product(v) => product_rule(v, |e| e.d_xi(i)),
            Expr::Pow(e, n) => {
                let de = e.d_xi(i);
                if de.is_zero() {
                    return Expr::zero();
                }
                Expr::product(vec![Expr::constant(*n as f64), (**e).clone().pow(n - 1), de])
            }
        }
    }

    pub fn d_lambda(&self) -> Expr {
        match self {
            Expr::Lambda => Expr::one(),
            Expr::Const(_) | Expr::Xi(_) | Expr::NormPow(_) | Expr::Chi { .. } => Expr::zero(),
            Expr::Sum(v) => Expr::sum(v.iter().map(Expr::d_lambda).collect()),
            Expr::Product(v) => product_rule(v, Expr::d_lambda),
            Expr::Pow(e, n) => {
                let de = e.d_lambda();
                if de.is_zero() {
                    return Expr::zero();
                }
                Expr::product(vec![Expr::constant(*n as f64), (**e).clone().pow(n - 1), de])
            }
        }
    }

    /// `∂_ξ^α ∂_λ^β` for a multi-index `alpha`.
    pub fn derivative(&self, alpha: &[u32], beta: u32) -> Expr {
        let mut e = self.clone();
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                e = e.d_xi(i);
            }
        }
        for _ in 0..beta {
            e = e.d_lambda();
        }
        e
    }

    /// Evaluate along the dilation: returns `(c, γ)` with
    /// `self(ξ/ε, λ/ε^d) = ε^{-γ} c(ε)` and `c` analytic at `ε = 0`.
    /// The excision function is taken as identically one (valid for
    /// `|ξ|/|ε|` beyond twice its radius). A zero value has grade `-inf`.
    pub fn graded(&self, xi: &[f64], lambda: Complex64, eps: Complex64, d: f64) -> Result<(Complex64, f64)> {
        const NONE: f64 = f64::NEG_INFINITY;
        Ok(match self {
            Expr::Const(c) => {
                if *c == ZERO {
                    (ZERO, NONE)
                } else {
                    (*c, 0.0)
                }
            }
            Expr::Lambda => (lambda, d),
            Expr::Xi(i) => (Complex64::new(xi[*i], 0.0), 1.0),
            Expr::NormPow(p) => (Complex64::new(norm(xi).powf(*p), 0.0), *p),
            Expr::Chi { order, .. } => {
                if *order == 0 {
                    (ONE, 0.0)
                } else {
                    (ZERO, NONE)
                }
            }
            Expr::Sum(v) => {
                let parts = v
                    .iter()
                    .map(|e| e.graded(xi, lambda, eps, d))
                    .collect::<Result<Vec<_>>>()?;
                let top = parts.iter().map(|p| p.1).fold(NONE, f64::max);
                if top == NONE {
                    return Ok((ZERO, NONE));
                }
                let mut acc = ZERO;
                for (c, g) in parts {
                    if g == NONE {
                        continue;
                    }
                    let shift = top - g;
                    let k = shift.round();
                    if (shift - k).abs() > 1e-9 {
                        return Err(Error::NonClassical(format!(
                            "terms of degrees {top} and {g} differ by a non-integer"
                        )));
                    }
                    acc += c * eps.powi(k as i32);
                }
                (acc, top)
            }
            Expr::Product(v) => {
                let mut acc = ONE;
                let mut grade = 0.0;
                for e in v {
                    let (c, g) = e.graded(xi, lambda, eps, d)?;
                    if g == NONE {
                        return Ok((ZERO, NONE));
                    }
                    acc *= c;
                    grade += g;
                }
                (acc, grade)
            }
            Expr::Pow(e, n) => {
                let (c, g) = e.graded(xi, lambda, eps, d)?;
                if g == NONE {
                    if *n < 0 {
                        return Err(Error::NonClassical("negative power of a vanishing expression".into()));
                    }
                    return Ok((ZERO, NONE));
                }
                (c.powi(*n), g * *n as f64)
            }
        })
    }
}

fn product_rule<F: Fn(&Expr) -> Expr>(v: &[Expr], d: F) -> Expr {
    let mut terms = Vec::new();
    for (i, f) in v.iter().enumerate() {
        let df = d(f);
        if df.is_zero() {
            continue;
        }
        let mut factors = v.to_vec();
        factors[i] = df;
        terms.push(Expr::product(factors));
    }
    Expr::sum(terms)
}

pub fn norm(xi: &[f64]) -> f64 {
    xi.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::sum(vec![self, rhs])
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sum(vec![self, -rhs])
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::product(vec![self, rhs])
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::product(vec![Expr::constant(-1.0), self])
    }
}
