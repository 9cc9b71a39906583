//! Closed sectors `{λ : arg_min <= arg λ <= arg_max}` in the complex plane.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sector {
    pub arg_min: f64,
    pub arg_max: f64,
    pub contains_origin: bool,
}

impl Sector {
    pub fn new(arg_min: f64, arg_max: f64) -> Result<Self> {
        let width = arg_max - arg_min;
        if !(0.0..=TAU + 1e-15).contains(&width) {
            return Err(Error::Config(format!(
                "sector width {width} outside [0, 2pi]"
            )));
        }
        Ok(Sector {
            arg_min,
            arg_max,
            contains_origin: true,
        })
    }

    /// `{π/2 <= arg λ <= 3π/2}`.
    pub fn left_half_plane() -> Self {
        Sector {
            arg_min: PI / 2.0,
            arg_max: 1.5 * PI,
            contains_origin: true,
        }
    }

    /// `{ε0 <= arg λ <= 2π - ε0}`.
    pub fn complement_of_positive_axis(eps0: f64) -> Self {
        Sector {
            arg_min: eps0,
            arg_max: TAU - eps0,
            contains_origin: true,
        }
    }

    pub fn contains_arg(&self, arg: f64) -> bool {
        let tol = 1e-12;
        let mut a = (arg - self.arg_min).rem_euclid(TAU);
        if a > TAU - tol {
            a -= TAU;
        }
        a >= -tol && a <= self.arg_max - self.arg_min + tol
    }

    pub fn contains(&self, lambda: Complex64) -> bool {
        if lambda.norm() == 0.0 {
            return self.contains_origin;
        }
        self.contains_arg(lambda.arg())
    }

    /// `count` equally spaced arguments covering the sector (endpoints included).
    pub fn rays(&self, count: usize) -> Vec<f64> {
        if count <= 1 {
            return vec![0.5 * (self.arg_min + self.arg_max)];
        }
        (0..count)
            .map(|i| self.arg_min + (self.arg_max - self.arg_min) * i as f64 / (count - 1) as f64)
            .collect()
    }

    /// True when the closed sector meets `[0, inf)`.
    pub fn meets_positive_axis(&self) -> bool {
        self.contains_arg(0.0)
    }
}
