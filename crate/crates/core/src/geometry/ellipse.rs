use std::f64::consts::PI;

use crate::{Error, Result};

/// Arc-length map of the ellipse `r(u) = (a cos u, b sin u)`.
///
/// The speed `|r'(u)|` is periodic with period π, so it is expanded in a cosine
/// series (trapezoid coefficients are spectrally accurate for periodic analytic
/// integrands) and integrated term by term.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipseArc {
    a: f64,
    b: f64,
    /// `speed(u) = c[0] + Σ_k c[k] cos(2ku)`.
    coeffs: Vec<f64>,
}

impl EllipseArc {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::invalid("b", format!("semi-axis must be positive, got {b}")));
        }
        if !(a >= b) || !a.is_finite() {
            return Err(Error::invalid("a", format!("need a >= b > 0, got a = {a}, b = {b}")));
        }
        let m = 2048usize;
        let speed: Vec<f64> = (0..m)
            .map(|j| {
                let u = PI * j as f64 / m as f64;
                (a * a * u.sin().powi(2) + b * b * u.cos().powi(2)).sqrt()
            })
            .collect();
        let c0 = speed.iter().sum::<f64>() / m as f64;
        let mut coeffs = vec![c0];
        for k in 1..m / 2 {
            let ck = 2.0 / m as f64
                * speed
                    .iter()
                    .enumerate()
                    .map(|(j, s)| s * (2.0 * k as f64 * PI * j as f64 / m as f64).cos())
                    .sum::<f64>();
            if ck.abs() < 1e-17 * c0 && k > 4 {
                break;
            }
            coeffs.push(ck);
        }
        Ok(Self { a, b, coeffs })
    }

    /// Semi-axes `(a, b)` for a given eccentricity and perimeter. The perimeter
    /// is linear in `a` at fixed eccentricity, so the unit ellipse fixes the scale.
    pub fn axes_from_eccentricity(eccentricity: f64, perimeter: f64) -> Result<(f64, f64)> {
        if !(0.0..1.0).contains(&eccentricity) {
            return Err(Error::invalid(
                "eccentricity",
                format!("must lie in [0, 1), got {eccentricity}"),
            ));
        }
        if !(perimeter > 0.0) {
            return Err(Error::invalid(
                "perimeter",
                format!("must be positive, got {perimeter}"),
            ));
        }
        let ratio = (1.0 - eccentricity * eccentricity).sqrt();
        let unit = Self::new(1.0, ratio)?;
        let a = perimeter / unit.perimeter();
        Ok((a, a * ratio))
    }

    pub fn semi_axes(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn eccentricity(&self) -> f64 {
        (1.0 - (self.b / self.a).powi(2)).sqrt()
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * PI * self.coeffs[0]
    }

    pub fn speed(&self, u: f64) -> f64 {
        (self.a * self.a * u.sin().powi(2) + self.b * self.b * u.cos().powi(2)).sqrt()
    }

    /// Arc length from `u = 0` to `u`.
    pub fn arc_length(&self, u: f64) -> f64 {
        let (s2, c2) = (2.0 * u).sin_cos();
        // sin(2ku) by the rotation recurrence.
        let (mut sk, mut ck) = (s2, c2);
        let mut total = self.coeffs[0] * u;
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            total += c * sk / (2.0 * k as f64);
            let next_s = sk * c2 + ck * s2;
            ck = ck * c2 - sk * s2;
            sk = next_s;
        }
        total
    }

    /// Parameter `u` at arc length `q1` (any real `q1`, wrapping around the loop).
    pub fn parameter_at(&self, q1: f64) -> f64 {
        let l = self.perimeter();
        let turns = (q1 / l).floor();
        let rest = q1 - turns * l;
        let mut u = 2.0 * PI * rest / l;
        for _ in 0..50 {
            let du = (self.arc_length(u) - rest) / self.speed(u);
            u -= du;
            if du.abs() < 1e-15 {
                break;
            }
        }
        u + 2.0 * PI * turns
    }

    /// Unsigned curvature at parameter `u`.
    pub fn curvature_at_parameter(&self, u: f64) -> f64 {
        self.a * self.b / self.speed(u).powi(3)
    }

    pub fn curvature_at(&self, q1: f64) -> f64 {
        self.curvature_at_parameter(self.parameter_at(q1))
    }
}
