//! Interpolation helpers.

use crate::{Error, Result};

/// Natural cubic spline through `(x_i, y_i)` on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::GridMismatch(format!(
                "{} abscissas vs {} values",
                x.len(),
                y.len()
            )));
        }
        if x.len() < 3 {
            return Err(Error::InsufficientSamples {
                needed: 3,
                got: x.len(),
            });
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("q1", "samples must be strictly increasing"));
        }
        let n = x.len();
        // Second derivatives m with m0 = m_{n-1} = 0 (Thomas algorithm).
        let mut m = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let a = h0 / 6.0;
            let b = (h0 + h1) / 3.0;
            let cc = h1 / 6.0;
            let rhs = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
            let denom = b - a * c[i - 1];
            c[i] = cc / denom;
            d[i] = (rhs - a * d[i - 1]) / denom;
        }
        for i in (1..n - 1).rev() {
            m[i] = d[i] - c[i] * m[i + 1];
        }
        Ok(Self { x, y, m })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.x, &self.y)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        let slack = 1e-12 * (hi - lo);
        if !(t >= lo - slack && t <= hi + slack) {
            return Err(Error::OutOfDomain {
                q1: t,
                min: lo,
                max: hi,
            });
        }
        let t = t.clamp(lo, hi);
        let i = match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            k if k >= self.x.len() => self.x.len() - 2,
            k => k - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        Ok(a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0)
    }
}

/// Linear interpolation on a uniform grid, optionally periodic with the given
/// period (in which case `values[i]` sits at `start + i*step` and wraps).
pub(crate) fn linear_uniform(start: f64, step: f64, values: &[f64], period: Option<f64>, t: f64) -> f64 {
    let n = values.len();
    let mut s = t - start;
    if let Some(p) = period {
        s = s.rem_euclid(p);
        let pos = s / step;
        let i = (pos.floor() as usize).min(n - 1);
        let w = pos - i as f64;
        let j = (i + 1) % n;
        return values[i] * (1.0 - w) + values[j] * w;
    }
    let pos = (s / step).clamp(0.0, (n - 1) as f64);
    let i = (pos.floor() as usize).min(n - 2);
    let w = pos - i as f64;
    values[i] * (1.0 - w) + values[i + 1] * w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spline_reproduces_smooth_function() {
        let x: Vec<f64> = (0..201).map(|i| i as f64 * 0.05).collect();
        let y: Vec<f64> = x.iter().map(|x| x.sin()).collect();
        let s = CubicSpline::new(x, y).unwrap();
        for t in [0.3, 1.234, 5.0, 9.87] {
            assert!((s.eval(t).unwrap() - f64::sin(t)).abs() < 1e-5);
        }
        assert!(s.eval(10.5).is_err());
    }

    #[test]
    fn periodic_linear_wraps() {
        let v = [0.0, 1.0, 2.0, 3.0];
        assert!((linear_uniform(0.0, 1.0, &v, Some(4.0), 3.5) - 1.5).abs() < 1e-12);
        assert!((linear_uniform(0.0, 1.0, &v, None, 2.5) - 2.5).abs() < 1e-12);
    }
}
