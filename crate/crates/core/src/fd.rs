//! Fourth-order finite differences on uniformly spaced samples.

/// First derivative of uniformly spaced samples, fourth order everywhere
/// (one-sided stencils at the two outermost points on each side).
pub(crate) fn first_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 5, "need at least five samples");
    let mut d = vec![0.0; n];
    let s = 1.0 / (12.0 * h);
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * s;
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * s;
    for i in 2..n - 2 {
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * s;
    }
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) * s;
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) * s;
    d
}

/// Second derivative of uniformly spaced samples, fourth order everywhere.
pub(crate) fn second_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 6, "need at least six samples");
    let mut d = vec![0.0; n];
    let s = 1.0 / (12.0 * h * h);
    let fwd0 = |g: &dyn Fn(usize) -> f64| {
        (45.0 * g(0) - 154.0 * g(1) + 214.0 * g(2) - 156.0 * g(3) + 61.0 * g(4) - 10.0 * g(5)) * s
    };
    let fwd1 =
        |g: &dyn Fn(usize) -> f64| (10.0 * g(0) - 15.0 * g(1) - 4.0 * g(2) + 14.0 * g(3) - 6.0 * g(4) + g(5)) * s;
    d[0] = fwd0(&|k| f[k]);
    d[1] = fwd1(&|k| f[k]);
    for i in 2..n - 2 {
        d[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) * s;
    }
    d[n - 1] = fwd0(&|k| f[n - 1 - k]);
    d[n - 2] = fwd1(&|k| f[n - 1 - k]);
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_is_differentiated_exactly() {
        let h = 0.25;
        let x: Vec<f64> = (0..12).map(|i| -1.0 + i as f64 * h).collect();
        let f: Vec<f64> = x.iter().map(|x| x.powi(4) - 2.0 * x.powi(3) + x).collect();
        let d1 = first_derivative(&f, h);
        let d2 = second_derivative(&f, h);
        for (i, x) in x.iter().enumerate() {
            assert!((d1[i] - (4.0 * x.powi(3) - 6.0 * x * x + 1.0)).abs() < 1e-10);
            assert!((d2[i] - (12.0 * x * x - 12.0 * x)).abs() < 1e-9);
        }
    }
}
