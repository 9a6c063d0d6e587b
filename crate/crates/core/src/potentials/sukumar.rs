use super::{PotentialGrid, PotentialSource};
use crate::geometry::validate_eta;
use crate::{Error, Grid1D, Result};

/// LU factorization with partial pivoting of a small dense matrix (row-major),
/// solving `A X = B` in place of `B`.
fn lu_solve(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .unwrap();
        if a[pivot * n + col].abs() < 1e-300 {
            return Err(Error::Internal("singular determinant matrix".into()));
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
                b.swap(col * n + k, pivot * n + k);
            }
        }
        for row in col + 1..n {
            let f = a[row * n + col] / a[col * n + col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= f * a[col * n + k];
            }
            for k in 0..n {
                b[row * n + k] -= f * b[col * n + k];
            }
        }
    }
    for col in 0..n {
        for row in (0..n).rev() {
            let mut s = b[row * n + col];
            for k in row + 1..n {
                s -= a[row * n + k] * b[k * n + col];
            }
            b[row * n + col] = s / a[row * n + row];
        }
    }
    Ok(b)
}

/// Squared curvature `8 d²/dq1² ln det D_n` of the reflectionless guide with
/// bound states at `E_n = -η_n²/2`, where
/// `[D]_ij = ½ η_j^(i-1) [exp(η_j q1) + (-1)^(i+j) exp(-η_j q1)]`.
///
/// Uses `D'' = D·diag(η²)`, so `(ln det D)'' = Σ η_j² - tr((D⁻¹D')²)`. Scaling
/// column `j` of both `D` and `D'` by `exp(-η_j |q1|)` leaves `D⁻¹D'` similar to
/// the unscaled product and keeps every entry bounded.
pub fn sukumar_curvature_squared(eta: &[f64], q1: f64) -> Result<f64> {
    validate_eta(eta)?;
    let n = eta.len();
    let aq = q1.abs();
    let mut d = vec![0.0; n * n];
    let mut dp = vec![0.0; n * n];
    for i in 0..n {
        for (j, &e) in eta.iter().enumerate() {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            let grow = (e * (q1 - aq)).exp();
            let decay = (-e * (q1 + aq)).exp();
            let pow = e.powi(i as i32);
            d[i * n + j] = 0.5 * pow * (grow + sign * decay);
            dp[i * n + j] = 0.5 * pow * e * (grow - sign * decay);
        }
    }
    let m = lu_solve(d, dp, n)?;
    let mut trace_sq = 0.0;
    for i in 0..n {
        for k in 0..n {
            trace_sq += m[i * n + k] * m[k * n + i];
        }
    }
    let sum_sq: f64 = eta.iter().map(|e| e * e).sum();
    let k2 = 8.0 * (sum_sq - trace_sq);
    if !k2.is_finite() {
        return Err(Error::Internal(format!(
            "non-finite determinant curvature at q1 = {q1}"
        )));
    }
    // Rounding in the cancellation can leave tiny negatives in the flat tails.
    if k2 < 0.0 && k2 >= -super::REALIZABILITY_TOL * sum_sq.max(1.0) {
        return Ok(0.0);
    }
    Ok(k2)
}

/// Curvature-induced potential `-κ_n²/8` of the determinant guide on a grid.
pub fn sukumar_cip(eta: &[f64], grid: Grid1D) -> Result<PotentialGrid> {
    let v = grid
        .points()
        .into_iter()
        .map(|q| sukumar_curvature_squared(eta, q).map(|k2| -0.125 * k2))
        .collect::<Result<Vec<_>>>()?;
    PotentialGrid::new(grid, v, PotentialSource::CipOfProfile)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_state_is_sech_squared() {
        assert!((sukumar_curvature_squared(&[1.0], 0.0).unwrap() - 8.0).abs() < 1e-13);
        for q in [-2.0, 0.7, 3.3] {
            let expect = 8.0 / f64::cosh(q).powi(2);
            assert!((sukumar_curvature_squared(&[1.0], q).unwrap() - expect).abs() < 1e-12);
        }
        assert!(sukumar_curvature_squared(&[1.0], 60.0).unwrap().abs() < 1e-12);
        assert!(sukumar_curvature_squared(&[1.0], -60.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn no_overflow_far_out() {
        let k = sukumar_curvature_squared(&[1.0, 1.5, 2.2], 900.0).unwrap();
        assert!(k.is_finite() && k >= 0.0);
    }

    #[test]
    fn rejects_unsorted_eta() {
        assert!(sukumar_curvature_squared(&[2.0, 1.0], 0.0).is_err());
    }
}
