use crate::scattering::analytic_pt_transmission;
use crate::{Error, Grid1D, Result};

/// `∫_{q₁ > cut} n dq₁ / ∫ n dq₁`; a sample sitting exactly on the cut counts half.
pub fn transmitted_fraction(grid: &Grid1D, density: &[f64], q1_cut: f64) -> Result<f64> {
    if density.len() != grid.len {
        return Err(Error::GridMismatch(format!(
            "{} samples on a {}-point grid",
            density.len(),
            grid.len
        )));
    }
    if q1_cut < grid.start || q1_cut > grid.end() {
        return Err(Error::OutOfDomain {
            q1: q1_cut,
            min: grid.start,
            max: grid.end(),
        });
    }
    let eps = 1e-9 * grid.step;
    let (mut right, mut total) = (0.0, 0.0);
    for (i, n) in density.iter().enumerate() {
        let q = grid.at(i);
        total += n;
        if q > q1_cut + eps {
            right += n;
        } else if q >= q1_cut - eps {
            right += 0.5 * n;
        }
    }
    if total <= 0.0 {
        return Err(Error::invalid("density", "carries no mass"));
    }
    Ok(right / total)
}

/// `|T|²` of the Pöschl–Teller well averaged over a Gaussian momentum
/// distribution of mean `k0` and standard deviation `sigma_k` (restricted to `k ≥ 0`).
pub fn momentum_averaged_transmission(nu: f64, alpha: f64, k0: f64, sigma_k: f64) -> Result<f64> {
    if !(sigma_k > 0.0) || !(k0 > 0.0) {
        return Err(Error::invalid("k0/sigma_k", "both must be positive"));
    }
    let lo = (k0 - 8.0 * sigma_k).max(0.0);
    let hi = k0 + 8.0 * sigma_k;
    let n = 4000;
    let h = (hi - lo) / n as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..=n {
        let k = lo + i as f64 * h;
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let g = w * (-(k - k0).powi(2) / (2.0 * sigma_k * sigma_k)).exp();
        num += g * analytic_pt_transmission(nu, alpha, k);
        den += g;
    }
    Ok(num / den)
}
