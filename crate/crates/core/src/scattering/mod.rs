//! Stationary 1D scattering and bound states on a [`PotentialGrid`].
//!
//! [`PotentialGrid`]: crate::potentials::PotentialGrid

mod bound;
mod numerov;

pub use bound::{bound_states, bound_states_with, BoundStateOptions, BoundStateSpectrum};
pub use numerov::{scatter, scatter_with, ScatterOptions, ScatteringResult};

use crate::{Complex64, Error, Grid1D, Result};

/// Box half-width `40/α` and spacing `min(0.02/α, 0.05)`.
pub fn default_scattering_grid(alpha: f64) -> Result<Grid1D> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::invalid("alpha", format!("must be positive, got {alpha}")));
    }
    Grid1D::symmetric(40.0 / alpha, (0.02 / alpha).min(0.05))
}

/// `n` log-spaced momenta in `[k_min, k_max]`.
pub fn log_k_grid(k_min: f64, k_max: f64, n: usize) -> Result<Vec<f64>> {
    if !(k_min > 0.0) || !(k_max > k_min) {
        return Err(Error::invalid(
            "k_range",
            format!("need 0 < k_min < k_max, got [{k_min}, {k_max}]"),
        ));
    }
    if n < 2 {
        return Err(Error::invalid("k_count", "need at least two momenta"));
    }
    let (a, b) = (k_min.ln(), k_max.ln());
    Ok((0..n)
        .map(|i| {
            if i == n - 1 {
                k_max
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect())
}

/// The default sweep: 64 log-spaced momenta in `[0.02, 2]`.
pub fn default_k_grid() -> Vec<f64> {
    log_k_grid(0.02, 2.0, 64).expect("static range")
}

/// Closed-form `|T|²` of the Pöschl–Teller well `-ν(ν+1)α²/2 · sech²(αq)`.
pub fn analytic_pt_transmission(nu: f64, alpha: f64, k: f64) -> f64 {
    let s = (std::f64::consts::PI * nu).sin();
    if (nu - nu.round()).abs() < 1e-12 || s == 0.0 {
        return 1.0;
    }
    let mu = (std::f64::consts::PI * k / alpha).sinh() / s;
    if !mu.is_finite() {
        return 1.0;
    }
    let mu2 = mu * mu;
    mu2 / (1.0 + mu2)
}

/// Partner amplitudes `R₋, T₋` from `R₊, T₊`.
///
/// `phi_minus_asym` and `phi_plus_asym` are the superpotential limits at
/// `q₁ → -∞` and `q₁ → +∞`; `k` in `result_plus` is the left-channel momentum.
pub fn susy_amplitude_map(
    result_plus: &ScatteringResult,
    phi_minus_asym: f64,
    phi_plus_asym: f64,
) -> Result<ScatteringResult> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = result_plus.clone();
    for i in 0..out.k.len() {
        let k = out.k[i];
        if !(k > 0.0) {
            return Err(Error::invalid("k", format!("must be positive, got {k}")));
        }
        let kp2 = k * k + 2.0 * (phi_minus_asym * phi_minus_asym - phi_plus_asym * phi_plus_asym);
        if !(kp2 > 0.0) {
            return Err(Error::BelowThreshold {
                energy: 0.5 * k * k + phi_minus_asym * phi_minus_asym,
                threshold: phi_plus_asym * phi_plus_asym,
            });
        }
        let kp = kp2.sqrt();
        let den = Complex64::new(phi_minus_asym, -k * s);
        let r_fac = Complex64::new(phi_minus_asym, k * s) / den;
        let t_fac = Complex64::new(phi_plus_asym, -kp * s) / den;
        out.r[i] = r_fac * result_plus.r[i];
        out.t[i] = t_fac * result_plus.t[i];
        out.k_right[i] = kp;
    }
    Ok(out)
}
