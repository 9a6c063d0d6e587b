//! Reflectionless guides with prescribed bound-state energies `-eta²/2`.

use bentguide::potentials::sukumar_cip;
use bentguide::scattering::{bound_states, log_k_grid, scatter};
use bentguide::Grid1D;

fn main() -> bentguide::Result<()> {
    let ks = log_k_grid(0.05, 2.0, 32)?;
    for eta in [vec![1.0], vec![1.0, 1.5], vec![0.5, 1.0, 1.25]] {
        let v = sukumar_cip(&eta, Grid1D::symmetric(40.0, 0.01)?)?;
        let spec = bound_states(&v)?;
        let max_r = scatter(&v, &ks)?
            .reflection_probability()
            .into_iter()
            .fold(0.0, f64::max);
        let target: Vec<f64> = eta.iter().rev().map(|e| -e * e / 2.0).collect();
        println!(
            "eta = {eta:?}: energies {:?} (target {target:?}), max |R|^2 = {max_r:.2e}",
            spec.energies
        );
    }
    Ok(())
}
