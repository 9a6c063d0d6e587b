//! Supersymmetric partners of a tanh superpotential: the partner loses the
//! zero mode, keeps the rest of the spectrum and |R|, and both guides follow
//! from the same wall.

use bentguide::potentials::{susy_pair_with_reference, Superpotential};
use bentguide::scattering::{bound_states, log_k_grid, scatter, susy_amplitude_map};
use bentguide::Grid1D;

fn main() -> bentguide::Result<()> {
    let (amp, alpha) = (1.5, 1.0);
    let phi = Superpotential::tanh_wall(amp, alpha)?;
    let pair = susy_pair_with_reference(&phi, Grid1D::symmetric(30.0, 0.01)?, amp * amp)?;
    println!(
        "realizable: minus {}, plus {}",
        pair.realizable_minus, pair.realizable_plus
    );
    println!("H- spectrum {:?}", bound_states(&pair.v_minus)?.energies);
    println!("H+ spectrum {:?}", bound_states(&pair.v_plus)?.energies);

    let ks = log_k_grid(0.05, 2.0, 6)?;
    let plus = scatter(&pair.v_plus, &ks)?;
    let minus = scatter(&pair.v_minus, &ks)?;
    let (lo, hi) = phi.asymptotes()?;
    let mapped = susy_amplitude_map(&plus, lo, hi)?;
    for ((k, r), m) in ks.iter().zip(&minus.r).zip(&mapped.r) {
        println!("k = {k:.3}: R- numeric {r:.6}, R- from R+ {m:.6}");
    }
    Ok(())
}
