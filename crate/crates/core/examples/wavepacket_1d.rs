//! A wave packet on the arc length of a partially reflecting guide, compared
//! with the momentum-averaged transmission probability.

use bentguide::dynamics::{
    momentum_averaged_transmission, propagate_1d, transmitted_fraction, Boundary, PropagateOptions, WaveState,
};
use bentguide::geometry::CurvatureProfile;
use bentguide::potentials::cip_from_profile;
use bentguide::Grid1D;

fn main() -> bentguide::Result<()> {
    let (nu, alpha, k0, fwhm) = (0.5, 0.125, 0.05, 120.0);
    let grid = Grid1D::periodic(-1400.0, 2800.0, 8192)?;
    let v = cip_from_profile(&CurvatureProfile::poschl_teller(nu, alpha)?, grid)?;
    let psi0 = WaveState::gaussian(grid, -300.0, fwhm, k0, Boundary::absorbing(200.0, 0.002)?)?;
    let steps = 12000;
    let tr = propagate_1d(
        &v,
        &psi0,
        1.0,
        steps,
        &PropagateOptions {
            snapshot_every: 2000,
            check_budget: true,
        },
    )?;
    for (s, t) in tr.snapshots.iter().zip(tr.times()) {
        let right = transmitted_fraction(&s.grid, &s.density(), 40.0)?;
        println!("t = {t:>6.0}: norm {:.5}, right of the bend {right:.5}", s.norm());
    }
    let last = tr.final_state();
    let t = transmitted_fraction(&last.grid, &last.density(), 40.0)? + tr.absorbed_right.last().copied().unwrap_or(0.0);
    let sigma = bentguide::dynamics::fwhm_to_sigma(fwhm);
    let predicted = momentum_averaged_transmission(nu, alpha, k0, 1.0 / (2.0 * sigma))?;
    println!("transmitted {t:.5}, predicted {predicted:.5}");
    Ok(())
}
