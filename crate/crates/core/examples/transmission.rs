//! Transmission through Pöschl–Teller guides against the closed form.
//! Integer `nu` gives reflectionless guides.

use bentguide::geometry::CurvatureProfile;
use bentguide::potentials::cip_from_profile;
use bentguide::scattering::{analytic_pt_transmission, bound_states, default_scattering_grid, log_k_grid, scatter};

fn main() -> bentguide::Result<()> {
    let alpha = 0.125;
    let ks = log_k_grid(0.02, 2.0, 8)?;
    for nu in [0.5, 1.0, 1.5, 2.0] {
        let v = cip_from_profile(
            &CurvatureProfile::poschl_teller(nu, alpha)?,
            default_scattering_grid(alpha)?,
        )?;
        let r = scatter(&v, &ks)?;
        let spec = bound_states(&v)?;
        println!("nu = {nu}: {} bound state(s) {:?}", spec.count, spec.energies);
        for (k, t) in ks.iter().zip(r.transmission_probability()) {
            println!(
                "  k = {k:.4}  |T|^2 = {t:.8}  analytic {:.8}",
                analytic_pt_transmission(nu, alpha, *k)
            );
        }
    }
    Ok(())
}
