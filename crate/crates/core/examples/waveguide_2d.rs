//! Wave packet through a painted 2D guide bent along the masked Pöschl–Teller
//! curve. Pass `nu` and the run length, e.g. `waveguide_2d 1 28000`; the
//! default is a short run.

use bentguide::config::PropagateConfig;
use bentguide::dynamics::{propagate_2d, Propagate2DOptions};
use bentguide::geometry::{CurvatureProfile, SignMask};
use bentguide::pipeline::{build_guide_2d, initial_packet_2d};

fn main() -> bentguide::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let nu = args.first().copied().unwrap_or(1.0);
    let p = PropagateConfig {
        t_end: args.get(1).copied().unwrap_or(3840.0),
        ..PropagateConfig::default()
    };

    let profile = CurvatureProfile::poschl_teller(nu, 0.125)?.with_sign_mask(SignMask::sign_of_q1());
    let u = build_guide_2d(&profile, &p)?;
    let psi0 = initial_packet_2d(&u, &p)?;
    let n = (p.t_end / p.dt).round() as usize;
    let every = (p.snapshot_interval / p.dt).round() as usize;
    let tr = propagate_2d(
        &u,
        &psi0,
        p.dt,
        n,
        &Propagate2DOptions {
            snapshot_every: every,
            keep_densities: false,
            check_budget: true,
        },
    )?;
    for ((t, norm), frac) in tr
        .times
        .iter()
        .zip(&tr.norms)
        .zip(tr.transmitted_with_absorbed(p.q1_cut)?)
    {
        println!("t = {t:>6.0}: norm {norm:.5}, transmitted {frac:.5}");
    }
    Ok(())
}
