//! Ground states on an eccentric loop: the curvature-induced potential piles
//! the density up at the two vertices; the depth modulation flattens it.

use bentguide::config::CompensateConfig;
use bentguide::pipeline::{loop_ground_states, periodic_peaks, relative_variation};

fn main() -> bentguide::Result<()> {
    for ecc in [0.0, 0.5, 0.9] {
        let cfg = CompensateConfig {
            eccentricity: ecc,
            ..CompensateConfig::default()
        };
        let gs = loop_ground_states(&cfg)?;
        let bare = gs.uncompensated.density();
        println!(
            "eps = {ecc}: variation {:.3e} -> {:.3e} with barrier, peaks at {:?}",
            relative_variation(&bare),
            relative_variation(&gs.compensated.density()),
            periodic_peaks(&gs.potential.grid, &bare)
        );
    }
    Ok(())
}
