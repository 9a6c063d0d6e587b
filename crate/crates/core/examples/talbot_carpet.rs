//! Talbot revivals on a ring, their suppression on an eccentric loop and
//! their restoration by the compensation barrier.

use bentguide::config::CarpetConfig;
use bentguide::pipeline::run_carpet;

fn main() -> bentguide::Result<()> {
    for (name, ecc, compensate) in [
        ("ring", 0.0, false),
        ("ellipse", 0.9, false),
        ("compensated", 0.9, true),
    ] {
        let cfg = CarpetConfig {
            eccentricity: ecc,
            compensate,
            n: 512,
            revivals: 1.1,
            ..CarpetConfig::default()
        };
        let tr = cfg.revival_time();
        let (_, res) = run_carpet(&cfg)?;
        println!(
            "{name:>11}: F(tau_R) = {:.6}, max F on [0.9, 1.1] tau_R = {:.6}",
            res.fidelity_at(tr),
            res.max_fidelity_in(0.9 * tr, 1.1 * tr)
        );
    }
    Ok(())
}
