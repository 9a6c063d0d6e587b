//! A planar two-bound-state reflectionless guide crosses itself; lifting it
//! into 3D with constant torsion removes every multiple point.

use bentguide::geometry::{detect_self_intersections, integrate_frenet_serret, CurvatureProfile};

fn main() -> bentguide::Result<()> {
    let profile = CurvatureProfile::sukumar(vec![1.0, 1.5])?;
    let planar = integrate_frenet_serret(&profile, -6.0, 6.0, 1e-3)?;
    println!("planar: {} multiple point(s)", detect_self_intersections(&planar).len());

    for tau in [0.5, 2.0, 20.0] {
        let lifted = integrate_frenet_serret(&profile.clone().with_torsion(tau)?, -6.0, 6.0, 1e-3)?;
        let top = lifted.points[lifted.len() - 1][2];
        println!(
            "tau = {tau:>4}: {} multiple point(s), rises to z = {top:.3}",
            detect_self_intersections(&lifted).len()
        );
    }
    Ok(())
}
