//! Integrate the Pöschl–Teller guide with and without the sign mask and
//! report its multiple points and the tight-confinement check.

use bentguide::geometry::{
    check_validity, detect_self_intersections, integrate_frenet_serret, CurvatureProfile, SignMask, ValidityThresholds,
};

fn main() -> bentguide::Result<()> {
    let bare = CurvatureProfile::poschl_teller(1.0, 0.125)?;
    let masked = bare.clone().with_sign_mask(SignMask::sign_of_q1());

    for (name, p) in [("bare", &bare), ("masked", &masked)] {
        let curve = integrate_frenet_serret(p, -200.0, 200.0, 0.01)?;
        let crossings = detect_self_intersections(&curve);
        let end = curve.points[curve.len() - 1];
        println!(
            "{name:>6}: {} multiple point(s), end point ({:.3}, {:.3})",
            crossings.len(),
            end[0],
            end[1]
        );
        for c in crossings {
            println!(
                "        q1 = {:.3} meets q1 = {:.3} at ({:.3}, {:.3})",
                c.q1_a, c.q1_b, c.point[0], c.point[1]
            );
        }
    }

    let report = check_validity(&bare, 1.0, (-40.0, 40.0), 1e-6, ValidityThresholds::default())?;
    println!("validity on |q1| < 40: {report:?}");
    Ok(())
}
