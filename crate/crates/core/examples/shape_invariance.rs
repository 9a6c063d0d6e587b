//! Shape-invariant hierarchy built on a Pöschl–Teller guide: each level's
//! squared curvature is the previous one lowered by `8 R(a_k)`, with the
//! residuals taken from the gaps of the well's ground-state ladder. Levels
//! that drive `κ²` negative somewhere cannot be bent into a guide.

use bentguide::geometry::{evaluate_curvature, CurvatureProfile};
use bentguide::potentials::shape_invariant_chain;
use bentguide::Grid1D;

fn main() -> bentguide::Result<()> {
    let (nu, alpha) = (3.0, 0.5);
    let grid = Grid1D::symmetric(30.0, 0.05)?;
    let p = CurvatureProfile::poschl_teller(nu, alpha)?;
    let k0: Vec<f64> = grid
        .points()
        .iter()
        .map(|&q| evaluate_curvature(&p, q).map(|k| k * k))
        .collect::<Result<_, _>>()?;
    // R(a_k) = (a_k² - a_{k+1}²)/2 with a_k = (nu - k) α.
    let residuals: Vec<f64> = (0..3)
        .map(|s| {
            let a = (nu - s as f64) * alpha;
            let b = (nu - s as f64 - 1.0) * alpha;
            (a * a - b * b) / 2.0
        })
        .collect();
    for (s, level) in shape_invariant_chain(&k0, &residuals)?.iter().enumerate() {
        let peak = level.kappa_sq.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!(
            "level {s}: max kappa^2 = {peak:.5}, min kappa^2 = {:.5}, realizable {}",
            level.min(),
            level.realizable
        );
    }
    Ok(())
}
