use super::curve::SampledCurve;
use super::profile::CurvatureProfile;
use crate::fd;
use crate::{Error, Result};

/// Curvature recovered from a sampled curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructedCurvature {
    pub q1: Vec<f64>,
    /// `|κ|` of the sampled (possibly lifted) curve.
    pub unsigned: Vec<f64>,
    /// Signed curvature `(r' × r'')_z / |r'|³`, planar curves only.
    pub signed: Option<Vec<f64>>,
}

impl ReconstructedCurvature {
    /// Tabulated profile: signed curvature when available, `|κ|` otherwise.
    pub fn into_profile(self) -> Result<CurvatureProfile> {
        let kappa = self.signed.unwrap_or(self.unsigned);
        CurvatureProfile::tabulated(self.q1, kappa)
    }
}

/// Recover curvature from positions by fourth-order differences in arc length.
pub fn reconstruct_curvature(curve: &SampledCurve) -> Result<ReconstructedCurvature> {
    let n = curve.len();
    if n < 6 {
        return Err(Error::InsufficientSamples { needed: 6, got: n });
    }
    let h = curve.step();
    let uniform = curve
        .arc_q1
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs().max(1e-300));
    if !uniform || !(h > 0.0) {
        return Err(Error::invalid("curve", "arc-length samples must be uniformly spaced"));
    }
    let coord = |d: usize| -> Vec<f64> { curve.points.iter().map(|p| p[d]).collect() };
    let r1: Vec<Vec<f64>> = (0..3).map(|d| fd::first_derivative(&coord(d), h)).collect();
    let r2: Vec<Vec<f64>> = (0..3).map(|d| fd::second_derivative(&coord(d), h)).collect();

    let mut unsigned = Vec::with_capacity(n);
    let mut signed = Vec::with_capacity(n);
    for i in 0..n {
        let a = [r1[0][i], r1[1][i], r1[2][i]];
        let b = [r2[0][i], r2[1][i], r2[2][i]];
        let c = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let speed3 = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).powf(1.5);
        unsigned.push((c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt() / speed3);
        signed.push(c[2] / speed3);
    }
    Ok(ReconstructedCurvature {
        q1: curve.arc_q1.clone(),
        unsigned,
        signed: curve.is_planar.then_some(signed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::integrate_frenet_serret;

    #[test]
    fn circle_radius_two() {
        let p = CurvatureProfile::circle(2.0).unwrap();
        let c = integrate_frenet_serret(&p, 0.0, 10.0, 1e-3).unwrap();
        let r = reconstruct_curvature(&c).unwrap();
        for (u, s) in r.unsigned.iter().zip(r.signed.as_ref().unwrap()) {
            assert!((u - 0.5).abs() < 1e-6);
            assert!((s - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn straight_line_is_flat() {
        let c = integrate_frenet_serret(&CurvatureProfile::straight(), -1.0, 1.0, 1e-3).unwrap();
        let r = reconstruct_curvature(&c).unwrap();
        assert!(r.unsigned.iter().all(|k| k.abs() < 1e-6));
    }

    #[test]
    fn too_few_samples() {
        let c = integrate_frenet_serret(&CurvatureProfile::straight(), 0.0, 1.0, 0.5).unwrap();
        assert!(matches!(
            reconstruct_curvature(&c),
            Err(Error::InsufficientSamples { .. })
        ));
    }
}
