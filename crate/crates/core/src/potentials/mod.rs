//! Curvature-induced potentials and their supersymmetric relatives.

mod loops;
mod sukumar;
mod susy;

pub use loops::{compensation_barrier, ellipse_cip, ring_cip, EllipseCip};
pub use sukumar::{sukumar_cip, sukumar_curvature_squared};
pub use susy::{
    shape_invariant_chain, susy_pair_from_superpotential, susy_pair_with_reference, susy_partner_from_ground_state,
    ChainLevel, Superpotential, SusyPair, REALIZABILITY_TOL,
};

use serde::{Deserialize, Serialize};

use crate::geometry::{evaluate_curvature, CurvatureProfile};
use crate::{Grid1D, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialSource {
    CipOfProfile,
    SusyMinus,
    SusyPlus,
    Compensation,
    External,
}

/// Potential sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialGrid {
    pub grid: Grid1D,
    pub v: Vec<f64>,
    pub v_left_asym: f64,
    pub v_right_asym: f64,
    pub source: PotentialSource,
    /// Set for loops: the grid then covers one period `[start, start + len·step)`.
    pub periodic: bool,
}

impl PotentialGrid {
    /// Open potential with asymptotes taken as the mean of the outer 5% of samples.
    pub fn new(grid: Grid1D, v: Vec<f64>, source: PotentialSource) -> Result<Self> {
        if v.len() != grid.len {
            return Err(crate::Error::GridMismatch(format!(
                "{} values on a {}-point grid",
                v.len(),
                grid.len
            )));
        }
        let (l, r) = outer_means(&v);
        Ok(Self {
            grid,
            v,
            v_left_asym: l,
            v_right_asym: r,
            source,
            periodic: false,
        })
    }

    pub fn periodic(grid: Grid1D, v: Vec<f64>, source: PotentialSource) -> Result<Self> {
        let mut p = Self::new(grid, v, source)?;
        p.periodic = true;
        Ok(p)
    }

    pub fn q1(&self) -> Vec<f64> {
        self.grid.points()
    }

    pub fn min(&self) -> f64 {
        self.v.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Value at arbitrary `q1` by linear interpolation (wrapping for loops,
    /// clamped to the end values otherwise).
    pub fn interpolate(&self, q1: f64) -> f64 {
        let period = self.periodic.then_some(self.grid.step * self.grid.len as f64);
        crate::interp::linear_uniform(self.grid.start, self.grid.step, &self.v, period, q1)
    }

    /// Same potential shifted by a constant.
    pub fn shifted(&self, by: f64) -> PotentialGrid {
        let mut out = self.clone();
        out.v.iter_mut().for_each(|v| *v += by);
        out.v_left_asym += by;
        out.v_right_asym += by;
        out
    }

    /// Pointwise sum with another potential on the same grid.
    pub fn plus(&self, other: &PotentialGrid) -> Result<PotentialGrid> {
        self.grid.ensure_same(&other.grid)?;
        let v = self.v.iter().zip(&other.v).map(|(a, b)| a + b).collect();
        let mut out = PotentialGrid::new(self.grid, v, PotentialSource::External)?;
        out.periodic = self.periodic;
        Ok(out)
    }
}

pub(crate) fn outer_means(v: &[f64]) -> (f64, f64) {
    let m = ((v.len() as f64 * 0.05).ceil() as usize).clamp(1, v.len());
    let left = v[..m].iter().sum::<f64>() / m as f64;
    let right = v[v.len() - m..].iter().sum::<f64>() / m as f64;
    (left, right)
}

/// Curvature-induced potential `V = -κ²/8` of a profile. The sign mask drops out.
pub fn cip_from_profile(profile: &CurvatureProfile, grid: Grid1D) -> Result<PotentialGrid> {
    let v = grid
        .points()
        .into_iter()
        .map(|q| evaluate_curvature(profile, q).map(|k| -0.125 * k * k))
        .collect::<Result<Vec<_>>>()?;
    PotentialGrid::new(grid, v, PotentialSource::CipOfProfile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SignMask;

    #[test]
    fn ring_cip_is_constant() {
        let g = Grid1D::symmetric(5.0, 0.1).unwrap();
        let p = cip_from_profile(&CurvatureProfile::circle(2.0).unwrap(), g).unwrap();
        assert!(p.v.iter().all(|v| (v + 1.0 / 32.0).abs() < 1e-16));
    }

    #[test]
    fn poschl_teller_depth() {
        let g = Grid1D::symmetric(10.0, 0.5).unwrap();
        let p = cip_from_profile(&CurvatureProfile::poschl_teller(1.0, 1.0).unwrap(), g).unwrap();
        let centre = p.v[g.len / 2];
        assert!((centre + 1.0).abs() < 1e-14);
        // PT depth -ν(ν+1)α²/2 with ν = α = 1.
        assert!((centre - (-(1.0 * 2.0) * 1.0 / 2.0)).abs() < 1e-14);
        assert!(p.v.iter().all(|v| *v <= 0.0));
    }

    #[test]
    fn mask_does_not_change_cip() {
        let g = Grid1D::symmetric(20.0, 0.25).unwrap();
        let base = CurvatureProfile::poschl_teller(1.5, 0.3).unwrap();
        let masked = base.clone().with_sign_mask(SignMask::sign_of_q1());
        let a = cip_from_profile(&base, g).unwrap();
        let b = cip_from_profile(&masked, g).unwrap();
        assert_eq!(a.v, b.v);
    }

    #[test]
    fn straight_is_zero() {
        let g = Grid1D::symmetric(3.0, 0.5).unwrap();
        let p = cip_from_profile(&CurvatureProfile::straight(), g).unwrap();
        assert!(p.v.iter().all(|v| *v == 0.0));
        assert_eq!(p.v_left_asym, 0.0);
    }
}
