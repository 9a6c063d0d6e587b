use std::f64::consts::PI;

use super::{PotentialGrid, PotentialSource};
use crate::geometry::EllipseArc;
use crate::{Error, Grid1D, Result};

/// Curvature-induced potential of the ellipse `(a cos u, b sin u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipseCip {
    pub arc: EllipseArc,
    pub u: Vec<f64>,
    /// Arc length from `u = 0` at each requested parameter.
    pub q1: Vec<f64>,
    pub v: Vec<f64>,
    pub perimeter: f64,
}

impl EllipseCip {
    /// `V(u) = -a²b² / (8 (b² cos²u + a² sin²u)³)`.
    pub fn potential_at_parameter(&self, u: f64) -> f64 {
        let (a, b) = self.arc.semi_axes();
        let d = b * b * u.cos().powi(2) + a * a * u.sin().powi(2);
        -a * a * b * b / (8.0 * d * d * d)
    }

    /// The same potential on `n` uniform arc-length samples around the loop,
    /// starting at the high-curvature vertex `(a, 0)`.
    pub fn on_arclength_grid(&self, n: usize) -> Result<PotentialGrid> {
        let grid = Grid1D::periodic(0.0, self.perimeter, n)?;
        let v = grid
            .points()
            .into_iter()
            .map(|q| self.potential_at_parameter(self.arc.parameter_at(q)))
            .collect();
        PotentialGrid::periodic(grid, v, PotentialSource::CipOfProfile)
    }

    /// Minimum `-a²/(8b⁴)`, reached at `u ∈ {0, π}`.
    pub fn minimum(&self) -> f64 {
        let (a, b) = self.arc.semi_axes();
        -a * a / (8.0 * b.powi(4))
    }
}

pub fn ellipse_cip(a: f64, b: f64, u_grid: &[f64]) -> Result<EllipseCip> {
    let arc = EllipseArc::new(a, b)?;
    let mut out = EllipseCip {
        perimeter: arc.perimeter(),
        q1: u_grid.iter().map(|&u| arc.arc_length(u)).collect(),
        u: u_grid.to_vec(),
        v: Vec::new(),
        arc,
    };
    out.v = u_grid.iter().map(|&u| out.potential_at_parameter(u)).collect();
    Ok(out)
}

/// Ring of the given perimeter: constant `-(2π/L)²/8` on a periodic grid.
pub fn ring_cip(perimeter: f64, n: usize) -> Result<PotentialGrid> {
    let grid = Grid1D::periodic(0.0, perimeter, n)?;
    let k = 2.0 * PI / perimeter;
    PotentialGrid::periodic(grid, vec![-0.125 * k * k; n], PotentialSource::CipOfProfile)
}

/// Depth modulation `U = -(V_target - V_reference)` that makes the target guide
/// feel the reference guide's potential.
pub fn compensation_barrier(v_target: &PotentialGrid, v_reference: &PotentialGrid) -> Result<PotentialGrid> {
    v_target.grid.ensure_same(&v_reference.grid)?;
    if v_target.periodic != v_reference.periodic {
        return Err(Error::GridMismatch("cannot mix periodic and open grids".into()));
    }
    let u = v_target.v.iter().zip(&v_reference.v).map(|(t, r)| -(t - r)).collect();
    let mut out = PotentialGrid::new(v_target.grid, u, PotentialSource::Compensation)?;
    out.periodic = v_target.periodic;
    Ok(out)
}
