use super::split1d::{check_budget_1d, Split1D};
use super::{Boundary, WaveState};
use crate::potentials::PotentialGrid;
use crate::{Error, Grid1D, Result};

/// Talbot revival time `L²/π` of a ring of circumference `L`.
pub fn talbot_revival_time(circumference: f64) -> f64 {
    circumference * circumference / std::f64::consts::PI
}

/// Density history `n(q₁, t)` on a loop together with the revival fidelity.
#[derive(Debug, Clone, PartialEq)]
pub struct CarpetResult {
    pub q1_grid: Grid1D,
    pub t_grid: Vec<f64>,
    /// One row per frame.
    pub density: Vec<Vec<f64>>,
    /// `|⟨ψ(0)|ψ(t)⟩|²` at the frames.
    pub revival_fidelity: Vec<f64>,
    /// Fidelity after every time step.
    pub fine_times: Vec<f64>,
    pub fine_fidelity: Vec<f64>,
    /// Step actually used (the requested one, shrunk to land on every frame).
    pub dt: f64,
}

impl CarpetResult {
    /// Fidelity at the step closest to `t`.
    pub fn fidelity_at(&self, t: f64) -> f64 {
        let i = ((t - self.fine_times[0]) / self.dt)
            .round()
            .clamp(0.0, (self.fine_times.len() - 1) as f64);
        self.fine_fidelity[i as usize]
    }

    /// Largest fidelity over the steps in `[t0, t1]`.
    pub fn max_fidelity_in(&self, t0: f64, t1: f64) -> f64 {
        self.fine_times
            .iter()
            .zip(&self.fine_fidelity)
            .filter(|(t, _)| **t >= t0 - 1e-9 && **t <= t1 + 1e-9)
            .map(|(_, f)| *f)
            .fold(0.0, f64::max)
    }
}

/// Propagates `psi0` on the loop potential `v` up to `t_max`, storing
/// `n_frames` equally spaced frames including `t = 0` and `t = t_max`.
pub fn talbot_carpet(
    v: &PotentialGrid,
    psi0: &WaveState,
    dt: f64,
    t_max: f64,
    n_frames: usize,
) -> Result<CarpetResult> {
    if !v.periodic || psi0.boundary != Boundary::Periodic {
        return Err(Error::invalid(
            "potential",
            "carpets need a periodic loop potential and state",
        ));
    }
    v.grid.ensure_same(&psi0.grid)?;
    if n_frames < 2 {
        return Err(Error::invalid("n_frames", "need at least two frames"));
    }
    if !(t_max > 0.0) || !(dt > 0.0) {
        return Err(Error::invalid("t_max/dt", "both must be positive"));
    }
    let frame_dt = t_max / (n_frames - 1) as f64;
    let per_frame = (frame_dt / dt).ceil().max(1.0) as usize;
    let dt = frame_dt / per_frame as f64;
    check_budget_1d(v, psi0, dt)?;

    let (w, side) = psi0.boundary.absorption(&psi0.grid);
    let mut split = Split1D::new(&v.v, &w, &side, v.grid.step, dt, false);
    let reference = psi0.clone();
    let mut state = psi0.clone();
    let mut out = CarpetResult {
        q1_grid: v.grid,
        t_grid: vec![0.0],
        density: vec![state.density()],
        revival_fidelity: vec![reference.fidelity(&state)?],
        fine_times: vec![0.0],
        fine_fidelity: vec![reference.fidelity(&state)?],
        dt,
    };
    for frame in 1..n_frames {
        for s in 1..=per_frame {
            split.step(&mut state.psi);
            let step = (frame - 1) * per_frame + s;
            state.t = step as f64 * dt;
            let f = reference.fidelity(&state)?;
            if !f.is_finite() {
                return Err(Error::NumericalBlowup { step });
            }
            out.fine_times.push(state.t);
            out.fine_fidelity.push(f);
        }
        out.t_grid.push(state.t);
        out.density.push(state.density());
        out.revival_fidelity.push(*out.fine_fidelity.last().expect("non-empty"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::ring_cip;

    #[test]
    fn free_ring_revives_exactly() {
        let l = 40.0;
        let v = ring_cip(l, 256).unwrap();
        let psi0 = WaveState::gaussian(v.grid, 10.0, 2.0, 0.0, Boundary::Periodic).unwrap();
        let tr = talbot_revival_time(l);
        let c = talbot_carpet(&v, &psi0, 0.05, tr, 5).unwrap();
        assert!((c.t_grid[4] - tr).abs() < 1e-9);
        assert!(c.revival_fidelity[4] > 1.0 - 1e-10);
        assert!(c.revival_fidelity[2] < 0.5);
        let row_mass: f64 = c.density[3].iter().sum::<f64>() * v.grid.step;
        assert!((row_mass - 1.0).abs() < 1e-10);
    }
}
