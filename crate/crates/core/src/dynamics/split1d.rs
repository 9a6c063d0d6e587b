use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::{check_finite, fft_wavenumbers, Boundary, WaveState};
use crate::potentials::PotentialGrid;
use crate::{Complex64, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PropagateOptions {
    /// Store a snapshot every this many steps (the initial and final states are always kept).
    pub snapshot_every: usize,
    /// Refuse time steps that violate `dt·|v| < 0.5` or `dt·k²/2 < 0.5`.
    pub check_budget: bool,
}

impl Default for PropagateOptions {
    fn default() -> Self {
        Self {
            snapshot_every: 0,
            check_budget: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory1D {
    pub snapshots: Vec<WaveState>,
    /// Norm after every step, starting with the initial one.
    pub norms: Vec<f64>,
    /// Mass removed by the left and right absorbing layers, cumulative at each snapshot.
    pub absorbed_left: Vec<f64>,
    pub absorbed_right: Vec<f64>,
}

impl Trajectory1D {
    pub fn final_state(&self) -> &WaveState {
        self.snapshots.last().expect("trajectory holds the initial state")
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }
}

/// Spectral kinetic step plus potential half-steps, real or imaginary time.
pub(super) struct Split1D {
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    kinetic: Vec<Complex64>,
    half_potential: Vec<Complex64>,
    /// Layer nodes: (index, side, surviving fraction of |ψ|² per half step).
    layer: Vec<(usize, i8, f64)>,
    scratch: Vec<Complex64>,
}

impl Split1D {
    pub(super) fn new(v: &[f64], w: &[f64], side: &[i8], h: f64, dt: f64, imaginary: bool) -> Self {
        let n = v.len();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        let ifft = planner.plan_fft_inverse(n);
        let inv_n = 1.0 / n as f64;
        let kinetic = fft_wavenumbers(n, h)
            .into_iter()
            .map(|k| {
                let e = 0.5 * k * k * dt;
                if imaginary {
                    Complex64::new((-e).exp() * inv_n, 0.0)
                } else {
                    Complex64::from_polar(inv_n, -e)
                }
            })
            .collect();
        let half_potential = v
            .iter()
            .zip(w)
            .map(|(&v, &w)| {
                if imaginary {
                    Complex64::new((-0.5 * v * dt).exp(), 0.0)
                } else {
                    Complex64::from_polar((-0.5 * w * dt).exp(), -0.5 * v * dt)
                }
            })
            .collect();
        let layer = side
            .iter()
            .enumerate()
            .filter(|(_, s)| **s != 0)
            .map(|(i, &s)| (i, s, (-w[i] * dt).exp()))
            .collect();
        let scratch_len = fft.get_inplace_scratch_len().max(ifft.get_inplace_scratch_len());
        Self {
            fft,
            ifft,
            kinetic,
            half_potential,
            layer,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
        }
    }

    /// One step; returns the mass absorbed on the (left, right) side, in units of `Σ|ψ|²`.
    pub(super) fn step(&mut self, psi: &mut [Complex64]) -> (f64, f64) {
        let mut lost = self.half_v(psi);
        self.fft.process_with_scratch(psi, &mut self.scratch);
        psi.iter_mut().zip(&self.kinetic).for_each(|(z, k)| *z *= k);
        self.ifft.process_with_scratch(psi, &mut self.scratch);
        let more = self.half_v(psi);
        lost.0 += more.0;
        lost.1 += more.1;
        lost
    }

    fn half_v(&self, psi: &mut [Complex64]) -> (f64, f64) {
        let (mut l, mut r) = (0.0, 0.0);
        for &(i, s, keep) in &self.layer {
            let loss = psi[i].norm_sqr() * (1.0 - keep);
            if s < 0 {
                l += loss;
            } else {
                r += loss;
            }
        }
        psi.iter_mut().zip(&self.half_potential).for_each(|(z, f)| *z *= f);
        (l, r)
    }

    /// `⟨ψ|K|ψ⟩` in units of `Σ|ψ|²` (spectral).
    fn kinetic_sum(&mut self, psi: &[Complex64], h: f64) -> f64 {
        let mut buf = psi.to_vec();
        self.fft.process_with_scratch(&mut buf, &mut self.scratch);
        let n = psi.len() as f64;
        fft_wavenumbers(psi.len(), h)
            .iter()
            .zip(&buf)
            .map(|(k, z)| 0.5 * k * k * z.norm_sqr())
            .sum::<f64>()
            / n
    }
}

fn check_compatible(v: &PotentialGrid, psi: &WaveState) -> Result<()> {
    v.grid.ensure_same(&psi.grid)?;
    if v.periodic && psi.boundary != Boundary::Periodic {
        return Err(Error::invalid("boundary", "a loop potential needs a periodic state"));
    }
    Ok(())
}

/// Largest wavenumber carrying more than `1e-10` of the peak spectral density.
/// Smallest `K` such that the spectral weight at `|k| > K` is below `1e-4` of the total.
fn occupied_kmax(psi: &[Complex64], h: f64) -> f64 {
    let mut buf = psi.to_vec();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    let mut spec: Vec<(f64, f64)> = fft_wavenumbers(buf.len(), h)
        .iter()
        .zip(&buf)
        .map(|(k, z)| (k.abs(), z.norm_sqr()))
        .collect();
    spec.sort_by(|a, b| b.0.total_cmp(&a.0));
    let total: f64 = spec.iter().map(|s| s.1).sum();
    let mut tail = 0.0;
    for (k, w) in spec {
        tail += w;
        if tail > 1e-4 * total {
            return k;
        }
    }
    0.0
}

/// `dt·max|v| < 0.5` and `dt·k²/2 < 0.5` for the occupied momenta of `psi`.
pub(super) fn check_budget_1d(v: &PotentialGrid, psi: &WaveState, dt: f64) -> Result<()> {
    let vmax = v.v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if dt * vmax >= 0.5 {
        return Err(Error::BudgetViolation(format!("dt·|v| = {:.3} ≥ 0.5", dt * vmax)));
    }
    let k = occupied_kmax(&psi.psi, v.grid.step);
    if 0.5 * dt * k * k >= 0.5 {
        return Err(Error::BudgetViolation(format!(
            "dt·k²/2 = {:.3} ≥ 0.5 for occupied k up to {k:.3}",
            0.5 * dt * k * k
        )));
    }
    Ok(())
}

/// Strang split-step `e^{-iV dt/2} e^{-iK dt} e^{-iV dt/2}` on the grid of `v`.
pub fn propagate_1d(
    v: &PotentialGrid,
    psi0: &WaveState,
    dt: f64,
    n_steps: usize,
    opts: &PropagateOptions,
) -> Result<Trajectory1D> {
    check_compatible(v, psi0)?;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
    }
    let h = v.grid.step;
    if opts.check_budget {
        check_budget_1d(v, psi0, dt)?;
    }
    let (w, side) = psi0.boundary.absorption(&psi0.grid);
    let mut split = Split1D::new(&v.v, &w, &side, h, dt, false);
    let mut state = psi0.clone();
    let mut traj = Trajectory1D {
        snapshots: vec![state.clone()],
        norms: vec![state.norm()],
        absorbed_left: vec![0.0],
        absorbed_right: vec![0.0],
    };
    let (mut al, mut ar) = (0.0, 0.0);
    for step in 1..=n_steps {
        let (l, r) = split.step(&mut state.psi);
        al += l * h;
        ar += r * h;
        state.t = psi0.t + step as f64 * dt;
        let norm = state.norm();
        if !norm.is_finite() {
            check_finite(&state.psi, step)?;
        }
        traj.norms.push(norm);
        let snap = opts.snapshot_every > 0 && step % opts.snapshot_every == 0;
        if snap || step == n_steps {
            traj.snapshots.push(state.clone());
            traj.absorbed_left.push(al);
            traj.absorbed_right.push(ar);
        }
    }
    Ok(traj)
}

/// `⟨ψ|H|ψ⟩ / ⟨ψ|ψ⟩` with a spectral kinetic term.
pub fn energy_expectation(v: &PotentialGrid, psi: &WaveState) -> Result<f64> {
    v.grid.ensure_same(&psi.grid)?;
    let (w, side) = (vec![0.0; v.v.len()], vec![0; v.v.len()]);
    let mut split = Split1D::new(&v.v, &w, &side, v.grid.step, 0.0, true);
    Ok(energy_with(&mut split, v, &psi.psi))
}

fn energy_with(split: &mut Split1D, v: &PotentialGrid, psi: &[Complex64]) -> f64 {
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    let pot: f64 = psi.iter().zip(&v.v).map(|(z, v)| z.norm_sqr() * v).sum();
    (split.kinetic_sum(psi, v.grid.step) + pot) / norm
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub state: WaveState,
    pub energy: f64,
    pub steps: usize,
}

/// Imaginary-time relaxation. Stops once `|ΔE| / Δτ < tol` between energy
/// evaluations (every `check_every` steps).
pub fn imaginary_time_ground_state(
    v: &PotentialGrid,
    seed: &WaveState,
    dtau: f64,
    tol: f64,
    max_steps: usize,
) -> Result<GroundState> {
    check_compatible(v, seed)?;
    if !(dtau > 0.0) {
        return Err(Error::invalid("dtau", format!("must be positive, got {dtau}")));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", format!("must be positive, got {tol}")));
    }
    let n = v.v.len();
    let zeros = vec![0.0; n];
    let sides = vec![0i8; n];
    let mut split = Split1D::new(&v.v, &zeros, &sides, v.grid.step, dtau, true);
    let mut probe = Split1D::new(&v.v, &zeros, &sides, v.grid.step, 0.0, true);
    let mut state = seed.clone();
    state.normalize()?;
    let check_every = 10;
    let mut energy = energy_with(&mut probe, v, &state.psi);
    let mut last_change = f64::INFINITY;
    for step in 1..=max_steps {
        split.step(&mut state.psi);
        let norm = state.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NumericalBlowup { step });
        }
        let s = 1.0 / norm.sqrt();
        state.psi.iter_mut().for_each(|z| *z *= s);
        if step % check_every == 0 {
            let e = energy_with(&mut probe, v, &state.psi);
            last_change = (e - energy).abs() / (check_every as f64 * dtau);
            energy = e;
            if last_change < tol {
                state.t = 0.0;
                return Ok(GroundState {
                    state,
                    energy,
                    steps: step,
                });
            }
        }
    }
    Err(Error::NotConverged {
        steps: max_steps,
        last_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::PotentialSource;
    use crate::Grid1D;

    fn flat(grid: Grid1D) -> PotentialGrid {
        PotentialGrid::new(grid, vec![0.0; grid.len], PotentialSource::External).unwrap()
    }

    #[test]
    fn free_gaussian_spreads_as_predicted() {
        let g = Grid1D::periodic(-200.0, 400.0, 4096).unwrap();
        let psi0 = WaveState::gaussian(g, 0.0, 10.0, 0.5, Boundary::Periodic).unwrap();
        let (dt, steps) = (0.05, 400);
        let tr = propagate_1d(&flat(g), &psi0, dt, steps, &PropagateOptions::default()).unwrap();
        let (mean, var) = tr.final_state().position_moments();
        let s0 = super::super::fwhm_to_sigma(10.0);
        let t = dt * steps as f64;
        assert!((mean - 0.5 * t).abs() < 1e-9);
        assert!((var - (s0 * s0 + t * t / (4.0 * s0 * s0))).abs() < 1e-6);
    }

    #[test]
    fn periodic_norm_is_conserved_per_step() {
        let g = Grid1D::periodic(0.0, 50.0, 512).unwrap();
        let v: Vec<f64> = g.points().iter().map(|x| -0.2 * (x / 5.0).cos()).collect();
        let v = PotentialGrid::periodic(g, v, PotentialSource::External).unwrap();
        let psi0 = WaveState::gaussian(g, 25.0, 4.0, 1.0, Boundary::Periodic).unwrap();
        let tr = propagate_1d(&v, &psi0, 0.05, 200, &PropagateOptions::default()).unwrap();
        for w in tr.norms.windows(2) {
            assert!((w[1] - w[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn absorbing_layers_remove_outgoing_packet() {
        let g = Grid1D::periodic(-100.0, 200.0, 2048).unwrap();
        let b = Boundary::absorbing(20.0, 3.0).unwrap();
        let psi0 = WaveState::gaussian(g, 0.0, 6.0, 2.0, b).unwrap();
        let tr = propagate_1d(&flat(g), &psi0, 0.02, 4000, &PropagateOptions::default()).unwrap();
        let end = tr.final_state().norm();
        // What remains is the small reflection off the layer edges.
        assert!(end < 1e-5, "left {end}");
        assert!(tr.norms.windows(2).all(|w| w[1] <= w[0] + 1e-13));
        let right = *tr.absorbed_right.last().unwrap();
        assert!((right + end - 1.0).abs() < 1e-3 && right > 0.999);
    }

    #[test]
    fn budget_is_enforced() {
        let g = Grid1D::periodic(0.0, 20.0, 256).unwrap();
        let v = PotentialGrid::new(g, vec![-10.0; 256], PotentialSource::External).unwrap();
        let psi0 = WaveState::gaussian(g, 10.0, 3.0, 0.0, Boundary::Periodic).unwrap();
        assert!(matches!(
            propagate_1d(&v, &psi0, 0.1, 1, &PropagateOptions::default()),
            Err(Error::BudgetViolation(_))
        ));
        let fast = WaveState::gaussian(g, 10.0, 3.0, 8.0, Boundary::Periodic).unwrap();
        assert!(matches!(
            propagate_1d(&flat(g), &fast, 0.1, 1, &PropagateOptions::default()),
            Err(Error::BudgetViolation(_))
        ));
    }

    #[test]
    fn harmonic_ground_state() {
        let g = Grid1D::periodic(-12.0, 24.0, 256).unwrap();
        let v: Vec<f64> = g.points().iter().map(|x| 0.5 * x * x).collect();
        let v = PotentialGrid::new(g, v, PotentialSource::External).unwrap();
        let seed = WaveState::gaussian(g, 0.7, 4.0, 0.0, Boundary::Periodic).unwrap();
        let gs = imaginary_time_ground_state(&v, &seed, 0.005, 1e-10, 200_000).unwrap();
        assert!((gs.energy - 0.5).abs() < 1e-8, "{}", gs.energy);
        let (mean, var) = gs.state.position_moments();
        // The odd admixture decays like sqrt of the energy change rate.
        assert!(mean.abs() < 1e-4, "{mean}");
        // |ψ|² of the oscillator ground state has variance σ₀²/2.
        assert!((var - 0.5).abs() < 1e-5);
    }
}
