use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::{check_finite, fft_wavenumbers, WaveState2D, WaveguidePotential2D};
use crate::{Complex64, Error, Grid1D, Grid2D, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Propagate2DOptions {
    pub snapshot_every: usize,
    /// Keep full `|ψ|²` grids at every snapshot (for rasters).
    pub keep_densities: bool,
    /// Refuse steps with `dt·(⟨U⟩ - U_min) ≥ 0.5` or `dt·⟨K⟩ ≥ 0.5`.
    pub check_budget: bool,
}

impl Default for Propagate2DOptions {
    fn default() -> Self {
        Self {
            snapshot_every: 0,
            keep_densities: false,
            check_budget: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory2D {
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    pub absorbed_left: Vec<f64>,
    pub absorbed_right: Vec<f64>,
    /// Arc-length bins of the projected density.
    pub q1_bins: Grid1D,
    /// `n(q₁, t)` per snapshot, integrating to the captured mass.
    pub projected: Vec<Vec<f64>>,
    /// Mass outside every capture radius, per snapshot.
    pub uncaptured: Vec<f64>,
    pub densities: Vec<Vec<f64>>,
    pub final_state: WaveState2D,
}

impl Trajectory2D {
    /// `(mass beyond q1_cut + mass absorbed on the right) / initial norm`, per snapshot.
    pub fn transmitted_with_absorbed(&self, q1_cut: f64) -> Result<Vec<f64>> {
        let g = self.q1_bins;
        if q1_cut < g.start || q1_cut > g.end() {
            return Err(Error::OutOfDomain {
                q1: q1_cut,
                min: g.start,
                max: g.end(),
            });
        }
        let n0 = self.norms[0];
        Ok(self
            .projected
            .iter()
            .zip(&self.absorbed_right)
            .map(|(n, ar)| {
                let right: f64 = n
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| g.at(*i) > q1_cut)
                    .map(|(_, v)| v * g.step)
                    .sum();
                (right + ar) / n0
            })
            .collect())
    }
}

struct Split2D {
    nx: usize,
    ny: usize,
    row_fft: Arc<dyn Fft<f64>>,
    row_ifft: Arc<dyn Fft<f64>>,
    col_fft: Arc<dyn Fft<f64>>,
    col_ifft: Arc<dyn Fft<f64>>,
    /// Kinetic factor in transposed (column-major) layout, `1/(nx·ny)` folded in.
    kinetic_t: Vec<Complex64>,
    half_potential: Vec<Complex64>,
    /// Absorbing columns: (ix, side, surviving |ψ|² fraction per half step).
    layer: Vec<(usize, i8, f64)>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl Split2D {
    fn new(grid: &Grid2D, u: &[f64], w_x: &[f64], side_x: &[i8], dt: f64, imaginary: bool) -> Self {
        let (nx, ny) = (grid.x.len, grid.y.len);
        let mut planner = FftPlanner::new();
        let row_fft = planner.plan_fft_forward(nx);
        let row_ifft = planner.plan_fft_inverse(nx);
        let col_fft = planner.plan_fft_forward(ny);
        let col_ifft = planner.plan_fft_inverse(ny);
        let kx = fft_wavenumbers(nx, grid.x.step);
        let ky = fft_wavenumbers(ny, grid.y.step);
        let inv = 1.0 / (nx * ny) as f64;
        let mut kinetic_t = Vec::with_capacity(nx * ny);
        for kxv in &kx {
            for kyv in &ky {
                let e = 0.5 * (kxv * kxv + kyv * kyv) * dt;
                kinetic_t.push(if imaginary {
                    Complex64::new((-e).exp() * inv, 0.0)
                } else {
                    Complex64::from_polar(inv, -e)
                });
            }
        }
        let half_potential = u
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if imaginary {
                    Complex64::new((-0.5 * v * dt).exp(), 0.0)
                } else {
                    Complex64::from_polar((-0.5 * w_x[i % nx] * dt).exp(), -0.5 * v * dt)
                }
            })
            .collect();
        let layer = side_x
            .iter()
            .enumerate()
            .filter(|(_, s)| **s != 0)
            .map(|(ix, &s)| (ix, s, (-w_x[ix] * dt).exp()))
            .collect();
        let scratch_len = [&row_fft, &row_ifft, &col_fft, &col_ifft]
            .iter()
            .map(|f| f.get_inplace_scratch_len())
            .max()
            .unwrap_or(0);
        Self {
            nx,
            ny,
            row_fft,
            row_ifft,
            col_fft,
            col_ifft,
            kinetic_t,
            half_potential,
            layer,
            buf: vec![Complex64::new(0.0, 0.0); nx * ny],
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
        }
    }

    fn step(&mut self, psi: &mut [Complex64]) -> (f64, f64) {
        let mut lost = self.half_v(psi);
        self.row_fft.process_with_scratch(psi, &mut self.scratch);
        transpose(psi, &mut self.buf, self.nx, self.ny);
        self.col_fft.process_with_scratch(&mut self.buf, &mut self.scratch);
        self.buf.iter_mut().zip(&self.kinetic_t).for_each(|(z, k)| *z *= k);
        self.col_ifft.process_with_scratch(&mut self.buf, &mut self.scratch);
        transpose(&self.buf, psi, self.ny, self.nx);
        self.row_ifft.process_with_scratch(psi, &mut self.scratch);
        let more = self.half_v(psi);
        lost.0 += more.0;
        lost.1 += more.1;
        lost
    }

    fn half_v(&self, psi: &mut [Complex64]) -> (f64, f64) {
        let (mut l, mut r) = (0.0, 0.0);
        for row in psi.chunks(self.nx) {
            for &(ix, s, keep) in &self.layer {
                let loss = row[ix].norm_sqr() * (1.0 - keep);
                if s < 0 {
                    l += loss;
                } else {
                    r += loss;
                }
            }
        }
        psi.iter_mut().zip(&self.half_potential).for_each(|(z, f)| *z *= f);
        (l, r)
    }

    /// `Σ_k (k²/2)|ψ̂_k|² / (nx·ny)`.
    fn kinetic_sum(&mut self, psi: &[Complex64], grid: &Grid2D) -> f64 {
        let mut work = psi.to_vec();
        self.row_fft.process_with_scratch(&mut work, &mut self.scratch);
        transpose(&work, &mut self.buf, self.nx, self.ny);
        self.col_fft.process_with_scratch(&mut self.buf, &mut self.scratch);
        let kx = fft_wavenumbers(self.nx, grid.x.step);
        let ky = fft_wavenumbers(self.ny, grid.y.step);
        let mut sum = 0.0;
        for (ix, kxv) in kx.iter().enumerate() {
            for (iy, kyv) in ky.iter().enumerate() {
                sum += 0.5 * (kxv * kxv + kyv * kyv) * self.buf[ix * self.ny + iy].norm_sqr();
            }
        }
        sum / (self.nx * self.ny) as f64
    }
}

/// `dst[c * rows + r] = src[r * cols + c]` for a `rows × cols` row-major `src`.
fn transpose(src: &[Complex64], dst: &mut [Complex64], cols: usize, rows: usize) {
    const B: usize = 32;
    for r0 in (0..rows).step_by(B) {
        for c0 in (0..cols).step_by(B) {
            for r in r0..(r0 + B).min(rows) {
                for c in c0..(c0 + B).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

fn check_compatible(u: &WaveguidePotential2D, psi: &WaveState2D) -> Result<()> {
    let g = u.grid();
    if !(g.x.same_as(&psi.grid.x) && g.y.same_as(&psi.grid.y)) {
        return Err(Error::GridMismatch("state and waveguide grids differ".into()));
    }
    Ok(())
}

fn energy_parts(split: &mut Split2D, u: &[f64], psi: &WaveState2D) -> (f64, f64) {
    let norm: f64 = psi.psi.iter().map(|z| z.norm_sqr()).sum();
    let pot: f64 = psi.psi.iter().zip(u).map(|(z, v)| z.norm_sqr() * v).sum();
    (split.kinetic_sum(&psi.psi, &psi.grid) / norm, pot / norm)
}

/// `⟨ψ|H|ψ⟩ / ⟨ψ|ψ⟩` in the painted potential.
pub fn energy_expectation_2d(u: &WaveguidePotential2D, psi: &WaveState2D) -> Result<f64> {
    check_compatible(u, psi)?;
    let n = psi.grid.x.len;
    let mut split = Split2D::new(&psi.grid, u.field(), &vec![0.0; n], &vec![0; n], 0.0, true);
    let (k, v) = energy_parts(&mut split, u.field(), psi);
    Ok(k + v)
}

/// 2D Strang split-step with arc-length projection at each snapshot.
pub fn propagate_2d(
    u: &WaveguidePotential2D,
    psi0: &WaveState2D,
    dt: f64,
    n_steps: usize,
    opts: &Propagate2DOptions,
) -> Result<Trajectory2D> {
    check_compatible(u, psi0)?;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
    }
    let grid = psi0.grid;
    let (w, side) = psi0.boundary.absorption(&grid.x);
    if opts.check_budget {
        let mut probe = Split2D::new(&grid, u.field(), &w, &side, 0.0, true);
        let (k, v) = energy_parts(&mut probe, u.field(), psi0);
        let umin = u.field().iter().copied().fold(f64::INFINITY, f64::min);
        if dt * (v - umin) >= 0.5 || dt * k >= 0.5 {
            return Err(Error::BudgetViolation(format!(
                "dt·(⟨U⟩ - U_min) = {:.3}, dt·⟨K⟩ = {:.3}; both must stay below 0.5",
                dt * (v - umin),
                dt * k
            )));
        }
    }
    let mut split = Split2D::new(&grid, u.field(), &w, &side, dt, false);
    let mut state = psi0.clone();
    let area = grid.cell_area();
    let mut traj = Trajectory2D {
        times: Vec::new(),
        norms: Vec::new(),
        absorbed_left: Vec::new(),
        absorbed_right: Vec::new(),
        q1_bins: u.q1_bins(),
        projected: Vec::new(),
        uncaptured: Vec::new(),
        densities: Vec::new(),
        final_state: psi0.clone(),
    };
    let record = |traj: &mut Trajectory2D, state: &WaveState2D, al: f64, ar: f64| {
        let rho = state.density();
        let (proj, lost) = u.project(&rho);
        traj.times.push(state.t);
        traj.norms.push(rho.iter().sum::<f64>() * area);
        traj.absorbed_left.push(al);
        traj.absorbed_right.push(ar);
        traj.projected.push(proj);
        traj.uncaptured.push(lost);
        if opts.keep_densities {
            traj.densities.push(rho);
        }
    };
    record(&mut traj, &state, 0.0, 0.0);
    let (mut al, mut ar) = (0.0, 0.0);
    for step in 1..=n_steps {
        let (l, r) = split.step(&mut state.psi);
        al += l * area;
        ar += r * area;
        state.t = psi0.t + step as f64 * dt;
        let snap = opts.snapshot_every > 0 && step % opts.snapshot_every == 0;
        if snap || step == n_steps {
            check_finite(&state.psi, step)?;
            record(&mut traj, &state, al, ar);
        }
    }
    traj.final_state = state;
    Ok(traj)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState2D {
    pub state: WaveState2D,
    pub energy: f64,
    pub steps: usize,
}

/// Imaginary-time relaxation in the painted potential; same stopping rule as
/// the 1D version.
pub fn imaginary_time_ground_state_2d(
    u: &WaveguidePotential2D,
    seed: &WaveState2D,
    dtau: f64,
    tol: f64,
    max_steps: usize,
) -> Result<GroundState2D> {
    check_compatible(u, seed)?;
    if !(dtau > 0.0) || !(tol > 0.0) {
        return Err(Error::invalid("dtau/tol", "both must be positive"));
    }
    let grid = seed.grid;
    let n = grid.x.len;
    let (zw, zs) = (vec![0.0; n], vec![0i8; n]);
    let mut split = Split2D::new(&grid, u.field(), &zw, &zs, dtau, true);
    let mut probe = Split2D::new(&grid, u.field(), &zw, &zs, 0.0, true);
    let mut state = seed.clone();
    state.normalize()?;
    let check_every = 10;
    let (k, v) = energy_parts(&mut probe, u.field(), &state);
    let mut energy = k + v;
    let mut last_change = f64::INFINITY;
    for step in 1..=max_steps {
        split.step(&mut state.psi);
        state.normalize().map_err(|_| Error::NumericalBlowup { step })?;
        if step % check_every == 0 {
            let (k, v) = energy_parts(&mut probe, u.field(), &state);
            last_change = ((k + v) - energy).abs() / (check_every as f64 * dtau);
            energy = k + v;
            if last_change < tol {
                return Ok(GroundState2D {
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
