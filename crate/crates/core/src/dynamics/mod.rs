//! Time-dependent Schrödinger propagation by Strang split-step Fourier.
//!
//! 1D runs live on the arc length of a guide (open line or closed loop), 2D
//! runs on a Cartesian grid with a painted waveguide potential.

mod carpet;
mod diagnostics;
mod split1d;
mod split2d;
mod waveguide;

pub use carpet::{talbot_carpet, talbot_revival_time, CarpetResult};
pub use diagnostics::{momentum_averaged_transmission, transmitted_fraction};
pub use split1d::{
    energy_expectation, imaginary_time_ground_state, propagate_1d, GroundState, PropagateOptions, Trajectory1D,
};
pub use split2d::{
    energy_expectation_2d, imaginary_time_ground_state_2d, propagate_2d, GroundState2D, Propagate2DOptions,
    Trajectory2D,
};
pub use waveguide::{Transverse, WaveguideOptions, WaveguidePotential2D};

use serde::{Deserialize, Serialize};

use crate::{Complex64, Error, Grid1D, Grid2D, Result};

/// Complex absorbing layer `W(x) = strength · (depth / width)²` on one side of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbsorbingLayer {
    pub width: f64,
    pub strength: f64,
}

impl AbsorbingLayer {
    pub fn new(width: f64, strength: f64) -> Result<Self> {
        if !(width > 0.0) || !(strength >= 0.0) {
            return Err(Error::invalid(
                "absorbing_layer",
                format!("need width > 0 and strength ≥ 0, got ({width}, {strength})"),
            ));
        }
        Ok(Self { width, strength })
    }

    fn rate(&self, depth: f64) -> f64 {
        let s = (depth / self.width).clamp(0.0, 1.0);
        self.strength * s * s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Boundary {
    Periodic,
    Absorbing {
        left: AbsorbingLayer,
        right: AbsorbingLayer,
    },
}

impl Boundary {
    pub fn absorbing(width: f64, strength: f64) -> Result<Self> {
        let layer = AbsorbingLayer::new(width, strength)?;
        Ok(Self::Absorbing {
            left: layer,
            right: layer,
        })
    }

    /// Absorption rate per node and the side (`-1`, `0`, `+1`) each node belongs to.
    pub(crate) fn absorption(&self, grid: &Grid1D) -> (Vec<f64>, Vec<i8>) {
        let n = grid.len;
        let mut w = vec![0.0; n];
        let mut side = vec![0i8; n];
        if let Boundary::Absorbing { left, right } = self {
            let lo = grid.start;
            let hi = grid.start + grid.step * n as f64;
            for i in 0..n {
                let x = grid.at(i);
                if x < lo + left.width {
                    w[i] = left.rate(lo + left.width - x);
                    side[i] = -1;
                } else if x > hi - right.width {
                    w[i] = right.rate(x - (hi - right.width));
                    side[i] = 1;
                }
            }
        }
        (w, side)
    }
}

/// Wavefunction on a uniform 1D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveState {
    pub psi: Vec<Complex64>,
    pub grid: Grid1D,
    pub t: f64,
    pub boundary: Boundary,
}

impl WaveState {
    pub fn new(psi: Vec<Complex64>, grid: Grid1D, boundary: Boundary) -> Result<Self> {
        if psi.len() != grid.len {
            return Err(Error::GridMismatch(format!(
                "{} samples on a {}-point grid",
                psi.len(),
                grid.len
            )));
        }
        Ok(Self {
            psi,
            grid,
            t: 0.0,
            boundary,
        })
    }

    /// Normalised Gaussian whose density has the given FWHM, moving with momentum `k0`.
    /// On periodic grids the packet is wrapped onto the loop.
    pub fn gaussian(grid: Grid1D, center: f64, fwhm: f64, k0: f64, boundary: Boundary) -> Result<Self> {
        if !(fwhm > 0.0) {
            return Err(Error::invalid("fwhm", format!("must be positive, got {fwhm}")));
        }
        let sigma = fwhm_to_sigma(fwhm);
        let period = grid.step * grid.len as f64;
        let psi = (0..grid.len)
            .map(|i| {
                let mut d = grid.at(i) - center;
                if boundary == Boundary::Periodic {
                    d -= period * (d / period).round();
                }
                Complex64::from_polar((-d * d / (4.0 * sigma * sigma)).exp(), k0 * (center + d))
            })
            .collect();
        let mut s = Self::new(psi, grid, boundary)?;
        s.normalize()?;
        Ok(s)
    }

    pub fn from_real(values: &[f64], grid: Grid1D, boundary: Boundary) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect(), grid, boundary)
    }

    pub fn norm(&self) -> f64 {
        self.psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.step
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::invalid("psi", "cannot normalise a zero or non-finite state"));
        }
        let s = 1.0 / n.sqrt();
        self.psi.iter_mut().for_each(|z| *z *= s);
        Ok(())
    }

    pub fn density(&self) -> Vec<f64> {
        self.psi.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &WaveState) -> Result<Complex64> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self
            .psi
            .iter()
            .zip(&other.psi)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.grid.step)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &WaveState) -> Result<f64> {
        self.overlap(other).map(|z| z.norm_sqr())
    }

    /// Mean and variance of `q₁` under the density.
    pub fn position_moments(&self) -> (f64, f64) {
        let rho = self.density();
        let total: f64 = rho.iter().sum();
        let mean = rho.iter().enumerate().map(|(i, r)| r * self.grid.at(i)).sum::<f64>() / total;
        let var = rho
            .iter()
            .enumerate()
            .map(|(i, r)| r * (self.grid.at(i) - mean).powi(2))
            .sum::<f64>()
            / total;
        (mean, var)
    }
}

/// Wavefunction on a 2D Cartesian grid. Absorbing layers act along `x`;
/// `y` is always periodic.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveState2D {
    pub psi: Vec<Complex64>,
    pub grid: Grid2D,
    pub t: f64,
    pub boundary: Boundary,
}

impl WaveState2D {
    pub fn new(psi: Vec<Complex64>, grid: Grid2D, boundary: Boundary) -> Result<Self> {
        if psi.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples on a {}-cell grid",
                psi.len(),
                grid.len()
            )));
        }
        Ok(Self {
            psi,
            grid,
            t: 0.0,
            boundary,
        })
    }

    pub fn norm(&self) -> f64 {
        self.psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_area()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::invalid("psi", "cannot normalise a zero or non-finite state"));
        }
        let s = 1.0 / n.sqrt();
        self.psi.iter_mut().for_each(|z| *z *= s);
        Ok(())
    }

    pub fn density(&self) -> Vec<f64> {
        self.psi.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn fidelity(&self, other: &WaveState2D) -> Result<f64> {
        if !(self.grid.x.same_as(&other.grid.x) && self.grid.y.same_as(&other.grid.y)) {
            return Err(Error::GridMismatch("2D states live on different grids".into()));
        }
        let s: Complex64 = self.psi.iter().zip(&other.psi).map(|(a, b)| a.conj() * b).sum();
        Ok((s * self.grid.cell_area()).norm_sqr())
    }
}

/// Density standard deviation from a full width at half maximum.
pub fn fwhm_to_sigma(fwhm: f64) -> f64 {
    fwhm / (8.0 * std::f64::consts::LN_2).sqrt()
}

/// Angular wavenumbers of an `n`-point FFT with spacing `h`, in FFT order.
pub(crate) fn fft_wavenumbers(n: usize, h: f64) -> Vec<f64> {
    let dk = 2.0 * std::f64::consts::PI / (n as f64 * h);
    (0..n)
        .map(|i| {
            if i <= n / 2 {
                i as f64 * dk
            } else {
                (i as f64 - n as f64) * dk
            }
        })
        .collect()
}

fn check_finite(psi: &[Complex64], step: usize) -> Result<()> {
    if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Err(Error::NumericalBlowup { step })
    } else {
        Ok(())
    }
}
