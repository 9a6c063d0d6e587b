use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Uniform 1D grid `start + i*step`, `i = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Grid1D {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::invalid("step", format!("must be positive, got {step}")));
        }
        if len < 2 {
            return Err(Error::invalid("len", "grid needs at least two points"));
        }
        if !start.is_finite() {
            return Err(Error::invalid("start", "must be finite"));
        }
        Ok(Self { start, step, len })
    }

    /// Grid covering `[min, max]` with both endpoints included and spacing at
    /// most `max_step`.
    pub fn spanning(min: f64, max: f64, max_step: f64) -> Result<Self> {
        if !(max > min) {
            return Err(Error::invalid("interval", format!("[{min}, {max}] is empty")));
        }
        if !(max_step > 0.0) {
            return Err(Error::invalid("step", format!("must be positive, got {max_step}")));
        }
        let intervals = ((max - min) / max_step - 1e-9).ceil().max(1.0) as usize;
        Self::new(min, (max - min) / intervals as f64, intervals + 1)
    }

    /// Periodic grid of `len` points covering `[start, start + period)`.
    pub fn periodic(start: f64, period: f64, len: usize) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::invalid("period", format!("must be positive, got {period}")));
        }
        Self::new(start, period / len as f64, len)
    }

    /// Symmetric grid on `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, max_step: f64) -> Result<Self> {
        Self::spanning(-half_width, half_width, max_step)
    }

    #[inline]
    pub fn at(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.at(self.len - 1)
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.at(i)).collect()
    }

    /// Every other point, starting from the first.
    pub fn coarsened(&self) -> Self {
        Self {
            start: self.start,
            step: 2.0 * self.step,
            len: self.len.div_ceil(2),
        }
    }

    pub fn same_as(&self, other: &Grid1D) -> bool {
        self.len == other.len
            && (self.start - other.start).abs() <= 1e-12 * (1.0 + self.start.abs())
            && (self.step - other.step).abs() <= 1e-12 * self.step
    }

    pub(crate) fn ensure_same(&self, other: &Grid1D) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "grids differ: ({}, {}, {}) vs ({}, {}, {})",
                self.start, self.step, self.len, other.start, other.step, other.len
            )))
        }
    }
}

/// Row-major 2D grid: index `iy * x.len + ix`, rows run along `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub x: Grid1D,
    pub y: Grid1D,
}

impl Grid2D {
    pub fn new(x: Grid1D, y: Grid1D) -> Self {
        Self { x, y }
    }

    /// `nx × ny` cells covering `[x0, x0 + width) × [y0, y0 + height)`.
    pub fn covering(x0: f64, width: f64, nx: usize, y0: f64, height: f64, ny: usize) -> Result<Self> {
        Ok(Self {
            x: Grid1D::periodic(x0, width, nx)?,
            y: Grid1D::periodic(y0, height, ny)?,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len * self.y.len
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_area(&self) -> f64 {
        self.x.step * self.y.step
    }

    #[inline]
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.x.len + ix
    }

    #[inline]
    pub fn point(&self, idx: usize) -> [f64; 2] {
        [self.x.at(idx % self.x.len), self.y.at(idx / self.x.len)]
    }
}
