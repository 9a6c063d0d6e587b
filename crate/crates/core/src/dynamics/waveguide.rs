use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Boundary, WaveState2D};
use crate::geometry::{integrate_frenet_serret, CurvatureProfile, SampledCurve};
use crate::potentials::PotentialGrid;
use crate::{Complex64, Error, Grid1D, Grid2D, Result};

/// Cross-section of the painted guide as a function of the distance `d` to its axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Transverse {
    /// `ω²d²/2`.
    Harmonic { omega: f64 },
    /// `-V₀ exp(-d²/2w²)`.
    GaussianWell { depth: f64, width: f64 },
}

impl Transverse {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Transverse::Harmonic { omega } if !(omega > 0.0) => {
                Err(Error::invalid("omega", format!("must be positive, got {omega}")))
            }
            Transverse::GaussianWell { depth, width } if !(depth > 0.0) || !(width > 0.0) => Err(Error::invalid(
                "gaussian_well",
                format!("depth and width must be positive, got ({depth}, {width})"),
            )),
            _ => Ok(()),
        }
    }

    pub fn value(&self, d: f64) -> f64 {
        match *self {
            Transverse::Harmonic { omega } => 0.5 * omega * omega * d * d,
            Transverse::GaussianWell { depth, width } => -depth * (-d * d / (2.0 * width * width)).exp(),
        }
    }

    /// Frequency of the quadratic approximation at the bottom of the well.
    pub fn bottom_frequency(&self) -> f64 {
        match *self {
            Transverse::Harmonic { omega } => omega,
            Transverse::GaussianWell { depth, width } => depth.sqrt() / width,
        }
    }

    /// Unnormalised transverse ground-state profile of the quadratic approximation.
    pub fn ground_profile(&self, d: f64) -> f64 {
        (-0.5 * self.bottom_frequency() * d * d).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WaveguideOptions {
    /// Cells closer than this to the axis are assigned an arc length for projection.
    pub capture_radius: f64,
    /// Distances beyond this are clamped (the potential is flat there).
    pub saturation: f64,
    /// Width of the arc-length bins of the projected density.
    pub q1_bin: f64,
}

impl Default for WaveguideOptions {
    fn default() -> Self {
        Self {
            capture_radius: 5.0,
            saturation: 8.0,
            q1_bin: 0.5,
        }
    }
}

/// Potential `U(x, y)` painted along a planar curve on a Cartesian grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveguidePotential2D {
    curve: SampledCurve,
    transverse: Transverse,
    depth_modulation: Option<PotentialGrid>,
    grid: Grid2D,
    options: WaveguideOptions,
    field: Vec<f64>,
    /// Arc length of the nearest axis point, `NaN` beyond the saturation distance.
    nearest_q1: Vec<f64>,
    distance: Vec<f64>,
    ambiguous: Vec<bool>,
    q1_bins: Grid1D,
}

impl WaveguidePotential2D {
    /// Paints `transverse(d) + modulation(q₁*)` where `q₁*` is the arc length of
    /// the nearest point of the (planar) curve.
    pub fn new(
        curve: &SampledCurve,
        transverse: Transverse,
        grid: Grid2D,
        depth_modulation: Option<PotentialGrid>,
        options: WaveguideOptions,
    ) -> Result<Self> {
        transverse.validate()?;
        if curve.len() < 2 {
            return Err(Error::InsufficientSamples {
                needed: 2,
                got: curve.len(),
            });
        }
        if !curve.is_planar {
            return Err(Error::invalid("curve", "2D painting needs a planar curve"));
        }
        if !(options.capture_radius > 0.0) || !(options.saturation >= options.capture_radius) {
            return Err(Error::invalid("capture_radius", "need 0 < capture_radius ≤ saturation"));
        }
        if !(options.q1_bin > 0.0) {
            return Err(Error::invalid("q1_bin", "must be positive"));
        }
        let q_lo = curve.arc_q1[0];
        let q_hi = curve.arc_q1[curve.len() - 1];
        let q1_bins = Grid1D::spanning(q_lo, q_hi, options.q1_bin)?;
        let locator = Locator::new(curve, options.saturation);

        let n = grid.len();
        let mut field = vec![0.0; n];
        let mut nearest_q1 = vec![f64::NAN; n];
        let mut distance = vec![options.saturation; n];
        let mut ambiguous = vec![false; n];
        let far = transverse.value(options.saturation);
        for idx in 0..n {
            let p = grid.point(idx);
            match locator.nearest(p) {
                Some((d, q1)) => {
                    let m = depth_modulation.as_ref().map_or(0.0, |m| m.interpolate(q1));
                    field[idx] = transverse.value(d) + m;
                    nearest_q1[idx] = q1;
                    distance[idx] = d;
                    if d <= options.capture_radius {
                        ambiguous[idx] = locator.has_distant_rival(p, q1, options.capture_radius);
                    }
                }
                None => field[idx] = far,
            }
        }
        Ok(Self {
            curve: curve.clone(),
            transverse,
            depth_modulation,
            grid,
            options,
            field,
            nearest_q1,
            distance,
            ambiguous,
            q1_bins,
        })
    }

    /// Horizontal guide along `y = y0` spanning the grid.
    pub fn straight(grid: Grid2D, y0: f64, transverse: Transverse, options: WaveguideOptions) -> Result<Self> {
        let x_end = grid.x.start + grid.x.step * grid.x.len as f64;
        let curve = integrate_frenet_serret(&CurvatureProfile::straight(), grid.x.start, x_end, grid.x.step)?;
        let shift = curve.arc_q1[0] - curve.points[0][0];
        let curve = curve.rotated_translated(0.0, [shift, y0]);
        Self::new(&curve, transverse, grid, None, options)
    }

    pub fn field(&self) -> &[f64] {
        &self.field
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn curve(&self) -> &SampledCurve {
        &self.curve
    }

    pub fn transverse(&self) -> Transverse {
        self.transverse
    }

    pub fn depth_modulation(&self) -> Option<&PotentialGrid> {
        self.depth_modulation.as_ref()
    }

    pub fn options(&self) -> &WaveguideOptions {
        &self.options
    }

    pub fn q1_bins(&self) -> Grid1D {
        self.q1_bins
    }

    /// `(q₁*, d)` of a cell when it lies within the saturation distance.
    pub fn nearest(&self, idx: usize) -> Option<(f64, f64)> {
        let q = self.nearest_q1[idx];
        (!q.is_nan()).then(|| (q, self.distance[idx]))
    }

    /// Number of captured cells that are also within the capture radius of an
    /// arc-length-distant part of the curve.
    pub fn ambiguous_cells(&self) -> usize {
        self.ambiguous.iter().filter(|a| **a).count()
    }

    /// Mass of `density` sitting on ambiguous cells.
    pub fn ambiguous_mass(&self, density: &[f64]) -> f64 {
        density
            .iter()
            .zip(&self.ambiguous)
            .filter(|(_, a)| **a)
            .map(|(r, _)| r)
            .sum::<f64>()
            * self.grid.cell_area()
    }

    /// Arc-length density `n(q₁)` (per unit length) from a cell density, plus
    /// the mass outside the capture radius.
    pub fn project(&self, density: &[f64]) -> (Vec<f64>, f64) {
        let g = self.q1_bins;
        let area = self.grid.cell_area();
        let mut out = vec![0.0; g.len];
        let mut lost = 0.0;
        for (idx, r) in density.iter().enumerate() {
            let q = self.nearest_q1[idx];
            if q.is_nan() || self.distance[idx] > self.options.capture_radius {
                lost += r * area;
                continue;
            }
            let b = (((q - g.start) / g.step).round().max(0.0) as usize).min(g.len - 1);
            out[b] += r * area / g.step;
        }
        (out, lost)
    }

    /// Normalised state `envelope(q₁*) · φ₀(d)` with `φ₀` the transverse ground
    /// profile; zero beyond the saturation distance.
    pub fn guided_state(&self, envelope: impl Fn(f64) -> Complex64, boundary: Boundary) -> Result<WaveState2D> {
        let psi = (0..self.grid.len())
            .map(|idx| match self.nearest(idx) {
                Some((q, d)) => envelope(q) * self.transverse.ground_profile(d),
                None => Complex64::new(0.0, 0.0),
            })
            .collect();
        let mut s = WaveState2D::new(psi, self.grid, boundary)?;
        s.normalize()?;
        Ok(s)
    }
}

/// Bucketed segment lookup on a planar polyline.
struct Locator<'a> {
    pts: Vec<[f64; 2]>,
    q1: &'a [f64],
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<u32>>,
}

impl<'a> Locator<'a> {
    fn new(curve: &'a SampledCurve, reach: f64) -> Self {
        let pts = curve.planar_points();
        let cell = reach.max(1e-9);
        let mut buckets: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
        for i in 0..pts.len() - 1 {
            let (a, b) = (pts[i], pts[i + 1]);
            let (x0, x1) = (a[0].min(b[0]), a[0].max(b[0]));
            let (y0, y1) = (a[1].min(b[1]), a[1].max(b[1]));
            for bx in key(x0, cell)..=key(x1, cell) {
                for by in key(y0, cell)..=key(y1, cell) {
                    buckets.entry((bx, by)).or_default().push(i as u32);
                }
            }
        }
        Self {
            pts,
            q1: &curve.arc_q1,
            cell,
            buckets,
        }
    }

    fn candidates(&self, p: [f64; 2]) -> impl Iterator<Item = usize> + '_ {
        let (bx, by) = (key(p[0], self.cell), key(p[1], self.cell));
        (-1..=1)
            .flat_map(move |dx| (-1..=1).map(move |dy| (bx + dx, by + dy)))
            .filter_map(|k| self.buckets.get(&k))
            .flatten()
            .map(|&i| i as usize)
    }

    /// Distance and interpolated arc length of the closest segment point.
    fn segment(&self, i: usize, p: [f64; 2]) -> (f64, f64) {
        let (a, b) = (self.pts[i], self.pts[i + 1]);
        let (ux, uy) = (b[0] - a[0], b[1] - a[1]);
        let len2 = ux * ux + uy * uy;
        let t = if len2 > 0.0 {
            (((p[0] - a[0]) * ux + (p[1] - a[1]) * uy) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let (cx, cy) = (a[0] + t * ux, a[1] + t * uy);
        let d = ((p[0] - cx).powi(2) + (p[1] - cy).powi(2)).sqrt();
        (d, self.q1[i] + t * (self.q1[i + 1] - self.q1[i]))
    }

    fn nearest(&self, p: [f64; 2]) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for i in self.candidates(p) {
            let (d, q) = self.segment(i, p);
            if d <= self.cell && best.is_none_or(|(bd, bq)| d < bd || (d == bd && q < bq)) {
                best = Some((d, q));
            }
        }
        best
    }

    fn has_distant_rival(&self, p: [f64; 2], q_best: f64, radius: f64) -> bool {
        self.candidates(p).any(|i| {
            let (d, q) = self.segment(i, p);
            d <= radius && (q - q_best).abs() > 2.0 * radius
        })
    }
}

fn key(x: f64, cell: f64) -> i64 {
    (x / cell).floor() as i64
}
