use serde::{Deserialize, Serialize};

use crate::potentials::PotentialGrid;
use crate::{Error, Grid1D, Result};

/// Bound states below the lower asymptote, ascending in energy.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundStateSpectrum {
    pub energies: Vec<f64>,
    /// Real wavefunctions on `grid`, normalised to `∫ψ² dq₁ = 1`.
    pub wavefunctions: Vec<Vec<f64>>,
    pub node_counts: Vec<usize>,
    pub grid: Grid1D,
    pub count: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundStateOptions {
    /// States within this distance of the continuum edge are dropped.
    pub edge_margin: f64,
    /// Combine spacings `h` and `2h` to cancel the `O(h²)` bias.
    pub richardson: bool,
    pub wavefunctions: bool,
}

impl Default for BoundStateOptions {
    fn default() -> Self {
        Self {
            edge_margin: 1e-6,
            richardson: true,
            wavefunctions: true,
        }
    }
}

pub fn bound_states(v: &PotentialGrid) -> Result<BoundStateSpectrum> {
    bound_states_with(v, &BoundStateOptions::default())
}

pub fn bound_states_with(v: &PotentialGrid, opts: &BoundStateOptions) -> Result<BoundStateSpectrum> {
    if v.periodic {
        return Err(Error::invalid("potential", "bound states need an open potential"));
    }
    if v.grid.len < 8 {
        return Err(Error::InsufficientSamples {
            needed: 8,
            got: v.grid.len,
        });
    }
    let h = v.grid.step;
    let threshold = v.v_left_asym.min(v.v_right_asym);
    let depth = (threshold - v.min()).max(0.0);
    if h * h * depth >= 0.1 {
        return Err(Error::GridTooCoarse(format!("h²·|v_min| = {:.3} ≥ 0.1", h * h * depth)));
    }
    let cutoff = threshold - opts.edge_margin;

    let fine = Tridiagonal::new(&v.v, h);
    let mut energies = fine.eigenvalues_below(cutoff + depth.max(1.0) * 1e-3);
    if opts.richardson {
        let coarse_v: Vec<f64> = v.v.iter().step_by(2).copied().collect();
        let coarse = Tridiagonal::new(&coarse_v, 2.0 * h).eigenvalues_below(cutoff + depth.max(1.0) * 1e-2);
        for (i, e) in energies.iter_mut().enumerate() {
            if let Some(ec) = coarse.get(i) {
                *e = (4.0 * *e - ec) / 3.0;
            }
        }
    }
    energies.retain(|e| *e < cutoff);

    let mut spectrum = BoundStateSpectrum {
        count: energies.len(),
        energies,
        wavefunctions: Vec::new(),
        node_counts: Vec::new(),
        grid: v.grid,
        warnings: Vec::new(),
    };
    if !opts.wavefunctions {
        return Ok(spectrum);
    }
    let raw = fine.eigenvalues_below(cutoff + depth.max(1.0) * 1e-3);
    for (i, _) in spectrum.energies.iter().enumerate() {
        let psi = fine.eigenvector(raw[i], h);
        spectrum.node_counts.push(count_nodes(&psi));
        spectrum.wavefunctions.push(psi);
    }
    if let Some(psi0) = spectrum.wavefunctions.first() {
        let edge = psi0[0].abs().max(psi0[psi0.len() - 1].abs());
        if edge > 1e-8 {
            spectrum.warnings.push(format!(
                "ground state amplitude {edge:.2e} at the box edge; widen the grid"
            ));
        }
    }
    for (i, n) in spectrum.node_counts.iter().enumerate() {
        if *n != i {
            spectrum
                .warnings
                .push(format!("state {i} has {n} nodes; spectrum may be under-resolved"));
        }
    }
    Ok(spectrum)
}

fn count_nodes(psi: &[f64]) -> usize {
    let peak = psi.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut last = 0.0;
    let mut nodes = 0;
    for &x in psi {
        if x.abs() < 1e-6 * peak {
            continue;
        }
        if last != 0.0 && x.signum() != last {
            nodes += 1;
        }
        last = x.signum();
    }
    nodes
}

/// `H = -½∂² + v` with three-point Laplacian and Dirichlet ends.
struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    fn new(v: &[f64], h: f64) -> Self {
        let kin = 1.0 / (h * h);
        Self {
            diag: v.iter().map(|v| v + kin).collect(),
            off: -0.5 * kin,
        }
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    fn count_below(&self, x: f64) -> usize {
        let b2 = self.off * self.off;
        let mut d = f64::INFINITY;
        let mut count = 0;
        for &a in &self.diag {
            d = a - x - b2 / d;
            if d == 0.0 {
                d = -f64::EPSILON * (a.abs() + x.abs() + 1.0);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn eigenvalues_below(&self, x: f64) -> Vec<f64> {
        let n = self.count_below(x);
        let lo0 = self.diag.iter().copied().fold(f64::INFINITY, f64::min) - 2.0 * self.off.abs();
        (0..n)
            .map(|i| {
                let (mut lo, mut hi) = (lo0, x);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.count_below(mid) > i {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect()
    }

    /// Inverse iteration at a shift just off `e`.
    fn eigenvector(&self, e: f64, h: f64) -> Vec<f64> {
        let n = self.diag.len();
        let shift = e + 1e-10 * (1.0 + e.abs());
        let mut x = vec![1.0; n];
        for _ in 0..4 {
            x = solve_shifted(&self.diag, self.off, shift, &x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        }
        let norm = (x.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
        let peak = x
            .iter()
            .copied()
            .fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
        let sign = peak.signum() / norm;
        x.iter_mut().for_each(|v| *v *= sign);
        x
    }
}

/// Solves `(T - s) x = b` for symmetric tridiagonal `T` by Gaussian
/// elimination with partial pivoting.
fn solve_shifted(diag: &[f64], off: f64, s: f64, b: &[f64]) -> Vec<f64> {
    let n = diag.len();
    // Row i of U holds u0[i] (diagonal), u1[i], u2[i] (second fill-in superdiagonal).
    let mut u0 = vec![0.0; n];
    let mut u1 = vec![0.0; n];
    let mut u2 = vec![0.0; n];
    let mut rhs = b.to_vec();
    // Current working row (diagonal, super) and the next row's sub entry.
    let mut a = diag[0] - s;
    let mut c = if n > 1 { off } else { 0.0 };
    for i in 0..n {
        if i + 1 == n {
            u0[i] = if a == 0.0 { f64::EPSILON } else { a };
            break;
        }
        let (sub, d_next, c_next) = (off, diag[i + 1] - s, if i + 2 < n { off } else { 0.0 });
        if a.abs() >= sub.abs() {
            let a_piv = if a == 0.0 { f64::EPSILON } else { a };
            let m = sub / a_piv;
            u0[i] = a_piv;
            u1[i] = c;
            u2[i] = 0.0;
            rhs[i + 1] -= m * rhs[i];
            a = d_next - m * c;
            c = c_next;
        } else {
            let m = a / sub;
            u0[i] = sub;
            u1[i] = d_next;
            u2[i] = c_next;
            rhs.swap(i, i + 1);
            rhs[i + 1] -= m * rhs[i];
            a = c - m * d_next;
            c = -m * c_next;
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        if i + 1 < n {
            acc -= u1[i] * x[i + 1];
        }
        if i + 2 < n {
            acc -= u2[i] * x[i + 2];
        }
        x[i] = acc / u0[i];
    }
    x
}
