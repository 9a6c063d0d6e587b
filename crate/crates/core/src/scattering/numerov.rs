use std::thread;

use serde::{Deserialize, Serialize};

use crate::potentials::PotentialGrid;
use crate::{Complex64, Error, Result};

/// Reflection and transmission amplitudes over a momentum grid.
///
/// `k` is the left-channel momentum (`E = k²/2 + v_left_asym`), `k_right` the
/// transmitted one. Phases refer to plane waves `exp(±ikq₁)` anchored at `q₁ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringResult {
    pub k: Vec<f64>,
    pub r: Vec<Complex64>,
    pub t: Vec<Complex64>,
    pub k_right: Vec<f64>,
    /// `max_k | |R|² + (k′/k)|T|² − 1 |`.
    pub unitarity_residual: f64,
}

impl ScatteringResult {
    pub fn k_left(&self) -> &[f64] {
        &self.k
    }

    pub fn reflection_probability(&self) -> Vec<f64> {
        self.r.iter().map(|r| r.norm_sqr()).collect()
    }

    /// Flux-weighted `(k′/k)|T|²`, equal to `|T|²` for equal asymptotes.
    pub fn transmission_probability(&self) -> Vec<f64> {
        self.t
            .iter()
            .zip(self.k.iter().zip(&self.k_right))
            .map(|(t, (k, kr))| t.norm_sqr() * kr / k)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScatterOptions {
    /// Allowed spread of the outer 5% of samples, relative to the well depth.
    pub tail_tol: f64,
    /// Tail samples closer than this (relative) to the asymptote are snapped onto it.
    pub snap_tol: f64,
    /// Worker threads for the k-sweep; 0 picks the available parallelism.
    pub threads: usize,
}

impl Default for ScatterOptions {
    fn default() -> Self {
        Self {
            tail_tol: 1e-6,
            snap_tol: 1e-10,
            threads: 0,
        }
    }
}

pub fn scatter(v: &PotentialGrid, k_list: &[f64]) -> Result<ScatteringResult> {
    scatter_with(v, k_list, &ScatterOptions::default())
}

pub fn scatter_with(v: &PotentialGrid, k_list: &[f64], opts: &ScatterOptions) -> Result<ScatteringResult> {
    if v.periodic {
        return Err(Error::invalid("potential", "scattering needs an open potential"));
    }
    if v.grid.len < 8 {
        return Err(Error::InsufficientSamples {
            needed: 8,
            got: v.grid.len,
        });
    }
    if let Some(&k) = k_list.iter().find(|k| !(**k > 0.0) || !k.is_finite()) {
        return Err(Error::invalid("k", format!("momenta must be positive, got {k}")));
    }
    let prepared = prepare(v, opts)?;
    for &k in k_list {
        let kr2 = k * k + 2.0 * (prepared.vl - prepared.vr);
        if !(kr2 > 0.0) {
            return Err(Error::BelowThreshold {
                energy: 0.5 * k * k + prepared.vl,
                threshold: prepared.vr,
            });
        }
        let h2q = v.grid.step * v.grid.step * (k * k + 2.0 * (prepared.vl - prepared.vmin));
        if h2q > 1.0 {
            return Err(Error::GridTooCoarse(format!(
                "h²·2(E - v_min) = {h2q:.3} at k = {k}; refine the grid"
            )));
        }
    }

    let threads = match opts.threads {
        0 => thread::available_parallelism().map_or(1, |n| n.get()),
        n => n,
    }
    .min(k_list.len().max(1));
    let solved: Vec<(Complex64, Complex64, f64)> = if threads <= 1 {
        k_list.iter().map(|&k| prepared.solve(k)).collect()
    } else {
        let chunk = k_list.len().div_ceil(threads);
        thread::scope(|s| {
            let handles: Vec<_> = k_list
                .chunks(chunk)
                .map(|ks| {
                    let p = &prepared;
                    s.spawn(move || ks.iter().map(|&k| p.solve(k)).collect::<Vec<_>>())
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("k-sweep worker panicked"))
                .collect()
        })
    };

    let mut out = ScatteringResult {
        k: k_list.to_vec(),
        r: Vec::with_capacity(k_list.len()),
        t: Vec::with_capacity(k_list.len()),
        k_right: Vec::with_capacity(k_list.len()),
        unitarity_residual: 0.0,
    };
    for (&k, (r, t, kr)) in k_list.iter().zip(solved) {
        let res = (r.norm_sqr() + kr / k * t.norm_sqr() - 1.0).abs();
        out.unitarity_residual = out.unitarity_residual.max(res);
        out.r.push(r);
        out.t.push(t);
        out.k_right.push(kr);
    }
    Ok(out)
}

struct Prepared {
    q: Vec<f64>,
    v: Vec<f64>,
    h: f64,
    vl: f64,
    vr: f64,
    vmin: f64,
}

fn prepare(p: &PotentialGrid, opts: &ScatterOptions) -> Result<Prepared> {
    let (vl, vr) = (p.v_left_asym, p.v_right_asym);
    let n = p.v.len();
    let depth =
        p.v.iter()
            .map(|x| (x - vl).abs().max((x - vr).abs()))
            .fold(0.0, f64::max);
    let m = ((n as f64 * 0.05).ceil() as usize).clamp(3, n / 2);
    for tail in [&p.v[..m], &p.v[n - m..]] {
        let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tolerance = opts.tail_tol * depth;
        if hi - lo > tolerance {
            return Err(Error::NonFlatTails {
                variation: hi - lo,
                tolerance,
            });
        }
    }

    let mut v = p.v.clone();
    let snap = opts.snap_tol * depth;
    let mut i = 0;
    while i < n && (i < 3 || (v[i] - vl).abs() < snap) {
        v[i] = vl;
        i += 1;
    }
    let mut j = n;
    while j > i && (j > n - 3 || (v[j - 1] - vr).abs() < snap) {
        v[j - 1] = vr;
        j -= 1;
    }
    let vmin = v.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Prepared {
        q: p.q1(),
        v,
        h: p.grid.step,
        vl,
        vr,
        vmin,
    })
}

impl Prepared {
    /// Discrete momentum of a Numerov plane wave with `Q = κ²`.
    fn discrete_k(&self, kk: f64) -> f64 {
        let x = self.h * self.h * kk / 12.0;
        ((1.0 - 5.0 * x) / (1.0 + x)).clamp(-1.0, 1.0).acos() / self.h
    }

    /// Returns `(R, T, k_right)`.
    fn solve(&self, k: f64) -> (Complex64, Complex64, f64) {
        let n = self.v.len();
        let h2 = self.h * self.h / 12.0;
        let kr2 = k * k + 2.0 * (self.vl - self.vr);
        let kr = kr2.sqrt();
        let f = |i: usize| 1.0 + h2 * (k * k + 2.0 * (self.vl - self.v[i]));

        let kd_r = self.discrete_k(kr2);
        let mut next = Complex64::from_polar(1.0, kd_r * self.q[n - 1]);
        let mut cur = Complex64::from_polar(1.0, kd_r * self.q[n - 2]);
        // Amplitude of the outgoing wave relative to the current normalisation.
        let mut t_amp = 1.0;
        let (mut f_next, mut f_cur) = (f(n - 1), f(n - 2));
        for i in (0..n - 2).rev() {
            let f_prev = f(i);
            let prev = ((12.0 - 10.0 * f_cur) * cur - f_next * next) / f_prev;
            next = cur;
            cur = prev;
            f_next = f_cur;
            f_cur = f_prev;
            let mag = cur.norm();
            if mag > 1e150 {
                cur /= mag;
                next /= mag;
                t_amp /= mag;
            }
        }
        let (psi0, psi1) = (cur, next);

        let kd_l = self.discrete_k(k * k);
        let e0 = Complex64::from_polar(1.0, kd_l * self.q[0]);
        let e1 = Complex64::from_polar(1.0, kd_l * self.q[1]);
        // psi0 = A e0 + B / e0, psi1 = A e1 + B / e1.
        let det = e0 / e1 - e1 / e0;
        let a = (psi0 / e1 - psi1 / e0) / det;
        let b = (e0 * psi1 - e1 * psi0) / det;
        (b / a, Complex64::new(t_amp, 0.0) / a, kr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::PotentialSource;
    use crate::Grid1D;

    fn grid_potential(half: f64, h: f64, f: impl Fn(f64) -> f64) -> PotentialGrid {
        let g = Grid1D::symmetric(half, h).unwrap();
        let v = g.points().into_iter().map(f).collect();
        PotentialGrid::new(g, v, PotentialSource::External).unwrap()
    }

    #[test]
    fn free_line_is_transparent() {
        let p = grid_potential(10.0, 0.05, |_| 0.0);
        let r = scatter(&p, &[0.1, 0.5, 1.7]).unwrap();
        for i in 0..3 {
            assert!(r.r[i].norm() < 1e-9);
            assert!((r.t[i] - 1.0).norm() < 1e-9);
        }
    }

    #[test]
    fn square_barrier_matches_textbook() {
        let (v0, a) = (0.3, 1.0);
        // Smooth edges would change the answer; the step is sampled exactly on nodes.
        let p = grid_potential(20.0, 0.001, |q| if q.abs() < a { v0 } else { 0.0 });
        let k = 1.0;
        let r = scatter(&p, &[k]).unwrap();
        let kap = (k * k - 2.0 * v0).sqrt();
        let s = (2.0 * kap * a).sin();
        let exact = 1.0 / (1.0 + (k * k - kap * kap).powi(2) * s * s / (4.0 * k * k * kap * kap));
        assert!((r.t[0].norm_sqr() - exact).abs() < 5e-3);
        assert!(r.unitarity_residual < 1e-10);
    }

    #[test]
    fn potential_step_flux_balance() {
        let p = grid_potential(30.0, 0.01, |q| -0.2 * (0.5 * (1.0 + (2.0 * q).tanh())));
        let p = PotentialGrid {
            v_right_asym: -0.2,
            v_left_asym: 0.0,
            ..p
        };
        let k = 0.4;
        let r = scatter(&p, &[k]).unwrap();
        let kr = (k * k + 0.4f64).sqrt();
        assert!((r.k_right[0] - kr).abs() < 1e-14);
        assert!(r.unitarity_residual < 1e-8);
        // Smooth step: |R|² = [sinh(π(k'-k)/(2·2)) / sinh(π(k'+k)/(2·2))]².
        let w = 2.0;
        let exact = ((std::f64::consts::PI * (kr - k) / (2.0 * w)).sinh()
            / (std::f64::consts::PI * (kr + k) / (2.0 * w)).sinh())
        .powi(2);
        assert!(
            (r.r[0].norm_sqr() - exact).abs() < 1e-6,
            "{} {}",
            r.r[0].norm_sqr(),
            exact
        );
    }

    #[test]
    fn rejects_bad_input() {
        let p = grid_potential(10.0, 0.05, |q| -(-q * q).exp());
        assert!(matches!(scatter(&p, &[0.0]), Err(Error::InvalidParameter { .. })));
        let sloped = grid_potential(10.0, 0.05, |q| 0.01 * q);
        assert!(matches!(scatter(&sloped, &[0.5]), Err(Error::NonFlatTails { .. })));
        let step = PotentialGrid {
            v_right_asym: 1.0,
            ..grid_potential(10.0, 0.05, |q| if q > 0.0 { 1.0 } else { 0.0 })
        };
        assert!(matches!(scatter(&step, &[0.5]), Err(Error::BelowThreshold { .. })));
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let p = grid_potential(15.0, 0.02, |q| -0.7 / q.cosh().powi(2));
        let ks: Vec<f64> = (1..20).map(|i| 0.1 * i as f64).collect();
        let one = scatter_with(
            &p,
            &ks,
            &ScatterOptions {
                threads: 1,
                ..Default::default()
            },
        )
        .unwrap();
        let four = scatter_with(
            &p,
            &ks,
            &ScatterOptions {
                threads: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(one, four);
    }
}
