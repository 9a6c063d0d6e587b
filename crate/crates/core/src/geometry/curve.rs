use super::profile::{evaluate_curvature, CurvatureProfile};
use crate::{Error, Result};

/// Orthonormal triad `(t̂, n̂, b̂)` at a sample.
///
/// For planar curves `n̂` is the left normal (so that the signed curvature is
/// `κ = dθ/dq1`), which coincides with the principal normal wherever `κ > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub tangent: [f64; 3],
    pub normal: [f64; 3],
    pub binormal: [f64; 3],
}

/// Arc-length parametrized polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    /// Sample positions; `z = 0` for planar curves.
    pub points: Vec<[f64; 3]>,
    /// Arc length of the (possibly lifted) curve at each sample.
    pub arc_q1: Vec<f64>,
    /// Arc length of the planar design curve at each sample; equal to
    /// `arc_q1` unless the curve has been lifted by a torsion.
    pub design_s: Vec<f64>,
    /// Tangent angle of the planar design curve.
    pub heading: Vec<f64>,
    pub is_planar: bool,
    pub torsion: f64,
    pub frame: Option<Vec<Frame>>,
}

impl SampledCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sample spacing in arc length (the grid is uniform).
    pub fn step(&self) -> f64 {
        if self.arc_q1.len() < 2 {
            return 0.0;
        }
        (self.arc_q1[self.arc_q1.len() - 1] - self.arc_q1[0]) / (self.arc_q1.len() - 1) as f64
    }

    /// Sum of chord lengths between consecutive samples.
    pub fn chord_length(&self) -> f64 {
        self.points.windows(2).map(|w| distance(&w[0], &w[1])).sum()
    }

    /// Planar projection `(x, y)` of every sample.
    pub fn planar_points(&self) -> Vec<[f64; 2]> {
        self.points.iter().map(|p| [p[0], p[1]]).collect()
    }

    /// Rigid motion in the plane: rotate by `angle` about the origin, then translate.
    pub fn rotated_translated(&self, angle: f64, offset: [f64; 2]) -> SampledCurve {
        let (s, c) = angle.sin_cos();
        let rot = |v: [f64; 3]| [c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]];
        let mut out = self.clone();
        for p in &mut out.points {
            let r = rot(*p);
            *p = [r[0] + offset[0], r[1] + offset[1], r[2]];
        }
        for h in &mut out.heading {
            *h += angle;
        }
        if let Some(frames) = &mut out.frame {
            for f in frames {
                f.tangent = rot(f.tangent);
                f.normal = rot(f.normal);
                f.binormal = rot(f.binormal);
            }
        }
        out
    }

    /// Drop the torsion lift, keeping the planar design curve `(x(s), y(s))`.
    pub fn planar_projection(&self) -> SampledCurve {
        let mut out = self.clone();
        for p in &mut out.points {
            p[2] = 0.0;
        }
        out.arc_q1 = self.design_s.clone();
        out.is_planar = true;
        out.torsion = 0.0;
        out.frame = out.frame.as_ref().map(|_| planar_frames(&out.heading));
        out
    }
}

pub(crate) fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn planar_frames(heading: &[f64]) -> Vec<Frame> {
    heading
        .iter()
        .map(|&th| {
            let (s, c) = th.sin_cos();
            Frame {
                tangent: [c, s, 0.0],
                normal: [-s, c, 0.0],
                binormal: [0.0, 0.0, 1.0],
            }
        })
        .collect()
}

#[derive(Clone, Copy)]
struct State {
    theta: f64,
    x: f64,
    y: f64,
}

fn rk4_step(profile: &CurvatureProfile, q: f64, h: f64, st: State) -> Result<State> {
    let k_at = |q: f64| evaluate_curvature(profile, q);
    let f = |q: f64, s: State| -> Result<[f64; 3]> {
        let (sn, cs) = s.theta.sin_cos();
        Ok([k_at(q)?, cs, sn])
    };
    let add = |s: State, d: [f64; 3], w: f64| State {
        theta: s.theta + w * d[0],
        x: s.x + w * d[1],
        y: s.y + w * d[2],
    };
    // End stages use one-sided limits so sign-mask jumps at nodes are not
    // sampled from the wrong side.
    let nudge = 1e-9 * h;
    let k1 = f(q + nudge, st)?;
    let k2 = f(q + 0.5 * h, add(st, k1, 0.5 * h))?;
    let k3 = f(q + 0.5 * h, add(st, k2, 0.5 * h))?;
    let k4 = f(q + h - nudge, add(st, k3, h))?;
    Ok(State {
        theta: st.theta + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        x: st.x + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        y: st.y + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    })
}

/// Integrate the planar Frenet–Serret system `θ' = κ`, `x' = cos θ`,
/// `y' = sin θ` and, for a profile with torsion `τ > 0`, lift the result to the
/// helix-like space curve `(x(s), y(s), τ s)` with arc length `√(1+τ²) s`.
///
/// The interval and step refer to the design arc length `s` of the planar
/// curve. The anchor `θ = x = y = 0` sits at `s = 0` (or at the nearest
/// interval end when 0 is outside). Samples are uniformly spaced with spacing
/// at most `step`; integration is classical fourth-order Runge–Kutta.
pub fn integrate_frenet_serret(
    profile: &CurvatureProfile,
    q1_min: f64,
    q1_max: f64,
    step: f64,
) -> Result<SampledCurve> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::invalid("step", format!("must be positive, got {step}")));
    }
    if !(q1_max > q1_min) {
        return Err(Error::invalid(
            "interval",
            format!("need q1_min < q1_max, got [{q1_min}, {q1_max}]"),
        ));
    }
    let (dom_lo, dom_hi) = profile.domain();
    let slack = 1e-12 * (dom_hi - dom_lo).abs().min(1e300);
    if q1_min < dom_lo - slack || q1_max > dom_hi + slack {
        return Err(Error::OutOfDomain {
            q1: if q1_min < dom_lo { q1_min } else { q1_max },
            min: dom_lo,
            max: dom_hi,
        });
    }
    let intervals = ((q1_max - q1_min) / step - 1e-9).ceil().max(1.0) as usize;
    let h = (q1_max - q1_min) / intervals as f64;
    let n = intervals + 1;
    let s_at = |i: usize| q1_min + i as f64 * h;

    let anchor = 0f64.clamp(q1_min, q1_max);
    let j = (((anchor - q1_min) / h).round() as usize).min(n - 1);
    let origin = State {
        theta: 0.0,
        x: 0.0,
        y: 0.0,
    };
    let mut states = vec![origin; n];
    states[j] = if (s_at(j) - anchor).abs() > 0.0 {
        rk4_step(profile, anchor, s_at(j) - anchor, origin)?
    } else {
        origin
    };
    for i in j..n - 1 {
        states[i + 1] = rk4_step(profile, s_at(i), h, states[i])?;
    }
    for i in (1..=j).rev() {
        states[i - 1] = rk4_step(profile, s_at(i), -h, states[i])?;
    }

    let tau = profile.torsion();
    let lift = (1.0 + tau * tau).sqrt();
    let design_s: Vec<f64> = (0..n).map(s_at).collect();
    let heading: Vec<f64> = states.iter().map(|s| s.theta).collect();
    let points = states
        .iter()
        .zip(&design_s)
        .map(|(st, s)| [st.x, st.y, tau * s])
        .collect();
    let frame = if tau > 0.0 {
        heading
            .iter()
            .map(|&th| {
                let (sn, cs) = th.sin_cos();
                Frame {
                    tangent: [cs / lift, sn / lift, tau / lift],
                    normal: [-sn, cs, 0.0],
                    binormal: [-tau * cs / lift, -tau * sn / lift, 1.0 / lift],
                }
            })
            .collect()
    } else {
        planar_frames(&heading)
    };
    Ok(SampledCurve {
        points,
        arc_q1: design_s.iter().map(|s| lift * s).collect(),
        design_s,
        heading,
        is_planar: tau == 0.0,
        torsion: tau,
        frame: Some(frame),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn straight_segment() {
        let c = integrate_frenet_serret(&CurvatureProfile::straight(), -10.0, 10.0, 0.01).unwrap();
        let first = c.points[0];
        let last = c.points[c.len() - 1];
        assert!((first[0] + 10.0).abs() < 1e-12 && first[1].abs() < 1e-12);
        assert!((last[0] - 10.0).abs() < 1e-12 && last[1].abs() < 1e-12);
    }

    #[test]
    fn circle_closes() {
        let p = CurvatureProfile::circle(1.0).unwrap();
        let c = integrate_frenet_serret(&p, 0.0, 2.0 * PI, 1e-3).unwrap();
        let gap = distance(&c.points[0], &c.points[c.len() - 1]);
        assert!(gap < 1e-8, "closure gap {gap}");
    }

    #[test]
    fn anchor_is_origin_even_off_grid() {
        let p = CurvatureProfile::poschl_teller(1.0, 0.5).unwrap();
        let c = integrate_frenet_serret(&p, -1.03, 2.0, 0.1).unwrap();
        // Integrate back to s = 0 from the nearest sample and check the origin.
        let j = c.design_s.iter().position(|s| s.abs() < 0.06).unwrap();
        let st = State {
            theta: c.heading[j],
            x: c.points[j][0],
            y: c.points[j][1],
        };
        let back = rk4_step(&p, c.design_s[j], -c.design_s[j], st).unwrap();
        assert!(back.theta.abs() < 1e-7 && back.x.abs() < 1e-7 && back.y.abs() < 1e-7);
    }

    #[test]
    fn bad_arguments() {
        let p = CurvatureProfile::straight();
        assert!(integrate_frenet_serret(&p, 0.0, 1.0, 0.0).is_err());
        assert!(integrate_frenet_serret(&p, 1.0, 0.0, 0.1).is_err());
        let t = CurvatureProfile::tabulated(vec![0.0, 1.0, 2.0, 3.0], vec![0.0; 4]).unwrap();
        assert!(matches!(
            integrate_frenet_serret(&t, 0.0, 5.0, 0.1),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn lifted_frame_is_orthonormal() {
        let p = CurvatureProfile::poschl_teller(1.0, 1.0)
            .unwrap()
            .with_torsion(20.0)
            .unwrap();
        let c = integrate_frenet_serret(&p, -3.0, 3.0, 0.01).unwrap();
        let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        for f in c.frame.as_ref().unwrap() {
            assert!((dot(f.tangent, f.tangent) - 1.0).abs() < 1e-12);
            assert!((dot(f.normal, f.normal) - 1.0).abs() < 1e-12);
            assert!((dot(f.binormal, f.binormal) - 1.0).abs() < 1e-12);
            assert!(dot(f.tangent, f.normal).abs() < 1e-12);
            assert!(dot(f.tangent, f.binormal).abs() < 1e-12);
            assert!(dot(f.normal, f.binormal).abs() < 1e-12);
        }
        assert!(!c.is_planar);
        assert!((c.arc_q1[c.len() - 1] - 3.0 * 401f64.sqrt()).abs() < 1e-9);
    }
}
