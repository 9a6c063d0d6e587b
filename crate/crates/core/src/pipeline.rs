//! Command pipelines: config in, files out.
//!
//! Each `cmd_*` function writes its outputs through an [`OutputSet`] and
//! returns a summary table of headline numbers, which is also written as
//! `summary.toml`. [`run_to_dir`] adds config resolution and the manifest.

use std::path::Path;
use std::time::Instant;

use crate::config::{
    CarpetConfig, Command, CompensateConfig, DesignConfig, Dimension, PropagateConfig, RunConfig, ScatterConfig,
};
use crate::dynamics::{
    imaginary_time_ground_state, imaginary_time_ground_state_2d, momentum_averaged_transmission, propagate_1d,
    propagate_2d, talbot_carpet, AbsorbingLayer, Boundary, CarpetResult, Propagate2DOptions, PropagateOptions,
    WaveState, WaveState2D, WaveguideOptions, WaveguidePotential2D,
};
use crate::geometry::{
    check_validity, detect_self_intersections, integrate_frenet_serret, Crossing, CurvatureProfile, EllipseArc,
    ProfileKind, SampledCurve, ValidityThresholds,
};
use crate::io::{encode_grid, encode_ppm, read_csv, render_csv, Colormap, Column, GridFile, OutputSet, RunManifest};
use crate::potentials::{cip_from_profile, compensation_barrier, ellipse_cip, PotentialGrid, PotentialSource};
use crate::scattering::{
    analytic_pt_transmission, bound_states_with, log_k_grid, scatter_with, BoundStateOptions, ScatterOptions,
};
use crate::{Complex64, Error, Grid1D, Grid2D, Result};

/// Process-level knobs that are not part of the physics config.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunContext {
    /// Worker threads for parallel sweeps; 0 picks the available parallelism.
    pub threads: usize,
    pub verbose: bool,
}

impl Default for RunContext {
    fn default() -> Self {
        Self {
            threads: 1,
            verbose: false,
        }
    }
}

macro_rules! note {
    ($ctx:expr, $($arg:tt)*) => {
        if $ctx.verbose {
            eprintln!($($arg)*);
        }
    };
}

/// Reads and resolves `config_path`, runs `command` into `out_dir` and writes
/// `summary.toml` and `manifest.toml` there.
pub fn run_to_dir(command: Command, config_path: &Path, out_dir: &Path, ctx: RunContext) -> Result<RunManifest> {
    let base = config_path.parent().unwrap_or(Path::new("."));
    let cfg = RunConfig::read(config_path)?.resolve(command, base)?;
    run_resolved(command, &cfg, out_dir, ctx)
}

pub fn run_resolved(command: Command, cfg: &RunConfig, out_dir: &Path, ctx: RunContext) -> Result<RunManifest> {
    let start = Instant::now();
    let mut out = OutputSet::create(out_dir)?;
    let summary = run(command, cfg, &mut out, ctx)?;
    out.write(
        "summary.toml",
        toml::to_string(&summary).map_err(|e| Error::Internal(e.to_string()))?,
    )?;
    out.finish(
        command.name(),
        ctx.threads,
        start.elapsed().as_secs_f64(),
        cfg.to_table()?,
    )
}

/// Dispatches a resolved config.
pub fn run(command: Command, cfg: &RunConfig, out: &mut OutputSet, ctx: RunContext) -> Result<toml::Table> {
    let missing = |s: &str| Error::Config {
        key: s.into(),
        message: "section missing; resolve the config first".into(),
    };
    match command {
        Command::Design => cmd_design(
            cfg.profile.as_ref().ok_or_else(|| missing("profile"))?.build()?,
            cfg.design.as_ref().ok_or_else(|| missing("design"))?,
            out,
        ),
        Command::Scatter | Command::Spectrum => {
            let s = cfg.scatter.as_ref().ok_or_else(|| missing("scatter"))?;
            let profile = cfg.profile.as_ref().map(|p| p.build()).transpose()?;
            cmd_scatter(profile.as_ref(), s, command == Command::Spectrum, out, ctx)
        }
        Command::Propagate => cmd_propagate(
            &cfg.profile.as_ref().ok_or_else(|| missing("profile"))?.build()?,
            cfg.propagate.as_ref().ok_or_else(|| missing("propagate"))?,
            out,
            ctx,
        ),
        Command::Carpet => cmd_carpet(cfg.carpet.as_ref().ok_or_else(|| missing("carpet"))?, out, ctx),
        Command::Compensate => cmd_compensate(cfg.compensate.as_ref().ok_or_else(|| missing("compensate"))?, out, ctx),
    }
}

fn curve_csv(curve: &SampledCurve) -> Result<String> {
    let col = |d: usize| curve.points.iter().map(|p| p[d]).collect::<Vec<_>>();
    let (x, y, z) = (col(0), col(1), col(2));
    if curve.is_planar {
        render_csv(
            &["q1", "x", "y"],
            &[Column::Float(&curve.arc_q1), Column::Float(&x), Column::Float(&y)],
        )
    } else {
        render_csv(
            &["q1", "x", "y", "z"],
            &[
                Column::Float(&curve.arc_q1),
                Column::Float(&x),
                Column::Float(&y),
                Column::Float(&z),
            ],
        )
    }
}

/// One line per multiple point: `q1_a q1_b x y [z]`.
pub fn intersection_report(crossings: &[Crossing], planar: bool) -> String {
    let mut s = format!("# {} multiple point(s)\n", crossings.len());
    s.push_str(if planar {
        "# q1_a q1_b x y\n"
    } else {
        "# q1_a q1_b x y z\n"
    });
    for c in crossings {
        let f = crate::io::format_float;
        s.push_str(&format!(
            "{} {} {} {}",
            f(c.q1_a),
            f(c.q1_b),
            f(c.point[0]),
            f(c.point[1])
        ));
        if !planar {
            s.push_str(&format!(" {}", f(c.point[2])));
        }
        if c.degenerate {
            s.push_str(" overlap");
        }
        s.push('\n');
    }
    s
}

fn toml_string<T: serde::Serialize>(v: &T) -> Result<String> {
    toml::to_string(v).map_err(|e| Error::Internal(e.to_string()))
}

pub fn cmd_design(profile: CurvatureProfile, d: &DesignConfig, out: &mut OutputSet) -> Result<toml::Table> {
    let curve = integrate_frenet_serret(&profile, d.q1_min, d.q1_max, d.step)?;
    let crossings = detect_self_intersections(&curve);
    out.write("curve.csv", curve_csv(&curve)?)?;
    out.write("intersections.txt", intersection_report(&crossings, curve.is_planar))?;

    let kappa = curve
        .design_s
        .iter()
        .map(|&s| crate::geometry::evaluate_curvature(&profile, s))
        .collect::<Result<Vec<_>>>()?;
    let v: Vec<f64> = kappa.iter().map(|k| -k * k / 8.0).collect();
    out.write(
        "curvature.csv",
        render_csv(
            &["q1", "kappa", "v"],
            &[Column::Float(&curve.design_s), Column::Float(&kappa), Column::Float(&v)],
        )?,
    )?;

    let validity = check_validity(
        &profile,
        d.sigma0,
        (d.q1_min, d.q1_max),
        d.kappa_floor,
        ValidityThresholds {
            pass: d.validity_pass,
            fail: d.validity_fail,
        },
    )?;
    out.write("validity.toml", toml_string(&validity)?)?;

    let mut summary = toml::Table::new();
    summary.insert("samples".into(), (curve.len() as i64).into());
    summary.insert("multiple_points".into(), (crossings.len() as i64).into());
    summary.insert("polyline_length".into(), curve.chord_length().into());
    summary.insert(
        "validity".into(),
        toml::Value::try_from(validity.verdict).map_err(|e| Error::Internal(e.to_string()))?,
    );
    if let Some(tau) = d.lift_torsion {
        let lifted = integrate_frenet_serret(&profile.clone().with_torsion(tau)?, d.q1_min, d.q1_max, d.step)?;
        let lc = detect_self_intersections(&lifted);
        out.write("lifted_curve.csv", curve_csv(&lifted)?)?;
        out.write("lifted_intersections.txt", intersection_report(&lc, false))?;
        summary.insert("lifted_multiple_points".into(), (lc.len() as i64).into());
    }
    Ok(summary)
}

fn load_potential_file(path: &Path) -> Result<PotentialGrid> {
    let (header, cols) = read_csv(path)?;
    let bad = |m: &str| Error::Config {
        key: path.display().to_string(),
        message: m.into(),
    };
    let find = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| bad(&format!("missing column `{name}`")))
    };
    let (q, v) = (&cols[find("q1")?], &cols[find("v")?]);
    if q.len() < 3 {
        return Err(bad("need at least three samples"));
    }
    let h = (q[q.len() - 1] - q[0]) / (q.len() - 1) as f64;
    if q.windows(2)
        .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1.0))
    {
        return Err(bad("q1 must be uniformly spaced"));
    }
    PotentialGrid::new(Grid1D::new(q[0], h, q.len())?, v.clone(), PotentialSource::External)
}

pub fn cmd_scatter(
    profile: Option<&CurvatureProfile>,
    s: &ScatterConfig,
    spectrum_only: bool,
    out: &mut OutputSet,
    ctx: RunContext,
) -> Result<toml::Table> {
    let v = match (profile, &s.potential_file) {
        (Some(p), _) => {
            let hw = s
                .half_width
                .ok_or_else(|| Error::Internal("unresolved scatter.half_width".into()))?;
            let step = s
                .step
                .ok_or_else(|| Error::Internal("unresolved scatter.step".into()))?;
            cip_from_profile(p, Grid1D::symmetric(hw, step)?)?
        }
        (None, Some(f)) => load_potential_file(f)?,
        (None, None) => return Err(Error::Internal("no potential".into())),
    };
    out.write(
        "potential.csv",
        render_csv(&["q1", "v"], &[Column::Float(&v.q1()), Column::Float(&v.v)])?,
    )?;
    let mut summary = toml::Table::new();

    if !spectrum_only {
        let ks = log_k_grid(s.k_min, s.k_max, s.n_k)?;
        let opts = ScatterOptions {
            tail_tol: s.tail_tol,
            snap_tol: s.snap_tol,
            threads: ctx.threads,
        };
        note!(ctx, "scattering {} momenta on {} points", ks.len(), v.grid.len);
        let r = scatter_with(&v, &ks, &opts)?;
        let t2 = r.transmission_probability();
        let r2 = r.reflection_probability();
        let residual: Vec<f64> = r2.iter().zip(&t2).map(|(a, b)| (a + b - 1.0).abs()).collect();
        let part = |f: fn(&Complex64) -> f64, z: &[Complex64]| z.iter().map(f).collect::<Vec<_>>();
        let (rr, ri) = (part(|z| z.re, &r.r), part(|z| z.im, &r.r));
        let (tr, ti) = (part(|z| z.re, &r.t), part(|z| z.im, &r.t));
        let mut header = vec!["k", "Re_R", "Im_R", "Re_T", "Im_T", "abs_T_sq", "unitarity_residual"];
        let mut cols = vec![
            Column::Float(&ks),
            Column::Float(&rr),
            Column::Float(&ri),
            Column::Float(&tr),
            Column::Float(&ti),
            Column::Float(&t2),
            Column::Float(&residual),
        ];
        let analytic: Option<Vec<f64>> = match profile.map(|p| (p.kind(), p.sign_mask().is_none())) {
            Some((ProfileKind::PoschlTeller { nu, alpha }, _)) if s.analytic_overlay => {
                Some(ks.iter().map(|&k| analytic_pt_transmission(*nu, *alpha, k)).collect())
            }
            _ => None,
        };
        if let Some(a) = &analytic {
            header.push("analytic_T_sq");
            cols.push(Column::Float(a));
            let dev = a.iter().zip(&t2).map(|(a, t)| (a - t).abs()).fold(0.0, f64::max);
            summary.insert("max_analytic_deviation".into(), dev.into());
        }
        out.write("scattering.csv", render_csv(&header, &cols)?)?;
        let fold = |v: &[f64], init: f64, f: fn(f64, f64) -> f64| v.iter().copied().fold(init, f);
        summary.insert("min_T_sq".into(), fold(&t2, f64::INFINITY, f64::min).into());
        summary.insert("max_R_sq".into(), fold(&r2, 0.0, f64::max).into());
        summary.insert("max_unitarity_residual".into(), r.unitarity_residual.into());
    }

    if s.spectrum || spectrum_only {
        let spec = bound_states_with(
            &v,
            &BoundStateOptions {
                edge_margin: s.edge_margin,
                richardson: s.richardson,
                wavefunctions: s.wavefunctions,
            },
        )?;
        let idx: Vec<usize> = (0..spec.count).collect();
        out.write(
            "spectrum.csv",
            render_csv(
                &["index", "energy"],
                &[Column::Index(&idx), Column::Float(&spec.energies)],
            )?,
        )?;
        if s.wavefunctions && spec.count > 0 {
            let names: Vec<String> = (0..spec.count).map(|i| format!("psi_{i}")).collect();
            let mut header = vec!["q1"];
            header.extend(names.iter().map(String::as_str));
            let q = spec.grid.points();
            let mut cols = vec![Column::Float(&q)];
            cols.extend(spec.wavefunctions.iter().map(|w| Column::Float(w)));
            out.write("wavefunctions.csv", render_csv(&header, &cols)?)?;
        }
        summary.insert("bound_states".into(), (spec.count as i64).into());
        summary.insert(
            "energies".into(),
            toml::Value::Array(spec.energies.iter().map(|&e| e.into()).collect()),
        );
        for w in &spec.warnings {
            note!(ctx, "warning: {w}");
        }
        summary.insert(
            "warnings".into(),
            toml::Value::Array(spec.warnings.iter().map(|w| w.clone().into()).collect()),
        );
    }
    Ok(summary)
}

/// Rows of `rows × cols` values flattened, first row on top of the raster.
fn carpet_ppm(rows: &[Vec<f64>]) -> Result<Vec<u8>> {
    let width = rows.first().map_or(0, Vec::len);
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    let hi = flat.iter().copied().fold(0.0, f64::max);
    encode_ppm(&flat, width, rows.len(), Some((0.0, hi)), Colormap::Heat)
}

fn absorbing(p: &PropagateConfig) -> Result<Boundary> {
    Ok(Boundary::Absorbing {
        left: AbsorbingLayer::new(p.left_absorber_width, p.left_absorber_strength)?,
        right: AbsorbingLayer::new(p.right_absorber_width, p.right_absorber_strength)?,
    })
}

/// Painted guide along the axis of `profile`, rotated so that the outgoing
/// lead points along `+x`.
pub fn build_guide_2d(profile: &CurvatureProfile, p: &PropagateConfig) -> Result<WaveguidePotential2D> {
    if profile.torsion() != 0.0 {
        return Err(Error::invalid("torsion", "2D propagation needs a planar guide"));
    }
    let curve = integrate_frenet_serret(profile, p.curve_q1_min, p.curve_q1_max, p.curve_step)?;
    let exit = curve.heading[curve.len() - 1];
    let curve = curve.rotated_translated(-exit, [0.0, 0.0]);
    let grid = Grid2D::covering(p.x0, p.width, p.nx, p.y0, p.height, p.ny)?;
    WaveguidePotential2D::new(
        &curve,
        p.transverse,
        grid,
        None,
        WaveguideOptions {
            capture_radius: p.capture_radius,
            saturation: p.saturation,
            q1_bin: p.q1_bin,
        },
    )
}

/// Gaussian envelope in arc length times the transverse ground profile.
pub fn initial_packet_2d(u: &WaveguidePotential2D, p: &PropagateConfig) -> Result<WaveState2D> {
    let sigma = crate::dynamics::fwhm_to_sigma(p.fwhm);
    let (c, k0) = (p.center, p.k0);
    u.guided_state(
        |q| Complex64::from_polar((-(q - c).powi(2) / (4.0 * sigma * sigma)).exp(), k0 * q),
        absorbing(p)?,
    )
}

/// Arc-length window with the curvature-induced potential of `profile`.
pub fn build_line_1d(profile: &CurvatureProfile, p: &PropagateConfig) -> Result<(PotentialGrid, WaveState)> {
    let grid = Grid1D::periodic(p.x0, p.width, p.nx)?;
    let v = cip_from_profile(profile, grid)?;
    let psi = WaveState::gaussian(grid, p.center, p.fwhm, p.k0, absorbing(p)?)?;
    Ok((v, psi))
}

fn snapshot_every(p: &PropagateConfig) -> usize {
    ((p.snapshot_interval / p.dt).round() as usize).max(1)
}

pub fn cmd_propagate(
    profile: &CurvatureProfile,
    p: &PropagateConfig,
    out: &mut OutputSet,
    ctx: RunContext,
) -> Result<toml::Table> {
    let n_steps = (p.t_end / p.dt).round() as usize;
    let mut summary = toml::Table::new();
    let (times, rows, q1_grid, transmitted, norms, al, ar) = match p.mode {
        Dimension::One => {
            let (v, psi0) = build_line_1d(profile, p)?;
            note!(ctx, "1D propagation: {} points, {n_steps} steps", v.grid.len);
            let tr = propagate_1d(
                &v,
                &psi0,
                p.dt,
                n_steps,
                &PropagateOptions {
                    snapshot_every: snapshot_every(p),
                    check_budget: true,
                },
            )?;
            let g = v.grid;
            let rows: Vec<Vec<f64>> = tr.snapshots.iter().map(WaveState::density).collect();
            let transmitted: Vec<f64> = rows
                .iter()
                .zip(&tr.absorbed_right)
                .map(|(d, a)| {
                    d.iter()
                        .enumerate()
                        .filter(|(i, _)| g.at(*i) > p.q1_cut)
                        .map(|(_, x)| x * g.step)
                        .sum::<f64>()
                        + a
                })
                .collect();
            let norms = tr.snapshots.iter().map(WaveState::norm).collect();
            (
                tr.times(),
                rows,
                g,
                transmitted,
                norms,
                tr.absorbed_left,
                tr.absorbed_right,
            )
        }
        Dimension::Two => {
            let u = build_guide_2d(profile, p)?;
            let psi0 = initial_packet_2d(&u, p)?;
            note!(
                ctx,
                "2D propagation: {}×{} grid, {n_steps} steps, {} ambiguous cells",
                p.nx,
                p.ny,
                u.ambiguous_cells()
            );
            summary.insert("ambiguous_cells".into(), (u.ambiguous_cells() as i64).into());
            let g = u.grid();
            out.write(
                "potential2d.bgw",
                encode_grid(&GridFile {
                    nx: g.x.len,
                    ny: g.y.len,
                    x0: g.x.start,
                    dx: g.x.step,
                    y0: g.y.start,
                    dy: g.y.step,
                    t: 0.0,
                    values: u.field().to_vec(),
                })?,
            )?;
            let tr = propagate_2d(
                &u,
                &psi0,
                p.dt,
                n_steps,
                &Propagate2DOptions {
                    snapshot_every: snapshot_every(p),
                    keep_densities: p.write_2d_densities,
                    check_budget: true,
                },
            )?;
            for (i, d) in tr.densities.iter().enumerate() {
                out.write(
                    &format!("density2d/frame_{i:04}.bgw"),
                    encode_grid(&GridFile {
                        nx: g.x.len,
                        ny: g.y.len,
                        x0: g.x.start,
                        dx: g.x.step,
                        y0: g.y.start,
                        dy: g.y.step,
                        t: tr.times[i],
                        values: d.clone(),
                    })?,
                )?;
            }
            let last = tr.final_state.density();
            let flipped: Vec<f64> = (0..g.y.len)
                .rev()
                .flat_map(|iy| last[iy * g.x.len..(iy + 1) * g.x.len].to_vec())
                .collect();
            let hi = last.iter().copied().fold(0.0, f64::max);
            out.write(
                "density_final.ppm",
                encode_ppm(&flipped, g.x.len, g.y.len, Some((0.0, hi)), Colormap::Heat)?,
            )?;
            let transmitted = tr
                .transmitted_with_absorbed(p.q1_cut)?
                .iter()
                .map(|t| t * tr.norms[0])
                .collect();
            (
                tr.times,
                tr.projected,
                tr.q1_bins,
                transmitted,
                tr.norms,
                tr.absorbed_left,
                tr.absorbed_right,
            )
        }
    };
    let q = q1_grid.points();
    for (i, row) in rows.iter().enumerate() {
        out.write(
            &format!("snapshots/n_q1_{i:04}.csv"),
            render_csv(&["q1", "density"], &[Column::Float(&q), Column::Float(row)])?,
        )?;
    }
    out.write("heatmap.ppm", carpet_ppm(&rows)?)?;
    let n0 = norms[0];
    let fraction: Vec<f64> = transmitted.iter().map(|t| t / n0).collect();
    out.write(
        "transmitted.csv",
        render_csv(
            &["t", "norm", "absorbed_left", "absorbed_right", "transmitted"],
            &[
                Column::Float(&times),
                Column::Float(&norms),
                Column::Float(&al),
                Column::Float(&ar),
                Column::Float(&fraction),
            ],
        )?,
    )?;
    let last = *fraction.last().expect("at least one snapshot");
    summary.insert("final_time".into(), (*times.last().expect("non-empty")).into());
    summary.insert("transmitted_fraction".into(), last.into());
    if let ProfileKind::PoschlTeller { nu, alpha } = profile.kind() {
        let sigma_k = 1.0 / (2.0 * crate::dynamics::fwhm_to_sigma(p.fwhm));
        summary.insert(
            "analytic_transmission".into(),
            momentum_averaged_transmission(*nu, *alpha, p.k0, sigma_k)?.into(),
        );
    }
    Ok(summary)
}

/// Loop potential for a carpet or ground-state run: the curvature-induced
/// potential of the ellipse, plus the compensation barrier relative to the
/// ring of the same perimeter when `compensate` is set.
pub fn loop_potential(
    eccentricity: f64,
    perimeter: f64,
    n: usize,
    compensate: bool,
) -> Result<(PotentialGrid, PotentialGrid)> {
    let (a, b) = EllipseArc::axes_from_eccentricity(eccentricity, perimeter)?;
    let cip = ellipse_cip(a, b, &[])?.on_arclength_grid(n)?;
    let ring_level = -(2.0 * std::f64::consts::PI / cip.grid.step / n as f64).powi(2) / 8.0;
    let ring = PotentialGrid::periodic(cip.grid, vec![ring_level; n], PotentialSource::CipOfProfile)?;
    let barrier = compensation_barrier(&cip, &ring)?;
    let total = if compensate { cip.plus(&barrier)? } else { cip.clone() };
    let mut total = total;
    total.periodic = true;
    Ok((total, barrier))
}

pub fn run_carpet(c: &CarpetConfig) -> Result<(PotentialGrid, CarpetResult)> {
    let (v, _) = loop_potential(c.eccentricity, c.perimeter, c.n, c.compensate)?;
    let fwhm = c.fwhm.unwrap_or(c.perimeter / 30.0);
    let center = c.center.unwrap_or(c.perimeter / 4.0);
    let psi0 = WaveState::gaussian(v.grid, center, fwhm, 0.0, Boundary::Periodic)?;
    let res = talbot_carpet(&v, &psi0, c.dt, c.revivals * c.revival_time(), c.n_frames)?;
    Ok((v, res))
}

pub fn cmd_carpet(c: &CarpetConfig, out: &mut OutputSet, ctx: RunContext) -> Result<toml::Table> {
    note!(
        ctx,
        "carpet: L = {}, ε = {}, {} revival(s)",
        c.perimeter,
        c.eccentricity,
        c.revivals
    );
    let (v, res) = run_carpet(c)?;
    out.write(
        "potential.csv",
        render_csv(&["q1", "v"], &[Column::Float(&v.q1()), Column::Float(&v.v)])?,
    )?;
    let frame_dt = res.t_grid.get(1).copied().unwrap_or(0.0);
    out.write(
        "carpet.bgw",
        encode_grid(&GridFile {
            nx: res.q1_grid.len,
            ny: res.t_grid.len(),
            x0: res.q1_grid.start,
            dx: res.q1_grid.step,
            y0: 0.0,
            dy: frame_dt,
            t: *res.t_grid.last().expect("frames"),
            values: res.density.iter().flatten().copied().collect(),
        })?,
    )?;
    out.write(
        "fidelity.csv",
        render_csv(
            &["t", "F"],
            &[Column::Float(&res.t_grid), Column::Float(&res.revival_fidelity)],
        )?,
    )?;
    out.write("carpet.ppm", carpet_ppm(&res.density)?)?;
    let tr = c.revival_time();
    let mut s = toml::Table::new();
    s.insert("revival_time".into(), tr.into());
    s.insert("dt".into(), res.dt.into());
    let t_max = *res.fine_times.last().expect("non-empty");
    for (name, m) in [("fidelity_at_revival", 1.0), ("fidelity_at_second_revival", 2.0)] {
        if m * tr <= t_max + 1e-9 {
            s.insert(name.into(), res.fidelity_at(m * tr).into());
        }
    }
    if 1.1 * tr <= t_max + 1e-9 {
        s.insert(
            "max_fidelity_near_revival".into(),
            res.max_fidelity_in(0.9 * tr, 1.1 * tr).into(),
        );
    }
    Ok(s)
}

/// `(max - min) / mean` of a density.
pub fn relative_variation(density: &[f64]) -> f64 {
    let (lo, hi) = density
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let mean = density.iter().sum::<f64>() / density.len() as f64;
    (hi - lo) / mean
}

/// Positions of strict local maxima on a periodic grid.
pub fn periodic_peaks(grid: &Grid1D, density: &[f64]) -> Vec<f64> {
    let n = density.len();
    (0..n)
        .filter(|&i| {
            let (l, r) = (density[(i + n - 1) % n], density[(i + 1) % n]);
            density[i] > l && density[i] >= r
        })
        .map(|i| grid.at(i))
        .collect()
}

pub struct LoopGroundStates {
    pub potential: PotentialGrid,
    pub barrier: PotentialGrid,
    pub uncompensated: WaveState,
    pub compensated: WaveState,
    pub energies: (f64, f64),
}

/// 1D ground states on the elliptical loop, relaxed from the uniform state.
pub fn loop_ground_states(c: &CompensateConfig) -> Result<LoopGroundStates> {
    let (v, barrier) = loop_potential(c.eccentricity, c.perimeter, c.n, false)?;
    let (vc, _) = loop_potential(c.eccentricity, c.perimeter, c.n, true)?;
    let seed = WaveState::from_real(&vec![1.0; c.n], v.grid, Boundary::Periodic)?;
    let g0 = imaginary_time_ground_state(&v, &seed, c.dtau, c.tol, c.max_steps)?;
    let g1 = imaginary_time_ground_state(&vc, &seed, c.dtau, c.tol, c.max_steps)?;
    Ok(LoopGroundStates {
        potential: v,
        barrier,
        energies: (g0.energy, g1.energy),
        uncompensated: g0.state,
        compensated: g1.state,
    })
}

pub fn cmd_compensate(c: &CompensateConfig, out: &mut OutputSet, ctx: RunContext) -> Result<toml::Table> {
    note!(ctx, "ground states on the ε = {} loop", c.eccentricity);
    let gs = loop_ground_states(c)?;
    let q = gs.potential.q1();
    let vc: Vec<f64> = gs.potential.v.iter().zip(&gs.barrier.v).map(|(a, b)| a + b).collect();
    out.write(
        "potential.csv",
        render_csv(
            &["q1", "v", "barrier", "v_compensated"],
            &[
                Column::Float(&q),
                Column::Float(&gs.potential.v),
                Column::Float(&gs.barrier.v),
                Column::Float(&vc),
            ],
        )?,
    )?;
    let (d0, d1) = (gs.uncompensated.density(), gs.compensated.density());
    out.write(
        "ground_density.csv",
        render_csv(
            &["q1", "uncompensated", "compensated"],
            &[Column::Float(&q), Column::Float(&d0), Column::Float(&d1)],
        )?,
    )?;
    let mut s = toml::Table::new();
    s.insert("energy_uncompensated".into(), gs.energies.0.into());
    s.insert("energy_compensated".into(), gs.energies.1.into());
    s.insert("variation_uncompensated".into(), relative_variation(&d0).into());
    s.insert("variation_compensated".into(), relative_variation(&d1).into());
    let peaks = periodic_peaks(&gs.potential.grid, &d0);
    s.insert(
        "peaks_uncompensated".into(),
        toml::Value::Array(peaks.iter().map(|&p| p.into()).collect()),
    );

    if c.two_d {
        let (n0, n1, unc) = loop_ground_states_2d(c, &gs, ctx)?;
        let bins = n0.0;
        let qb = bins.points();
        out.write(
            "ground_density_2d.csv",
            render_csv(
                &["q1", "uncompensated", "compensated"],
                &[Column::Float(&qb), Column::Float(&n0.1), Column::Float(&n1)],
            )?,
        )?;
        // Bins straddling the seam of the loop are partial; compare the interior.
        let interior = |v: &[f64]| v[2..v.len() - 2].to_vec();
        s.insert(
            "variation_compensated_2d".into(),
            relative_variation(&interior(&n1)).into(),
        );
        s.insert(
            "variation_uncompensated_2d".into(),
            relative_variation(&interior(&n0.1)).into(),
        );
        s.insert("uncaptured_2d".into(), unc.into());
    }
    Ok(s)
}

type Projected = (Grid1D, Vec<f64>);

fn loop_ground_states_2d(
    c: &CompensateConfig,
    gs: &LoopGroundStates,
    ctx: RunContext,
) -> Result<(Projected, Vec<f64>, f64)> {
    let profile = CurvatureProfile::ellipse_from_eccentricity(c.eccentricity, c.perimeter)?;
    let l = c.perimeter;
    let curve = integrate_frenet_serret(&profile, 0.0, l, 0.05)?;
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &curve.points {
        for d in 0..2 {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    let m = c.margin_2d;
    let nx = ((hi[0] - lo[0] + 2.0 * m) / c.grid_step_2d).ceil() as usize;
    let ny = ((hi[1] - lo[1] + 2.0 * m) / c.grid_step_2d).ceil() as usize;
    let grid = Grid2D::covering(
        lo[0] - m,
        nx as f64 * c.grid_step_2d,
        nx,
        lo[1] - m,
        ny as f64 * c.grid_step_2d,
        ny,
    )?;
    note!(ctx, "2D loop: {nx}×{ny} grid");
    let opts = WaveguideOptions {
        q1_bin: l / 150.0,
        ..Default::default()
    };
    let mut out = Vec::new();
    let mut unc = 0.0;
    for modulation in [None, Some(gs.barrier.clone())] {
        let u = WaveguidePotential2D::new(&curve, c.transverse, grid, modulation, opts)?;
        let seed = u.guided_state(|_| Complex64::new(1.0, 0.0), Boundary::Periodic)?;
        let g = imaginary_time_ground_state_2d(&u, &seed, c.dtau.min(0.1), c.tol, c.max_steps)?;
        let (n, lost) = u.project(&g.state.density());
        unc += lost;
        out.push((u.q1_bins(), n));
    }
    let second = out.pop().expect("two runs").1;
    let first = out.pop().expect("two runs");
    Ok((first, second, unc))
}
