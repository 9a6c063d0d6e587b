//! TOML run configuration.
//!
//! Every section rejects unknown keys. [`RunConfig::resolve`] fills in all
//! defaults for a command and validates the physical parameters, so the
//! resolved config written to the manifest reproduces the run on its own.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{talbot_revival_time, Transverse};
use crate::geometry::{CurvatureProfile, EllipseArc, SignMask};
use crate::io::read_csv;
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Design,
    Scatter,
    Spectrum,
    Propagate,
    Carpet,
    Compensate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Design => "design",
            Command::Scatter => "scatter",
            Command::Spectrum => "spectrum",
            Command::Propagate => "propagate",
            Command::Carpet => "carpet",
            Command::Compensate => "compensate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "schema_version")]
    pub version: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design: Option<DesignConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scatter: Option<ScatterConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub propagate: Option<PropagateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carpet: Option<CarpetConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compensate: Option<CompensateConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            version: SCHEMA_VERSION,
            seed: 0,
            output_dir: None,
            profile: None,
            design: None,
            scatter: None,
            propagate: None,
            carpet: None,
            compensate: None,
        }
    }
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

fn cfg_err(key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        message: message.into(),
    }
}

/// Re-labels parameter errors with the config key they came from.
fn at<T>(key: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::InvalidParameter { name, reason } => cfg_err(&format!("{key}.{name}"), reason),
        other => other,
    })
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let key = e
                .span()
                .map(|s| {
                    let line = text[..s.start.min(text.len())].matches('\n').count() + 1;
                    format!("line {line}")
                })
                .unwrap_or_else(|| "config".into());
            cfg_err(&key, e.message())
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config { key, message } => Error::Config {
                key: format!("{}:{key}", path.display()),
                message,
            },
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Internal(format!("config serialisation: {e}")))
    }

    pub fn to_table(&self) -> Result<toml::Table> {
        toml::Table::try_from(self).map_err(|e| Error::Internal(format!("config serialisation: {e}")))
    }

    /// Materialises every default the command reads and validates the result.
    /// Relative file paths are resolved against `base`.
    pub fn resolve(mut self, command: Command, base: &Path) -> Result<Self> {
        if self.version != SCHEMA_VERSION {
            return Err(cfg_err(
                "version",
                format!(
                    "unsupported schema version {} (expected {SCHEMA_VERSION})",
                    self.version
                ),
            ));
        }
        if let Some(p) = self.profile.as_mut() {
            if let Some(f) = p.file.as_mut() {
                if f.is_relative() {
                    *f = base.join(&*f);
                }
            }
        }
        match command {
            Command::Design => {
                let profile = self
                    .profile
                    .as_ref()
                    .ok_or_else(|| cfg_err("profile", "section is required"))?;
                profile.build()?;
                self.design.get_or_insert_with(Default::default).validate()?;
            }
            Command::Scatter | Command::Spectrum => {
                let s = self.scatter.get_or_insert_with(Default::default);
                if let Some(f) = s.potential_file.as_mut() {
                    if f.is_relative() {
                        *f = base.join(&*f);
                    }
                }
                let profile = match (&self.profile, &s.potential_file) {
                    (Some(_), Some(_)) => {
                        return Err(cfg_err(
                            "scatter.potential_file",
                            "give either [profile] or a potential file",
                        ))
                    }
                    (None, None) => return Err(cfg_err("profile", "section is required")),
                    (Some(p), None) => Some(p.build()?),
                    (None, Some(_)) => None,
                };
                s.resolve(profile.as_ref())?;
            }
            Command::Propagate => {
                let profile = self
                    .profile
                    .as_ref()
                    .ok_or_else(|| cfg_err("profile", "section is required"))?;
                profile.build()?;
                self.propagate.get_or_insert_with(Default::default).validate()?;
            }
            Command::Carpet => self.carpet.get_or_insert_with(Default::default).resolve()?,
            Command::Compensate => self.compensate.get_or_insert_with(Default::default).validate()?,
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKindName {
    Straight,
    Circle,
    PoschlTeller,
    Sukumar,
    Ellipse,
    Tabulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskName {
    #[default]
    None,
    SignOfQ1,
    Custom,
}

/// Curvature profile. Only the parameters of the chosen `kind` may be set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub kind: ProfileKindName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eccentricity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perimeter: Option<f64>,
    /// CSV with columns `q1,kappa` for tabulated profiles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    #[serde(default)]
    pub sign_mask: MaskName,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sign_changes: Vec<f64>,
    #[serde(default = "plus_one")]
    pub initial_sign: f64,
    #[serde(default)]
    pub torsion: f64,
}

fn plus_one() -> f64 {
    1.0
}

impl ProfileConfig {
    pub fn poschl_teller(nu: f64, alpha: f64) -> Self {
        Self {
            kind: ProfileKindName::PoschlTeller,
            radius: None,
            nu: Some(nu),
            alpha: Some(alpha),
            eta: None,
            eccentricity: None,
            perimeter: None,
            file: None,
            sign_mask: MaskName::None,
            sign_changes: Vec::new(),
            initial_sign: 1.0,
            torsion: 0.0,
        }
    }

    pub fn build(&self) -> Result<CurvatureProfile> {
        use ProfileKindName::*;
        let allowed: &[&str] = match self.kind {
            Straight => &[],
            Circle => &["radius"],
            PoschlTeller => &["nu", "alpha"],
            Sukumar => &["eta"],
            Ellipse => &["eccentricity", "perimeter"],
            Tabulated => &["file"],
        };
        let set = [
            ("radius", self.radius.is_some()),
            ("nu", self.nu.is_some()),
            ("alpha", self.alpha.is_some()),
            ("eta", self.eta.is_some()),
            ("eccentricity", self.eccentricity.is_some()),
            ("perimeter", self.perimeter.is_some()),
            ("file", self.file.is_some()),
        ];
        for (name, present) in set {
            if present && !allowed.contains(&name) {
                return Err(cfg_err(
                    &format!("profile.{name}"),
                    format!("not a parameter of {:?}", self.kind),
                ));
            }
            if !present && allowed.contains(&name) {
                return Err(cfg_err(&format!("profile.{name}"), "required for this kind"));
            }
        }
        let p = || self.clone();
        let profile = at(
            "profile",
            match self.kind {
                Straight => Ok(CurvatureProfile::straight()),
                Circle => CurvatureProfile::circle(p().radius.unwrap_or_default()),
                PoschlTeller => {
                    CurvatureProfile::poschl_teller(p().nu.unwrap_or_default(), p().alpha.unwrap_or_default())
                }
                Sukumar => CurvatureProfile::sukumar(p().eta.unwrap_or_default()),
                Ellipse => CurvatureProfile::ellipse_from_eccentricity(
                    p().eccentricity.unwrap_or_default(),
                    p().perimeter.unwrap_or_default(),
                ),
                Tabulated => {
                    let file = self.file.as_ref().expect("checked above");
                    let (header, cols) = read_csv(file)?;
                    let col = |name: &str| {
                        header
                            .iter()
                            .position(|h| h == name)
                            .map(|i| cols[i].clone())
                            .ok_or_else(|| cfg_err("profile.file", format!("missing column `{name}`")))
                    };
                    CurvatureProfile::tabulated(col("q1")?, col("kappa")?)
                }
            },
        )?;
        let profile = match self.sign_mask {
            MaskName::None => {
                if !self.sign_changes.is_empty() {
                    return Err(cfg_err("profile.sign_changes", "only used with sign_mask = \"custom\""));
                }
                profile
            }
            MaskName::SignOfQ1 => profile.with_sign_mask(SignMask::sign_of_q1()),
            MaskName::Custom => profile.with_sign_mask(at(
                "profile",
                SignMask::new(self.sign_changes.clone(), self.initial_sign),
            )?),
        };
        at("profile", profile.with_torsion(self.torsion))
    }
}

fn positive(key: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(cfg_err(key, format!("must be positive and finite, got {x}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DesignConfig {
    pub q1_min: f64,
    pub q1_max: f64,
    pub step: f64,
    /// Transverse width used by the validity check.
    pub sigma0: f64,
    pub kappa_floor: f64,
    pub validity_pass: f64,
    pub validity_fail: f64,
    /// Also emit the curve lifted by this torsion.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lift_torsion: Option<f64>,
}

impl Default for DesignConfig {
    fn default() -> Self {
        Self {
            q1_min: -400.0,
            q1_max: 400.0,
            step: 0.01,
            sigma0: 1.0,
            kappa_floor: 1e-6,
            validity_pass: 0.1,
            validity_fail: 1.0,
            lift_torsion: None,
        }
    }
}

impl DesignConfig {
    fn validate(&self) -> Result<()> {
        if !(self.q1_max > self.q1_min) {
            return Err(cfg_err("design.q1_max", "must exceed q1_min"));
        }
        positive("design.step", self.step)?;
        positive("design.sigma0", self.sigma0)?;
        positive("design.kappa_floor", self.kappa_floor)?;
        if !(self.validity_fail > self.validity_pass) || !(self.validity_pass > 0.0) {
            return Err(cfg_err(
                "design.validity_fail",
                "need 0 < validity_pass < validity_fail",
            ));
        }
        if let Some(t) = self.lift_torsion {
            if !(t > 0.0) {
                return Err(cfg_err("design.lift_torsion", "must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScatterConfig {
    pub k_min: f64,
    pub k_max: f64,
    pub n_k: usize,
    /// Box `[-half_width, half_width]`; defaults to `40/α` for Pöschl–Teller
    /// profiles and 40 otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    /// Grid spacing; defaults to `min(0.02/α, 0.05)` (α = 1 for non-PT profiles).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    /// CSV with columns `q1,v` used instead of a profile.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential_file: Option<PathBuf>,
    /// Add the closed-form Pöschl–Teller `|T|²` column when applicable.
    pub analytic_overlay: bool,
    pub spectrum: bool,
    pub wavefunctions: bool,
    pub tail_tol: f64,
    pub snap_tol: f64,
    pub edge_margin: f64,
    pub richardson: bool,
}

impl Default for ScatterConfig {
    fn default() -> Self {
        Self {
            k_min: 0.02,
            k_max: 2.0,
            n_k: 64,
            half_width: None,
            step: None,
            potential_file: None,
            analytic_overlay: true,
            spectrum: true,
            wavefunctions: false,
            tail_tol: 1e-6,
            snap_tol: 1e-10,
            edge_margin: 1e-6,
            richardson: true,
        }
    }
}

impl ScatterConfig {
    fn resolve(&mut self, profile: Option<&CurvatureProfile>) -> Result<()> {
        if !(self.k_min > 0.0) || !(self.k_max > self.k_min) {
            return Err(cfg_err("scatter.k_max", "need 0 < k_min < k_max"));
        }
        if self.n_k < 2 {
            return Err(cfg_err("scatter.n_k", "need at least two momenta"));
        }
        positive("scatter.tail_tol", self.tail_tol)?;
        positive("scatter.snap_tol", self.snap_tol)?;
        if !(self.edge_margin >= 0.0) {
            return Err(cfg_err("scatter.edge_margin", "must be non-negative"));
        }
        if let Some(profile) = profile {
            let alpha = match profile.kind() {
                crate::geometry::ProfileKind::PoschlTeller { alpha, .. } => *alpha,
                _ => 1.0,
            };
            self.half_width.get_or_insert(40.0 / alpha);
            self.step.get_or_insert((0.02 / alpha).min(0.05));
            positive("scatter.half_width", self.half_width.unwrap_or_default())?;
            positive("scatter.step", self.step.unwrap_or_default())?;
        } else if self.half_width.is_some() || self.step.is_some() {
            return Err(cfg_err("scatter.half_width", "the grid comes from the potential file"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dimension {
    #[serde(rename = "1d")]
    One,
    #[serde(rename = "2d")]
    Two,
}

/// Wave-packet propagation along a designed guide. Defaults are the slow
/// broad packet through a Pöschl–Teller guide with `α = 1/8`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PropagateConfig {
    pub mode: Dimension,
    pub dt: f64,
    pub t_end: f64,
    /// Time between stored snapshots.
    pub snapshot_interval: f64,
    /// Packet centre (arc length), density FWHM and mean momentum.
    pub center: f64,
    pub fwhm: f64,
    pub k0: f64,
    pub q1_cut: f64,
    /// Longitudinal window: `x` in 2D, `q₁` in 1D.
    pub x0: f64,
    pub width: f64,
    pub nx: usize,
    /// Transverse window (2D only).
    pub y0: f64,
    pub height: f64,
    pub ny: usize,
    pub left_absorber_width: f64,
    pub left_absorber_strength: f64,
    pub right_absorber_width: f64,
    pub right_absorber_strength: f64,
    pub transverse: Transverse,
    pub capture_radius: f64,
    pub saturation: f64,
    pub q1_bin: f64,
    /// Arc-length span and step of the sampled axis (2D only).
    pub curve_q1_min: f64,
    pub curve_q1_max: f64,
    pub curve_step: f64,
    /// Keep full 2D densities and write them as binary grids.
    pub write_2d_densities: bool,
}

impl Default for PropagateConfig {
    fn default() -> Self {
        Self {
            mode: Dimension::Two,
            dt: 1.0,
            t_end: 28_000.0,
            snapshot_interval: 1920.0,
            center: -320.0,
            fwhm: 235.0,
            k0: 1.0 / 32.0,
            q1_cut: 40.0,
            x0: -600.0,
            width: 1362.0,
            nx: 2048,
            y0: -23.5,
            height: 47.0,
            ny: 128,
            left_absorber_width: 20.0,
            left_absorber_strength: 0.05,
            right_absorber_width: 550.0,
            right_absorber_strength: 0.001,
            transverse: Transverse::Harmonic { omega: 1.0 },
            capture_radius: 5.0,
            saturation: 8.0,
            q1_bin: 0.5,
            curve_q1_min: -900.0,
            curve_q1_max: 900.0,
            curve_step: 0.1,
            write_2d_densities: false,
        }
    }
}

impl PropagateConfig {
    fn validate(&self) -> Result<()> {
        positive("propagate.dt", self.dt)?;
        positive("propagate.t_end", self.t_end)?;
        positive("propagate.snapshot_interval", self.snapshot_interval)?;
        positive("propagate.fwhm", self.fwhm)?;
        positive("propagate.width", self.width)?;
        positive("propagate.left_absorber_width", self.left_absorber_width)?;
        positive("propagate.right_absorber_width", self.right_absorber_width)?;
        if self.left_absorber_width + self.right_absorber_width >= self.width {
            return Err(cfg_err(
                "propagate.right_absorber_width",
                "absorbers cover the whole window",
            ));
        }
        for (k, s) in [
            ("propagate.left_absorber_strength", self.left_absorber_strength),
            ("propagate.right_absorber_strength", self.right_absorber_strength),
        ] {
            if !(s >= 0.0) {
                return Err(cfg_err(k, "must be non-negative"));
            }
        }
        if self.nx < 8 {
            return Err(cfg_err("propagate.nx", "need at least 8 points"));
        }
        if !(self.x0..self.x0 + self.width).contains(&self.q1_cut) && self.mode == Dimension::One {
            return Err(cfg_err("propagate.q1_cut", "must lie inside the window"));
        }
        if self.mode == Dimension::Two {
            positive("propagate.height", self.height)?;
            if self.ny < 8 {
                return Err(cfg_err("propagate.ny", "need at least 8 points"));
            }
            at("propagate.transverse", self.transverse.validate())?;
            positive("propagate.capture_radius", self.capture_radius)?;
            positive("propagate.q1_bin", self.q1_bin)?;
            positive("propagate.curve_step", self.curve_step)?;
            if !(self.saturation >= self.capture_radius) {
                return Err(cfg_err("propagate.saturation", "must be at least capture_radius"));
            }
            if !(self.curve_q1_max > self.curve_q1_min) {
                return Err(cfg_err("propagate.curve_q1_max", "must exceed curve_q1_min"));
            }
            if !(self.curve_q1_min..=self.curve_q1_max).contains(&self.q1_cut) {
                return Err(cfg_err("propagate.q1_cut", "must lie on the sampled axis"));
            }
            // ≥ 6 points across ±3σ of the transverse ground state.
            let sigma = 1.0 / self.transverse.bottom_frequency().sqrt();
            let (hx, hy) = (self.width / self.nx as f64, self.height / self.ny as f64);
            if 6.0 * sigma / hx.max(hy) < 6.0 {
                return Err(cfg_err(
                    "propagate.nx",
                    format!(
                        "grid spacing {:.3} does not resolve the transverse width {sigma:.3}",
                        hx.max(hy)
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// Talbot carpet on a ring (`eccentricity = 0`) or an ellipse of the given perimeter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CarpetConfig {
    pub eccentricity: f64,
    pub perimeter: f64,
    pub n: usize,
    pub dt: f64,
    /// Run length in units of the revival time `L²/π`.
    pub revivals: f64,
    pub n_frames: usize,
    /// Density FWHM of the initial packet; defaults to `L/30`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fwhm: Option<f64>,
    /// Initial centre (arc length from the high-curvature vertex); defaults to `L/4`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<f64>,
    /// Cancel the curvature-induced potential with the compensation barrier.
    pub compensate: bool,
}

impl Default for CarpetConfig {
    fn default() -> Self {
        Self {
            eccentricity: 0.0,
            perimeter: 150.0,
            n: 1024,
            dt: 0.05,
            revivals: 2.0,
            n_frames: 401,
            fwhm: None,
            center: None,
            compensate: false,
        }
    }
}

impl CarpetConfig {
    fn resolve(&mut self) -> Result<()> {
        at(
            "carpet",
            EllipseArc::axes_from_eccentricity(self.eccentricity, self.perimeter),
        )?;
        positive("carpet.dt", self.dt)?;
        positive("carpet.revivals", self.revivals)?;
        if self.n < 16 {
            return Err(cfg_err("carpet.n", "need at least 16 points"));
        }
        if self.n_frames < 2 {
            return Err(cfg_err("carpet.n_frames", "need at least two frames"));
        }
        let fwhm = *self.fwhm.get_or_insert(self.perimeter / 30.0);
        positive("carpet.fwhm", fwhm)?;
        self.center.get_or_insert(self.perimeter / 4.0);
        Ok(())
    }

    pub fn revival_time(&self) -> f64 {
        talbot_revival_time(self.perimeter)
    }
}

/// Ground states on an elliptical loop with and without the compensation barrier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompensateConfig {
    pub eccentricity: f64,
    pub perimeter: f64,
    pub n: usize,
    pub dtau: f64,
    pub tol: f64,
    pub max_steps: usize,
    /// Also relax in the painted 2D guide.
    pub two_d: bool,
    pub grid_step_2d: f64,
    pub margin_2d: f64,
    pub transverse: Transverse,
}

impl Default for CompensateConfig {
    fn default() -> Self {
        Self {
            eccentricity: 0.9,
            perimeter: 150.0,
            n: 1024,
            dtau: 0.5,
            tol: 1e-10,
            max_steps: 2_000_000,
            two_d: false,
            grid_step_2d: 0.25,
            margin_2d: 8.0,
            transverse: Transverse::Harmonic { omega: 1.0 },
        }
    }
}

impl CompensateConfig {
    fn validate(&self) -> Result<()> {
        at(
            "compensate",
            EllipseArc::axes_from_eccentricity(self.eccentricity, self.perimeter),
        )?;
        positive("compensate.dtau", self.dtau)?;
        positive("compensate.tol", self.tol)?;
        positive("compensate.grid_step_2d", self.grid_step_2d)?;
        positive("compensate.margin_2d", self.margin_2d)?;
        at("compensate.transverse", self.transverse.validate())?;
        if self.n < 16 {
            return Err(cfg_err("compensate.n", "need at least 16 points"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(text: &str, cmd: Command) -> Result<RunConfig> {
        RunConfig::from_toml(text)?.resolve(cmd, Path::new("."))
    }

    #[test]
    fn unknown_keys_are_rejected_with_location() {
        let err = RunConfig::from_toml("version = 1\n[carpet]\nperimeter = 150.0\nbogus = 1\n").unwrap_err();
        match err {
            Error::Config { key, message } => {
                assert_eq!(key, "line 4");
                assert!(message.contains("bogus"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn defaults_are_materialised_and_round_trip() {
        let cfg = resolve(
            "[profile]\nkind = \"poschl_teller\"\nnu = 1.0\nalpha = 0.125\n",
            Command::Scatter,
        )
        .unwrap();
        let s = cfg.scatter.as_ref().unwrap();
        assert_eq!(s.half_width, Some(320.0));
        assert_eq!(s.step, Some(0.05));
        let text = cfg.to_toml().unwrap();
        let again = RunConfig::from_toml(&text)
            .unwrap()
            .resolve(Command::Scatter, Path::new("."))
            .unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn profile_parameters_must_match_kind() {
        let e = resolve(
            "[profile]\nkind = \"circle\"\nradius = 2.0\nnu = 1.0\n",
            Command::Design,
        )
        .unwrap_err();
        assert!(matches!(e, Error::Config { ref key, .. } if key == "profile.nu"), "{e}");
        let e = resolve("[profile]\nkind = \"poschl_teller\"\nnu = 1.0\n", Command::Design).unwrap_err();
        assert!(
            matches!(e, Error::Config { ref key, .. } if key == "profile.alpha"),
            "{e}"
        );
    }

    #[test]
    fn physical_parameters_validated() {
        let e = resolve("[profile]\nkind = \"circle\"\nradius = -2.0\n", Command::Design).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = resolve("[carpet]\neccentricity = 1.5\n", Command::Carpet).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = resolve("version = 7\n", Command::Carpet).unwrap_err();
        assert!(matches!(e, Error::Config { ref key, .. } if key == "version"));
    }

    #[test]
    fn carpet_defaults_follow_perimeter() {
        let cfg = resolve("[carpet]\nperimeter = 90.0\n", Command::Carpet).unwrap();
        let c = cfg.carpet.unwrap();
        assert_eq!(c.fwhm, Some(3.0));
        assert_eq!(c.center, Some(22.5));
    }

    #[test]
    fn mask_and_torsion() {
        let cfg = resolve(
            "[profile]\nkind = \"sukumar\"\neta = [1.0, 1.5]\nsign_mask = \"custom\"\nsign_changes = [0.0]\ninitial_sign = -1.0\ntorsion = 20.0\n",
            Command::Design,
        )
        .unwrap();
        let p = cfg.profile.unwrap().build().unwrap();
        assert_eq!(p.torsion(), 20.0);
        assert_eq!(p.sign_mask().unwrap().sign(-1.0), -1.0);
    }
}
