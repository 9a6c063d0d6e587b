use serde::{Deserialize, Serialize};

use super::ellipse::EllipseArc;
use crate::interp::CubicSpline;
use crate::potentials::sukumar_curvature_squared;
use crate::{Error, Result};

/// Piecewise sign function `g(q1)` encoded by its sign-change abscissas.
///
/// The sign is `initial_sign` for `q1` below the first change and flips at every
/// listed abscissa (a change at `c` applies for `q1 >= c`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignMask {
    changes: Vec<f64>,
    initial_sign: f64,
}

impl SignMask {
    pub fn new(mut changes: Vec<f64>, initial_sign: f64) -> Result<Self> {
        if initial_sign != 1.0 && initial_sign != -1.0 {
            return Err(Error::invalid("initial_sign", "must be +1 or -1"));
        }
        if changes.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("changes", "sign-change abscissas must be finite"));
        }
        changes.sort_by(f64::total_cmp);
        Ok(Self { changes, initial_sign })
    }

    /// `sgn(q1)`: negative for `q1 < 0`, positive otherwise.
    pub fn sign_of_q1() -> Self {
        Self {
            changes: vec![0.0],
            initial_sign: -1.0,
        }
    }

    pub fn changes(&self) -> &[f64] {
        &self.changes
    }

    pub fn initial_sign(&self) -> f64 {
        self.initial_sign
    }

    pub fn sign(&self, q1: f64) -> f64 {
        let flips = self.changes.partition_point(|&c| c <= q1);
        if flips % 2 == 0 {
            self.initial_sign
        } else {
            -self.initial_sign
        }
    }
}

/// Curvature samples on a strictly increasing arc-length grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    spline: CubicSpline,
}

impl Tabulated {
    pub fn new(q1: Vec<f64>, kappa: Vec<f64>) -> Result<Self> {
        if kappa.iter().any(|k| !k.is_finite()) {
            return Err(Error::invalid("kappa", "curvature samples must be finite"));
        }
        Ok(Self {
            spline: CubicSpline::new(q1, kappa)?,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        self.spline.domain()
    }

    pub fn samples(&self) -> (&[f64], &[f64]) {
        self.spline.knots()
    }

    pub fn eval(&self, q1: f64) -> Result<f64> {
        self.spline.eval(q1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    Straight,
    Circle {
        radius: f64,
    },
    /// `κ = 2α√(ν(ν+1)) sech(αq1)`, whose curvature-induced potential is the
    /// Pöschl–Teller well of strength `ν`.
    PoschlTeller {
        nu: f64,
        alpha: f64,
    },
    /// Reflectionless determinant curvature with bound states at `-η_n²/2`.
    Sukumar {
        eta: Vec<f64>,
    },
    /// Ellipse with semi-axes `a >= b`, arc length measured from `(a, 0)`.
    Ellipse(EllipseArc),
    Tabulated(Tabulated),
}

/// Design input of a waveguide: curvature as a function of arc length, an
/// optional sign mask and a constant torsion.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    kind: ProfileKind,
    sign_mask: Option<SignMask>,
    torsion: f64,
}

impl CurvatureProfile {
    fn from_kind(kind: ProfileKind) -> Self {
        Self {
            kind,
            sign_mask: None,
            torsion: 0.0,
        }
    }

    pub fn straight() -> Self {
        Self::from_kind(ProfileKind::Straight)
    }

    pub fn circle(radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::invalid("radius", format!("must be positive, got {radius}")));
        }
        Ok(Self::from_kind(ProfileKind::Circle { radius }))
    }

    pub fn poschl_teller(nu: f64, alpha: f64) -> Result<Self> {
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(Error::invalid("nu", format!("must be positive, got {nu}")));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::invalid("alpha", format!("must be positive, got {alpha}")));
        }
        Ok(Self::from_kind(ProfileKind::PoschlTeller { nu, alpha }))
    }

    pub fn sukumar(eta: Vec<f64>) -> Result<Self> {
        validate_eta(&eta)?;
        Ok(Self::from_kind(ProfileKind::Sukumar { eta }))
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Ok(Self::from_kind(ProfileKind::Ellipse(EllipseArc::new(a, b)?)))
    }

    pub fn ellipse_from_eccentricity(eccentricity: f64, perimeter: f64) -> Result<Self> {
        let (a, b) = EllipseArc::axes_from_eccentricity(eccentricity, perimeter)?;
        Self::ellipse(a, b)
    }

    pub fn tabulated(q1: Vec<f64>, kappa: Vec<f64>) -> Result<Self> {
        Ok(Self::from_kind(ProfileKind::Tabulated(Tabulated::new(q1, kappa)?)))
    }

    pub fn with_sign_mask(mut self, mask: SignMask) -> Self {
        self.sign_mask = Some(mask);
        self
    }

    pub fn with_torsion(mut self, torsion: f64) -> Result<Self> {
        if !(torsion >= 0.0) || !torsion.is_finite() {
            return Err(Error::invalid("torsion", format!("must be >= 0, got {torsion}")));
        }
        self.torsion = torsion;
        Ok(self)
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn sign_mask(&self) -> Option<&SignMask> {
        self.sign_mask.as_ref()
    }

    pub fn torsion(&self) -> f64 {
        self.torsion
    }

    /// Arc-length interval on which the profile is defined (unbounded except
    /// for tabulated profiles).
    pub fn domain(&self) -> (f64, f64) {
        match &self.kind {
            ProfileKind::Tabulated(t) => t.domain(),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Curvature before the sign mask is applied.
    pub fn unmasked_curvature(&self, q1: f64) -> Result<f64> {
        Ok(match &self.kind {
            ProfileKind::Straight => 0.0,
            ProfileKind::Circle { radius } => 1.0 / radius,
            ProfileKind::PoschlTeller { nu, alpha } => 2.0 * alpha * (nu * (nu + 1.0)).sqrt() / (alpha * q1).cosh(),
            ProfileKind::Sukumar { eta } => {
                let k2 = sukumar_curvature_squared(eta, q1)?;
                if k2 < 0.0 {
                    return Err(Error::Internal(format!(
                        "negative squared curvature {k2:e} at q1 = {q1}"
                    )));
                }
                k2.sqrt()
            }
            ProfileKind::Ellipse(e) => e.curvature_at(q1),
            ProfileKind::Tabulated(t) => t.eval(q1)?,
        })
    }
}

pub(crate) fn validate_eta(eta: &[f64]) -> Result<()> {
    if eta.is_empty() {
        return Err(Error::invalid("eta", "need at least one bound state"));
    }
    if eta.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
        return Err(Error::invalid("eta", "all entries must be positive"));
    }
    if eta.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("eta", "entries must be strictly increasing"));
    }
    Ok(())
}

/// Signed curvature `κ(q1)` of the profile with the sign mask applied.
pub fn evaluate_curvature(profile: &CurvatureProfile, q1: f64) -> Result<f64> {
    let k = profile.unmasked_curvature(q1)?;
    Ok(match &profile.sign_mask {
        Some(mask) => mask.sign(q1) * k,
        None => k,
    })
}
