use serde::{Deserialize, Serialize};

use super::profile::CurvatureProfile;
use crate::fd;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Warn,
    Fail,
}

/// Thresholds on the three tight-confinement ratios. Each ratio should be ≪ 1:
/// below `pass` everywhere is a pass, any ratio at or above `fail` is a failure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityThresholds {
    pub pass: f64,
    pub fail: f64,
}

impl Default for ValidityThresholds {
    fn default() -> Self {
        Self { pass: 0.1, fail: 1.0 }
    }
}

/// Default floor below which `|κ|` is treated as zero (the ratio conditions
/// are singular there).
pub const DEFAULT_KAPPA_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    /// `max |κ| σ0`.
    pub max_k_sigma: Option<f64>,
    /// `max |κ'| σ0 / |κ|`.
    pub max_kprime_ratio: Option<f64>,
    /// `max |κ''| σ0 / κ²`.
    pub max_kpp_ratio: Option<f64>,
    /// Smallest interval containing every sample with `|κ| >= kappa_floor`.
    pub evaluated_domain: Option<(f64, f64)>,
    pub verdict: Verdict,
}

/// Check the dimensional-reduction conditions `κσ0 ≪ 1`, `|κ'|σ0 ≪ |κ|` and
/// `|κ''|σ0 ≪ κ²` on `domain`. Derivatives of `|κ|` are fourth-order finite
/// differences on a grid of `samples` points.
pub fn check_validity(
    profile: &CurvatureProfile,
    sigma0: f64,
    domain: (f64, f64),
    kappa_floor: f64,
    thresholds: ValidityThresholds,
) -> Result<ValidityReport> {
    check_validity_with_samples(profile, sigma0, domain, kappa_floor, thresholds, 20_001)
}

pub fn check_validity_with_samples(
    profile: &CurvatureProfile,
    sigma0: f64,
    domain: (f64, f64),
    kappa_floor: f64,
    thresholds: ValidityThresholds,
    samples: usize,
) -> Result<ValidityReport> {
    if !(sigma0 > 0.0) {
        return Err(Error::invalid("sigma0", format!("must be positive, got {sigma0}")));
    }
    if !(kappa_floor > 0.0) {
        return Err(Error::invalid(
            "kappa_floor",
            format!("must be positive, got {kappa_floor}"),
        ));
    }
    if !(domain.1 > domain.0) {
        return Err(Error::invalid("domain", "empty interval"));
    }
    if !(domain.0.is_finite() && domain.1.is_finite()) {
        return Err(Error::invalid(
            "domain",
            format!("must be finite, got [{}, {}]", domain.0, domain.1),
        ));
    }
    let n = samples.max(11);
    let h = (domain.1 - domain.0) / (n - 1) as f64;
    let q: Vec<f64> = (0..n).map(|i| domain.0 + i as f64 * h).collect();
    let k = q
        .iter()
        .map(|&q| match profile.unmasked_curvature(q)? {
            k if k.is_finite() => Ok(k.abs()),
            k => Err(Error::invalid("profile", format!("curvature {k} at q1 = {q}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let dk = fd::first_derivative(&k, h);
    let ddk = fd::second_derivative(&k, h);

    let mut maxima = [0.0f64; 3];
    let mut span: Option<(f64, f64)> = None;
    for i in 0..n {
        if k[i] < kappa_floor {
            continue;
        }
        maxima[0] = maxima[0].max(k[i] * sigma0);
        maxima[1] = maxima[1].max(dk[i].abs() * sigma0 / k[i]);
        maxima[2] = maxima[2].max(ddk[i].abs() * sigma0 / (k[i] * k[i]));
        span = Some(match span {
            None => (q[i], q[i]),
            Some((lo, _)) => (lo, q[i]),
        });
    }
    let Some(evaluated) = span else {
        return Ok(ValidityReport {
            max_k_sigma: None,
            max_kprime_ratio: None,
            max_kpp_ratio: None,
            evaluated_domain: None,
            verdict: Verdict::Warn,
        });
    };
    let verdict = if maxima.iter().all(|&m| m < thresholds.pass) {
        Verdict::Pass
    } else if maxima.iter().any(|&m| m >= thresholds.fail) {
        Verdict::Fail
    } else {
        Verdict::Warn
    };
    Ok(ValidityReport {
        max_k_sigma: Some(maxima[0]),
        max_kprime_ratio: Some(maxima[1]),
        max_kpp_ratio: Some(maxima[2]),
        evaluated_domain: Some(evaluated),
        verdict,
    })
}
