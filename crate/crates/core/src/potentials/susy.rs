use std::f64::consts::SQRT_2;

use super::{PotentialGrid, PotentialSource};
use crate::fd;
use crate::{Error, Grid1D, Result};

/// Squared curvatures in `[-REALIZABILITY_TOL, 0)` are rounded to zero; anything
/// more negative cannot come from a real curve.
pub const REALIZABILITY_TOL: f64 = 1e-12;

/// Superpotential `Φ(q1)` of the factorization `A = ip/√2 + Φ`.
#[derive(Debug, Clone, PartialEq)]
pub enum Superpotential {
    /// `Φ = A tanh(α q1)` with `A, α > 0`.
    TanhWall { amplitude: f64, alpha: f64 },
    /// `Φ = -(ln ψ0)'/√2` from a nodeless ground state sampled on `grid`.
    FromGroundState { grid: Grid1D, psi0: Vec<f64> },
    /// `Φ` sampled on `grid`.
    Tabulated { grid: Grid1D, phi: Vec<f64> },
}

impl Superpotential {
    pub fn tanh_wall(amplitude: f64, alpha: f64) -> Result<Self> {
        if !(amplitude > 0.0) {
            return Err(Error::invalid(
                "amplitude",
                format!("must be positive, got {amplitude}"),
            ));
        }
        if !(alpha > 0.0) {
            return Err(Error::invalid("alpha", format!("must be positive, got {alpha}")));
        }
        Ok(Self::TanhWall { amplitude, alpha })
    }

    /// Tanh wall whose partner `V+` (measured from its asymptote) is the
    /// Pöschl–Teller well of strength `ν`: `A = (ν+1)α/√2`.
    pub fn tanh_wall_for_poschl_teller(nu: f64, alpha: f64) -> Result<Self> {
        Self::tanh_wall((nu + 1.0) * alpha / SQRT_2, alpha)
    }

    pub fn from_ground_state(grid: Grid1D, psi0: Vec<f64>) -> Result<Self> {
        if psi0.len() != grid.len {
            return Err(Error::GridMismatch(format!(
                "{} samples on a {}-point grid",
                psi0.len(),
                grid.len
            )));
        }
        check_nodeless(&psi0)?;
        Ok(Self::FromGroundState { grid, psi0 })
    }

    pub fn tabulated(grid: Grid1D, phi: Vec<f64>) -> Result<Self> {
        if phi.len() != grid.len {
            return Err(Error::GridMismatch(format!(
                "{} samples on a {}-point grid",
                phi.len(),
                grid.len
            )));
        }
        Ok(Self::Tabulated { grid, phi })
    }

    /// `(Φ, Φ')` on `grid`. Sampled kinds must live on the same grid.
    pub fn sample(&self, grid: Grid1D) -> Result<(Vec<f64>, Vec<f64>)> {
        match self {
            Self::TanhWall { amplitude, alpha } => {
                let q = grid.points();
                let phi = q.iter().map(|q| amplitude * (alpha * q).tanh()).collect();
                let dphi = q
                    .iter()
                    .map(|q| amplitude * alpha / (alpha * q).cosh().powi(2))
                    .collect();
                Ok((phi, dphi))
            }
            Self::FromGroundState { grid: own, psi0 } => {
                own.ensure_same(&grid)?;
                let ln = log_samples(psi0)?;
                let dln = fd::first_derivative(&ln, grid.step);
                let phi: Vec<f64> = dln.iter().map(|d| -d / SQRT_2).collect();
                let dphi = fd::first_derivative(&phi, grid.step);
                Ok((phi, dphi))
            }
            Self::Tabulated { grid: own, phi } => {
                own.ensure_same(&grid)?;
                Ok((phi.clone(), fd::first_derivative(phi, grid.step)))
            }
        }
    }

    /// `(Φ(-∞), Φ(+∞))`, or the end values for sampled kinds.
    pub fn asymptotes(&self) -> Result<(f64, f64)> {
        match self {
            Self::TanhWall { amplitude, .. } => Ok((-amplitude, *amplitude)),
            Self::FromGroundState { grid, .. } | Self::Tabulated { grid, .. } => {
                let (phi, _) = self.sample(*grid)?;
                Ok((phi[0], phi[phi.len() - 1]))
            }
        }
    }
}

fn check_nodeless(psi0: &[f64]) -> Result<()> {
    let n = psi0.len();
    if n < 6 {
        return Err(Error::InsufficientSamples { needed: 6, got: n });
    }
    for (i, &p) in psi0.iter().enumerate().take(n - 1).skip(1) {
        if !(p > 0.0) {
            return Err(Error::NodalGroundState { index: i, value: p });
        }
    }
    Ok(())
}

/// `ln ψ0`, with non-positive end samples extrapolated from the interior.
fn log_samples(psi0: &[f64]) -> Result<Vec<f64>> {
    check_nodeless(psi0)?;
    let n = psi0.len();
    let mut ln: Vec<f64> = psi0.iter().map(|p| p.ln()).collect();
    if !(psi0[0] > 0.0) {
        ln[0] = 3.0 * ln[1] - 3.0 * ln[2] + ln[3];
    }
    if !(psi0[n - 1] > 0.0) {
        ln[n - 1] = 3.0 * ln[n - 2] - 3.0 * ln[n - 3] + ln[n - 4];
    }
    Ok(ln)
}

/// Squared curvature samples with their realizability flag.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainLevel {
    pub kappa_sq: Vec<f64>,
    pub realizable: bool,
}

impl ChainLevel {
    fn from_raw(mut kappa_sq: Vec<f64>) -> Self {
        let realizable = kappa_sq.iter().all(|&k| k >= -REALIZABILITY_TOL);
        for k in &mut kappa_sq {
            if *k < 0.0 && *k >= -REALIZABILITY_TOL {
                *k = 0.0;
            }
        }
        Self { kappa_sq, realizable }
    }

    pub fn min(&self) -> f64 {
        self.kappa_sq.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Partner potentials `V± = Φ² ± Φ'/√2 - E_ref` and the curvatures
/// `κ±² = -8 V±` of the guides that would produce them.
#[derive(Debug, Clone, PartialEq)]
pub struct SusyPair {
    pub grid: Grid1D,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub v_minus: PotentialGrid,
    pub v_plus: PotentialGrid,
    pub kappa_minus_sq: Vec<f64>,
    pub kappa_plus_sq: Vec<f64>,
    pub realizable_minus: bool,
    pub realizable_plus: bool,
    /// Constant subtracted from both potentials.
    pub energy_reference: f64,
}

/// Partner pair with the bare factorization energies (`E_ref = 0`).
pub fn susy_pair_from_superpotential(phi: &Superpotential, grid: Grid1D) -> Result<SusyPair> {
    susy_pair_with_reference(phi, grid, 0.0)
}

/// Partner pair with both potentials shifted down by `energy_reference`.
///
/// A curvature-induced potential vanishes where the guide is straight, so a
/// superpotential with `Φ(±∞)² = c` only describes guides after the common
/// shift `E_ref = c`. The shift preserves `V+ - V- = √2 Φ'`, the spectra up to
/// a constant and all scattering probabilities.
pub fn susy_pair_with_reference(phi: &Superpotential, grid: Grid1D, energy_reference: f64) -> Result<SusyPair> {
    let (p, dp) = phi.sample(grid)?;
    let vm: Vec<f64> = p
        .iter()
        .zip(&dp)
        .map(|(p, d)| p * p - d / SQRT_2 - energy_reference)
        .collect();
    let vp: Vec<f64> = p
        .iter()
        .zip(&dp)
        .map(|(p, d)| p * p + d / SQRT_2 - energy_reference)
        .collect();
    let km = ChainLevel::from_raw(vm.iter().map(|v| -8.0 * v).collect());
    let kp = ChainLevel::from_raw(vp.iter().map(|v| -8.0 * v).collect());
    Ok(SusyPair {
        grid,
        v_minus: PotentialGrid::new(grid, vm, PotentialSource::SusyMinus)?,
        v_plus: PotentialGrid::new(grid, vp, PotentialSource::SusyPlus)?,
        phi: p,
        dphi: dp,
        kappa_minus_sq: km.kappa_sq,
        kappa_plus_sq: kp.kappa_sq,
        realizable_minus: km.realizable,
        realizable_plus: kp.realizable,
        energy_reference,
    })
}

/// Partner curvature from the zero mode of `H-`:
/// `κ+² = κ-² + 8 [ψ0''/ψ0 - (ψ0'/ψ0)²] = κ-² + 8 (ln ψ0)''`.
pub fn susy_partner_from_ground_state(grid: Grid1D, psi0: &[f64], kappa_minus_sq: &[f64]) -> Result<ChainLevel> {
    if psi0.len() != grid.len || kappa_minus_sq.len() != grid.len {
        return Err(Error::GridMismatch(format!(
            "psi0 ({}) and kappa_minus_sq ({}) must match the {}-point grid",
            psi0.len(),
            kappa_minus_sq.len(),
            grid.len
        )));
    }
    let ln = log_samples(psi0)?;
    let d2 = fd::second_derivative(&ln, grid.step);
    Ok(ChainLevel::from_raw(
        kappa_minus_sq.iter().zip(&d2).map(|(k, d)| k + 8.0 * d).collect(),
    ))
}

/// Shape-invariance hierarchy `κ_s² = κ_0² - 8 Σ_{k<=s} R(a_k)`.
///
/// Returns levels `s = 0..=residuals.len()`, level 0 being the input.
pub fn shape_invariant_chain(kappa0_sq: &[f64], residuals: &[f64]) -> Result<Vec<ChainLevel>> {
    if residuals.iter().any(|r| !r.is_finite()) {
        return Err(Error::invalid("residuals", "must be finite"));
    }
    let mut levels = vec![ChainLevel::from_raw(kappa0_sq.to_vec())];
    let mut shift = 0.0;
    for r in residuals {
        shift += r;
        levels.push(ChainLevel::from_raw(
            kappa0_sq.iter().map(|k| k - 8.0 * shift).collect(),
        ));
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_superpotential() {
        let g = Grid1D::symmetric(5.0, 0.1).unwrap();
        for c in [0.0, 0.3] {
            let phi = Superpotential::tabulated(g, vec![c; g.len]).unwrap();
            let pair = susy_pair_from_superpotential(&phi, g).unwrap();
            assert!(pair.v_plus.v.iter().all(|v| (v - c * c).abs() < 1e-14));
            assert!(pair.v_minus.v.iter().all(|v| (v - c * c).abs() < 1e-14));
            assert_eq!(pair.realizable_plus, c == 0.0);
            assert_eq!(pair.realizable_minus, c == 0.0);
        }
    }

    #[test]
    fn constant_ground_state_keeps_curvature() {
        let g = Grid1D::symmetric(5.0, 0.1).unwrap();
        let km: Vec<f64> = g.points().iter().map(|q| 0.2 / q.cosh()).collect();
        let out = susy_partner_from_ground_state(g, &vec![0.7; g.len], &km).unwrap();
        for (a, b) in out.kappa_sq.iter().zip(&km) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_ground_state_is_not_realizable() {
        let sigma = 1.5;
        let g = Grid1D::symmetric(6.0, 0.01).unwrap();
        let psi: Vec<f64> = g
            .points()
            .iter()
            .map(|q| (-q * q / (2.0 * sigma * sigma)).exp())
            .collect();
        let out = susy_partner_from_ground_state(g, &psi, &vec![0.0; g.len]).unwrap();
        // (ln ψ0)'' = -1/σ² exactly.
        for k in &out.kappa_sq {
            assert!((k + 8.0 / (sigma * sigma)).abs() < 1e-8);
        }
        assert!(!out.realizable);
    }

    #[test]
    fn nodal_ground_state_rejected() {
        let g = Grid1D::symmetric(3.0, 0.1).unwrap();
        let psi: Vec<f64> = g.points().iter().map(|q| q.sin()).collect();
        assert!(matches!(
            susy_partner_from_ground_state(g, &psi, &vec![0.0; g.len]),
            Err(Error::NodalGroundState { .. })
        ));
    }

    #[test]
    fn chain_shifts() {
        let k0 = vec![1.0, 2.0, 3.0];
        let flat = shape_invariant_chain(&k0, &[0.0, 0.0]).unwrap();
        assert!(flat.iter().all(|l| l.kappa_sq == k0));
        let up = shape_invariant_chain(&k0, &[-0.5]).unwrap();
        assert_eq!(up[1].kappa_sq, vec![5.0, 6.0, 7.0]);
        assert!(up[1].realizable);
        let down = shape_invariant_chain(&k0, &[0.25]).unwrap();
        assert!(!down[1].realizable);
    }

    #[test]
    fn tanh_wall_validation() {
        assert!(Superpotential::tanh_wall(0.0, 1.0).is_err());
        assert!(Superpotential::tanh_wall(1.0, -1.0).is_err());
    }
}
