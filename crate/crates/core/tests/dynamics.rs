use bentguide::dynamics::{
    energy_expectation, energy_expectation_2d, fwhm_to_sigma, imaginary_time_ground_state,
    imaginary_time_ground_state_2d, momentum_averaged_transmission, propagate_1d, propagate_2d, talbot_carpet,
    talbot_revival_time, transmitted_fraction, Boundary, Propagate2DOptions, PropagateOptions, Transverse, WaveState,
    WaveState2D, WaveguideOptions, WaveguidePotential2D,
};
use bentguide::geometry::CurvatureProfile;
use bentguide::pipeline::loop_potential;
use bentguide::potentials::{cip_from_profile, PotentialGrid, PotentialSource};
use bentguide::scattering::{bound_states, default_scattering_grid, scatter};
use bentguide::{Complex64, Grid1D, Grid2D};
use proptest::prelude::*;

fn flat(grid: Grid1D) -> PotentialGrid {
    PotentialGrid::periodic(grid, vec![0.0; grid.len], PotentialSource::External).unwrap()
}

fn open_flat(grid: Grid1D) -> PotentialGrid {
    PotentialGrid::new(grid, vec![0.0; grid.len], PotentialSource::External).unwrap()
}

#[test]
fn free_gaussian_spreads_as_predicted() {
    let grid = Grid1D::periodic(-400.0, 800.0, 4096).unwrap();
    let (fwhm, k0, t) = (10.0, 0.3, 200.0);
    let psi0 = WaveState::gaussian(grid, -50.0, fwhm, k0, Boundary::Periodic).unwrap();
    let traj = propagate_1d(&flat(grid), &psi0, 0.5, 400, &PropagateOptions::default()).unwrap();
    let (mean, var) = traj.final_state().position_moments();
    let s0 = fwhm_to_sigma(fwhm);
    let oracle = s0 * s0 * (1.0 + (t / (2.0 * s0 * s0)).powi(2));
    assert!((mean - (-50.0 + k0 * t)).abs() < 1e-8, "mean {mean}");
    assert!((var - oracle).abs() < 1e-8 * oracle, "variance {var} vs {oracle}");
}

#[test]
fn eigenstate_density_is_stationary() {
    let grid = Grid1D::periodic(-40.0, 80.0, 1024).unwrap();
    let p = CurvatureProfile::poschl_teller(1.0, 1.0).unwrap();
    let mut v = cip_from_profile(&p, grid).unwrap();
    v.periodic = true;
    let sech: Vec<f64> = grid.points().iter().map(|q| 1.0 / q.cosh()).collect();
    let mut psi = WaveState::from_real(&sech, grid, Boundary::Periodic).unwrap();
    psi.normalize().unwrap();
    assert!((energy_expectation(&v, &psi).unwrap() + 0.5).abs() < 1e-10);
    // The split-step eigenstate differs from the exact one at O(dt²).
    let change = |dt: f64| {
        let traj = propagate_1d(
            &v,
            &psi,
            dt,
            (100.0 / dt).round() as usize,
            &PropagateOptions::default(),
        )
        .unwrap();
        psi.density()
            .iter()
            .zip(traj.final_state().density())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    let (c1, c2) = (change(0.02), change(0.01));
    assert!(c2 < 2e-5 * 0.5, "density moved by {c2}");
    assert!((c1 / c2 - 4.0).abs() < 0.5, "ratio {}", c1 / c2);
}

#[test]
fn propagator_eigenstate_is_static_over_a_long_run() {
    let grid = Grid1D::periodic(-40.0, 80.0, 1024).unwrap();
    let p = CurvatureProfile::poschl_teller(1.0, 1.0).unwrap();
    let mut v = cip_from_profile(&p, grid).unwrap();
    v.periodic = true;
    let sech: Vec<f64> = grid.points().iter().map(|q| 1.0 / q.cosh()).collect();
    let psi = WaveState::from_real(&sech, grid, Boundary::Periodic).unwrap();
    // Gaussian-windowed Fourier filter at E = -1/2 projects onto the
    // eigenvector of the discrete propagator.
    let (dt, width, mid) = (0.1, 60.0, 300.0);
    let opts = PropagateOptions {
        snapshot_every: 1,
        ..Default::default()
    };
    let mut acc = vec![Complex64::new(0.0, 0.0); grid.len];
    let mut state = psi;
    for chunk in 0..12 {
        let traj = propagate_1d(&v, &state, dt, 500, &opts).unwrap();
        for snap in &traj.snapshots[usize::from(chunk > 0)..] {
            let w = Complex64::from_polar((-(snap.t - mid).powi(2) / (2.0 * width * width)).exp(), -0.5 * snap.t);
            acc.iter_mut().zip(&snap.psi).for_each(|(a, z)| *a += w * z);
        }
        state = traj.final_state().clone();
    }
    let mut eigen = WaveState::new(acc, grid, Boundary::Periodic).unwrap();
    eigen.normalize().unwrap();
    let traj = propagate_1d(&v, &eigen, dt, 10_000, &PropagateOptions::default()).unwrap();
    let change = eigen
        .density()
        .iter()
        .zip(traj.final_state().density())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(change < 1e-8, "density moved by {change}");
}

#[test]
fn loop_energy_and_step_convergence_over_a_revival() {
    let l = 150.0;
    let (v, _) = loop_potential(0.9, l, 512, false).unwrap();
    let psi0 = WaveState::gaussian(v.grid, l / 4.0, l / 30.0, 0.0, Boundary::Periodic).unwrap();
    let tau = talbot_revival_time(l);
    let coarse = talbot_carpet(&v, &psi0, 0.1, tau, 2).unwrap();
    let fine = talbot_carpet(&v, &psi0, 0.05, tau, 2).unwrap();
    let (fc, ff) = (coarse.revival_fidelity[1], fine.revival_fidelity[1]);
    assert!((fc - ff).abs() < 1e-6, "F(τ) = {fc} vs {ff}");

    let traj = propagate_1d(
        &v,
        &psi0,
        0.1,
        (tau / 0.1).round() as usize,
        &PropagateOptions::default(),
    )
    .unwrap();
    let (e0, e1) = (
        energy_expectation(&v, &psi0).unwrap(),
        energy_expectation(&v, traj.final_state()).unwrap(),
    );
    assert!((e1 - e0).abs() < 1e-8 * e0.abs().max(1e-3), "E {e0} -> {e1}");
}

#[test]
fn carpet_frames_carry_the_norm() {
    let (v, _) = loop_potential(0.5, 100.0, 256, true).unwrap();
    let psi0 = WaveState::gaussian(v.grid, 25.0, 5.0, 0.0, Boundary::Periodic).unwrap();
    let res = talbot_carpet(&v, &psi0, 0.2, 500.0, 11).unwrap();
    assert_eq!(res.density.len(), 11);
    for row in &res.density {
        let mass: f64 = row.iter().sum::<f64>() * v.grid.step;
        assert!((mass - 1.0).abs() < 1e-10);
    }
}

#[test]
fn packet_transmission_matches_averaged_closed_form() {
    let (nu, alpha, k0, fwhm) = (0.5, 0.25, 0.1, 60.0);
    let grid = Grid1D::periodic(-700.0, 1400.0, 4096).unwrap();
    let p = CurvatureProfile::poschl_teller(nu, alpha).unwrap();
    let v = cip_from_profile(&p, grid).unwrap();
    let boundary = Boundary::absorbing(150.0, 0.005).unwrap();
    let psi0 = WaveState::gaussian(grid, -250.0, fwhm, k0, boundary).unwrap();
    let traj = propagate_1d(&v, &psi0, 1.0, 5000, &PropagateOptions::default()).unwrap();
    let last = traj.snapshots.len() - 1;
    let beyond = transmitted_fraction(&grid, &traj.final_state().density(), 0.0).unwrap() * traj.final_state().norm();
    let t = beyond + traj.absorbed_right[last];
    let sigma_k = 1.0 / (2.0 * fwhm_to_sigma(fwhm));
    let oracle = momentum_averaged_transmission(nu, alpha, k0, sigma_k).unwrap();
    assert!((t - oracle).abs() < 0.02, "T = {t} vs {oracle}");
}

#[test]
fn momentum_resolved_transmission_matches_scattering() {
    let (nu, alpha, k0, fwhm) = (0.5, 0.5, 0.5, 20.0);
    let grid = Grid1D::periodic(-2048.0, 4096.0, 8192).unwrap();
    let p = CurvatureProfile::poschl_teller(nu, alpha).unwrap();
    let mut v = cip_from_profile(&p, grid).unwrap();
    v.periodic = true;
    let psi0 = WaveState::gaussian(grid, -60.0, fwhm, k0, Boundary::Periodic).unwrap();
    let traj = propagate_1d(&v, &psi0, 0.5, 3000, &PropagateOptions::default()).unwrap();
    let spectrum = |psi: &[Complex64], keep: &dyn Fn(f64) -> bool| {
        let mut buf: Vec<Complex64> = psi
            .iter()
            .enumerate()
            .map(|(i, z)| if keep(grid.at(i)) { *z } else { Complex64::new(0.0, 0.0) })
            .collect();
        rustfft::FftPlanner::new().plan_fft_forward(grid.len).process(&mut buf);
        buf.iter().map(|z| z.norm_sqr()).collect::<Vec<f64>>()
    };
    let incoming = spectrum(&psi0.psi, &|_| true);
    let transmitted = spectrum(&traj.final_state().psi, &|q| q > 60.0);
    let reflected = spectrum(&traj.final_state().psi, &|q| q < -60.0);
    let ks = (1..grid.len / 2)
        .map(|j| (j, j as f64 * 2.0 * std::f64::consts::PI / (grid.step * grid.len as f64)))
        .filter(|&(j, k)| (0.38..0.62).contains(&k) && incoming[j] > 0.1 * incoming.iter().cloned().fold(0.0, f64::max))
        .collect::<Vec<_>>();
    let k_list: Vec<f64> = ks.iter().map(|&(_, k)| k).collect();
    let open = cip_from_profile(&p, default_scattering_grid(alpha).unwrap()).unwrap();
    let s = scatter(&open, &k_list).unwrap();
    let (t_num, r_num) = (s.transmission_probability(), s.reflection_probability());
    assert!(ks.len() > 100);
    for (i, &(j, k)) in ks.iter().enumerate() {
        let t = transmitted[j] / incoming[j];
        let r = reflected[grid.len - j] / incoming[j];
        assert!((t - t_num[i]).abs() < 1e-3, "k = {k}: {t} vs {}", t_num[i]);
        assert!((r - r_num[i]).abs() < 1e-3, "k = {k}: {r} vs {}", r_num[i]);
    }
}

#[test]
fn harmonic_line_ground_state() {
    let grid = Grid1D::periodic(-12.0, 24.0, 256).unwrap();
    let v: Vec<f64> = grid.points().iter().map(|q| 0.5 * q * q).collect();
    let v = PotentialGrid::periodic(grid, v, PotentialSource::External).unwrap();
    let seed = WaveState::gaussian(grid, 1.0, 3.0, 0.0, Boundary::Periodic).unwrap();
    let dtau = 0.005;
    let g = imaginary_time_ground_state(&v, &seed, dtau, 1e-13, 1_000_000).unwrap();
    assert!((g.energy - 0.5).abs() < 1e-8, "E = {}", g.energy);
    let (_, var) = g.state.position_moments();
    assert!((var - (0.5 - dtau * dtau / 16.0)).abs() < 1e-8, "<q²> = {var}");
}

#[test]
fn imaginary_time_respects_the_variational_bound() {
    let grid = Grid1D::periodic(-60.0, 120.0, 1024).unwrap();
    let p = CurvatureProfile::poschl_teller(2.0, 0.5).unwrap();
    let exact = bound_states(&cip_from_profile(&p, Grid1D::symmetric(60.0, 0.01).unwrap()).unwrap())
        .unwrap()
        .energies[0];
    let mut v = cip_from_profile(&p, grid).unwrap();
    v.periodic = true;
    let seed = WaveState::gaussian(grid, 3.0, 8.0, 0.0, Boundary::Periodic).unwrap();
    let g = imaginary_time_ground_state(&v, &seed, 0.01, 1e-12, 200_000).unwrap();
    assert!(g.energy >= exact - 1e-9, "{} below {exact}", g.energy);
    assert!((g.energy - exact).abs() < 1e-6, "{} vs {exact}", g.energy);
}

fn straight_guide(nx: usize, width: f64) -> WaveguidePotential2D {
    let grid = Grid2D::covering(-width / 2.0, width, nx, -8.0, 16.0, 64).unwrap();
    WaveguidePotential2D::straight(
        grid,
        0.0,
        Transverse::Harmonic { omega: 1.0 },
        WaveguideOptions::default(),
    )
    .unwrap()
}

#[test]
fn harmonic_guide_ground_state() {
    let u = straight_guide(32, 32.0);
    let grid = *u.grid();
    let seed = WaveState2D::new(vec![Complex64::new(1.0, 0.0); grid.len()], grid, Boundary::Periodic).unwrap();
    let g = imaginary_time_ground_state_2d(&u, &seed, 0.01, 1e-13, 100_000).unwrap();
    assert!((g.energy - 0.5).abs() < 1e-8, "E = {}", g.energy);
    assert!((energy_expectation_2d(&u, &g.state).unwrap() - g.energy).abs() < 1e-12);
    let rho = g.state.density();
    let total: f64 = rho.iter().sum();
    let y2: f64 = (0..grid.len()).map(|i| rho[i] * grid.point(i)[1].powi(2)).sum::<f64>() / total;
    // Fixed point of the symmetric split in imaginary time: ⟨y²⟩ = 1/2 − dτ²/16 + O(dτ⁴).
    assert!((y2 - (0.5 - 0.01f64.powi(2) / 16.0)).abs() < 1e-8, "<y²> = {y2}");
}

#[test]
fn straight_guide_moves_at_the_group_velocity() {
    let u = straight_guide(512, 256.0);
    let k0 = 0.5;
    let envelope = |q: f64| {
        let d = q + 60.0;
        Complex64::from_polar((-d * d / (4.0 * 100.0)).exp(), k0 * q)
    };
    let psi0 = u.guided_state(envelope, Boundary::Periodic).unwrap();
    let opts = Propagate2DOptions {
        snapshot_every: 100,
        ..Default::default()
    };
    let traj = propagate_2d(&u, &psi0, 0.2, 400, &opts).unwrap();
    let g = traj.q1_bins;
    let mean = |n: &[f64]| {
        let m: f64 = n.iter().sum();
        n.iter().enumerate().map(|(i, x)| x * g.at(i)).sum::<f64>() / m
    };
    let start = mean(&traj.projected[0]);
    let end = mean(traj.projected.last().unwrap());
    let elapsed = traj.times.last().unwrap() - traj.times[0];
    let v = (end - start) / elapsed;
    assert!((v - k0).abs() < 1e-2 * k0, "group velocity {v}");
    for n in &traj.norms {
        assert!((n - 1.0).abs() < 1e-10);
    }
}

#[test]
fn transmitted_fraction_examples() {
    let grid = Grid1D::new(0.0, 1.0, 5).unwrap();
    let rho = [1.0; 5];
    assert_eq!(transmitted_fraction(&grid, &rho, 2.0).unwrap(), 0.5);
    assert_eq!(transmitted_fraction(&grid, &rho, 2.5).unwrap(), 0.4);
    assert_eq!(transmitted_fraction(&grid, &rho, 0.0).unwrap(), 0.9);
    assert!(transmitted_fraction(&grid, &rho, 7.0).is_err());
    assert!(transmitted_fraction(&grid, &[0.0; 5], 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn split_step_is_unitary(nu in 0.2f64..3.0, alpha in 0.1f64..1.0, k0 in -0.8f64..0.8, dt in 0.02f64..0.1) {
        let grid = Grid1D::periodic(-100.0, 200.0, 1024).unwrap();
        let p = CurvatureProfile::poschl_teller(nu, alpha).unwrap();
        let mut v = cip_from_profile(&p, grid).unwrap();
        v.periodic = true;
        let psi0 = WaveState::gaussian(grid, -20.0, 10.0, k0, Boundary::Periodic).unwrap();
        let traj = propagate_1d(&v, &psi0, dt, 200, &PropagateOptions::default()).unwrap();
        for n in &traj.norms {
            prop_assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn absorbed_plus_remaining_is_conserved(k0 in 0.2f64..1.0) {
        let grid = Grid1D::periodic(-100.0, 200.0, 1024).unwrap();
        let boundary = Boundary::absorbing(30.0, 0.05).unwrap();
        let psi0 = WaveState::gaussian(grid, 20.0, 10.0, k0, boundary).unwrap();
        let traj = propagate_1d(&open_flat(grid), &psi0, 0.2, 800, &PropagateOptions::default()).unwrap();
        let last = traj.snapshots.len() - 1;
        let total = traj.final_state().norm() + traj.absorbed_left[last] + traj.absorbed_right[last];
        prop_assert!((total - 1.0).abs() < 1e-6, "{total}");
    }
}
