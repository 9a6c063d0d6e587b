use bentguide::geometry::CurvatureProfile;
use bentguide::potentials::{cip_from_profile, sukumar_cip, sukumar_curvature_squared, PotentialGrid, PotentialSource};
use bentguide::scattering::{
    analytic_pt_transmission, bound_states, default_scattering_grid, log_k_grid, scatter, BoundStateOptions,
};
use bentguide::Grid1D;
use proptest::prelude::*;

/// Nodes of the solution of `ψ'' = 2(V - E)ψ` started from a hard wall at
/// `-half` and integrated with RK4 to `+half`.
fn shooting_nodes(v: &dyn Fn(f64) -> f64, e: f64, half: f64, h: f64) -> usize {
    let f = |q: f64, y: [f64; 2]| [y[1], 2.0 * (v(q) - e) * y[0]];
    let mut y = [0.0, 1e-12];
    let mut q = -half;
    let mut nodes = 0;
    let n = (2.0 * half / h).round() as usize;
    for _ in 0..n {
        let k1 = f(q, y);
        let k2 = f(q + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = f(q + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = f(q + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        let next = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        if next[0] * y[0] < 0.0 {
            nodes += 1;
        }
        // Keep the growing solution in range without changing its nodes.
        let scale = next[0].abs().max(next[1].abs());
        y = if scale > 1e100 {
            [next[0] / scale, next[1] / scale]
        } else {
            next
        };
        q += h;
    }
    nodes
}

/// Energy of the `index`-th box eigenstate by bisection on the node count.
fn shooting_level(v: &dyn Fn(f64) -> f64, index: usize, lo: f64, hi: f64, half: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if shooting_nodes(v, mid, half, 2e-3) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn poschl_teller_single_level_against_shooting() {
    let p = CurvatureProfile::poschl_teller(1.0, 1.0).unwrap();
    let v = cip_from_profile(&p, Grid1D::symmetric(30.0, 0.01).unwrap()).unwrap();
    let spec = bound_states(&v).unwrap();
    assert_eq!(spec.count, 1);
    let oracle = shooting_level(&|q: f64| -1.0 / q.cosh().powi(2), 0, -1.0, 0.0, 25.0);
    assert!((oracle + 0.5).abs() < 1e-6);
    assert!((spec.energies[0] - oracle).abs() < 1e-3);
}

#[test]
fn reflectionless_levels_against_shooting() {
    let eta = [1.0, 1.5];
    let v = sukumar_cip(&eta, Grid1D::symmetric(30.0, 0.01).unwrap()).unwrap();
    let spec = bound_states(&v).unwrap();
    assert_eq!(spec.count, 2);
    let pot = |q: f64| -sukumar_curvature_squared(&eta, q).unwrap() / 8.0;
    for (i, e) in spec.energies.iter().enumerate() {
        let oracle = shooting_level(&pot, i, -2.0, -1e-3, 25.0);
        assert!((e - oracle).abs() < 1e-3, "level {i}: {e} vs {oracle}");
    }
}

#[test]
fn wavefunctions_are_normalised_with_index_nodes() {
    let p = CurvatureProfile::poschl_teller(3.5, 0.5).unwrap();
    let v = cip_from_profile(&p, Grid1D::symmetric(60.0, 0.01).unwrap()).unwrap();
    let spec = bentguide::scattering::bound_states_with(
        &v,
        &BoundStateOptions {
            wavefunctions: true,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(spec.count >= 3);
    for (i, psi) in spec.wavefunctions.iter().enumerate() {
        let norm: f64 = psi.iter().map(|x| x * x).sum::<f64>() * spec.grid.step;
        assert!((norm - 1.0).abs() < 1e-10, "state {i}: norm {norm}");
        assert_eq!(spec.node_counts[i], i);
        for w in spec.energies.windows(2) {
            assert!(w[0] < w[1]);
        }
    }
}

#[test]
fn halving_the_step_barely_moves_transmission() {
    let ks = log_k_grid(0.02, 2.0, 64).unwrap();
    let p = CurvatureProfile::poschl_teller(0.5, 0.125).unwrap();
    let g = default_scattering_grid(0.125).unwrap();
    let coarse = scatter(&cip_from_profile(&p, g).unwrap(), &ks).unwrap();
    let fine_grid = Grid1D::symmetric(-g.start, g.step / 2.0).unwrap();
    let fine = scatter(&cip_from_profile(&p, fine_grid).unwrap(), &ks).unwrap();
    for (a, b) in coarse
        .transmission_probability()
        .iter()
        .zip(fine.transmission_probability())
    {
        assert!((a - b).abs() < 4e-4);
    }
}

fn smooth_step(height: f64, width: f64) -> PotentialGrid {
    let g = Grid1D::symmetric(40.0 * width, 0.01).unwrap();
    let v = g
        .points()
        .iter()
        .map(|q| 0.5 * height * (1.0 + (q / width).tanh()))
        .collect();
    PotentialGrid::new(g, v, PotentialSource::External).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn flux_is_conserved(nu in 0.1f64..3.0, alpha in 0.1f64..1.0, k in 0.05f64..2.0) {
        let p = CurvatureProfile::poschl_teller(nu, alpha).unwrap();
        let v = cip_from_profile(&p, default_scattering_grid(alpha).unwrap()).unwrap();
        let r = scatter(&v, &[k]).unwrap();
        prop_assert!(r.unitarity_residual < 1e-8);
    }

    #[test]
    fn flux_is_conserved_across_a_step(height in -0.5f64..0.5, width in 0.5f64..3.0, k in 1.1f64..3.0) {
        let v = smooth_step(height, width);
        let r = scatter(&v, &[k]).unwrap();
        let total = r.reflection_probability()[0] + r.transmission_probability()[0];
        prop_assert!((total - 1.0).abs() < 1e-8);
        prop_assert!(r.unitarity_residual < 1e-8);
        // Logistic step: R = [sinh(πw(k − k′)/2) / sinh(πw(k + k′)/2)]².
        let kr = (k * k - 2.0 * height).sqrt();
        let oracle = ((std::f64::consts::FRAC_PI_2 * width * (k - kr)).sinh()
            / (std::f64::consts::FRAC_PI_2 * width * (k + kr)).sinh())
        .powi(2);
        prop_assert!((r.reflection_probability()[0] - oracle).abs() < 1e-6);
    }

    #[test]
    fn matches_closed_form(nu in 0.05f64..2.95, k in 0.05f64..2.0) {
        let alpha = 0.125;
        let p = CurvatureProfile::poschl_teller(nu, alpha).unwrap();
        let v = cip_from_profile(&p, default_scattering_grid(alpha).unwrap()).unwrap();
        let t = scatter(&v, &[k]).unwrap().transmission_probability()[0];
        prop_assert!((t - analytic_pt_transmission(nu, alpha, k)).abs() < 1e-4);
    }
}
