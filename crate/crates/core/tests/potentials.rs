use std::f64::consts::{PI, SQRT_2};

use bentguide::geometry::{integrate_frenet_serret, reconstruct_curvature, CurvatureProfile, EllipseArc};
use bentguide::potentials::{
    cip_from_profile, compensation_barrier, ellipse_cip, ring_cip, sukumar_curvature_squared,
    susy_pair_from_superpotential, susy_pair_with_reference, susy_partner_from_ground_state, PotentialGrid,
    PotentialSource, Superpotential,
};
use bentguide::Grid1D;
use proptest::prelude::*;

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

#[test]
fn poschl_teller_depth_at_origin() {
    let p = CurvatureProfile::poschl_teller(1.0, 1.0).unwrap();
    let v = cip_from_profile(&p, Grid1D::symmetric(10.0, 0.5).unwrap()).unwrap();
    let mid = v.grid.len / 2;
    assert!(v.q1()[mid].abs() < 1e-12);
    // -(2·√2)²/8 and the Pöschl–Teller depth -ν(ν+1)α²/2 agree.
    assert!((v.v[mid] + 1.0).abs() < 1e-14);
}

#[test]
fn two_state_determinant_against_finite_differences() {
    let (e1, e2) = (1.0_f64, 1.5_f64);
    let ln_det = |q: f64| (e2 * (e1 * q).cosh() * (e2 * q).cosh() - e1 * (e1 * q).sinh() * (e2 * q).sinh()).ln();
    for q in [0.0, 0.3, -1.1, 2.5] {
        let h = 1e-3;
        let fd = 8.0 * (ln_det(q + h) - 2.0 * ln_det(q) + ln_det(q - h)) / (h * h);
        let k2 = sukumar_curvature_squared(&[e1, e2], q).unwrap();
        assert!((k2 - fd).abs() < 1e-5 * fd.abs().max(1.0), "q1 = {q}: {k2} vs {fd}");
        assert!(k2 > 0.0);
    }
}

#[test]
fn single_state_determinant_is_sech_squared() {
    for q in [0.0, 0.7, -3.0] {
        let k2 = sukumar_curvature_squared(&[1.0], q).unwrap();
        assert!((k2 - 8.0 * sech(q).powi(2)).abs() < 1e-12);
    }
}

#[test]
fn ground_state_route_matches_superpotential_route() {
    let alpha = 0.8;
    let grid = Grid1D::symmetric(12.0, 0.01).unwrap();
    // ψ0 = sech(αq) is the zero mode of Φ = α tanh(αq)/√2.
    let phi = Superpotential::tanh_wall(alpha / SQRT_2, alpha).unwrap();
    let pair = susy_pair_from_superpotential(&phi, grid).unwrap();
    let psi0: Vec<f64> = grid.points().iter().map(|&q| sech(alpha * q)).collect();
    let level = susy_partner_from_ground_state(grid, &psi0, &pair.kappa_minus_sq).unwrap();
    for (a, b) in level.kappa_sq.iter().zip(&pair.kappa_plus_sq) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }

    let from_state = Superpotential::from_ground_state(grid, psi0).unwrap();
    let pair2 = susy_pair_from_superpotential(&from_state, grid).unwrap();
    for (a, b) in pair2.v_plus.v.iter().zip(&pair.v_plus.v) {
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn ellipse_cip_matches_sampled_curvature() {
    let (a, b) = EllipseArc::axes_from_eccentricity(0.9, 150.0).unwrap();
    let arc = EllipseArc::new(a, b).unwrap();
    let cip = ellipse_cip(a, b, &[]).unwrap();
    let curve = integrate_frenet_serret(&CurvatureProfile::ellipse(a, b).unwrap(), 0.0, arc.perimeter(), 1e-3).unwrap();
    let rec = reconstruct_curvature(&curve).unwrap();
    for (q, k) in rec.q1.iter().zip(&rec.unsigned) {
        let v = cip.potential_at_parameter(arc.parameter_at(*q));
        assert!((-8.0 * v - k * k).abs() < 1e-6, "q1 = {q}");
    }
    assert!((cip.minimum() + a * a / (8.0 * b.powi(4))).abs() < 1e-15);
}

#[test]
fn barrier_relative_to_ring_at_the_vertex() {
    let l = 150.0;
    let (a, b) = EllipseArc::axes_from_eccentricity(0.9, l).unwrap();
    let target = ellipse_cip(a, b, &[]).unwrap().on_arclength_grid(600).unwrap();
    let ring = ring_cip(l, 600).unwrap();
    let ring = PotentialGrid::periodic(target.grid, ring.v, PotentialSource::CipOfProfile).unwrap();
    let u = compensation_barrier(&target, &ring).unwrap();
    let expected = a * a / (8.0 * b.powi(4)) - (2.0 * PI / l).powi(2) / 8.0;
    assert!((u.v[0] - expected).abs() < 1e-12 * expected);
}

#[test]
fn ring_against_straight_reference_is_a_constant_shift() {
    let r = 7.0;
    let ring = ring_cip(2.0 * PI * r, 64).unwrap();
    let flat = PotentialGrid::periodic(ring.grid, vec![0.0; 64], PotentialSource::External).unwrap();
    let u = compensation_barrier(&ring, &flat).unwrap();
    assert!(u.v.iter().all(|x| (x - 1.0 / (8.0 * r * r)).abs() < 1e-15));
}

fn eta_list(first: std::ops::Range<f64>, gap: std::ops::Range<f64>) -> impl Strategy<Value = Vec<f64>> {
    (first, proptest::collection::vec(gap, 0..3)).prop_map(|(first, gaps)| {
        let mut eta = vec![first];
        for g in gaps {
            let next = eta[eta.len() - 1] + g;
            eta.push(next);
        }
        eta
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partners_are_intertwined(amp in 0.05f64..3.0, alpha in 0.05f64..2.0, reference in -2.0f64..2.0) {
        let grid = Grid1D::symmetric(8.0 / alpha, 0.02 / alpha).unwrap();
        let pair = susy_pair_with_reference(&Superpotential::tanh_wall(amp, alpha).unwrap(), grid, reference).unwrap();
        for ((q, vp), vm) in grid.points().iter().zip(&pair.v_plus.v).zip(&pair.v_minus.v) {
            let oracle = SQRT_2 * amp * alpha * sech(alpha * q).powi(2);
            prop_assert!((vp - vm - oracle).abs() < 1e-10);
        }
        for (k, v) in pair.kappa_plus_sq.iter().zip(&pair.v_plus.v) {
            if pair.realizable_plus {
                prop_assert!((k + 8.0 * v).abs() < 1e-12 * k.abs().max(1.0));
            }
        }
    }

    #[test]
    fn reflectionless_curvature_is_positive(eta in eta_list(0.1..2.0, 0.05..1.0)) {
        for i in -400..=400 {
            let q = i as f64 * 0.05;
            prop_assert!(sukumar_curvature_squared(&eta, q).unwrap() >= 0.0);
        }
    }

    #[test]
    fn reflectionless_tails_decay_at_twice_the_lowest_eta(eta in eta_list(0.3..1.0, 0.6..1.0)) {
        // Sampled where the leading exponential is ~1e-9: the next one is
        // smaller by e^{-2Δη q} < 1e-4 and rounding is still negligible.
        let (q1, q2) = (8.0 / eta[0], 10.0 / eta[0]);
        let (a, b) = (sukumar_curvature_squared(&eta, q1).unwrap(), sukumar_curvature_squared(&eta, q2).unwrap());
        let rate = (a.ln() - b.ln()) / (q2 - q1);
        prop_assert!((rate - 2.0 * eta[0]).abs() < 1e-2 * eta[0], "rate {rate} for {eta:?}");
    }

    #[test]
    fn compensation_is_exact(ecc in 0.0f64..0.95, l in 20.0f64..300.0, n in 16usize..400) {
        let (a, b) = EllipseArc::axes_from_eccentricity(ecc, l).unwrap();
        let target = ellipse_cip(a, b, &[]).unwrap().on_arclength_grid(n).unwrap();
        let level = -(2.0 * PI / l).powi(2) / 8.0;
        let reference = PotentialGrid::periodic(target.grid, vec![level; n], PotentialSource::CipOfProfile).unwrap();
        let u = compensation_barrier(&target, &reference).unwrap();
        for ((t, r), u) in target.v.iter().zip(&reference.v).zip(&u.v) {
            prop_assert!((t + u - r).abs() <= 4.0 * f64::EPSILON * t.abs().max(r.abs()));
        }
    }

    #[test]
    fn curvature_potentials_are_attractive(nu in 0.1f64..4.0, alpha in 0.01f64..2.0) {
        let p = CurvatureProfile::poschl_teller(nu, alpha).unwrap();
        let v = cip_from_profile(&p, Grid1D::symmetric(30.0 / alpha, 0.1 / alpha).unwrap()).unwrap();
        prop_assert!(v.v.iter().all(|&x| x <= 0.0));
        let m = (v.v.len() as f64 * 0.05).ceil() as usize;
        let left = v.v[..m].iter().sum::<f64>() / m as f64;
        prop_assert!((v.v_left_asym - left).abs() < 1e-15);
    }
}
