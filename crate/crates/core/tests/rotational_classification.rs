//! Constant-angle rotational hypersurfaces: profile invariants, principal
//! curvatures, and the exponential-warp dichotomy.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use yamabe_core::hypersurface::shape_data;
use yamabe_core::rotational::{
    build_rotational, example5_profile, rotational_grid, solve_profile, sphere_chart, verify_classification,
    weingarten_closed_form, ProfileCurve, RotationalProfile,
};
use yamabe_core::{Error, Interval};

/// `(f, interval)` pairs of the dichotomy, all with theta = 0.5 and
/// u in [0.5, 1.0].
const SOLITON_WARPS: [(&str, f64, f64); 2] = [
    ("exp(t)", f64::NEG_INFINITY, f64::INFINITY),
    ("3*exp(2*t)", f64::NEG_INFINITY, f64::INFINITY),
];
const OTHER_WARPS: [(&str, f64, f64); 3] = [
    ("sin(t)", 0.0, PI),
    ("t^2 + 1", f64::NEG_INFINITY, f64::INFINITY),
    ("cosh(t)", f64::NEG_INFINITY, f64::INFINITY),
];

fn curve(f: &str, lo: f64, hi: f64, theta: f64, n: usize) -> ProfileCurve {
    let prof =
        RotationalProfile::from_text(theta, f, n, 0.0, None, (0.5, 1.0), Interval::new(lo, hi).unwrap()).unwrap();
    solve_profile(&prof).unwrap()
}

/// Sorted eigenvalues of the shape operator, via `g = L L^T`.
fn principal_curvatures(ii: &DMatrix<f64>, g: &DMatrix<f64>) -> Vec<f64> {
    let l_inv = g.clone().cholesky().unwrap().l().try_inverse().unwrap();
    let m = &l_inv * ii * l_inv.transpose();
    let m = (&m + m.transpose()) * 0.5;
    let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

#[test]
fn dichotomy() {
    for (f, lo, hi) in SOLITON_WARPS {
        let c = curve(f, lo, hi, 0.5, 2);
        let grid = rotational_grid(c.profile(), &[7, 5]).unwrap();
        let rep = verify_classification(&c, &grid).unwrap();
        assert!(rep.classified_soliton, "{f}: {rep:?}");
        assert!(rep.check("sigma_constant").unwrap().value < 1e-4);
    }
    for (f, lo, hi) in OTHER_WARPS {
        let c = curve(f, lo, hi, 0.5, 2);
        let grid = rotational_grid(c.profile(), &[7, 5]).unwrap();
        let rep = verify_classification(&c, &grid).unwrap();
        assert!(!rep.classified_soliton, "{f}");
        let rel = rep.check("soliton_relation").unwrap();
        assert!(rel.value > 1e-2, "{f}: relation {}", rel.value);
        assert!(rep.check("soliton_residual").unwrap().value > 1e-2, "{f}");
    }
}

#[test]
fn every_angle_works_for_the_exponential_warp() {
    for theta in [0.1, 0.5, FRAC_1_SQRT_2, 0.95] {
        for n in [2, 3] {
            let prof =
                RotationalProfile::from_text(theta, "exp(t)", n, 0.3, None, (0.0, 2.0), Interval::real_line()).unwrap();
            let c = solve_profile(&prof).unwrap();
            let samples = if n == 2 { vec![6, 4] } else { vec![4, 3, 3] };
            let rep = verify_classification(&c, &rotational_grid(&prof, &samples).unwrap()).unwrap();
            assert!(rep.classified_soliton, "theta {theta} n {n}: {rep:?}");
        }
    }
}

#[test]
fn weingarten_closed_form_matches_shape_operator() {
    let mut cases: Vec<(&str, f64, f64)> = SOLITON_WARPS.to_vec();
    cases.extend(OTHER_WARPS);
    for (f, lo, hi) in cases {
        for n in [2, 3] {
            for theta in [0.3, 0.5, 0.8] {
                let c = curve(f, lo, hi, theta, n);
                let imm = build_rotational(&c).unwrap();
                let samples = if n == 2 { vec![5, 3] } else { vec![4, 3, 3] };
                for p in rotational_grid(c.profile(), &samples).unwrap().points() {
                    let sd = shape_data(&imm, &p).unwrap();
                    let (ku, kv) = weingarten_closed_form(&c, p[0]).unwrap();
                    let mut expected = vec![ku];
                    expected.extend(std::iter::repeat_n(kv, n - 1));
                    expected.sort_by(f64::total_cmp);
                    let got = principal_curvatures(&sd.second_form, &sd.g);
                    for (a, b) in got.iter().zip(&expected) {
                        assert!(
                            (a - b).abs() < 1e-6,
                            "{f} n={n} theta={theta} at {p:?}: {got:?} vs {expected:?}"
                        );
                    }
                    // Angle constancy under the chosen orientation.
                    assert!((sd.theta - theta).abs() < 1e-10, "{f}: {}", sd.theta);
                }
            }
        }
    }
}

#[test]
fn profile_curves_are_geodesics_of_the_induced_metric() {
    for (f, lo, hi) in SOLITON_WARPS.iter().chain(OTHER_WARPS.iter()) {
        for n in [2, 3] {
            let c = curve(f, *lo, *hi, 0.5, n);
            let imm = build_rotational(&c).unwrap();
            let samples = if n == 2 { vec![5, 3] } else { vec![4, 3, 3] };
            for p in rotational_grid(c.profile(), &samples).unwrap().points() {
                let gam = shape_data(&imm, &p).unwrap().induced_christoffels();
                for k in 0..n {
                    assert!(
                        gam.get(k, 0, 0).abs() < 1e-8,
                        "{f}: Gamma^{k}_uu = {}",
                        gam.get(k, 0, 0)
                    );
                }
            }
        }
    }
}

#[test]
fn example_profile_closed_forms() {
    let prof = example5_profile(2, (0.0, 3.0)).unwrap();
    assert_eq!(prof.c1, 0.0);
    let c = solve_profile(&prof).unwrap();
    assert!((c.beta(0.0).unwrap() + 1.0).abs() < 1e-12);
    for i in 0..100 {
        let u = 3.0 * i as f64 / 99.0;
        assert!((c.alpha(u) - u / SQRT_2).abs() < 1e-15);
        let exact = -(-u / SQRT_2).exp();
        assert!((c.beta(u).unwrap() - exact).abs() < 1e-10);
        assert!((c.beta_closed_form(u).unwrap() - exact).abs() < 1e-14);
        assert!((c.sigma(u).unwrap() + 1.0).abs() < 1e-10);
        assert!((c.speed2(u).unwrap() - 1.0).abs() < 1e-10);
        assert!((c.angle(u).unwrap() - FRAC_1_SQRT_2).abs() < 1e-10);
    }
    let (ku, kv) = weingarten_closed_form(&c, 1.3).unwrap();
    assert!((ku + FRAC_1_SQRT_2).abs() < 1e-10);
    assert!((kv + SQRT_2).abs() < 1e-10);
    assert!((ku * kv - 1.0).abs() < 1e-10);
}

#[test]
fn example_surface_matches_the_printed_parametrization() {
    let c = solve_profile(&example5_profile(2, (0.0, 3.0)).unwrap()).unwrap();
    let imm = build_rotational(&c).unwrap();
    for (u, v) in [(0.4, 0.5), (1.5, 3.0), (2.6, 5.5)] {
        let pos = imm.position(&[u, v]).unwrap();
        let b = -(-u / SQRT_2).exp();
        assert!((pos[0] - u / SQRT_2).abs() < 1e-15);
        assert!((pos[1] - b * v.cos()).abs() < 1e-10);
        assert!((pos[2] - b * v.sin()).abs() < 1e-10);
        let sd = shape_data(&imm, &[u, v]).unwrap();
        assert!((&sd.g - DMatrix::<f64>::identity(2, 2)).amax() < 1e-10);
        assert!((sd.h - u / SQRT_2).abs() < 1e-15);
    }
}

#[test]
fn first_fundamental_form_in_three_dimensions() {
    let prof =
        RotationalProfile::from_text(0.6, "cosh(t)", 3, 0.1, Some(0.7), (0.0, 1.0), Interval::real_line()).unwrap();
    let c = solve_profile(&prof).unwrap();
    let imm = build_rotational(&c).unwrap();
    let (u, v1, v2) = (0.4, 1.1, 2.0);
    let sd = shape_data(&imm, &[u, v1, v2]).unwrap();
    let s2 = c.sigma(u).unwrap().powi(2);
    let expected = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&[1.0, s2, s2 * v1.sin().powi(2)]));
    assert!((&sd.g - expected).amax() < 1e-10);
    assert!((sd.h - (u * 0.8 + 0.1)).abs() < 1e-15);
}

#[test]
fn quadrature_and_integrand_stay_consistent_for_general_warps() {
    for (f, lo, hi) in OTHER_WARPS {
        let c = curve(f, lo, hi, 0.5, 2);
        for i in 0..100 {
            let u = 0.5 + 0.5 * i as f64 / 99.0;
            assert!((c.speed2(u).unwrap() - 1.0).abs() < 1e-10, "{f}");
            assert!((c.angle(u).unwrap() - 0.5).abs() < 1e-10, "{f}");
        }
        assert!(c.beta_closed_form(0.7).is_none());
    }
}

#[test]
fn invalid_profiles_are_rejected() {
    let real = Interval::real_line();
    for theta in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
        assert!(RotationalProfile::from_text(theta, "exp(t)", 2, 0.0, Some(1.0), (0.0, 1.0), real).is_err());
    }
    assert!(RotationalProfile::from_text(0.5, "exp(t)", 1, 0.0, Some(1.0), (0.0, 1.0), real).is_err());
    assert!(RotationalProfile::from_text(0.5, "exp(t)", 2, 0.0, Some(1.0), (1.0, 0.0), real).is_err());
    // alpha leaves (0, pi).
    let iv = Interval::new(0.0, PI).unwrap();
    assert!(RotationalProfile::from_text(0.5, "sin(t)", 2, 0.0, Some(1.0), (0.5, 5.0), iv).is_err());
}

#[test]
fn vanishing_sigma_is_an_error() {
    // beta(0) = c2 = 0.
    let prof =
        RotationalProfile::from_text(0.5, "exp(t)", 2, 0.0, Some(0.0), (0.0, 1.0), Interval::real_line()).unwrap();
    let c = solve_profile(&prof).unwrap();
    assert!(matches!(weingarten_closed_form(&c, 0.0), Err(Error::SigmaZero { .. })));
    assert!(matches!(c.soliton_relation(0.0), Err(Error::SigmaZero { .. })));
}

#[test]
fn sphere_chart_examples() {
    let x = sphere_chart(&[PI / 2.0]);
    assert!(x[0].abs() < 1e-16 && (x[1] - 1.0).abs() < 1e-16);
    let x = sphere_chart(&[PI / 2.0, 0.0]);
    assert!(x[0].abs() < 1e-16 && (x[1] - 1.0).abs() < 1e-16 && x[2] == 0.0);
}

proptest! {
    #[test]
    fn sphere_chart_is_unit(v1 in 0.01..PI, v2 in 0.01..PI, v3 in 0.01..(2.0 * PI)) {
        let x = sphere_chart(&[v1, v2, v3]);
        let norm2: f64 = x.iter().map(|c| c * c).sum();
        prop_assert!((norm2 - 1.0).abs() < 1e-14);
    }
}
