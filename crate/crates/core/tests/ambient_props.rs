//! Curvature identities of the warped-product ambients, against the
//! Christoffel finite-difference oracle.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use yamabe_core::ambient::space_form_models;
use yamabe_core::oracles::curvature_from_christoffels;
use yamabe_core::{AmbientPoint, Fiber, Interval, WarpedProduct};

const IDENTITY_TOL: f64 = 1e-8;
const ORACLE_TOL: f64 = 1e-5;

/// The five space forms plus a warp that is not one.
fn ambients(n: usize) -> Vec<WarpedProduct> {
    let mut out: Vec<WarpedProduct> = space_form_models().iter().map(|m| m.build(n).unwrap()).collect();
    out.push(WarpedProduct::from_text(Interval::real_line(), "t^2 + 1", Fiber::Flat, n).unwrap());
    out
}

/// Map unit-cube samples to a point well inside the chart of `w`.
fn point(w: &WarpedProduct, s: &[f64]) -> AmbientPoint {
    let iv = w.interval();
    let t = match (iv.lo.is_finite(), iv.hi.is_finite()) {
        (true, true) => iv.lo + (iv.hi - iv.lo) * (0.1 + 0.8 * s[0]),
        (true, false) => iv.lo + 0.2 + 2.5 * s[0],
        _ => -1.5 + 3.0 * s[0],
    };
    let n = w.n();
    let mut coords = vec![t];
    for i in 0..n {
        let x = match w.fiber() {
            Fiber::Flat => 4.0 * s[i + 1] - 2.0,
            Fiber::Sphere if i + 1 == n => 0.3 + (2.0 * PI - 0.6) * s[i + 1],
            Fiber::Sphere => 0.3 + (PI - 0.6) * s[i + 1],
        };
        coords.push(x);
    }
    AmbientPoint::new(w, coords).unwrap()
}

fn vector(dim: usize, raw: &[f64]) -> DVector<f64> {
    DVector::from_iterator(dim, raw.iter().copied().take(dim))
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.amax()
}

fn unit_cube() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..1.0f64, 4)
}

fn raw_vector() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn antisymmetric_in_first_pair(s in unit_cube(), x in raw_vector(), y in raw_vector(), z in raw_vector()) {
        for n in [2, 3] {
            for w in ambients(n) {
                let p = point(&w, &s);
                let (x, y, z) = (vector(n + 1, &x), vector(n + 1, &y), vector(n + 1, &z));
                let a = w.curvature(&p, &x, &y, &z).unwrap();
                let b = w.curvature(&p, &y, &x, &z).unwrap();
                prop_assert!(max_abs(&(a + b)) < IDENTITY_TOL);
            }
        }
    }

    #[test]
    fn first_bianchi(s in unit_cube(), x in raw_vector(), y in raw_vector(), z in raw_vector()) {
        for n in [2, 3] {
            for w in ambients(n) {
                let p = point(&w, &s);
                let (x, y, z) = (vector(n + 1, &x), vector(n + 1, &y), vector(n + 1, &z));
                let sum = w.curvature(&p, &x, &y, &z).unwrap()
                    + w.curvature(&p, &y, &z, &x).unwrap()
                    + w.curvature(&p, &z, &x, &y).unwrap();
                prop_assert!(max_abs(&sum) < IDENTITY_TOL, "{} at {:?}: {}", w.warp(), &*p, max_abs(&sum));
            }
        }
    }

    #[test]
    fn pair_symmetry(s in unit_cube(), x in raw_vector(), y in raw_vector(), z in raw_vector(), v in raw_vector()) {
        // <R(X,Y)Z, V> = <R(Z,V)X, Y>
        for w in ambients(3) {
            let p = point(&w, &s);
            let g = w.metric(&p).unwrap();
            let (x, y, z, v) = (vector(4, &x), vector(4, &y), vector(4, &z), vector(4, &v));
            let lhs = w.curvature(&p, &x, &y, &z).unwrap().dot(&(&g * &v));
            let rhs = w.curvature(&p, &z, &v, &x).unwrap().dot(&(&g * &y));
            prop_assert!((lhs - rhs).abs() < IDENTITY_TOL * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn metric_compatibility(s in unit_cube()) {
        for n in [2, 3] {
            for w in ambients(n) {
                let p = point(&w, &s);
                let (g, dg) = w.metric_with_derivatives(&p).unwrap();
                let gam = w.christoffels(&p).unwrap();
                let m = n + 1;
                for (a, dga) in dg.iter().enumerate() {
                    for b in 0..m {
                        for c in 0..m {
                            let mut r = dga[(b, c)];
                            for d in 0..m {
                                r -= gam.get(d, a, b) * g[(d, c)] + gam.get(d, a, c) * g[(b, d)];
                            }
                            prop_assert!(r.abs() < IDENTITY_TOL, "{} a={a} b={b} c={c}: {r}", w.warp());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn christoffels_torsion_free(s in unit_cube()) {
        for w in ambients(3) {
            let p = point(&w, &s);
            let gam = w.christoffels(&p).unwrap();
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        prop_assert_eq!(gam.get(a, b, c), gam.get(a, c, b));
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_christoffel_oracle(s in unit_cube(), x in raw_vector(), y in raw_vector(), z in raw_vector()) {
        for n in [2, 3] {
            for w in ambients(n) {
                let p = point(&w, &s);
                let (x, y, z) = (vector(n + 1, &x), vector(n + 1, &y), vector(n + 1, &z));
                let closed = w.curvature(&p, &x, &y, &z).unwrap();
                let oracle = curvature_from_christoffels(&w, &p, &x, &y, &z).unwrap();
                let diff = max_abs(&(&closed - &oracle));
                prop_assert!(diff < ORACLE_TOL, "{} at {:?}: {diff}", w.warp(), &*p);
            }
        }
    }

    #[test]
    fn space_forms_have_sectional_curvature_c(s in unit_cube(), x in raw_vector(), y in raw_vector()) {
        for model in space_form_models() {
            let w = model.build(3).unwrap();
            let p = point(&w, &s);
            let g = w.metric(&p).unwrap();
            let (x, y) = orthonormal_pair(&g, vector(4, &x), vector(4, &y));
            let k = w.curvature(&p, &x, &y, &y).unwrap().dot(&(&g * &x));
            prop_assert!((k - model.c).abs() < IDENTITY_TOL, "{}: {k}", model.name);
        }
    }
}

fn orthonormal_pair(g: &DMatrix<f64>, x: DVector<f64>, y: DVector<f64>) -> (DVector<f64>, DVector<f64>) {
    let ip = |a: &DVector<f64>, b: &DVector<f64>| a.dot(&(g * b));
    // Fall back to coordinate directions if the samples are nearly parallel.
    let (x, y) = if ip(&x, &x) * ip(&y, &y) - ip(&x, &y).powi(2) < 1e-3 {
        (
            DVector::from_fn(4, |i, _| (i == 0) as u8 as f64),
            DVector::from_fn(4, |i, _| (i == 1) as u8 as f64),
        )
    } else {
        (x, y)
    };
    let x = &x / ip(&x, &x).sqrt();
    let y = &y - &x * ip(&x, &y);
    let y = &y / ip(&y, &y).sqrt();
    (x, y)
}

#[test]
fn hyperbolic_horospherical_sectional_curvature_is_minus_one() {
    let w = WarpedProduct::from_text(Interval::real_line(), "exp(t)", Fiber::Flat, 3).unwrap();
    let p = AmbientPoint::new(&w, vec![0.7, 0.1, -0.4, 1.3]).unwrap();
    let g = w.metric(&p).unwrap();
    for (x, y) in [
        ([1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]),
        ([0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]),
        ([0.3, -0.2, 0.5, 0.1], [0.0, 0.4, 0.1, -0.7]),
    ] {
        let (x, y) = orthonormal_pair(&g, DVector::from_row_slice(&x), DVector::from_row_slice(&y));
        let oracle = curvature_from_christoffels(&w, &p, &x, &y, &y).unwrap().dot(&(&g * &x));
        let closed = w.curvature(&p, &x, &y, &y).unwrap().dot(&(&g * &x));
        assert!((oracle + 1.0).abs() < ORACLE_TOL, "{oracle}");
        assert!((closed + 1.0).abs() < IDENTITY_TOL, "{closed}");
    }
}

#[test]
fn ambient_metric_examples() {
    let w = WarpedProduct::from_text(Interval::real_line(), "exp(t)", Fiber::Flat, 2).unwrap();
    let g = w.metric(&AmbientPoint::new(&w, vec![0.0, 5.0, 7.0]).unwrap()).unwrap();
    assert_eq!(g, DMatrix::identity(3, 3));
    let g = w.metric(&AmbientPoint::new(&w, vec![1.0, 0.0, 0.0]).unwrap()).unwrap();
    let e2 = w.warp().eval(&[1.0]).unwrap().powi(2);
    assert_eq!(g, DMatrix::from_diagonal(&DVector::from_row_slice(&[1.0, e2, e2])));

    let w = WarpedProduct::from_text(Interval::new(0.0, PI).unwrap(), "sin(t)", Fiber::Sphere, 2).unwrap();
    let g = w
        .metric(&AmbientPoint::new(&w, vec![PI / 2.0, PI / 2.0, 1.0]).unwrap())
        .unwrap();
    assert!((g - DMatrix::identity(3, 3)).amax() < 1e-15);
}

#[test]
fn horospherical_christoffels() {
    let w = WarpedProduct::from_text(Interval::real_line(), "exp(t)", Fiber::Flat, 2).unwrap();
    for t in [-0.8, 0.0, 1.1] {
        let gam = w
            .christoffels(&AmbientPoint::new(&w, vec![t, 0.2, 0.3]).unwrap())
            .unwrap();
        let e2t = (2.0 * t).exp();
        assert!((gam.get(1, 0, 1) - 1.0).abs() < 1e-14);
        assert!((gam.get(2, 0, 2) - 1.0).abs() < 1e-14);
        assert!((gam.get(0, 1, 1) + e2t).abs() < 1e-13 * e2t);
        assert!((gam.get(0, 2, 2) + e2t).abs() < 1e-13 * e2t);
        assert_eq!(gam.get(0, 0, 0), 0.0);
    }
    let flat = WarpedProduct::from_text(Interval::real_line(), "1", Fiber::Flat, 3).unwrap();
    let gam = flat
        .christoffels(&AmbientPoint::new(&flat, vec![0.4, 1.0, 2.0, 3.0]).unwrap())
        .unwrap();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                assert_eq!(gam.get(a, b, c), 0.0);
            }
        }
    }
}

#[test]
fn space_form_table_passes_and_wrong_pair_fails() {
    for model in space_form_models() {
        let w = model.build(2).unwrap();
        let r = w.check_space_form(model.c, &w.interval().probe_grid(200)).unwrap();
        assert!(r.pass, "{}: {r:?}", model.name);
    }
    let wrong = WarpedProduct::from_text(Interval::real_line(), "exp(t)", Fiber::Sphere, 2).unwrap();
    let r = wrong.check_space_form(-1.0, &wrong.interval().probe_grid(200)).unwrap();
    assert!(!r.pass);
    assert!(r.metric_residual > 1e-3);
}
