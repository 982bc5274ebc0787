//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Tolerances and time budgets are pinned below.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use yamabe_cli::mesh::parse_obj_vertices;
use yamabe_core::ambient::space_form_models;
use yamabe_core::catalogue::{horosphere, hyperplane, perturbed, slice, standard_catalogue, unit_sphere};
use yamabe_core::hypersurface::shape_data;
use yamabe_core::intrinsic::curvature_package;
use yamabe_core::oracles::scalar_fd_oracle;
use yamabe_core::rotational::{
    build_rotational, example5_profile, rotational_grid, solve_profile, verify_classification, weingarten_closed_form,
    ProfileCurve, RotationalProfile,
};
use yamabe_core::soliton::{sample_from_shape, soliton_residual, structural_identity, SOLITON_TOL};
use yamabe_core::{
    flip_orientation, AmbientPoint, ChartGrid, Classification, Expression, Fiber, Immersion, Interval, Verdict,
    WarpedProduct,
};

const SPACE_FORM_RESIDUAL: f64 = 1e-10;
const SPACE_FORM_PROBES: usize = 200;
const SPACE_FORM_BUDGET: Duration = Duration::from_secs(1);
const HESSIAN_IDENTITY_TOL: f64 = 1e-7;
const HESSIAN_BUDGET: Duration = Duration::from_secs(30);
const PERTURBATIONS: usize = 20;
const UNIT_SPLIT_TOL: f64 = 1e-10;
const SCAL_FORMULA_TOL: f64 = 1e-6;
const SCAL_FD_TOL: f64 = 1e-3;
const LAMBDA_TOL: f64 = 1e-7;
const WEINGARTEN_TOL: f64 = 1e-6;
const SIGMA_FD_TOL: f64 = 1e-4;
const NOT_SOLITON_MIN_RESIDUAL: f64 = 1e-2;
const DICHOTOMY_BUDGET: Duration = Duration::from_secs(10);
const MESH_HEIGHT_TOL: f64 = 1e-12;
const MESH_RADIUS_TOL: f64 = 1e-10;
const STRUCTURAL_TOL: f64 = 1e-4;
const PROPERTY_TOL: f64 = 1e-8;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<f64, String> {
    let secs = start.elapsed().as_secs_f64();
    ensure(start.elapsed() < budget, || {
        format!("took {secs:.2}s, budget {:?}", budget)
    })?;
    Ok(secs)
}

/// About 25 interior points: 5 x 5 in two dimensions, 3 x 3 x 3 in three.
fn grid25(imm: &Immersion) -> ChartGrid {
    let c = imm.chart();
    let n = c.dim();
    let margins: Vec<f64> = (0..n).map(|i| 0.05 * (c.hi[i] - c.lo[i])).collect();
    let samples = if n == 2 { vec![5, 5] } else { vec![3; n] };
    ChartGrid::new(c, &samples, &margins).expect("grid")
}

fn all_immersions() -> Vec<(String, Immersion)> {
    let mut all = standard_catalogue().expect("catalogue");
    all.extend((0..PERTURBATIONS).map(|i| (format!("perturbed {i}"), perturbed(i).expect("perturbation"))));
    all
}

fn example5(n: usize) -> Immersion {
    build_rotational(&solve_profile(&example5_profile(n, (0.0, 2.0)).unwrap()).unwrap()).unwrap()
}

fn space_form_table() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for m in space_form_models() {
        for n in [2, 3] {
            let w = m.build(n).map_err(|e| e.to_string())?;
            let r = w
                .check_space_form(m.c, &w.interval().probe_grid(SPACE_FORM_PROBES))
                .map_err(|e| e.to_string())?;
            let res = r.metric_residual.max(r.ode_residual);
            ensure(r.pass && res < SPACE_FORM_RESIDUAL, || {
                format!("{} n={n}: residual {res:e}", m.name)
            })?;
            worst = worst.max(res);
        }
    }
    let secs = within_budget(start, SPACE_FORM_BUDGET)?;
    Ok(format!("5 models, worst residual {worst:.1e}, {secs:.3}s"))
}

fn hessian_identity() -> Outcome {
    let start = Instant::now();
    let all = all_immersions();
    let mut worst = 0.0f64;
    for (name, imm) in &all {
        let grid = grid25(imm);
        let rep = soliton_residual(imm, &grid).map_err(|e| format!("{name}: {e}"))?;
        let err = rep.identity_checks["lemma1"];
        ensure(err < HESSIAN_IDENTITY_TOL, || format!("{name}: {err:e}"))?;
        worst = worst.max(err);
    }
    let secs = within_budget(start, HESSIAN_BUDGET)?;
    Ok(format!("{} immersions, worst {worst:.1e}, {secs:.2}s", all.len()))
}

fn unit_split() -> Outcome {
    let mut worst = 0.0f64;
    let mut points = 0;
    for (name, imm) in all_immersions() {
        for p in grid25(&imm).points() {
            let sd = shape_data(&imm, &p).map_err(|e| format!("{name}: {e}"))?;
            let err = (sd.grad_h_norm2 + sd.theta * sd.theta - 1.0).abs();
            ensure(err < UNIT_SPLIT_TOL, || format!("{name} at {p:?}: {err:e}"))?;
            worst = worst.max(err);
            points += 1;
        }
    }
    Ok(format!("{points} points, worst {worst:.1e}"))
}

fn scalar_triangulation() -> Outcome {
    let cases = [
        ("hyperplane", hyperplane(2).unwrap(), 0.0),
        ("unit 2-sphere", unit_sphere(2).unwrap(), 2.0),
        ("horosphere", horosphere(2, 0.3).unwrap(), 0.0),
        ("rotational example", example5(2), 0.0),
    ];
    let (mut formula, mut fd) = (0.0f64, 0.0f64);
    for (name, imm, expected) in &cases {
        for p in grid25(imm).points() {
            let pkg = curvature_package(imm, &p).map_err(|e| format!("{name}: {e}"))?;
            let oracle = scalar_fd_oracle(imm, &p).map_err(|e| format!("{name}: {e}"))?;
            let d_formula = (pkg.scal_gauss - pkg.scal_formula).abs();
            let d_fd = (pkg.scal_gauss - oracle).abs().max((pkg.scal_formula - oracle).abs());
            ensure(d_formula < SCAL_FORMULA_TOL, || {
                format!("{name} at {p:?}: gauss vs formula {d_formula:e}")
            })?;
            ensure(d_fd < SCAL_FD_TOL, || {
                format!("{name} at {p:?}: vs finite differences {d_fd:e}")
            })?;
            let off = (pkg.scal_gauss - expected).abs();
            ensure(off < SCAL_FORMULA_TOL, || {
                format!("{name}: scal {} expected {expected}", pkg.scal_gauss)
            })?;
            formula = formula.max(d_formula);
            fd = fd.max(d_fd);
        }
    }
    Ok(format!("gauss/formula {formula:.1e}, vs FD {fd:.1e}"))
}

fn worked_examples() -> Outcome {
    let check = |name: &str, imm: &Immersion, class: Classification| -> Result<Vec<_>, String> {
        let rep = soliton_residual(imm, &grid25(imm)).map_err(|e| format!("{name}: {e}"))?;
        ensure(
            rep.verdict == Verdict::Soliton && rep.residual_sup < SOLITON_TOL,
            || format!("{name}: residual {:e}", rep.residual_sup),
        )?;
        ensure(rep.classification == class, || {
            format!("{name}: {:?}", rep.classification)
        })?;
        Ok(rep.samples)
    };
    for s in check("hyperplane", &hyperplane(2).unwrap(), Classification::Steady)? {
        ensure(s.lambda.abs() < LAMBDA_TOL, || {
            format!("hyperplane lambda {}", s.lambda)
        })?;
    }
    let sinh = WarpedProduct::from_text(Interval::new(0.0, f64::INFINITY).unwrap(), "sinh(t)", Fiber::Sphere, 2)
        .map_err(|e| e.to_string())?;
    for (name, imm) in [
        ("horosphere", horosphere(2, 0.3).unwrap()),
        ("sinh slice", slice(sinh, 1.0).unwrap()),
    ] {
        for s in check(name, &imm, Classification::Trivial)? {
            ensure((s.lambda - s.scal).abs() < LAMBDA_TOL, || {
                format!("{name}: lambda {} scal {}", s.lambda, s.scal)
            })?;
        }
    }
    for s in check("rotational example", &example5(2), Classification::Steady)? {
        ensure(s.lambda.abs() < LAMBDA_TOL && s.scal.abs() < LAMBDA_TOL, || {
            format!("rotational example: lambda {} scal {}", s.lambda, s.scal)
        })?;
    }
    for n in [2, 3] {
        let nn = (n * (n - 1)) as f64;
        for s in check("sphere", &unit_sphere(n).unwrap(), Classification::Shrinking)? {
            let err = (s.lambda - (nn + s.h)).abs();
            ensure(err < LAMBDA_TOL, || {
                format!("sphere n={n}: lambda {} h {}", s.lambda, s.h)
            })?;
        }
    }
    Ok("hyperplane steady, slices trivial, rotational steady, spheres shrinking".into())
}

fn principal_curvatures(ii: &DMatrix<f64>, g: &DMatrix<f64>) -> Vec<f64> {
    let l_inv = g.clone().cholesky().unwrap().l().try_inverse().unwrap();
    let m = &l_inv * ii * l_inv.transpose();
    let m = (&m + m.transpose()) * 0.5;
    let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

fn weingarten_gap(c: &ProfileCurve, grid: &ChartGrid) -> Result<f64, String> {
    let imm = build_rotational(c).map_err(|e| e.to_string())?;
    let n = imm.n();
    let mut worst = 0.0f64;
    for p in grid.points() {
        let sd = shape_data(&imm, &p).map_err(|e| e.to_string())?;
        let (ku, kv) = weingarten_closed_form(c, p[0]).map_err(|e| e.to_string())?;
        let mut expected = vec![ku];
        expected.extend(std::iter::repeat_n(kv, n - 1));
        expected.sort_by(f64::total_cmp);
        let got = principal_curvatures(&sd.second_form, &sd.g);
        for (a, b) in got.iter().zip(&expected) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

fn dichotomy() -> Outcome {
    let start = Instant::now();
    let real = (f64::NEG_INFINITY, f64::INFINITY);
    let warps = [
        ("exp(t)", real, true),
        ("3*exp(2*t)", real, true),
        ("sin(t)", (0.0, PI), false),
        ("t^2 + 1", real, false),
        ("cosh(t)", real, false),
    ];
    let mut wein = 0.0f64;
    for (f, (lo, hi), soliton) in warps {
        let prof = RotationalProfile::from_text(0.5, f, 2, 0.0, None, (0.5, 1.0), Interval::new(lo, hi).unwrap())
            .map_err(|e| format!("{f}: {e}"))?;
        let curve = solve_profile(&prof).map_err(|e| format!("{f}: {e}"))?;
        let grid = rotational_grid(&prof, &[7, 5]).map_err(|e| e.to_string())?;
        let rep = verify_classification(&curve, &grid).map_err(|e| format!("{f}: {e}"))?;
        ensure(rep.classified_soliton == soliton, || {
            format!("{f}: classified {}", rep.classified_soliton)
        })?;
        if soliton {
            let sigma = rep.check("sigma_constant").map(|c| c.value).unwrap_or(f64::INFINITY);
            ensure(sigma < SIGMA_FD_TOL, || format!("{f}: sigma drift {sigma:e}"))?;
        } else {
            let rel = rep.check("soliton_relation").map(|c| c.value).unwrap_or(0.0);
            ensure(rel > NOT_SOLITON_MIN_RESIDUAL, || {
                format!("{f}: relation residual {rel:e}")
            })?;
        }
        let gap = weingarten_gap(&curve, &grid)?;
        ensure(gap < WEINGARTEN_TOL, || format!("{f}: principal curvature gap {gap:e}"))?;
        wein = wein.max(gap);
    }
    let secs = within_budget(start, DICHOTOMY_BUDGET)?;
    Ok(format!(
        "2 solitons, 3 non-solitons, curvature gap {wein:.1e}, {secs:.2}s"
    ))
}

fn surface_mesh() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mesh = dir.path().join("surface.obj");
    let (u0, u1, rows, cols) = (0.0, 3.0, 31, 40);
    let out = Command::new(env!("CARGO_BIN_EXE_yamabe"))
        .args([
            "rotational",
            "--theta",
            &FRAC_1_SQRT_2.to_string(),
            "--f",
            "exp(t)",
            "--n",
            "2",
        ])
        .args(["--u0", "0", "--u1", "3", "--samples", &rows.to_string()])
        .args(["--angular-samples", &cols.to_string(), "--mesh"])
        .arg(&mesh)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || format!("exit {:?}", out.status.code()))?;
    let text = std::fs::read_to_string(&mesh).map_err(|e| e.to_string())?;
    let verts = parse_obj_vertices(&text)?;
    ensure(verts.len() == rows * cols, || format!("{} vertices", verts.len()))?;
    let faces = text.lines().filter(|l| l.starts_with("f ")).count();
    ensure(faces == 2 * (rows - 1) * (cols - 1), || format!("{faces} faces"))?;

    let prof = RotationalProfile::from_text(FRAC_1_SQRT_2, "exp(t)", 2, 0.0, None, (u0, u1), Interval::real_line())
        .map_err(|e| e.to_string())?;
    let curve = solve_profile(&prof).map_err(|e| e.to_string())?;
    let (mut dt, mut dr) = (0.0f64, 0.0f64);
    for (k, v) in verts.iter().enumerate() {
        let u = u0 + (u1 - u0) * (k / cols) as f64 / (rows - 1) as f64;
        let beta = curve.beta(u).map_err(|e| e.to_string())?;
        dt = dt.max((v[0] - u / SQRT_2).abs());
        dr = dr.max((v[1].hypot(v[2]) - beta.abs()).abs());
    }
    ensure(dt < MESH_HEIGHT_TOL, || format!("height deviation {dt:e}"))?;
    ensure(dr < MESH_RADIUS_TOL, || format!("radius deviation {dr:e}"))?;
    Ok(format!("{} vertices, height {dt:.1e}, radius {dr:.1e}", verts.len()))
}

fn structural() -> Outcome {
    let cases = [
        (
            "sphere",
            unit_sphere(2).unwrap(),
            ChartGrid::patch(&[1.0, 2.0], 0.02, 5).unwrap(),
        ),
        (
            "3-sphere",
            unit_sphere(3).unwrap(),
            ChartGrid::patch(&[1.2, 1.5, 3.0], 0.01, 3).unwrap(),
        ),
        (
            "rotational soliton",
            example5(2),
            ChartGrid::patch(&[1.0, 3.0], 0.02, 5).unwrap(),
        ),
    ];
    let mut worst = 0.0f64;
    for (name, imm, grid) in &cases {
        let rep = structural_identity(imm, grid).map_err(|e| format!("{name}: {e}"))?;
        ensure(rep.sup_error < STRUCTURAL_TOL, || {
            format!("{name}: {:e}", rep.sup_error)
        })?;
        worst = worst.max(rep.sup_error);
    }
    Ok(format!("worst {worst:.1e}"))
}

// Property suites, driven by a deterministic proptest runner.

fn ambient_point(w: &WarpedProduct, s: &[f64]) -> AmbientPoint {
    let iv = w.interval();
    let t = match (iv.lo.is_finite(), iv.hi.is_finite()) {
        (true, true) => iv.lo + (iv.hi - iv.lo) * (0.1 + 0.8 * s[0]),
        (true, false) => iv.lo + 0.2 + 2.5 * s[0],
        _ => -1.5 + 3.0 * s[0],
    };
    let n = w.n();
    let mut coords = vec![t];
    for i in 0..n {
        coords.push(match w.fiber() {
            Fiber::Flat => 4.0 * s[i + 1] - 2.0,
            Fiber::Sphere if i + 1 == n => 0.3 + (2.0 * PI - 0.6) * s[i + 1],
            Fiber::Sphere => 0.3 + (PI - 0.6) * s[i + 1],
        });
    }
    AmbientPoint::new(w, coords).unwrap()
}

fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn ambient_properties() -> Result<(), String> {
    let mut ambients: Vec<WarpedProduct> = Vec::new();
    for n in [2, 3] {
        ambients.extend(space_form_models().iter().map(|m| m.build(n).unwrap()));
        ambients.push(WarpedProduct::from_text(Interval::real_line(), "t^2 + 1", Fiber::Flat, n).unwrap());
    }
    let unit = prop::collection::vec(0.0..1.0f64, 4);
    let vecs = prop::collection::vec(-1.0..1.0f64, 12);
    run_property(32, (unit, vecs), |(s, raw)| {
        for w in &ambients {
            let m = w.n() + 1;
            let p = ambient_point(w, &s);
            let v = |k: usize| DVector::from_iterator(m, raw[4 * k..4 * k + m].iter().copied());
            let (x, y, z) = (v(0), v(1), v(2));
            let r = |a: &DVector<f64>, b: &DVector<f64>, c: &DVector<f64>| w.curvature(&p, a, b, c).unwrap();
            let anti = (r(&x, &y, &z) + r(&y, &x, &z)).amax();
            prop_assert!(anti < PROPERTY_TOL, "{} antisymmetry {anti:e}", w.warp());
            let bianchi = (r(&x, &y, &z) + r(&y, &z, &x) + r(&z, &x, &y)).amax();
            prop_assert!(bianchi < PROPERTY_TOL, "{} Bianchi {bianchi:e}", w.warp());
            let (g, dg) = w.metric_with_derivatives(&p).unwrap();
            let gam = w.christoffels(&p).unwrap();
            for (a, dga) in dg.iter().enumerate() {
                for b in 0..m {
                    for c in 0..m {
                        let mut e = dga[(b, c)];
                        for d in 0..m {
                            e -= gam.get(d, a, b) * g[(d, c)] + gam.get(d, a, c) * g[(b, d)];
                        }
                        prop_assert!(e.abs() < PROPERTY_TOL, "{} metric compatibility {e:e}", w.warp());
                    }
                }
            }
        }
        Ok(())
    })
}

fn extrinsic_properties(all: &[(String, Immersion)]) -> Result<(), String> {
    run_property(16, prop::collection::vec(0.0..1.0f64, 3), |s| {
        for (name, imm) in all {
            let c = imm.chart();
            let p: Vec<f64> = (0..c.dim())
                .map(|i| c.lo[i] + (c.hi[i] - c.lo[i]) * (0.05 + 0.9 * s[i]))
                .collect();
            let sd = shape_data(imm, &p).unwrap();
            let ga = &sd.g * &sd.shape_operator;
            let asym = (&ga - ga.transpose()).amax();
            prop_assert!(asym < PROPERTY_TOL, "{name}: self-adjointness {asym:e}");
            let a = sample_from_shape(imm, &sd);
            let b = sample_from_shape(imm, &flip_orientation(&sd));
            prop_assert!(
                (a.lambda - b.lambda).abs() < 1e-12 * (1.0 + a.lambda.abs()),
                "{name}: lambda under flip"
            );
            prop_assert_eq!(
                a.residual < SOLITON_TOL,
                b.residual < SOLITON_TOL,
                "{}: verdict under flip",
                name
            );
        }
        Ok(())
    })
}

fn expression_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        (-3.0..3.0f64).prop_map(|c| format!("{c:.3}")),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})/(2 + cos({b}))")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("exp(tanh({a}))")),
            inner.clone().prop_map(|a| format!("sqrt(1 + ({a})^2)")),
            inner.prop_map(|a| format!("log(2 + sin({a}))")),
        ]
    })
}

fn jet_properties() -> Result<(), String> {
    const H: f64 = 1e-5;
    run_property(128, (expression_text(), [-1.0..1.0f64, -1.0..1.0f64]), |(text, p)| {
        let e = Expression::parse(&text, &["x", "y"]).unwrap();
        let jet = e.jet(&p, &[0, 1]).unwrap();
        for i in 0..2 {
            let (mut hi, mut lo) = (p, p);
            hi[i] += H;
            lo[i] -= H;
            let fd = (e.eval(&hi).unwrap() - e.eval(&lo).unwrap()) / (2.0 * H);
            prop_assert!(
                (jet.d(i) - fd).abs() < 1e-6 * (1.0 + fd.abs()),
                "{text}: d{i} {} vs {fd}",
                jet.d(i)
            );
            let (jh, jl) = (e.jet(&hi, &[0, 1]).unwrap(), e.jet(&lo, &[0, 1]).unwrap());
            for j in 0..2 {
                let fd2 = (jh.d(j) - jl.d(j)) / (2.0 * H);
                prop_assert!((jet.dd(i, j) - fd2).abs() < 1e-4 * (1.0 + fd2.abs()), "{text}: d{i}{j}");
            }
        }
        Ok(())
    })
}

fn property_suites() -> Outcome {
    ambient_properties().map_err(|e| format!("ambient: {e}"))?;
    let all = all_immersions();
    extrinsic_properties(&all).map_err(|e| format!("extrinsic: {e}"))?;
    jet_properties().map_err(|e| format!("jets: {e}"))?;
    Ok("curvature identities, self-adjointness, orientation flip, jets vs differences".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("space-form table", space_form_table),
        (
            "height Hessian identity on catalogue and perturbations",
            hessian_identity,
        ),
        ("gradient/angle unit split", unit_split),
        ("scalar curvature triangulation", scalar_triangulation),
        ("worked soliton examples", worked_examples),
        ("rotational classification dichotomy", dichotomy),
        ("rotational surface mesh", surface_mesh),
        ("structural identity on patches", structural),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {title}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {title}: {why}", k + 1);
            }
        }
    }
    println!("{}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
