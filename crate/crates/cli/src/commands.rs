//! The `spaceforms`, `analyze`, `rotational` and `presets` commands.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use yamabe_core::ambient::space_form_models;
use yamabe_core::catalogue::PRESETS;
use yamabe_core::hypersurface::shape_data;
use yamabe_core::rotational::{
    build_rotational, rotational_grid, solve_profile, verify_classification, ProfileCurve, RotationalProfile,
};
use yamabe_core::soliton::{
    check_hypotheses, report_from_samples, sample_from_shape, sample_grid, structural_identity, ConditionKind,
    HypothesisReport, PointSample, SolitonReport, Verdict, FD_TOL, SOLITON_TOL,
};
use yamabe_core::{ChartGrid, Error, Fiber, Immersion, Interval, WarpedProduct};

use crate::mesh::{Mesh, MESH_WARNING};
use crate::report::{
    finite, CheckEntry, ConditionEntry, ReportDocument, SolitonBlock, Status, Timing, ToolInfo, WorstPoint,
    SCHEMA_VERSION,
};
use crate::scene::{load_scene, CheckName, PrepareError, Scene};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Probes per model for the space-form table.
pub const SPACE_FORM_PROBES: usize = 200;

#[derive(Debug)]
pub enum CmdError {
    /// Bad scene, flags or output path.
    Usage(String),
    /// A numerical domain problem, located on the chart when possible.
    Numeric { message: String, point: Option<Vec<f64>> },
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Usage(_) => EXIT_USAGE,
            CmdError::Numeric { .. } => EXIT_NUMERIC,
        }
    }
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Usage(m) => write!(f, "{m}"),
            CmdError::Numeric {
                message,
                point: Some(p),
            } => write!(f, "{message} (at chart point {p:?})"),
            CmdError::Numeric { message, point: None } => write!(f, "{message}"),
        }
    }
}

impl From<PrepareError> for CmdError {
    fn from(e: PrepareError) -> Self {
        match e {
            PrepareError::Scene(s) => CmdError::Usage(format!("scene error: {s}")),
            PrepareError::Numeric(e) => numeric(e, None),
        }
    }
}

fn numeric(e: Error, point: Option<Vec<f64>>) -> CmdError {
    let point = point.or_else(|| match &e {
        Error::DegenerateImmersion { point, .. } | Error::BoundaryTooClose { point, .. } => Some(point.clone()),
        _ => None,
    });
    CmdError::Numeric {
        message: e.to_string(),
        point,
    }
}

/// Configuration problems become usage errors, everything else numeric.
fn classify(e: Error) -> CmdError {
    match e {
        Error::Expr(_)
        | Error::InvalidAmbient(_)
        | Error::InvalidImmersion(_)
        | Error::InvalidGrid(_)
        | Error::InvalidProfile(_)
        | Error::GridTooCoarse { .. } => CmdError::Usage(e.to_string()),
        other => numeric(other, None),
    }
}

/// Sample the grid; on failure find the first offending point.
fn samples_located(imm: &Immersion, grid: &ChartGrid) -> Result<Vec<PointSample>, CmdError> {
    sample_grid(imm, grid).map_err(|e| {
        for p in grid.points() {
            if let Err(err) = shape_data(imm, &p).map(|sd| sample_from_shape(imm, &sd)) {
                return numeric(err, Some(p));
            }
        }
        numeric(e, None)
    })
}

// ---------------------------------------------------------------- spaceforms

/// One row of the space-form table.
#[derive(Clone, Debug)]
pub struct SpaceFormRow {
    pub name: String,
    pub warp: String,
    pub k: f64,
    pub c: f64,
    pub metric_residual: f64,
    pub ode_residual: f64,
    pub pass: bool,
}

/// The five model rows, plus the deliberately wrong pair
/// `(f = e^t, k = 1, c = -1)` when `inject_wrong` is set.
pub fn space_form_rows(inject_wrong: bool) -> Result<Vec<SpaceFormRow>, CmdError> {
    let mut models: Vec<(String, WarpedProduct, f64)> = space_form_models()
        .iter()
        .map(|m| Ok((m.name.to_string(), m.build(2).map_err(classify)?, m.c)))
        .collect::<Result<_, CmdError>>()?;
    if inject_wrong {
        let w = WarpedProduct::from_text(Interval::real_line(), "exp(t)", Fiber::Sphere, 2).map_err(classify)?;
        models.push(("wrong pair (exp, sphere fiber)".into(), w, -1.0));
    }
    models
        .into_iter()
        .map(|(name, w, c)| {
            let probes = w.interval().probe_grid(SPACE_FORM_PROBES);
            let r = w.check_space_form(c, &probes).map_err(classify)?;
            Ok(SpaceFormRow {
                name,
                warp: w.warp().to_string(),
                k: r.k,
                c,
                metric_residual: r.metric_residual,
                ode_residual: r.ode_residual,
                pass: r.pass,
            })
        })
        .collect()
}

pub fn cmd_spaceforms(inject_wrong: bool, out: &mut dyn Write) -> i32 {
    let rows = match space_form_rows(inject_wrong) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            return e.exit_code();
        }
    };
    let _ = writeln!(
        out,
        "{:<42} {:<8} {:>3} {:>4} {:>12} {:>12}  status",
        "model", "f", "k", "c", "metric res", "ode res"
    );
    for r in &rows {
        let _ = writeln!(
            out,
            "{:<42} {:<8} {:>3} {:>4} {:>12.3e} {:>12.3e}  {}",
            r.name,
            r.warp,
            r.k,
            r.c,
            r.metric_residual,
            r.ode_residual,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    let _ = writeln!(out, "{passed}/{} pass", rows.len());
    if passed == rows.len() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

// ------------------------------------------------------------------ checks

fn argmax(samples: &[PointSample], f: impl Fn(&PointSample) -> f64) -> Option<WorstPoint> {
    samples.iter().max_by(|a, b| f(a).total_cmp(&f(b))).map(|s| WorstPoint {
        point: s.point.clone(),
        value: f(s),
    })
}

fn sup_entry(name: &str, samples: &[PointSample], tol: f64, f: impl Fn(&PointSample) -> f64 + Copy) -> CheckEntry {
    let worst = argmax(samples, f);
    let sup = worst.as_ref().map_or(0.0, |w| w.value);
    CheckEntry {
        name: name.into(),
        status: Status::from_pass(sup < tol),
        sup_error: finite(sup),
        tolerance: Some(tol),
        worst: worst.filter(|w| w.value.is_finite()),
        conditions: vec![],
        note: None,
    }
}

fn soliton_block(rep: &SolitonReport) -> SolitonBlock {
    let (lo, hi) = rep.lambda_range();
    SolitonBlock {
        verdict: match rep.verdict {
            Verdict::Soliton => "soliton".into(),
            Verdict::NotSoliton => "not_soliton".into(),
        },
        classification: rep.classification.name().into(),
        residual_sup: finite(rep.residual_sup),
        lambda_min: finite(lo),
        lambda_max: finite(hi),
        lambda_advisory: rep.verdict == Verdict::NotSoliton,
    }
}

fn hypothesis_entry(name: &str, rep: &HypothesisReport) -> CheckEntry {
    if let Some(reason) = &rep.not_applicable {
        return CheckEntry {
            name: name.into(),
            status: Status::NotApplicable,
            sup_error: None,
            tolerance: None,
            worst: None,
            conditions: vec![],
            note: Some(reason.clone()),
        };
    }
    let mut conditions = Vec::new();
    for o in &rep.orientations {
        for c in &o.conditions {
            conditions.push(ConditionEntry {
                orientation: Some(o.label.to_string()),
                name: c.name.to_string(),
                pass: c.pass,
                value: finite(c.worst_margin),
                tolerance: match c.kind {
                    ConditionKind::Identity => Some(SOLITON_TOL),
                    ConditionKind::Inequality => None,
                },
                point: Some(c.worst_point.clone()),
            });
        }
    }
    // Worst offender of the best orientation.
    let violation = |c: &yamabe_core::soliton::Condition| match c.kind {
        ConditionKind::Inequality => (-c.worst_margin).max(0.0),
        ConditionKind::Identity => c.worst_margin,
    };
    let best = rep.orientations.iter().min_by(|a, b| {
        let va = a.conditions.iter().map(violation).fold(0.0, f64::max);
        let vb = b.conditions.iter().map(violation).fold(0.0, f64::max);
        va.total_cmp(&vb)
    });
    let worst = best.and_then(|o| {
        o.conditions
            .iter()
            .max_by(|a, b| violation(a).total_cmp(&violation(b)))
            .filter(|c| c.worst_margin.is_finite())
            .map(|c| WorstPoint {
                point: c.worst_point.clone(),
                value: c.worst_margin,
            })
    });
    CheckEntry {
        name: name.into(),
        status: Status::from_pass(rep.pass),
        sup_error: finite(rep.sup_error()),
        tolerance: None,
        worst,
        conditions,
        note: Some("pass means at least one orientation of the normal satisfies every condition".into()),
    }
}

fn classification_entry(curve: &ProfileCurve, grid: &ChartGrid) -> Result<CheckEntry, CmdError> {
    let rep = verify_classification(curve, grid).map_err(classify)?;
    let conditions: Vec<ConditionEntry> = rep
        .checks
        .iter()
        .map(|c| ConditionEntry {
            orientation: None,
            name: c.name.to_string(),
            pass: c.pass,
            value: finite(c.value),
            tolerance: Some(c.tolerance),
            point: None,
        })
        .collect();
    let sup = rep.checks.iter().map(|c| c.value).fold(0.0, f64::max);
    Ok(CheckEntry {
        name: "rotational-classification".into(),
        status: Status::from_pass(rep.classified_soliton),
        sup_error: finite(sup),
        tolerance: None,
        worst: None,
        conditions,
        note: None,
    })
}

fn run_checks(
    imm: &Immersion,
    grid: &ChartGrid,
    checks: &[CheckName],
    curve: Option<&ProfileCurve>,
) -> Result<(Vec<CheckEntry>, SolitonBlock), CmdError> {
    let samples = samples_located(imm, grid)?;
    let rep = report_from_samples(grid.points(), samples);
    let mut entries = Vec::with_capacity(checks.len());
    for check in checks {
        let name = check.label();
        let entry = match check {
            CheckName::Lemma1 => sup_entry(&name, &rep.samples, SOLITON_TOL, |s| s.lemma1_error),
            CheckName::Trace => sup_entry(&name, &rep.samples, 1e-8, |s| s.trace_error),
            CheckName::Soliton => sup_entry(&name, &rep.samples, SOLITON_TOL, |s| s.residual),
            CheckName::Structural => match structural_identity(imm, grid) {
                Ok(s) => CheckEntry {
                    name,
                    status: Status::from_pass(s.sup_error < FD_TOL),
                    sup_error: finite(s.sup_error),
                    tolerance: Some(FD_TOL),
                    worst: finite(s.sup_error).map(|v| WorstPoint {
                        point: s.worst_point.clone(),
                        value: v,
                    }),
                    conditions: vec![],
                    note: None,
                },
                Err(Error::NotApplicable(reason)) => CheckEntry {
                    name,
                    status: Status::NotApplicable,
                    sup_error: None,
                    tolerance: Some(FD_TOL),
                    worst: None,
                    conditions: vec![],
                    note: Some(reason),
                },
                Err(e @ (Error::GridTooCoarse { .. } | Error::InvalidGrid(_))) => {
                    return Err(CmdError::Usage(format!("grid: structural check: {e}")));
                }
                Err(e) => return Err(classify(e)),
            },
            CheckName::Theorem(t) => {
                let r = check_hypotheses(imm, grid, *t).map_err(classify)?;
                hypothesis_entry(&name, &r)
            }
            CheckName::SpaceForm(c) => {
                let w = imm.ambient();
                let r = w
                    .check_space_form(*c, &w.interval().probe_grid(SPACE_FORM_PROBES))
                    .map_err(classify)?;
                CheckEntry {
                    name,
                    status: Status::from_pass(r.pass),
                    sup_error: finite(r.metric_residual.max(r.ode_residual)),
                    tolerance: Some(yamabe_core::ambient::SPACE_FORM_TOL),
                    worst: None,
                    conditions: vec![],
                    note: None,
                }
            }
            CheckName::RotationalClassification => {
                let curve = curve.ok_or_else(|| {
                    CmdError::Usage("checks: rotational-classification needs a rotational preset".into())
                })?;
                classification_entry(curve, grid)?
            }
        };
        entries.push(entry);
    }
    Ok((entries, soliton_block(&rep)))
}

fn print_summary(out: &mut dyn Write, doc: &ReportDocument) {
    for c in &doc.checks {
        let sup = c.sup_error.map_or("-".to_string(), |s| format!("{s:.3e}"));
        let _ = writeln!(out, "{:<28} {:<15} sup_error {sup}", c.name, c.status.label());
        if let Some(note) = &c.note {
            if c.status == Status::NotApplicable {
                let _ = writeln!(out, "    {note}");
            }
        }
    }
    if let Some(s) = &doc.soliton {
        let lam = match (s.lambda_min, s.lambda_max) {
            (Some(a), Some(b)) => format!("[{a:.6e}, {b:.6e}]"),
            _ => "-".into(),
        };
        let _ = writeln!(
            out,
            "verdict {} ({}), lambda in {lam}{}",
            s.verdict,
            s.classification,
            if s.lambda_advisory { " (advisory)" } else { "" }
        );
    }
    for w in &doc.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CmdError> {
    std::fs::write(path, contents).map_err(|e| CmdError::Usage(format!("cannot write {}: {e}", path.display())))
}

// ------------------------------------------------------------------ analyze

/// Paths resolved against the scene file's directory.
#[derive(Clone, Debug, Default)]
pub struct Outputs {
    pub report: Option<PathBuf>,
    pub mesh: Option<PathBuf>,
}

/// Run a parsed scene. Returns the report and, when requested, the mesh.
pub fn analyze_scene(scene: &Scene, want_mesh: bool) -> Result<(ReportDocument, Option<Mesh>), CmdError> {
    let start = Instant::now();
    let prepared = scene.prepare()?;
    let curve = match &prepared.profile {
        Some(p) => Some(solve_profile(p).map_err(classify)?),
        None => None,
    };
    let (checks, soliton) = run_checks(&prepared.immersion, &prepared.grid, &prepared.checks, curve.as_ref())?;
    let mut warnings = Vec::new();
    let mesh = if want_mesh {
        if prepared.immersion.n() != 2 {
            return Err(CmdError::Usage(format!(
                "output.mesh: mesh export needs a two-dimensional immersion (n = {})",
                prepared.immersion.n()
            )));
        }
        let axes = prepared.grid.axes();
        warnings.push(MESH_WARNING.to_string());
        Some(Mesh::sample(&prepared.immersion, &axes[0], &axes[1]).map_err(|e| numeric(e, None))?)
    } else {
        None
    };
    let doc = ReportDocument {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo::current(),
        scene: serde_json::to_value(scene).expect("scene serializes"),
        checks,
        soliton: Some(soliton),
        warnings,
        timing: Timing {
            seconds: start.elapsed().as_secs_f64(),
        },
    };
    Ok((doc, mesh))
}

fn resolve(base: &Path, p: &str) -> PathBuf {
    let p = Path::new(p);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

pub fn cmd_analyze(scene_path: &Path, overrides: &Outputs, out: &mut dyn Write) -> i32 {
    match analyze(scene_path, overrides, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            e.exit_code()
        }
    }
}

fn analyze(scene_path: &Path, overrides: &Outputs, out: &mut dyn Write) -> Result<i32, CmdError> {
    let scene = load_scene(scene_path).map_err(|e| CmdError::Usage(format!("scene error: {e}")))?;
    let base = scene_path.parent().unwrap_or(Path::new("."));
    let from_scene = |f: fn(&crate::scene::OutputSpec) -> Option<&String>| {
        scene.output.as_ref().and_then(f).map(|p| resolve(base, p))
    };
    let report_path = overrides.report.clone().or_else(|| from_scene(|o| o.report.as_ref()));
    let mesh_path = overrides.mesh.clone().or_else(|| from_scene(|o| o.mesh.as_ref()));
    let (doc, mesh) = analyze_scene(&scene, mesh_path.is_some())?;
    print_summary(out, &doc);
    if let Some(p) = &report_path {
        write_file(p, &doc.to_json())?;
    }
    if let (Some(p), Some(m)) = (&mesh_path, &mesh) {
        write_file(
            p,
            &m.to_obj(&format!("yamabe {}\n{MESH_WARNING}", env!("CARGO_PKG_VERSION"))),
        )?;
    }
    Ok(if doc.all_pass() { EXIT_PASS } else { EXIT_FAIL })
}

// --------------------------------------------------------------- rotational

#[derive(Clone, Debug, serde::Serialize)]
pub struct RotationalArgs {
    pub theta: f64,
    pub f: String,
    pub n: usize,
    pub c1: f64,
    /// `None` anchors `c2` so the soliton relation holds at `u0`.
    pub c2: Option<f64>,
    pub u0: f64,
    pub u1: f64,
    pub lo: f64,
    pub hi: f64,
    /// Lattice points per chart axis for the checks, and along `u` in the mesh.
    pub samples: usize,
    /// Points around the rotation circle in the mesh.
    pub angular_samples: usize,
}

impl Default for RotationalArgs {
    fn default() -> Self {
        RotationalArgs {
            theta: std::f64::consts::FRAC_1_SQRT_2,
            f: "exp(t)".into(),
            n: 2,
            c1: 0.0,
            c2: None,
            u0: 0.0,
            u1: 3.0,
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            samples: 9,
            angular_samples: 48,
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Build, verify and optionally mesh a rotational hypersurface.
pub fn rotational_run(args: &RotationalArgs, want_mesh: bool) -> Result<(ReportDocument, Option<Mesh>), CmdError> {
    let start = Instant::now();
    if !(args.theta > 0.0 && args.theta < 1.0) {
        return Err(CmdError::Usage(format!(
            "--theta must lie in (0, 1), got {}",
            args.theta
        )));
    }
    if !(args.samples >= 3) || args.samples > 200 {
        return Err(CmdError::Usage("--samples must be between 3 and 200".into()));
    }
    if !(args.angular_samples >= 3) || args.angular_samples > 2000 {
        return Err(CmdError::Usage("--angular-samples must be between 3 and 2000".into()));
    }
    if want_mesh && args.n != 2 {
        return Err(CmdError::Usage(format!("mesh export needs --n 2, got {}", args.n)));
    }
    let interval = Interval::new(args.lo, args.hi).map_err(classify)?;
    let prof = RotationalProfile::from_text(
        args.theta,
        &args.f,
        args.n,
        args.c1,
        args.c2,
        (args.u0, args.u1),
        interval,
    )
    .map_err(classify)?;
    let curve = solve_profile(&prof).map_err(classify)?;
    let imm = build_rotational(&curve).map_err(classify)?;
    let grid = rotational_grid(&prof, &vec![args.samples; args.n]).map_err(classify)?;
    let checks = [
        CheckName::RotationalClassification,
        CheckName::Soliton,
        CheckName::Lemma1,
    ];
    let (entries, soliton) = run_checks(&imm, &grid, &checks, Some(&curve))?;

    let mut warnings = Vec::new();
    let mesh = if want_mesh {
        warnings.push(MESH_WARNING.to_string());
        let us = linspace(args.u0, args.u1, args.samples);
        let vs = linspace(0.0, 2.0 * std::f64::consts::PI, args.angular_samples);
        Some(Mesh::sample(&imm, &us, &vs).map_err(|e| numeric(e, None))?)
    } else {
        None
    };
    let mut scene = serde_json::to_value(args).expect("flags serialize");
    scene["c2"] = serde_json::json!(prof.c2);
    for key in ["lo", "hi"] {
        if !scene[key].is_number() {
            let v = if key == "lo" { args.lo } else { args.hi };
            scene[key] = serde_json::json!(if v > 0.0 { "inf" } else { "-inf" });
        }
    }
    let doc = ReportDocument {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo::current(),
        scene,
        checks: entries,
        soliton: Some(soliton),
        warnings,
        timing: Timing {
            seconds: start.elapsed().as_secs_f64(),
        },
    };
    Ok((doc, mesh))
}

pub fn cmd_rotational(args: &RotationalArgs, outputs: &Outputs, out: &mut dyn Write) -> i32 {
    let mut run = || -> Result<i32, CmdError> {
        let (doc, mesh) = rotational_run(args, outputs.mesh.is_some())?;
        print_summary(out, &doc);
        if let Some(p) = &outputs.report {
            write_file(p, &doc.to_json())?;
        }
        if let (Some(p), Some(m)) = (&outputs.mesh, &mesh) {
            let header = format!(
                "yamabe {} rotational theta={} f={} c1={} u=[{}, {}]\n{MESH_WARNING}",
                env!("CARGO_PKG_VERSION"),
                args.theta,
                args.f,
                args.c1,
                args.u0,
                args.u1
            );
            write_file(p, &m.to_obj(&header))?;
        }
        Ok(if doc.all_pass() { EXIT_PASS } else { EXIT_FAIL })
    };
    match run() {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            e.exit_code()
        }
    }
}

// ------------------------------------------------------------------ presets

pub fn cmd_presets(out: &mut dyn Write) -> i32 {
    for p in PRESETS {
        let _ = writeln!(out, "{:<12} {}", p.name, p.summary);
        let _ = writeln!(out, "{:<12} params: {}", "", p.params.join(", "));
    }
    EXIT_PASS
}
