//! The gradient almost Yamabe soliton equation `Hess h = (scal - lambda) g`
//! with the height function as potential.
//!
//! `lambda` is always recovered from the trace, `lambda = scal - Delta h / n`;
//! it only means something once the trace-free part of `Hess h` vanishes.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::ChartGrid;
use crate::hypersurface::{flip_orientation, shape_data, Immersion, ShapeData};
use crate::intrinsic::{curvature_from_shape, CurvaturePackage};
use crate::linalg::{generalized_sym_eigenvalues, max_abs};

/// Soliton threshold on the trace-free Hessian (jet-exact paths).
pub const SOLITON_TOL: f64 = 1e-7;
/// Threshold for anything computed by finite differences.
pub const FD_TOL: f64 = 1e-4;
/// Absolute threshold for the trivial / steady / sign classification.
pub const CLASSIFICATION_TOL: f64 = 1e-8;
/// Largest lattice spacing accepted by [`structural_identity`].
pub const MAX_FD_SPACING: f64 = 1e-2;
/// Slack allowed on pointwise inequalities.
pub const INEQUALITY_SLACK: f64 = 1e-9;
/// `sup |H|` below which a hypersurface counts as minimal.
pub const MINIMAL_TOL: f64 = 1e-8;

/// `Hess h` from the warped-product identity
/// `(f'/f)(h) (g - dh (x) dh) + theta II`.
pub fn hessian_lemma(sd: &ShapeData) -> DMatrix<f64> {
    let lf1 = sd.log_warp_1();
    (&sd.g - &sd.dh * sd.dh.transpose()) * lf1 + &sd.second_form * sd.theta
}

/// `Hess h_ij = d_i d_j h - Gamma^k_ij d_k h` with the induced connection.
pub fn hessian_direct(sd: &ShapeData) -> DMatrix<f64> {
    let n = sd.n();
    let gamma = sd.induced_christoffels();
    DMatrix::from_fn(n, n, |i, j| {
        let corr: f64 = (0..n).map(|k| gamma.get(k, i, j) * sd.dh[k]).sum();
        sd.hess_coords[(i, j)] - corr
    })
}

/// Both Hessian paths at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct HessianPair {
    pub lemma: DMatrix<f64>,
    pub direct: DMatrix<f64>,
}

impl HessianPair {
    /// `max |lemma - direct|` over entries.
    pub fn discrepancy(&self) -> f64 {
        max_abs(&(&self.lemma - &self.direct))
    }
}

pub fn hessian_height(imm: &Immersion, p: &[f64]) -> Result<HessianPair> {
    let sd = shape_data(imm, p)?;
    Ok(HessianPair {
        lemma: hessian_lemma(&sd),
        direct: hessian_direct(&sd),
    })
}

/// `lambda = scal - tr_g(Hess h) / n` at `p`.
pub fn soliton_lambda(imm: &Immersion, p: &[f64]) -> Result<f64> {
    let sd = shape_data(imm, p)?;
    Ok(sample_from_shape(imm, &sd).lambda)
}

/// Everything the soliton checks need at one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSample {
    pub point: Vec<f64>,
    pub h: f64,
    pub theta: f64,
    pub mean_curvature: f64,
    pub grad_h_norm2: f64,
    pub scal: f64,
    pub lambda: f64,
    /// `Delta h`.
    pub laplacian: f64,
    /// `g`-operator norm of `Hess h - (Delta h / n) g`.
    pub residual: f64,
    /// `max |lemma - direct|`.
    pub lemma1_error: f64,
    /// `|tr_g Hess h - ((f'/f)(n - |grad h|^2) + n theta H)|`.
    pub trace_error: f64,
    /// `[f, f', f'']` at `h`.
    pub warp: [f64; 3],
    pub shape_norm2: f64,
}

/// Evaluate the soliton quantities from (possibly flipped) shape data.
pub fn sample_from_shape(imm: &Immersion, sd: &ShapeData) -> PointSample {
    let pkg = curvature_from_shape(imm, sd);
    sample_with_curvature(sd, &pkg)
}

fn sample_with_curvature(sd: &ShapeData, pkg: &CurvaturePackage) -> PointSample {
    let n = sd.n() as f64;
    let direct = hessian_direct(sd);
    let lemma = hessian_lemma(sd);
    let laplacian = (&sd.g_inv * &direct).trace();
    let tracefree = &direct - &sd.g * (laplacian / n);
    let tracefree = (&tracefree + tracefree.transpose()) * 0.5;
    let residual = generalized_sym_eigenvalues(&tracefree, &sd.g)
        .expect("first fundamental form is SPD")
        .into_iter()
        .fold(0.0f64, |m, e| m.max(e.abs()));
    let lf1 = sd.log_warp_1();
    let trace_lemma = lf1 * (n - sd.grad_h_norm2) + n * sd.theta * sd.mean_curvature;
    PointSample {
        point: sd.point.clone(),
        h: sd.h,
        theta: sd.theta,
        mean_curvature: sd.mean_curvature,
        grad_h_norm2: sd.grad_h_norm2,
        scal: pkg.scal_gauss,
        lambda: pkg.scal_gauss - laplacian / n,
        laplacian,
        residual,
        lemma1_error: max_abs(&(&lemma - &direct)),
        trace_error: (laplacian - trace_lemma).abs(),
        warp: sd.warp,
        shape_norm2: sd.shape_norm2(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Soliton,
    NotSoliton,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Trivial,
    Expanding,
    Steady,
    Shrinking,
    SignChanging,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::Trivial => "trivial",
            Classification::Expanding => "expanding",
            Classification::Steady => "steady",
            Classification::Shrinking => "shrinking",
            Classification::SignChanging => "sign_changing",
        }
    }
}

/// Classify sampled `lambda` and `|grad h|`.
pub fn classify(samples: &[PointSample]) -> Classification {
    let sup_grad = samples
        .iter()
        .map(|s| s.grad_h_norm2.max(0.0).sqrt())
        .fold(0.0, f64::max);
    if sup_grad < CLASSIFICATION_TOL {
        return Classification::Trivial;
    }
    let lambdas = samples.iter().map(|s| s.lambda);
    if lambdas.clone().all(|l| l.abs() < CLASSIFICATION_TOL) {
        Classification::Steady
    } else if lambdas.clone().all(|l| l < -CLASSIFICATION_TOL) {
        Classification::Expanding
    } else if lambdas.clone().all(|l| l > CLASSIFICATION_TOL) {
        Classification::Shrinking
    } else {
        Classification::SignChanging
    }
}

/// Grid-wide soliton check.
#[derive(Clone, Debug, PartialEq)]
pub struct SolitonReport {
    pub grid: Vec<Vec<f64>>,
    pub samples: Vec<PointSample>,
    pub residual_sup: f64,
    /// Index of the point attaining `residual_sup`.
    pub residual_argmax: usize,
    pub lambda_samples: Vec<f64>,
    pub verdict: Verdict,
    pub classification: Classification,
    /// Sup-errors of identities that hold for every immersion:
    /// `lemma1` (two Hessian paths) and `trace` (traced identity).
    pub identity_checks: BTreeMap<String, f64>,
}

impl SolitonReport {
    pub fn lambda_range(&self) -> (f64, f64) {
        self.lambda_samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &l| {
                (lo.min(l), hi.max(l))
            })
    }
}

/// Sample every grid point in parallel; order follows the grid.
pub fn sample_grid(imm: &Immersion, grid: &ChartGrid) -> Result<Vec<PointSample>> {
    grid.points()
        .par_iter()
        .map(|p| {
            let sd = shape_data(imm, p)?;
            Ok(sample_from_shape(imm, &sd))
        })
        .collect()
}

pub fn soliton_residual(imm: &Immersion, grid: &ChartGrid) -> Result<SolitonReport> {
    let samples = sample_grid(imm, grid)?;
    Ok(report_from_samples(grid.points(), samples))
}

/// Assemble a report from already evaluated samples.
pub fn report_from_samples(grid: Vec<Vec<f64>>, samples: Vec<PointSample>) -> SolitonReport {
    let (residual_argmax, residual_sup) =
        samples.iter().enumerate().fold(
            (0, 0.0f64),
            |(bi, bv), (i, s)| if s.residual > bv { (i, s.residual) } else { (bi, bv) },
        );
    let sup = |f: fn(&PointSample) -> f64| samples.iter().map(f).fold(0.0, f64::max);
    let mut identity_checks = BTreeMap::new();
    identity_checks.insert("lemma1".to_string(), sup(|s| s.lemma1_error));
    identity_checks.insert("trace".to_string(), sup(|s| s.trace_error));
    let verdict = if residual_sup < SOLITON_TOL {
        Verdict::Soliton
    } else {
        Verdict::NotSoliton
    };
    SolitonReport {
        grid,
        lambda_samples: samples.iter().map(|s| s.lambda).collect(),
        classification: classify(&samples),
        samples,
        residual_sup,
        residual_argmax,
        verdict,
        identity_checks,
    }
}

/// Result of the finite-difference identity
/// `Ric(grad h) + (n - 1) grad(scal - lambda) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuralReport {
    pub sup_error: f64,
    pub worst_point: Vec<f64>,
    /// Interior lattice points where the identity was evaluated.
    pub evaluated: usize,
}

pub fn structural_identity(imm: &Immersion, grid: &ChartGrid) -> Result<StructuralReport> {
    let spacing = grid.max_spacing();
    // Relative slack so a lattice built at exactly the limit is accepted.
    if spacing > MAX_FD_SPACING * (1.0 + 1e-9) {
        return Err(Error::GridTooCoarse {
            spacing,
            limit: MAX_FD_SPACING,
        });
    }
    if grid.shape().iter().any(|&s| s < 3) {
        return Err(Error::InvalidGrid(
            "finite differences need at least 3 samples per axis".into(),
        ));
    }
    let points = grid.points();
    let evaluated: Vec<(PointSample, DVector<f64>, DMatrix<f64>)> = points
        .par_iter()
        .map(|p| {
            let sd = shape_data(imm, p)?;
            let pkg = curvature_from_shape(imm, &sd);
            let ric_grad = &pkg.ric * &sd.grad_h;
            Ok((sample_with_curvature(&sd, &pkg), ric_grad, sd.g_inv.clone()))
        })
        .collect::<Result<_>>()?;
    let residual_sup = evaluated.iter().map(|e| e.0.residual).fold(0.0, f64::max);
    if residual_sup >= SOLITON_TOL {
        return Err(Error::NotApplicable(format!(
            "not a soliton on this grid (trace-free residual {residual_sup:e})"
        )));
    }
    let n = grid.dim();
    let axes = grid.axes();
    let mut sup_error = 0.0f64;
    let mut worst_point = points[0].clone();
    let mut count = 0;
    for k in 0..points.len() {
        let idx = grid.unravel(k);
        if idx.iter().zip(axes).any(|(&i, a)| i == 0 || i + 1 == a.len()) {
            continue;
        }
        let (_, ric_grad, g_inv) = &evaluated[k];
        let mut omega = ric_grad.clone();
        for j in 0..n {
            let mut up = idx.clone();
            let mut dn = idx.clone();
            up[j] += 1;
            dn[j] -= 1;
            let phi = |m: &[usize]| {
                let s = &evaluated[grid.ravel(m)].0;
                s.scal - s.lambda
            };
            let d = (phi(&up) - phi(&dn)) / (axes[j][up[j]] - axes[j][dn[j]]);
            omega[j] += (n as f64 - 1.0) * d;
        }
        let err = omega.dot(&(g_inv * &omega)).max(0.0).sqrt();
        count += 1;
        if err > sup_error {
            sup_error = err;
            worst_point = points[k].clone();
        }
    }
    Ok(StructuralReport {
        sup_error,
        worst_point,
        evaluated: count,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Theorem {
    /// Compact solitons in `I x_f M` with curvature and mean-curvature bounds.
    Theorem1,
    /// Minimal solitons: `n (scal - lambda) = (f'/f)(n - 1 + theta^2)`.
    Theorem3,
    /// `lambda >= -n(n-1) f''/f + n^2 H^2` with `k <= (f')^2 - f f''`.
    Theorem4a,
    /// `lambda >= n(n-1)(H^2 - f''/f)` with `k <= (f')^2 - f f''`.
    Theorem4b,
    /// Space forms: `lambda >= (n-1) c + n H^2`.
    Theorem5,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::Theorem1 => "theorem1",
            Theorem::Theorem3 => "theorem3",
            Theorem::Theorem4a => "theorem4a",
            Theorem::Theorem4b => "theorem4b",
            Theorem::Theorem5 => "theorem5",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionKind {
    /// Holds when the margin is `>= -INEQUALITY_SLACK`.
    Inequality,
    /// Holds when `|margin| < SOLITON_TOL`.
    Identity,
}

/// One hypothesis evaluated over the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub name: &'static str,
    pub kind: ConditionKind,
    pub pass: bool,
    /// Smallest margin (inequalities) or largest error (identities).
    pub worst_margin: f64,
    pub worst_point: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrientationResult {
    /// `"as_oriented"` or `"flipped"`.
    pub label: &'static str,
    pub conditions: Vec<Condition>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisReport {
    pub theorem: Theorem,
    /// `None` when applicable, otherwise the reason it is not.
    pub not_applicable: Option<String>,
    pub orientations: Vec<OrientationResult>,
    /// True when some orientation satisfies every condition.
    pub pass: bool,
}

impl HypothesisReport {
    /// Largest violation over the best orientation (0 when it passes).
    pub fn sup_error(&self) -> f64 {
        self.orientations
            .iter()
            .map(|o| {
                o.conditions
                    .iter()
                    .map(|c| match c.kind {
                        ConditionKind::Inequality => (-c.worst_margin).max(0.0),
                        ConditionKind::Identity => c.worst_margin,
                    })
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

struct Accum {
    name: &'static str,
    kind: ConditionKind,
    worst: f64,
    point: Vec<f64>,
}

impl Accum {
    fn new(name: &'static str, kind: ConditionKind) -> Self {
        let worst = match kind {
            ConditionKind::Inequality => f64::INFINITY,
            ConditionKind::Identity => 0.0,
        };
        Accum {
            name,
            kind,
            worst,
            point: Vec::new(),
        }
    }

    fn push(&mut self, value: f64, p: &[f64]) {
        let worse = match self.kind {
            ConditionKind::Inequality => value < self.worst || self.point.is_empty(),
            ConditionKind::Identity => value.abs() > self.worst || self.point.is_empty(),
        };
        if worse {
            self.worst = match self.kind {
                ConditionKind::Inequality => value,
                ConditionKind::Identity => value.abs(),
            };
            self.point = p.to_vec();
        }
    }

    fn finish(self) -> Condition {
        let pass = match self.kind {
            ConditionKind::Inequality => self.worst >= -INEQUALITY_SLACK,
            ConditionKind::Identity => self.worst < SOLITON_TOL,
        };
        Condition {
            name: self.name,
            kind: self.kind,
            pass,
            worst_margin: self.worst,
            worst_point: self.point,
        }
    }
}

/// `|theta|^{-1} (log f)'`, with `0/0` read as 0 and overflow clamped.
fn angle_quotient(lf1: f64, theta: f64) -> f64 {
    if theta.abs() < crate::hypersurface::THETA_TIE {
        if lf1.abs() < 1e-12 {
            0.0
        } else {
            lf1.signum() * 1e300
        }
    } else {
        (lf1 / theta.abs()).clamp(-1e300, 1e300)
    }
}

/// Evaluate the pointwise hypotheses of `which` over the grid, once for
/// each orientation of the normal.
pub fn check_hypotheses(imm: &Immersion, grid: &ChartGrid, which: Theorem) -> Result<HypothesisReport> {
    let sds: Vec<ShapeData> = grid
        .points()
        .par_iter()
        .map(|p| shape_data(imm, p))
        .collect::<Result<_>>()?;
    let w = imm.ambient();
    let k = w.k();
    let n = imm.n() as f64;

    let mut not_applicable = None;
    let mut space_form_c = 0.0;
    match which {
        Theorem::Theorem3 => {
            let sup_h = sds.iter().map(|s| s.mean_curvature.abs()).fold(0.0, f64::max);
            if sup_h >= MINIMAL_TOL {
                not_applicable = Some(format!("not minimal: sup |H| = {sup_h:e}"));
            }
        }
        Theorem::Theorem5 => {
            let [f, _, f2] = sds[0].warp;
            space_form_c = -f2 / f;
            let probes = w.interval().probe_grid(200);
            let rep = w.check_space_form(space_form_c, &probes)?;
            if !rep.pass {
                not_applicable = Some(format!(
                    "ambient is not a space form (residuals {:e}, {:e} for c = {space_form_c})",
                    rep.metric_residual, rep.ode_residual
                ));
            }
        }
        _ => {}
    }
    if let Some(reason) = not_applicable {
        return Ok(HypothesisReport {
            theorem: which,
            not_applicable: Some(reason),
            orientations: Vec::new(),
            pass: true,
        });
    }

    let mut orientations = Vec::with_capacity(2);
    for (label, flip) in [("as_oriented", false), ("flipped", true)] {
        let samples: Vec<PointSample> = sds
            .par_iter()
            .map(|sd| {
                if flip {
                    sample_from_shape(imm, &flip_orientation(sd))
                } else {
                    sample_from_shape(imm, sd)
                }
            })
            .collect();
        use ConditionKind::{Identity, Inequality};
        let mut acc: Vec<Accum> = match which {
            Theorem::Theorem1 => vec![
                Accum::new("fiber_curvature_lower_bound", Inequality),
                Accum::new("warp_convexity_bound", Inequality),
                Accum::new("angle_quotient_nonnegative", Inequality),
                Accum::new("angle_quotient_below_mean_curvature", Inequality),
            ],
            Theorem::Theorem3 => vec![
                Accum::new("warp_nondecreasing", Inequality),
                Accum::new("minimal_trace_identity", Identity),
            ],
            Theorem::Theorem4a => vec![
                Accum::new("fiber_curvature_upper_bound", Inequality),
                Accum::new("lambda_lower_bound", Inequality),
            ],
            Theorem::Theorem4b => vec![
                Accum::new("fiber_curvature_upper_bound", Inequality),
                Accum::new("lambda_lower_bound", Inequality),
            ],
            Theorem::Theorem5 => vec![Accum::new("lambda_lower_bound", Inequality)],
        };
        for s in &samples {
            let [f, f1, f2] = s.warp;
            let lf1 = f1 / f;
            let hh = s.mean_curvature;
            let p = &s.point;
            match which {
                Theorem::Theorem1 => {
                    acc[0].push(k - (f1 * f1 - f * f2), p);
                    acc[1].push((n + 1.0) / (n * n) * hh * hh - f2 / f, p);
                    let q = angle_quotient(lf1, s.theta);
                    acc[2].push(q, p);
                    acc[3].push(hh - q, p);
                }
                Theorem::Theorem3 => {
                    acc[0].push(f1, p);
                    let lhs = n * (s.scal - s.lambda);
                    let rhs = lf1 * (n - 1.0 + s.theta * s.theta);
                    acc[1].push(lhs - rhs, p);
                }
                Theorem::Theorem4a => {
                    acc[0].push((f1 * f1 - f * f2) - k, p);
                    acc[1].push(s.lambda - (-n * (n - 1.0) * f2 / f + n * n * hh * hh), p);
                }
                Theorem::Theorem4b => {
                    acc[0].push((f1 * f1 - f * f2) - k, p);
                    acc[1].push(s.lambda - n * (n - 1.0) * (hh * hh - f2 / f), p);
                }
                Theorem::Theorem5 => {
                    acc[0].push(s.lambda - ((n - 1.0) * space_form_c + n * hh * hh), p);
                }
            }
        }
        let conditions: Vec<Condition> = acc.into_iter().map(Accum::finish).collect();
        let pass = conditions.iter().all(|c| c.pass);
        orientations.push(OrientationResult {
            label,
            conditions,
            pass,
        });
    }
    let pass = orientations.iter().any(|o| o.pass);
    Ok(HypothesisReport {
        theorem: which,
        not_applicable: None,
        orientations,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{Fiber, Interval, WarpedProduct};
    use crate::hypersurface::{CatalogueTag, ChartBox};

    fn horosphere() -> Immersion {
        let w = WarpedProduct::from_text(Interval::real_line(), "exp(t)", Fiber::Flat, 2).unwrap();
        let chart = ChartBox::new(ChartBox::default_names(2), vec![-1.0; 2], vec![1.0; 2]).unwrap();
        Immersion::from_text(w, chart, &["0.25", "u", "v1"], CatalogueTag::Horosphere).unwrap()
    }

    #[test]
    fn slice_is_trivial() {
        let imm = horosphere();
        let grid = ChartGrid::new(imm.chart(), &[5, 5], &[0.1, 0.1]).unwrap();
        let rep = soliton_residual(&imm, &grid).unwrap();
        assert_eq!(rep.verdict, Verdict::Soliton);
        assert_eq!(rep.classification, Classification::Trivial);
        for s in &rep.samples {
            assert!((s.lambda - s.scal).abs() < 1e-12);
        }
        assert!(rep.identity_checks["lemma1"] < 1e-12);
    }

    #[test]
    fn horosphere_theorem1_needs_flipped_normal() {
        let imm = horosphere();
        let grid = ChartGrid::new(imm.chart(), &[3, 3], &[0.1, 0.1]).unwrap();
        let rep = check_hypotheses(&imm, &grid, Theorem::Theorem1).unwrap();
        let as_is = &rep.orientations[0];
        let flipped = &rep.orientations[1];
        let below = |o: &OrientationResult| {
            o.conditions
                .iter()
                .find(|c| c.name == "angle_quotient_below_mean_curvature")
                .unwrap()
                .clone()
        };
        assert!(!below(as_is).pass);
        assert!((below(as_is).worst_margin + 2.0).abs() < 1e-12);
        assert!(below(flipped).pass);
        assert!(below(flipped).worst_margin.abs() < 1e-12);
    }

    #[test]
    fn classification_thresholds() {
        let mk = |lambda: f64, g: f64| PointSample {
            point: vec![],
            h: 0.0,
            theta: 0.0,
            mean_curvature: 0.0,
            grad_h_norm2: g,
            scal: 0.0,
            lambda,
            laplacian: 0.0,
            residual: 0.0,
            lemma1_error: 0.0,
            trace_error: 0.0,
            warp: [1.0, 0.0, 0.0],
            shape_norm2: 0.0,
        };
        assert_eq!(classify(&[mk(5.0, 0.0)]), Classification::Trivial);
        assert_eq!(classify(&[mk(1e-9, 1.0), mk(-1e-9, 1.0)]), Classification::Steady);
        assert_eq!(classify(&[mk(-1.0, 1.0), mk(-0.5, 1.0)]), Classification::Expanding);
        assert_eq!(classify(&[mk(1.0, 1.0), mk(0.5, 1.0)]), Classification::Shrinking);
        assert_eq!(classify(&[mk(1.0, 1.0), mk(-0.5, 1.0)]), Classification::SignChanging);
        assert_eq!(classify(&[mk(1.0, 1.0), mk(0.0, 1.0)]), Classification::SignChanging);
    }

    #[test]
    fn coarse_grid_rejected() {
        let imm = horosphere();
        let grid = ChartGrid::new(imm.chart(), &[5, 5], &[0.1, 0.1]).unwrap();
        assert!(matches!(
            structural_identity(&imm, &grid),
            Err(Error::GridTooCoarse { .. })
        ));
    }
}
