//! Scene files: TOML documents naming an ambient, an immersion, a grid and
//! the checks to run.
//!
//! ```toml
//! checks = ["lemma1", "soliton", "theorem1", "spaceform c=-1"]
//!
//! [ambient]
//! interval = ["-inf", "inf"]
//! f = "exp(t)"
//! fiber = "euclidean"
//! n = 2
//!
//! [immersion]
//! components = ["0.3", "u", "v1"]
//! chart = { variables = ["u", "v1"], lo = [-1, -1], hi = [1, 1] }
//!
//! [grid]
//! samples = [5, 5]
//!
//! [output]
//! report = "report.json"
//! ```
//!
//! Unknown keys are rejected everywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use yamabe_core::catalogue::{self, ParamValue};
use yamabe_core::hypersurface::{CatalogueTag, ChartBox};
use yamabe_core::rotational::RotationalProfile;
use yamabe_core::{ChartGrid, Fiber, Immersion, Interval, WarpedProduct};

/// Default grid margin as a fraction of each chart axis.
pub const DEFAULT_MARGIN_FRACTION: f64 = 0.05;
/// Smallest accepted sample count per axis.
pub const MIN_SAMPLES: usize = 3;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    #[serde(default)]
    pub checks: Vec<String>,
    pub ambient: Option<AmbientSpec>,
    pub immersion: ImmersionSpec,
    pub grid: GridSpec,
    pub output: Option<OutputSpec>,
}

/// An interval endpoint: a number or one of the strings `"inf"`, `"-inf"`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Bound {
    Number(f64),
    Text(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AmbientSpec {
    pub interval: [Bound; 2],
    pub f: String,
    pub fiber: String,
    pub n: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ImmersionSpec {
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, Param>,
    pub components: Option<Vec<String>>,
    pub chart: Option<ChartSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Param {
    Number(f64),
    Text(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub variables: Vec<String>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

/// Either a lattice over the whole chart (`samples`, optional `margins`) or
/// a small box around `center` of half-width `half`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub samples: Vec<usize>,
    pub margins: Option<Vec<f64>>,
    pub center: Option<Vec<f64>>,
    pub half: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub report: Option<String>,
    pub mesh: Option<String>,
}

/// A scene problem, naming the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for SceneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.field, self.message)
        }
    }
}

impl std::error::Error for SceneError {}

fn bad(field: &str, message: impl fmt::Display) -> SceneError {
    SceneError {
        field: field.to_string(),
        message: message.to_string(),
    }
}

/// A check requested by a scene.
#[derive(Clone, Debug, PartialEq)]
pub enum CheckName {
    Lemma1,
    Soliton,
    Trace,
    Structural,
    Theorem(yamabe_core::soliton::Theorem),
    SpaceForm(f64),
    RotationalClassification,
}

impl CheckName {
    pub fn parse(s: &str) -> Result<Self, String> {
        use yamabe_core::soliton::Theorem::*;
        let s = s.trim();
        Ok(match s {
            "lemma1" => CheckName::Lemma1,
            "soliton" => CheckName::Soliton,
            "trace" => CheckName::Trace,
            "structural" => CheckName::Structural,
            "theorem1" => CheckName::Theorem(Theorem1),
            "theorem3" => CheckName::Theorem(Theorem3),
            "theorem4a" => CheckName::Theorem(Theorem4a),
            "theorem4b" => CheckName::Theorem(Theorem4b),
            "theorem5" => CheckName::Theorem(Theorem5),
            "rotational-classification" => CheckName::RotationalClassification,
            _ => {
                let rest = s
                    .strip_prefix("spaceform")
                    .map(str::trim_start)
                    .and_then(|r| r.strip_prefix("c"))
                    .map(str::trim_start)
                    .and_then(|r| r.strip_prefix('='))
                    .ok_or_else(|| format!("unknown check '{s}'"))?;
                let c: f64 = rest.trim().parse().map_err(|_| format!("cannot read c in '{s}'"))?;
                if !c.is_finite() {
                    return Err(format!("c must be finite in '{s}'"));
                }
                CheckName::SpaceForm(c)
            }
        })
    }

    /// Name as it appears in reports.
    pub fn label(&self) -> String {
        match self {
            CheckName::Lemma1 => "lemma1".into(),
            CheckName::Soliton => "soliton".into(),
            CheckName::Trace => "trace".into(),
            CheckName::Structural => "structural".into(),
            CheckName::Theorem(t) => t.name().into(),
            CheckName::SpaceForm(c) => format!("spaceform c={c}"),
            CheckName::RotationalClassification => "rotational-classification".into(),
        }
    }
}

/// Everything needed to run a scene.
pub struct Prepared {
    pub immersion: Immersion,
    pub grid: ChartGrid,
    pub checks: Vec<CheckName>,
    pub profile: Option<RotationalProfile>,
}

pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    toml::from_str(text).map_err(|e| bad("", e.message().trim_end()).with_span(text, e.span()))
}

impl SceneError {
    fn with_span(mut self, text: &str, span: Option<std::ops::Range<usize>>) -> Self {
        if let Some(r) = span {
            let line = text[..r.start.min(text.len())].matches('\n').count() + 1;
            self.message = format!("line {line}: {}", self.message);
        }
        self
    }
}

pub fn load_scene(path: &Path) -> Result<Scene, SceneError> {
    let text = std::fs::read_to_string(path).map_err(|e| bad("", format!("cannot read {}: {e}", path.display())))?;
    parse_scene(&text)
}

fn bound(b: &Bound, field: &str) -> Result<f64, SceneError> {
    match b {
        Bound::Number(x) => Ok(*x),
        Bound::Text(s) => match s.as_str() {
            "inf" | "+inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            _ => Err(bad(
                field,
                format!("expected a number, \"inf\" or \"-inf\", got \"{s}\""),
            )),
        },
    }
}

fn ambient(spec: &AmbientSpec) -> Result<WarpedProduct, SceneError> {
    let lo = bound(&spec.interval[0], "ambient.interval")?;
    let hi = bound(&spec.interval[1], "ambient.interval")?;
    let interval = Interval::new(lo, hi).map_err(|e| bad("ambient.interval", e))?;
    let fiber = match spec.fiber.as_str() {
        "euclidean" => Fiber::Flat,
        "sphere" => Fiber::Sphere,
        other => {
            return Err(bad(
                "ambient.fiber",
                format!("expected \"euclidean\" or \"sphere\", got \"{other}\""),
            ))
        }
    };
    if spec.n == 0 || spec.n > 16 {
        return Err(bad("ambient.n", "expected an integer between 1 and 16"));
    }
    WarpedProduct::from_text(interval, &spec.f, fiber, spec.n).map_err(|e| bad("ambient.f", e))
}

fn chart(spec: &ChartSpec) -> Result<ChartBox, SceneError> {
    ChartBox::new(spec.variables.clone(), spec.lo.clone(), spec.hi.clone()).map_err(|e| bad("immersion.chart", e))
}

fn params(spec: &ImmersionSpec) -> BTreeMap<String, ParamValue> {
    spec.params
        .iter()
        .map(|(k, v)| {
            let v = match v {
                Param::Number(x) => ParamValue::Number(*x),
                Param::Text(s) => ParamValue::Text(s.clone()),
            };
            (k.clone(), v)
        })
        .collect()
}

/// Classify a core error raised while building the immersion: geometry
/// problems stay numeric, the rest are scene errors.
fn build_error(field: &str, e: yamabe_core::Error) -> PrepareError {
    use yamabe_core::Error::*;
    match e {
        Domain(_)
        | SingularMetric { .. }
        | DegenerateImmersion { .. }
        | BoundaryTooClose { .. }
        | QuadratureFailure { .. }
        | SigmaZero { .. }
        | OutsideChart(_) => PrepareError::Numeric(e),
        other => PrepareError::Scene(bad(field, other)),
    }
}

#[derive(Debug)]
pub enum PrepareError {
    Scene(SceneError),
    Numeric(yamabe_core::Error),
}

impl From<SceneError> for PrepareError {
    fn from(e: SceneError) -> Self {
        PrepareError::Scene(e)
    }
}

impl Scene {
    /// Validate the scene and build its immersion and grid.
    pub fn prepare(&self) -> Result<Prepared, PrepareError> {
        let checks = self
            .checks
            .iter()
            .map(|c| CheckName::parse(c).map_err(|m| bad("checks", m)))
            .collect::<Result<Vec<_>, _>>()?;
        if checks.is_empty() {
            return Err(bad("checks", "no checks requested").into());
        }
        for (i, c) in checks.iter().enumerate() {
            if checks[..i].contains(c) {
                return Err(bad("checks", format!("'{}' is listed twice", c.label())).into());
            }
        }

        let im = &self.immersion;
        let (immersion, profile) = match (&im.preset, &im.components) {
            (Some(_), Some(_)) => {
                return Err(bad("immersion", "give either preset or components, not both").into());
            }
            (None, None) => return Err(bad("immersion", "needs a preset or a components list").into()),
            (Some(name), None) => {
                if im.chart.is_some() {
                    return Err(bad("immersion.chart", "presets define their own chart").into());
                }
                let amb = match (&self.ambient, name.as_str()) {
                    (Some(a), "slice") => Some(ambient(a)?),
                    (None, "slice") => return Err(bad("ambient", "preset slice needs an ambient section").into()),
                    (Some(_), _) => {
                        return Err(bad("ambient", format!("preset {name} defines its own ambient")).into());
                    }
                    (None, _) => None,
                };
                let params = params(im);
                let profile =
                    catalogue::preset_profile(name, &params).map_err(|e| build_error("immersion.params", e))?;
                let imm =
                    catalogue::build_preset(name, amb, &params).map_err(|e| build_error("immersion.preset", e))?;
                (imm, profile)
            }
            (None, Some(components)) => {
                if !im.params.is_empty() {
                    return Err(bad("immersion.params", "parameters only apply to presets").into());
                }
                let amb = ambient(
                    self.ambient
                        .as_ref()
                        .ok_or_else(|| bad("ambient", "missing ambient section"))?,
                )?;
                let ch = chart(
                    im.chart
                        .as_ref()
                        .ok_or_else(|| bad("immersion.chart", "missing chart"))?,
                )?;
                let refs: Vec<&str> = components.iter().map(String::as_str).collect();
                let imm = Immersion::from_text(amb, ch, &refs, CatalogueTag::Custom)
                    .map_err(|e| build_error("immersion.components", e))?;
                (imm, None)
            }
        };

        let grid = self.grid(immersion.chart())?;
        if checks.contains(&CheckName::RotationalClassification) && profile.is_none() {
            return Err(bad("checks", "rotational-classification needs a rotational preset").into());
        }
        Ok(Prepared {
            immersion,
            grid,
            checks,
            profile,
        })
    }

    fn grid(&self, chart: &ChartBox) -> Result<ChartGrid, SceneError> {
        let g = &self.grid;
        let n = chart.dim();
        if g.samples.len() != n {
            return Err(bad(
                "grid.samples",
                format!("expected {n} sample counts, got {}", g.samples.len()),
            ));
        }
        if let Some(&s) = g.samples.iter().find(|&&s| s < MIN_SAMPLES) {
            return Err(bad(
                "grid.samples",
                format!("{s} samples on an axis; at least {MIN_SAMPLES} are required"),
            ));
        }
        if g.samples.iter().any(|&s| s > 10_000) || g.samples.iter().product::<usize>() > 1_000_000 {
            return Err(bad("grid.samples", "grid is too large"));
        }
        match (&g.center, g.half) {
            (Some(center), Some(half)) => {
                if g.margins.is_some() {
                    return Err(bad("grid.margins", "margins do not apply to a centred patch"));
                }
                if center.len() != n {
                    return Err(bad("grid.center", format!("expected {n} coordinates")));
                }
                if !(half > 0.0 && half.is_finite()) {
                    return Err(bad("grid.half", "expected a positive number"));
                }
                let axes: Vec<Vec<f64>> = (0..n)
                    .map(|i| {
                        let s = g.samples[i];
                        (0..s)
                            .map(|k| center[i] - half + 2.0 * half * k as f64 / (s - 1) as f64)
                            .collect()
                    })
                    .collect();
                let grid = ChartGrid::from_axes(axes).map_err(|e| bad("grid", e))?;
                for (i, &c) in center.iter().enumerate() {
                    if !(c - half > chart.lo[i] && c + half < chart.hi[i]) {
                        return Err(bad(
                            "grid.center",
                            format!("patch leaves the chart on axis {}", chart.names[i]),
                        ));
                    }
                }
                Ok(grid)
            }
            (None, None) => {
                let margins = match &g.margins {
                    Some(m) if m.len() != n => {
                        return Err(bad("grid.margins", format!("expected {n} margins, got {}", m.len())));
                    }
                    Some(m) => m.clone(),
                    None => (0..n)
                        .map(|i| DEFAULT_MARGIN_FRACTION * (chart.hi[i] - chart.lo[i]))
                        .collect(),
                };
                ChartGrid::new(chart, &g.samples, &margins).map_err(|e| bad("grid.margins", e))
            }
            _ => Err(bad("grid", "center and half go together")),
        }
    }
}
