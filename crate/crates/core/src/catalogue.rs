//! Named example immersions.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::ambient::{Fiber, Interval, WarpedProduct};
use crate::error::{Error, Result};
use crate::hypersurface::{CatalogueTag, ChartBox, Immersion};
use crate::rotational::{build_rotational, solve_profile, RotationalProfile};

/// Keep angular charts this far from their poles.
const ANGLE_MARGIN: f64 = 0.3;

/// Component strings of `radius * X(angles)` for the angular chart of the
/// unit sphere (`angles.len() + 1` entries). `radius = "1"` is omitted.
pub fn sphere_chart_components<S: AsRef<str>>(angles: &[S], radius: &str) -> Vec<String> {
    let mut out = Vec::with_capacity(angles.len() + 1);
    let mut prefix: Vec<String> = Vec::new();
    if radius != "1" {
        prefix.push(format!("({radius})"));
    }
    for a in angles {
        let mut factors = prefix.clone();
        factors.push(format!("cos({})", a.as_ref()));
        out.push(factors.join("*"));
        prefix.push(format!("sin({})", a.as_ref()));
    }
    out.push(if prefix.is_empty() {
        "1".to_string()
    } else {
        prefix.join("*")
    });
    out
}

/// Angular chart box of `S^n`: `(m, pi - m)` for all but the last angle,
/// `(m, 2 pi - m)` for the last.
fn angular_box(names: Vec<String>, margin: f64) -> Result<ChartBox> {
    let n = names.len();
    let lo = vec![margin; n];
    let hi = (0..n)
        .map(|i| if i + 1 == n { 2.0 * PI - margin } else { PI - margin })
        .collect();
    ChartBox::new(names, lo, hi)
}

fn unit_cube(n: usize) -> Result<ChartBox> {
    ChartBox::new(ChartBox::default_names(n), vec![-1.0; n], vec![1.0; n])
}

fn euclidean(n: usize) -> Result<WarpedProduct> {
    WarpedProduct::from_text(Interval::real_line(), "1", Fiber::Flat, n)
}

/// The slice `{t0} x M` in any warped product, charted by the fiber chart.
pub fn slice(ambient: WarpedProduct, t0: f64) -> Result<Immersion> {
    let n = ambient.n();
    let chart = match ambient.fiber() {
        Fiber::Flat => unit_cube(n)?,
        Fiber::Sphere => angular_box(ChartBox::default_names(n), ANGLE_MARGIN)?,
    };
    let mut comps = vec![format!("{t0:?}")];
    comps.extend(chart.names.iter().cloned());
    let refs: Vec<&str> = comps.iter().map(String::as_str).collect();
    let tag = if ambient.fiber() == Fiber::Flat && ambient.warp().to_string() == "exp(t)" {
        CatalogueTag::Horosphere
    } else {
        CatalogueTag::Slice
    };
    Immersion::from_text(ambient, chart, &refs, tag)
}

/// Horosphere `{t0} x R^n` of `R x_{e^t} R^n`.
pub fn horosphere(n: usize, t0: f64) -> Result<Immersion> {
    let w = WarpedProduct::from_text(Interval::real_line(), "exp(t)", Fiber::Flat, n)?;
    slice(w, t0)
}

/// Hyperplane `x_1 = 0` of Euclidean `R^{n+1} = R x_1 R^n`, parametrized
/// by `(u, v_1, ..., v_{n-1}) -> (u, 0, v_1, ..., v_{n-1})`.
pub fn hyperplane(n: usize) -> Result<Immersion> {
    let chart = unit_cube(n)?;
    let mut comps = vec![chart.names[0].clone(), "0".to_string()];
    comps.extend(chart.names[1..].iter().cloned());
    let refs: Vec<&str> = comps.iter().map(String::as_str).collect();
    Immersion::from_text(euclidean(n)?, chart, &refs, CatalogueTag::Hyperplane)
}

/// Unit sphere of `R^{n+1} = R x_1 R^n` with the outward normal; the height
/// is the first coordinate `cos u`.
pub fn unit_sphere(n: usize) -> Result<Immersion> {
    let names = ChartBox::default_names(n);
    let mut chart = angular_box(names, ANGLE_MARGIN)?;
    // Asymmetric in u so the centre has h > 0 and the orientation rule
    // picks the outward normal.
    chart.lo[0] = ANGLE_MARGIN;
    chart.hi[0] = 2.7;
    let comps = sphere_chart_components(&chart.names, "1");
    let refs: Vec<&str> = comps.iter().map(String::as_str).collect();
    Immersion::from_text(euclidean(n)?, chart, &refs, CatalogueTag::SphereInEuclidean)
}

/// Every built-in example immersion, with a short label: slices, the
/// hyperplane, spheres and rotational surfaces in dimensions 2 and 3, plus a
/// rotational non-soliton.
pub fn standard_catalogue() -> Result<Vec<(String, Immersion)>> {
    let mut out = Vec::new();
    for n in [2, 3] {
        out.push((format!("hyperplane n={n}"), hyperplane(n)?));
        out.push((format!("sphere n={n}"), unit_sphere(n)?));
        out.push((format!("horosphere n={n}"), horosphere(n, 0.3)?));
        let w = WarpedProduct::from_text(Interval::new(0.0, f64::INFINITY)?, "sinh(t)", Fiber::Sphere, n)?;
        out.push((format!("slice sinh n={n}"), slice(w, 1.0)?));
        let w = WarpedProduct::from_text(Interval::real_line(), "cosh(t)", Fiber::Flat, n)?;
        out.push((format!("slice cosh n={n}"), slice(w, 0.5)?));
        let prof = crate::rotational::example5_profile(n, (0.0, 2.0))?;
        out.push((format!("example5 n={n}"), build_rotational(&solve_profile(&prof)?)?));
    }
    let prof = RotationalProfile::from_text(0.5, "sin(t)", 2, 0.0, None, (0.5, 1.0), Interval::new(0.0, PI)?)?;
    out.push(("rotational sin".to_string(), build_rotational(&solve_profile(&prof)?)?));
    Ok(out)
}

/// Number of distinct perturbation families used by [`perturbed`].
pub const PERTURBATION_FAMILIES: usize = 4;

/// A smooth non-soliton immersion: one of four base shapes with a Gaussian
/// bump added to its components. `index` picks the family and the bump.
pub fn perturbed(index: usize) -> Result<Immersion> {
    let step = (index / PERTURBATION_FAMILIES) as f64;
    let eps = 0.05 + 0.02 * step;
    let (a, b) = (0.1 * step - 0.2, 0.3 - 0.05 * step);
    let bump = |u: &str, v: &str| format!("{eps:?}*exp(-(({u})-({a:?}))^2 - (({v})-({b:?}))^2)");
    match index % PERTURBATION_FAMILIES {
        0 => {
            let w = WarpedProduct::from_text(Interval::real_line(), "exp(t)", Fiber::Flat, 2)?;
            let comps = [
                format!("0.3 + 0.2*sin(u + v1) + {}", bump("u", "v1")),
                format!("u + {}", bump("v1", "u")),
                "v1".to_string(),
            ];
            from_strings(w, unit_cube(2)?, &comps)
        }
        1 => {
            let mut chart = angular_box(ChartBox::default_names(2), ANGLE_MARGIN)?;
            chart.hi[0] = 2.7;
            let radius = format!("1 + {}", bump("u - 1.2", "v1 - 3"));
            let comps = sphere_chart_components(&chart.names, &radius);
            from_strings(euclidean(2)?, chart, &comps)
        }
        2 => {
            let w = WarpedProduct::from_text(Interval::real_line(), "cosh(t)", Fiber::Flat, 2)?;
            let comps = [
                format!("u + {}*cos(2*v1)", bump("u", "0")),
                format!("v1 + {}", bump("u", "v1")),
                "0.2*u*v1".to_string(),
            ];
            from_strings(w, unit_cube(2)?, &comps)
        }
        _ => {
            let w = WarpedProduct::from_text(Interval::new(0.0, f64::INFINITY)?, "sinh(t)", Fiber::Sphere, 3)?;
            let chart = ChartBox::new(ChartBox::default_names(3), vec![-1.0, 0.5, 0.5], vec![1.0, 2.6, 5.7])?;
            let comps = [
                format!("1.5 + 0.2*sin(u) + {}", bump("u", "v1 - 1.5")),
                format!("1.2 + 0.3*u + {}", bump("v2 - 3", "u")),
                "v1".to_string(),
                "v2".to_string(),
            ];
            from_strings(w, chart, &comps)
        }
    }
}

fn from_strings(w: WarpedProduct, chart: ChartBox, comps: &[String]) -> Result<Immersion> {
    let refs: Vec<&str> = comps.iter().map(String::as_str).collect();
    Immersion::from_text(w, chart, &refs, CatalogueTag::Custom)
}

/// A preset parameter value.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamValue {
    Number(f64),
    Text(String),
}

#[derive(Clone, Copy, Debug)]
pub struct PresetInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [&'static str],
}

pub const PRESETS: &[PresetInfo] = &[
    PresetInfo {
        name: "slice",
        summary: "slice {t0} x M of the scene ambient (trivial soliton)",
        params: &["t0"],
    },
    PresetInfo {
        name: "horosphere",
        summary: "slice {t0} x R^n of R x_{e^t} R^n",
        params: &["n", "t0"],
    },
    PresetInfo {
        name: "hyperplane",
        summary: "hyperplane x_1 = 0 of Euclidean space (steady soliton)",
        params: &["n"],
    },
    PresetInfo {
        name: "sphere",
        summary: "unit sphere of Euclidean space, outward normal (shrinking soliton)",
        params: &["n"],
    },
    PresetInfo {
        name: "rotational",
        summary: "constant-angle rotational hypersurface of R x_f R^n",
        params: &["n", "theta", "f", "c1", "c2", "u0", "u1", "lo", "hi"],
    },
    PresetInfo {
        name: "example5",
        summary: "rotational soliton of hyperbolic space with theta = sqrt(2)/2",
        params: &["n", "u0", "u1"],
    },
];

struct Params<'a> {
    preset: &'a str,
    map: &'a BTreeMap<String, ParamValue>,
}

impl Params<'_> {
    fn number(&self, key: &str, default: Option<f64>) -> Result<f64> {
        match self.map.get(key) {
            Some(ParamValue::Number(x)) => Ok(*x),
            Some(ParamValue::Text(s)) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                _ => Err(self.bad(key, "expected a number")),
            },
            None => default.ok_or_else(|| self.bad(key, "is required")),
        }
    }

    fn optional_number(&self, key: &str) -> Result<Option<f64>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(ParamValue::Text(s)) if s == "auto" => Ok(None),
            Some(_) => self.number(key, None).map(Some),
        }
    }

    fn count(&self, key: &str, default: usize) -> Result<usize> {
        let x = self.number(key, Some(default as f64))?;
        if x.fract() != 0.0 || !(1.0..=16.0).contains(&x) {
            return Err(self.bad(key, "expected an integer between 1 and 16"));
        }
        Ok(x as usize)
    }

    fn text(&self, key: &str, default: &str) -> Result<String> {
        match self.map.get(key) {
            Some(ParamValue::Text(s)) => Ok(s.clone()),
            Some(ParamValue::Number(_)) => Err(self.bad(key, "expected a string")),
            None => Ok(default.to_string()),
        }
    }

    fn bad(&self, key: &str, what: &str) -> Error {
        Error::InvalidImmersion(format!("preset {}: parameter {key} {what}", self.preset))
    }
}

/// Build a preset by name. `ambient` is used by `slice` only.
pub fn build_preset(
    name: &str,
    ambient: Option<WarpedProduct>,
    params: &BTreeMap<String, ParamValue>,
) -> Result<Immersion> {
    let info = PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::InvalidImmersion(format!("unknown preset '{name}'")))?;
    if let Some(k) = params.keys().find(|k| !info.params.contains(&k.as_str())) {
        return Err(Error::InvalidImmersion(format!(
            "preset {name} does not take parameter {k} (accepted: {})",
            info.params.join(", ")
        )));
    }
    let p = Params {
        preset: name,
        map: params,
    };
    match name {
        "slice" => {
            let w = ambient.ok_or_else(|| Error::InvalidImmersion("preset slice needs an ambient section".into()))?;
            slice(w, p.number("t0", None)?)
        }
        "horosphere" => horosphere(p.count("n", 2)?, p.number("t0", Some(0.0))?),
        "hyperplane" => hyperplane(p.count("n", 2)?),
        "sphere" => unit_sphere(p.count("n", 2)?),
        "rotational" | "example5" => {
            let prof = preset_profile(name, params)?.expect("rotational presets have a profile");
            build_rotational(&solve_profile(&prof)?)
        }
        _ => unreachable!("preset table and match agree"),
    }
}

/// The profile behind a rotational preset (`rotational`, `example5`), or
/// `None` for the other presets.
pub fn preset_profile(name: &str, params: &BTreeMap<String, ParamValue>) -> Result<Option<RotationalProfile>> {
    let p = Params {
        preset: name,
        map: params,
    };
    match name {
        "rotational" => {
            let interval = Interval::new(
                p.number("lo", Some(f64::NEG_INFINITY))?,
                p.number("hi", Some(f64::INFINITY))?,
            )?;
            RotationalProfile::from_text(
                p.number("theta", None)?,
                &p.text("f", "exp(t)")?,
                p.count("n", 2)?,
                p.number("c1", Some(0.0))?,
                p.optional_number("c2")?,
                (p.number("u0", Some(0.0))?, p.number("u1", Some(3.0))?),
                interval,
            )
            .map(Some)
        }
        "example5" => crate::rotational::example5_profile(
            p.count("n", 2)?,
            (p.number("u0", Some(0.0))?, p.number("u1", Some(3.0))?),
        )
        .map(Some),
        _ => Ok(None),
    }
}
