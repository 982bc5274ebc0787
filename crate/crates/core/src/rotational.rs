//! Constant-angle rotational hypersurfaces in `R x_f R^n`.
//!
//! The profile `(alpha(u), beta(u))` is unit speed and makes a constant
//! angle `theta` with `d_t`:
//!
//! ```text
//! alpha(u) = u sqrt(1 - theta^2) + c1
//! beta(u)  = c2 + int_{u0}^{u} theta / f(alpha(s)) ds
//! psi(u, v) = (alpha(u), beta(u) X(v))
//! ```
//!
//! with `X` the angular parametrization of the unit sphere `S^{n-1}`.
//! Such a hypersurface is a soliton with potential `h` exactly when
//! `(f'/f)(h) (1 - theta^2) + theta sqrt(1 - theta^2) / sigma = 0`,
//! `sigma = f(alpha) beta`, which forces `(log f)'` to be constant.

use std::sync::Arc;

use crate::ambient::{Fiber, Interval, WarpedProduct};
use crate::catalogue::sphere_chart_components;
use crate::error::{Error, Result};
use crate::expr::{Context, Expression, Func, Node, ScalarFn};
use crate::grid::ChartGrid;
use crate::hypersurface::{CatalogueTag, ChartBox, Immersion};
use crate::quadrature::integrate;
use crate::soliton::{soliton_residual, FD_TOL, SOLITON_TOL};

/// Absolute tolerance of the profile quadrature.
pub const QUADRATURE_TOL: f64 = 1e-12;
/// `|sigma|` below this is treated as zero.
pub const SIGMA_MIN: f64 = 1e-12;
/// Finite-difference step for `sigma'`.
pub const SIGMA_FD_STEP: f64 = 1e-4;
/// Angles other than the last stay this far from the sphere-chart poles.
pub const POLE_MARGIN: f64 = 0.2;

/// Point of the unit sphere `S^{m}` from `m` angles:
/// `X_1 = cos v_1`, `X_2 = sin v_1 cos v_2`, ..., `X_{m+1} = sin v_1 ... sin v_m`.
pub fn sphere_chart(v: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(v.len() + 1);
    let mut prod = 1.0;
    for &a in v {
        out.push(prod * a.cos());
        prod *= a.sin();
    }
    out.push(prod);
    out
}

/// Input data of the construction.
#[derive(Clone, Debug)]
pub struct RotationalProfile {
    pub theta: f64,
    /// Warping function in `t`.
    pub f: Expression,
    /// Hypersurface dimension (fiber is `R^n`).
    pub n: usize,
    pub c1: f64,
    pub c2: f64,
    pub u_range: (f64, f64),
    /// Base interval of the ambient product.
    pub interval: Interval,
}

impl RotationalProfile {
    pub fn new(
        theta: f64,
        f: Expression,
        n: usize,
        c1: f64,
        c2: f64,
        u_range: (f64, f64),
        interval: Interval,
    ) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::InvalidProfile(format!("theta = {theta} is not in (0, 1)")));
        }
        if n < 2 {
            return Err(Error::InvalidProfile(format!("dimension n = {n} must be at least 2")));
        }
        let (u0, u1) = u_range;
        if !(u0.is_finite() && u1.is_finite() && u0 < u1) {
            return Err(Error::InvalidProfile(format!("u range ({u0}, {u1}) is empty")));
        }
        if !c1.is_finite() || !c2.is_finite() {
            return Err(Error::InvalidProfile("integration constants must be finite".into()));
        }
        if f.vars() != ["t"] {
            return Err(Error::InvalidProfile("f must be an expression in t alone".into()));
        }
        let prof = RotationalProfile {
            theta,
            f,
            n,
            c1,
            c2,
            u_range,
            interval,
        };
        for i in 0..=64 {
            let u = u0 + (u1 - u0) * i as f64 / 64.0;
            let a = prof.alpha(u);
            if !interval.contains(a) {
                return Err(Error::InvalidProfile(format!(
                    "alpha({u}) = {a} leaves the interval ({}, {})",
                    interval.lo, interval.hi
                )));
            }
            let fv = prof.f.eval(&[a])?;
            if !(fv > 0.0) {
                return Err(Error::InvalidProfile(format!("f(alpha({u})) = {fv} is not positive")));
            }
        }
        Ok(prof)
    }

    /// Parse `f` and pick `c2` so that the soliton equation holds at `u0`
    /// (see [`soliton_anchor_c2`]) when `c2` is `None`.
    pub fn from_text(
        theta: f64,
        f: &str,
        n: usize,
        c1: f64,
        c2: Option<f64>,
        u_range: (f64, f64),
        interval: Interval,
    ) -> Result<Self> {
        let f = Expression::parse(f, &["t"])?;
        let c2 = match c2 {
            Some(c) => c,
            None => soliton_anchor_c2(theta, &f, c1, u_range.0)?,
        };
        Self::new(theta, f, n, c1, c2, u_range, interval)
    }

    /// `sqrt(1 - theta^2)`.
    pub fn speed_t(&self) -> f64 {
        (1.0 - self.theta * self.theta).sqrt()
    }

    pub fn alpha(&self, u: f64) -> f64 {
        u * self.speed_t() + self.c1
    }

    fn warp_jet(&self, t: f64) -> Result<[f64; 3]> {
        let j = self.f.jet(&[t], &[0])?;
        Ok([j.value(), j.d(0), j.dd(0, 0)])
    }
}

/// `beta(u0)` making `sigma = f(alpha) beta` satisfy the soliton relation
/// at `u0`: `beta(u0) = -theta / (sqrt(1 - theta^2) f'(alpha(u0)))`.
///
/// For `f = e^t`, `c1 = 0`, `u0 = 0`, `theta = sqrt(2)/2` this is `-1`.
pub fn soliton_anchor_c2(theta: f64, f: &Expression, c1: f64, u0: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidProfile(format!("theta = {theta} is not in (0, 1)")));
    }
    let s = (1.0 - theta * theta).sqrt();
    let a0 = u0 * s + c1;
    let j = f.jet(&[a0], &[0])?;
    let f1 = j.d(0);
    if f1 == 0.0 || !f1.is_finite() {
        return Err(Error::InvalidProfile(format!(
            "f'(alpha(u0)) = {f1}; cannot anchor c2, pass it explicitly"
        )));
    }
    Ok(-theta / (s * f1))
}

/// `beta` as an extern function so it can appear in immersion components.
#[derive(Debug)]
struct Beta {
    f: Expression,
    theta: f64,
    s: f64,
    c1: f64,
    c2: f64,
    u0: f64,
}

impl Beta {
    fn value(&self, u: f64) -> Result<f64> {
        let theta = self.theta;
        let integral = integrate(
            |x| {
                let a = x * self.s + self.c1;
                Ok(theta / self.f.eval(&[a])?)
            },
            self.u0,
            u,
            QUADRATURE_TOL,
        )?;
        Ok(self.c2 + integral)
    }
}

impl ScalarFn for Beta {
    fn name(&self) -> &str {
        "beta"
    }

    fn eval3(&self, u: f64) -> std::result::Result<[f64; 3], String> {
        let b = self.value(u).map_err(|e| e.to_string())?;
        let a = u * self.s + self.c1;
        let j = self.f.jet(&[a], &[0]).map_err(|e| e.to_string())?;
        let (f, f1) = (j.value(), j.d(0));
        Ok([b, self.theta / f, -self.theta * self.s * f1 / (f * f)])
    }
}

/// The solved profile curve.
#[derive(Clone, Debug)]
pub struct ProfileCurve {
    profile: RotationalProfile,
    beta: Arc<Beta>,
    exponential: bool,
}

impl ProfileCurve {
    pub fn profile(&self) -> &RotationalProfile {
        &self.profile
    }

    pub fn alpha(&self, u: f64) -> f64 {
        self.profile.alpha(u)
    }

    /// `beta` by adaptive quadrature.
    pub fn beta(&self, u: f64) -> Result<f64> {
        self.beta.value(u)
    }

    /// `[beta, beta', beta'']`.
    pub fn beta_jet(&self, u: f64) -> Result<[f64; 3]> {
        self.beta.eval3(u).map_err(Error::InvalidProfile)
    }

    /// Closed form of `beta`, available when `f` is literally `exp(t)`.
    pub fn beta_closed_form(&self, u: f64) -> Option<f64> {
        if !self.exponential {
            return None;
        }
        let p = &self.profile;
        let (u0, _) = p.u_range;
        let k = p.theta / p.speed_t();
        Some(p.c2 - k * ((-p.alpha(u)).exp() - (-p.alpha(u0)).exp()))
    }

    /// `sigma = f(alpha) beta`.
    pub fn sigma(&self, u: f64) -> Result<f64> {
        let f = self.profile.f.eval(&[self.alpha(u)])?;
        Ok(f * self.beta(u)?)
    }

    /// `alpha'^2 + f(alpha)^2 beta'^2`.
    pub fn speed2(&self, u: f64) -> Result<f64> {
        let s = self.profile.speed_t();
        let f = self.profile.f.eval(&[self.alpha(u)])?;
        let [_, b1, _] = self.beta_jet(u)?;
        Ok(s * s + f * f * b1 * b1)
    }

    /// `f(alpha) beta'`, which equals `theta` by construction.
    pub fn angle(&self, u: f64) -> Result<f64> {
        let f = self.profile.f.eval(&[self.alpha(u)])?;
        let [_, b1, _] = self.beta_jet(u)?;
        Ok(f * b1)
    }

    /// `(f'/f)(alpha) (1 - theta^2) + theta sqrt(1 - theta^2) / sigma`.
    pub fn soliton_relation(&self, u: f64) -> Result<f64> {
        let p = &self.profile;
        let [f, f1, _] = p.warp_jet(self.alpha(u))?;
        let sigma = self.sigma(u)?;
        if sigma.abs() < SIGMA_MIN {
            return Err(Error::SigmaZero { u, sigma });
        }
        let th = p.theta;
        Ok(f1 / f * (1.0 - th * th) + th * p.speed_t() / sigma)
    }
}

fn is_plain_exp(f: &Expression) -> bool {
    matches!(f.root(), Node::Call(Func::Exp, arg) if **arg == Node::Var(0))
}

/// Solve the constant-angle ODEs for `prof`.
pub fn solve_profile(prof: &RotationalProfile) -> Result<ProfileCurve> {
    let beta = Arc::new(Beta {
        f: prof.f.clone(),
        theta: prof.theta,
        s: prof.speed_t(),
        c1: prof.c1,
        c2: prof.c2,
        u0: prof.u_range.0,
    });
    let curve = ProfileCurve {
        profile: prof.clone(),
        beta,
        exponential: is_plain_exp(&prof.f),
    };
    // Surface quadrature problems here rather than deep inside a jet, and
    // cross-check against the closed form when there is one.
    let (u0, u1) = prof.u_range;
    for u in [u0, 0.5 * (u0 + u1), u1] {
        let b = curve.beta(u)?;
        if let Some(exact) = curve.beta_closed_form(u) {
            if (b - exact).abs() > 1e-10 {
                return Err(Error::QuadratureFailure {
                    lo: u0,
                    hi: u,
                    estimate: (b - exact).abs(),
                });
            }
        }
    }
    Ok(curve)
}

/// Chart box of the rotational immersion: `u` over the profile range, the
/// first `n - 2` angles in `(0, pi)`, the last in `(0, 2 pi)`.
pub fn rotational_chart(prof: &RotationalProfile) -> Result<ChartBox> {
    let n = prof.n;
    let mut lo = vec![prof.u_range.0];
    let mut hi = vec![prof.u_range.1];
    for i in 1..n {
        lo.push(0.0);
        hi.push(if i + 1 == n {
            2.0 * std::f64::consts::PI
        } else {
            std::f64::consts::PI
        });
    }
    ChartBox::new(ChartBox::default_names(n), lo, hi)
}

/// `psi(u, v) = (alpha(u), beta(u) X(v))` in `R x_f R^n`.
pub fn build_rotational(curve: &ProfileCurve) -> Result<Immersion> {
    let prof = curve.profile();
    let ambient = WarpedProduct::new(prof.interval, prof.f.clone(), Fiber::Flat, prof.n)?;
    let chart = rotational_chart(prof)?;
    let ctx = Context::new(&chart.names)?.with_function(curve.beta.clone())?;
    let ctx = Arc::new(ctx);
    let mut comps = vec![format!("u*{:?} + ({:?})", prof.speed_t(), prof.c1)];
    comps.extend(
        sphere_chart_components(&chart.names[1..], "1")
            .into_iter()
            .map(|x| format!("beta(u)*{x}")),
    );
    let refs: Vec<&str> = comps.iter().map(String::as_str).collect();
    Immersion::with_context(ambient, chart, &refs, &ctx, CatalogueTag::Rotational)
}

/// Principal curvatures `(kappa_u, kappa_v)`; `kappa_v` has multiplicity
/// `n - 1`. Valid for the normal with angle `+theta`.
pub fn weingarten_closed_form(curve: &ProfileCurve, u: f64) -> Result<(f64, f64)> {
    let p = curve.profile();
    let [f, f1, _] = p.warp_jet(curve.alpha(u))?;
    let sigma = curve.sigma(u)?;
    if sigma.abs() < SIGMA_MIN {
        return Err(Error::SigmaZero { u, sigma });
    }
    let k_u = -(f1 / f) * p.theta;
    Ok((k_u, p.speed_t() / sigma + k_u))
}

/// Grid over the rotational chart: `samples[0]` values of `u` just inside
/// the profile range, remaining axes away from the sphere-chart poles.
pub fn rotational_grid(prof: &RotationalProfile, samples: &[usize]) -> Result<ChartGrid> {
    let chart = rotational_chart(prof)?;
    let n = prof.n;
    let margins: Vec<f64> = (0..n).map(|i| if i == 0 { 1e-5 } else { POLE_MARGIN }).collect();
    ChartGrid::new(&chart, samples, &margins)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationCheck {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Outcome of [`verify_classification`].
#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    /// sigma-constancy (FD), soliton relation, soliton residual, and
    /// constancy of `(log f)'`, in that order.
    pub checks: Vec<ClassificationCheck>,
    pub classified_soliton: bool,
}

impl ClassificationReport {
    pub fn check(&self, name: &str) -> Option<&ClassificationCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Check the four characterizations of a rotational soliton over `grid`.
pub fn verify_classification(curve: &ProfileCurve, grid: &ChartGrid) -> Result<ClassificationReport> {
    let us = grid.axes()[0].clone();
    let p = curve.profile();

    let mut sigma_fd = 0.0f64;
    let mut relation = 0.0f64;
    let mut lf_min = f64::INFINITY;
    let mut lf_max = f64::NEG_INFINITY;
    for &u in &us {
        let d = (curve.sigma(u + SIGMA_FD_STEP)? - curve.sigma(u - SIGMA_FD_STEP)?) / (2.0 * SIGMA_FD_STEP);
        sigma_fd = sigma_fd.max(d.abs());
        relation = relation.max(curve.soliton_relation(u)?.abs());
        let [f, f1, _] = p.warp_jet(curve.alpha(u))?;
        lf_min = lf_min.min(f1 / f);
        lf_max = lf_max.max(f1 / f);
    }
    let imm = build_rotational(curve)?;
    let residual = soliton_residual(&imm, grid)?.residual_sup;

    let mk = |name, value: f64, tolerance| ClassificationCheck {
        name,
        value,
        tolerance,
        pass: value < tolerance,
    };
    let checks = vec![
        mk("sigma_constant", sigma_fd, FD_TOL),
        mk("soliton_relation", relation, SOLITON_TOL),
        mk("soliton_residual", residual, SOLITON_TOL),
        mk("log_warp_constant", lf_max - lf_min, SOLITON_TOL),
    ];
    let classified_soliton = checks.iter().all(|c| c.pass);
    Ok(ClassificationReport {
        checks,
        classified_soliton,
    })
}

/// The surface of the hyperbolic-space example: `theta = sqrt(2)/2`,
/// `f = e^t`, `c1 = 0`, `u0 = 0`, so that `beta(u) = -e^{-u/sqrt 2}`.
pub fn example5_profile(n: usize, u_range: (f64, f64)) -> Result<RotationalProfile> {
    RotationalProfile::from_text(
        std::f64::consts::FRAC_1_SQRT_2,
        "exp(t)",
        n,
        0.0,
        None,
        u_range,
        Interval::real_line(),
    )
}
