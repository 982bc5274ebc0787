//! Warped products `I x_f M^n` with a flat or unit round fiber.
//!
//! Points are written in product coordinates `(t, x_1, ..., x_n)`. The fiber
//! chart is the identity for `R^n` and the angular chart
//! `(v_1, ..., v_n) in (0, pi)^{n-1} x (0, 2 pi)` for `S^n`, whose metric is
//! `diag(1, sin^2 v_1, sin^2 v_1 sin^2 v_2, ...)`.
//!
//! Curvature convention: `R(X,Y)Z = D_X D_Y Z - D_Y D_X Z - D_[X,Y] Z`, so
//! the sectional curvature of a plane spanned by `X, Y` is
//! `<R(X,Y)Y, X> / (|X|^2 |Y|^2 - <X,Y>^2)`. The warped-product closed form
//! is usually quoted with the opposite sign (`R_{XY} = D_[X,Y] - [D_X, D_Y]`);
//! [`WarpedProduct::curvature`] evaluates that form and negates it.

use std::ops::Deref;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::expr::{parse, Context, Expression};
use crate::jet::Jet2;
use crate::linalg::inner;

/// Condition number above which the chart metric counts as singular.
pub const MAX_METRIC_CONDITION: f64 = 1e12;
/// Number of points used to probe positivity of the warping function.
pub const POSITIVITY_PROBES: usize = 1024;
/// Residual below which a space-form check passes.
pub const SPACE_FORM_TOL: f64 = 1e-10;

/// Base interval; either end may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::InvalidAmbient(format!("interval ({lo}, {hi}) is empty")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn real_line() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        t > self.lo && t < self.hi
    }

    /// A finite window used for probing: infinite ends are cut 64 units
    /// away from the finite one (or at +-32 when both are infinite).
    pub fn window(&self) -> (f64, f64) {
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => (self.lo, self.hi),
            (true, false) => (self.lo, self.lo + 64.0),
            (false, true) => (self.hi - 64.0, self.hi),
            (false, false) => (-32.0, 32.0),
        }
    }

    /// `count` cell midpoints of [`Interval::window`]; all strictly inside.
    pub fn probe_grid(&self, count: usize) -> Vec<f64> {
        let (a, b) = self.window();
        let h = (b - a) / count as f64;
        (0..count).map(|i| a + (i as f64 + 0.5) * h).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fiber {
    /// `R^n`, sectional curvature 0.
    Flat,
    /// Unit `S^n`, sectional curvature 1.
    Sphere,
}

impl Fiber {
    pub fn curvature(self) -> f64 {
        match self {
            Fiber::Flat => 0.0,
            Fiber::Sphere => 1.0,
        }
    }
}

/// `I x_f M^n` with metric `dt^2 + f(t)^2 g_M`.
#[derive(Clone, Debug)]
pub struct WarpedProduct {
    interval: Interval,
    warp: Expression,
    fiber: Fiber,
    n: usize,
}

impl WarpedProduct {
    /// `warp` must be an expression in the single variable `t`.
    pub fn new(interval: Interval, warp: Expression, fiber: Fiber, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAmbient("fiber dimension must be at least 1".into()));
        }
        if warp.vars() != ["t"] {
            return Err(Error::InvalidAmbient(format!(
                "warping function must be an expression in t alone, got variables {:?}",
                warp.vars()
            )));
        }
        let w = WarpedProduct {
            interval,
            warp,
            fiber,
            n,
        };
        for t in interval.probe_grid(POSITIVITY_PROBES) {
            let f = w.warp.eval(&[t])?;
            if !(f > 0.0 && f.is_finite()) {
                return Err(Error::InvalidAmbient(format!(
                    "warping function {} is not positive at t = {t} (value {f})",
                    w.warp
                )));
            }
        }
        Ok(w)
    }

    /// Parse `f` in the variable `t` and build the product.
    pub fn from_text(interval: Interval, f: &str, fiber: Fiber, n: usize) -> Result<Self> {
        let ctx = Arc::new(Context::new(&["t"])?);
        Self::new(interval, parse(f, &ctx)?, fiber, n)
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn warp(&self) -> &Expression {
        &self.warp
    }

    pub fn fiber(&self) -> Fiber {
        self.fiber
    }

    /// Fiber dimension `n`; the ambient has dimension `n + 1`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// Sectional curvature `k` of the fiber.
    pub fn k(&self) -> f64 {
        self.fiber.curvature()
    }

    /// `[f(t), f'(t), f''(t)]`.
    pub fn warp_jet(&self, t: f64) -> Result<[f64; 3]> {
        let j = self.warp.jet(&[t], &[0])?;
        Ok([j.value(), j.d(0), j.dd(0, 0)])
    }

    /// Diagonal entries of the metric as jets in all `n + 1` coordinates.
    fn metric_diag_jets(&self, p: &AmbientPoint) -> Result<Vec<Jet2>> {
        let m = self.dim();
        let fj = Jet2::variable(p[0], 0, m).chain(self.warp_jet(p[0])?);
        let f2 = &fj * &fj;
        let mut diag = Vec::with_capacity(m);
        diag.push(Jet2::constant(1.0, m));
        match self.fiber {
            Fiber::Flat => diag.extend(std::iter::repeat_n(f2, self.n)),
            Fiber::Sphere => {
                let mut w = Jet2::constant(1.0, m);
                for i in 0..self.n {
                    diag.push(&f2 * &w);
                    let v = p[i + 1];
                    let s = Jet2::variable(v, i + 1, m).chain([v.sin(), v.cos(), -v.sin()]);
                    w = &w * &(&s * &s);
                }
            }
        }
        let (lo, hi) = diag
            .iter()
            .map(Jet2::value)
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
        let condition = hi / lo;
        if !(lo > 0.0) || condition > MAX_METRIC_CONDITION {
            return Err(Error::SingularMetric { condition });
        }
        Ok(diag)
    }

    /// The `(n+1) x (n+1)` metric matrix at `p`.
    pub fn metric(&self, p: &AmbientPoint) -> Result<DMatrix<f64>> {
        let d = self.metric_diag_jets(p)?;
        Ok(DMatrix::from_diagonal(&DVector::from_iterator(
            d.len(),
            d.iter().map(Jet2::value),
        )))
    }

    /// Metric and its first partials: `dg[c][(a, b)] = d_c g_ab`.
    pub fn metric_with_derivatives(&self, p: &AmbientPoint) -> Result<(DMatrix<f64>, Vec<DMatrix<f64>>)> {
        let d = self.metric_diag_jets(p)?;
        let m = d.len();
        let g = DMatrix::from_fn(m, m, |a, b| if a == b { d[a].value() } else { 0.0 });
        let dg = (0..m)
            .map(|c| DMatrix::from_fn(m, m, |a, b| if a == b { d[a].d(c) } else { 0.0 }))
            .collect();
        Ok((g, dg))
    }

    /// Levi-Civita connection coefficients from the metric jets,
    /// `Gamma^a_bc = 1/2 g^ad (d_b g_dc + d_c g_bd - d_d g_bc)`.
    pub fn christoffels(&self, p: &AmbientPoint) -> Result<Christoffels> {
        let (g, dg) = self.metric_with_derivatives(p)?;
        Ok(Christoffels::from_metric(&g, &dg))
    }

    /// `R(X,Y)Z` at `p` for vectors in chart components.
    pub fn curvature(
        &self,
        p: &AmbientPoint,
        x: &DVector<f64>,
        y: &DVector<f64>,
        z: &DVector<f64>,
    ) -> Result<DVector<f64>> {
        let g = self.metric(p)?;
        let [f, f1, f2] = self.warp_jet(p[0])?;
        Ok(curvature_closed_form(&g, [f, f1, f2], self.k(), x, y, z))
    }

    /// Residuals of `((f')^2 - k)/f^2 = -c = f''/f` over `probes`.
    pub fn check_space_form(&self, c: f64, probes: &[f64]) -> Result<SpaceFormReport> {
        let k = self.k();
        let mut metric_residual = 0.0f64;
        let mut ode_residual = 0.0f64;
        for &t in probes {
            let [f, f1, f2] = self.warp_jet(t)?;
            metric_residual = metric_residual.max(((f1 * f1 - k) / (f * f) + c).abs());
            ode_residual = ode_residual.max((f2 / f + c).abs());
        }
        Ok(SpaceFormReport {
            c,
            k,
            probes: probes.len(),
            metric_residual,
            ode_residual,
            pass: metric_residual < SPACE_FORM_TOL && ode_residual < SPACE_FORM_TOL,
        })
    }
}

/// Closed-form warped curvature. `warp = [f, f', f'']` at the point's `t`.
pub(crate) fn curvature_closed_form(
    g: &DMatrix<f64>,
    warp: [f64; 3],
    k: f64,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> DVector<f64> {
    let [f, f1, f2] = warp;
    let lf1 = f1 / f;
    let lf2 = f2 / f - lf1 * lf1;
    let dim = g.nrows();
    let e0 = DVector::from_fn(dim, |i, _| if i == 0 { 1.0 } else { 0.0 });
    let ip = |u: &DVector<f64>, v: &DVector<f64>| inner(g, u, v);
    // <V, d_t> is the t-component because g_00 = 1 and g_0i = 0.
    let (x0, y0, z0) = (x[0], y[0], z[0]);
    let fiber_part = |v: &DVector<f64>| {
        let mut w = v.clone();
        w[0] = 0.0;
        w
    };
    let (xs, ys, zs) = (fiber_part(x), fiber_part(y), fiber_part(z));
    let xz = ip(x, z);
    let yz = ip(y, z);

    // R_{XY}Z with the sign convention of the classical warped-product formula.
    let mut r = (&ys * ip(&xs, &zs) - &xs * ip(&ys, &zs)) * (k / (f * f));
    r -= (y * xz - x * yz) * (lf1 * lf1);
    r += (x * y0 - y * x0) * (lf2 * z0);
    r -= &e0 * (lf2 * (y0 * xz - x0 * yz));
    -r
}

/// `Gamma^a_bc` stored densely, index `(a, b, c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffels {
    dim: usize,
    data: Vec<f64>,
}

impl Christoffels {
    pub fn from_metric(g: &DMatrix<f64>, dg: &[DMatrix<f64>]) -> Self {
        let dim = g.nrows();
        let ginv = g.clone().try_inverse().expect("metric was checked non-singular");
        let mut data = vec![0.0; dim * dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                for c in b..dim {
                    let mut s = 0.0;
                    for d in 0..dim {
                        let gad = ginv[(a, d)];
                        if gad != 0.0 {
                            s += gad * (dg[b][(d, c)] + dg[c][(b, d)] - dg[d][(b, c)]);
                        }
                    }
                    data[(a * dim + b) * dim + c] = 0.5 * s;
                    data[(a * dim + c) * dim + b] = 0.5 * s;
                }
            }
        }
        Christoffels { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.dim + b) * self.dim + c]
    }

    /// `Gamma^a_bc u^b v^c`.
    pub fn contract(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(self.dim, |a, _| {
            let mut s = 0.0;
            for b in 0..self.dim {
                for c in 0..self.dim {
                    s += self.get(a, b, c) * u[b] * v[c];
                }
            }
            s
        })
    }
}

/// Chart coordinates `(t, x_1, ..., x_n)` of a point inside the ambient chart.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientPoint(Vec<f64>);

impl AmbientPoint {
    pub fn new(w: &WarpedProduct, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != w.dim() {
            return Err(Error::OutsideChart(format!(
                "expected {} coordinates, got {}",
                w.dim(),
                coords.len()
            )));
        }
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(Error::OutsideChart(format!("non-finite coordinates {coords:?}")));
        }
        if !w.interval.contains(coords[0]) {
            return Err(Error::OutsideChart(format!(
                "t = {} is not inside ({}, {})",
                coords[0], w.interval.lo, w.interval.hi
            )));
        }
        if w.fiber == Fiber::Sphere {
            let n = w.n;
            for (i, &v) in coords[1..].iter().enumerate() {
                let hi = if i + 1 == n {
                    2.0 * std::f64::consts::PI
                } else {
                    std::f64::consts::PI
                };
                if !(v > 0.0 && v < hi) {
                    return Err(Error::OutsideChart(format!(
                        "sphere angle v{} = {v} is not inside (0, {hi})",
                        i + 1
                    )));
                }
            }
        }
        Ok(AmbientPoint(coords))
    }

    pub fn t(&self) -> f64 {
        self.0[0]
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for AmbientPoint {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpaceFormReport {
    pub c: f64,
    pub k: f64,
    pub probes: usize,
    /// `max |((f')^2 - k)/f^2 + c|`
    pub metric_residual: f64,
    /// `max |f''/f + c|`
    pub ode_residual: f64,
    pub pass: bool,
}

/// One row of the table of constant-curvature warped models.
#[derive(Clone, Debug)]
pub struct SpaceFormModel {
    pub name: &'static str,
    pub interval: Interval,
    pub warp: &'static str,
    pub fiber: Fiber,
    pub c: f64,
}

impl SpaceFormModel {
    pub fn build(&self, n: usize) -> Result<WarpedProduct> {
        WarpedProduct::from_text(self.interval, self.warp, self.fiber, n)
    }
}

/// The five classical models of constant curvature `c in {1, 0, -1}`.
pub fn space_form_models() -> Vec<SpaceFormModel> {
    let inf = f64::INFINITY;
    vec![
        SpaceFormModel {
            name: "sphere S^{n+1} minus poles",
            interval: Interval {
                lo: 0.0,
                hi: std::f64::consts::PI,
            },
            warp: "sin(t)",
            fiber: Fiber::Sphere,
            c: 1.0,
        },
        SpaceFormModel {
            name: "euclidean R^{n+1}",
            interval: Interval { lo: -inf, hi: inf },
            warp: "1",
            fiber: Fiber::Flat,
            c: 0.0,
        },
        SpaceFormModel {
            name: "euclidean R^{n+1} minus origin",
            interval: Interval { lo: 0.0, hi: inf },
            warp: "t",
            fiber: Fiber::Sphere,
            c: 0.0,
        },
        SpaceFormModel {
            name: "hyperbolic H^{n+1} (horospherical)",
            interval: Interval { lo: -inf, hi: inf },
            warp: "exp(t)",
            fiber: Fiber::Flat,
            c: -1.0,
        },
        SpaceFormModel {
            name: "hyperbolic H^{n+1} minus a point (polar)",
            interval: Interval { lo: 0.0, hi: inf },
            warp: "sinh(t)",
            fiber: Fiber::Sphere,
            c: -1.0,
        },
    ]
}
