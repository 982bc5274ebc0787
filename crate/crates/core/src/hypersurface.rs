//! Immersed hypersurfaces `psi: Sigma^n -> I x_f M^n` given by chart
//! expressions, and their extrinsic geometry.
//!
//! The shape operator follows `A X = -D_X N`, so `g(A X, Y) = <D_X Y, N>`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::ambient::{AmbientPoint, Christoffels, WarpedProduct};
use crate::error::{Error, Result};
use crate::expr::{parse, Context, Expression};
use crate::jet::Jet2;
use crate::linalg::{inner, spd_inverse};

/// Chart points closer than this to the box boundary are rejected.
pub const BOUNDARY_MARGIN: f64 = 1e-6;
/// Smallest admissible Gram determinant of the first fundamental form.
pub const MIN_GRAM_DET: f64 = 1e-12;
/// Below this `|theta|` the orientation tie-break rule applies.
pub const THETA_TIE: f64 = 1e-10;

/// Open box in chart coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartBox {
    pub names: Vec<String>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl ChartBox {
    pub fn new(names: Vec<String>, lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if names.is_empty() || names.len() != lo.len() || names.len() != hi.len() {
            return Err(Error::InvalidImmersion(format!(
                "chart has {} names, {} lower and {} upper bounds",
                names.len(),
                lo.len(),
                hi.len()
            )));
        }
        for i in 0..names.len() {
            if !(lo[i].is_finite() && hi[i].is_finite() && lo[i] < hi[i]) {
                return Err(Error::InvalidImmersion(format!(
                    "chart range for {} is ({}, {})",
                    names[i], lo[i], hi[i]
                )));
            }
        }
        Ok(ChartBox { names, lo, hi })
    }

    /// Default variable names `u, v1, ..., v_{n-1}`.
    pub fn default_names(n: usize) -> Vec<String> {
        std::iter::once("u".to_string())
            .chain((1..n).map(|i| format!("v{i}")))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    /// Distance from `p` to the boundary (negative when outside).
    pub fn clearance(&self, p: &[f64]) -> f64 {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&x, (&a, &b))| (x - a).min(b - x))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Which catalogue family an immersion came from, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogueTag {
    Slice,
    Hyperplane,
    SphereInEuclidean,
    Horosphere,
    Rotational,
    Custom,
}

/// Chart expressions for the ambient coordinates `(t, x_1, ..., x_n)`.
#[derive(Clone, Debug)]
pub struct Immersion {
    ambient: WarpedProduct,
    chart: ChartBox,
    components: Vec<Expression>,
    tag: CatalogueTag,
    /// Sign of `det[E_1 .. E_n | N]` in ambient coordinates.
    orientation: f64,
}

impl Immersion {
    /// Components must be parsed against a context whose variables are the
    /// chart names, in order.
    pub fn new(
        ambient: WarpedProduct,
        chart: ChartBox,
        components: Vec<Expression>,
        tag: CatalogueTag,
    ) -> Result<Self> {
        let n = ambient.n();
        if chart.dim() != n {
            return Err(Error::InvalidImmersion(format!(
                "chart has {} variables but the hypersurface dimension is {n}",
                chart.dim()
            )));
        }
        if components.len() != n + 1 {
            return Err(Error::InvalidImmersion(format!(
                "expected {} components, got {}",
                n + 1,
                components.len()
            )));
        }
        for c in &components {
            if c.vars() != chart.names.as_slice() {
                return Err(Error::InvalidImmersion(format!(
                    "component `{c}` uses variables {:?}, chart declares {:?}",
                    c.vars(),
                    chart.names
                )));
            }
        }
        let mut imm = Immersion {
            ambient,
            chart,
            components,
            tag,
            orientation: 1.0,
        };
        let center = imm.chart.center();
        let sd = shape_data(&imm, &center)?;
        let flip = if sd.theta.abs() >= THETA_TIE {
            sd.theta < 0.0
        } else {
            sd.normal
                .iter()
                .find(|c| c.abs() >= THETA_TIE)
                .is_some_and(|&c| c < 0.0)
        };
        if flip {
            imm.orientation = -1.0;
        }
        Ok(imm)
    }

    /// Parse every component against the chart names, with optional extern
    /// functions already registered in `ctx`.
    pub fn from_text(ambient: WarpedProduct, chart: ChartBox, components: &[&str], tag: CatalogueTag) -> Result<Self> {
        let ctx = Arc::new(Context::new(&chart.names)?);
        Self::with_context(ambient, chart, components, &ctx, tag)
    }

    pub fn with_context(
        ambient: WarpedProduct,
        chart: ChartBox,
        components: &[&str],
        ctx: &Arc<Context>,
        tag: CatalogueTag,
    ) -> Result<Self> {
        let exprs = components
            .iter()
            .map(|c| parse(c, ctx))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(ambient, chart, exprs, tag)
    }

    pub fn ambient(&self) -> &WarpedProduct {
        &self.ambient
    }

    pub fn chart(&self) -> &ChartBox {
        &self.chart
    }

    pub fn components(&self) -> &[Expression] {
        &self.components
    }

    pub fn tag(&self) -> CatalogueTag {
        self.tag
    }

    /// Hypersurface dimension `n`.
    pub fn n(&self) -> usize {
        self.chart.dim()
    }

    /// Ambient coordinates of `psi(p)` without any derivative.
    pub fn position(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.components.iter().map(|c| c.eval(p).map_err(Error::from)).collect()
    }

    /// Order-2 jets of every component in all chart variables.
    pub fn component_jets(&self, p: &[f64]) -> Result<Vec<Jet2>> {
        let active: Vec<usize> = (0..self.n()).collect();
        self.components
            .iter()
            .map(|c| c.jet(p, &active).map_err(Error::from))
            .collect()
    }

    fn check_interior(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.n() {
            return Err(Error::InvalidImmersion(format!(
                "chart point has {} coordinates, expected {}",
                p.len(),
                self.n()
            )));
        }
        if !(self.chart.clearance(p) >= BOUNDARY_MARGIN) {
            return Err(Error::BoundaryTooClose {
                point: p.to_vec(),
                margin: BOUNDARY_MARGIN,
            });
        }
        Ok(())
    }
}

/// Everything extrinsic at one chart point.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeData {
    pub point: Vec<f64>,
    /// `psi(p)` in ambient coordinates.
    pub position: Vec<f64>,
    /// Ambient metric at `psi(p)`.
    pub ambient_metric: DMatrix<f64>,
    /// Columns `E_i = d psi / d x_i`.
    pub frame: DMatrix<f64>,
    /// `d_i d_j psi`, indexed `[i][j]`.
    pub frame_derivatives: Vec<Vec<DVector<f64>>>,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    /// `d_k g`, indexed by `k`.
    pub dg: Vec<DMatrix<f64>>,
    pub normal: DVector<f64>,
    /// Second fundamental form `II_ij = g(A E_i, E_j)`.
    pub second_form: DMatrix<f64>,
    /// Shape operator: `A E_i = sum_k A[(k, i)] E_k`.
    pub shape_operator: DMatrix<f64>,
    pub mean_curvature: f64,
    pub h: f64,
    pub theta: f64,
    /// Chart differential of `h`.
    pub dh: DVector<f64>,
    /// `d_i d_j h`.
    pub hess_coords: DMatrix<f64>,
    pub grad_h: DVector<f64>,
    pub grad_h_norm2: f64,
    /// `[f, f', f'']` at `h`.
    pub warp: [f64; 3],
}

impl ShapeData {
    pub fn n(&self) -> usize {
        self.g.nrows()
    }

    /// Levi-Civita symbols of the induced metric in the chart.
    pub fn induced_christoffels(&self) -> Christoffels {
        Christoffels::from_metric(&self.g, &self.dg)
    }

    /// `|A|^2 = tr(A^2)`.
    pub fn shape_norm2(&self) -> f64 {
        (&self.shape_operator * &self.shape_operator).trace()
    }

    /// `(f'/f)(h)`.
    pub fn log_warp_1(&self) -> f64 {
        self.warp[1] / self.warp[0]
    }
}

/// Extrinsic data of `imm` at the chart point `p`.
pub fn shape_data(imm: &Immersion, p: &[f64]) -> Result<ShapeData> {
    imm.check_interior(p)?;
    let w = imm.ambient();
    let n = imm.n();
    let dim = n + 1;
    let jets = imm.component_jets(p)?;
    let position: Vec<f64> = jets.iter().map(Jet2::value).collect();
    let q = AmbientPoint::new(w, position.clone())?;
    let (big_g, big_dg) = w.metric_with_derivatives(&q)?;
    let gamma = Christoffels::from_metric(&big_g, &big_dg);

    let frame = DMatrix::from_fn(dim, n, |a, i| jets[a].d(i));
    let frame_derivatives: Vec<Vec<DVector<f64>>> = (0..n)
        .map(|i| (0..n).map(|j| DVector::from_fn(dim, |a, _| jets[a].dd(i, j))).collect())
        .collect();

    let g = frame.transpose() * &big_g * &frame;
    let g = (&g + g.transpose()) * 0.5;
    let gram_det = g.determinant();
    if !(gram_det > MIN_GRAM_DET) {
        return Err(Error::DegenerateImmersion {
            gram_det,
            point: p.to_vec(),
        });
    }
    let g_inv = spd_inverse(&g).ok_or(Error::DegenerateImmersion {
        gram_det,
        point: p.to_vec(),
    })?;

    let normal = unit_normal(&big_g, &frame, imm.orientation)?;

    let cols: Vec<DVector<f64>> = (0..n).map(|i| frame.column(i).into_owned()).collect();
    let second_form = DMatrix::from_fn(n, n, |i, j| {
        let acc = &frame_derivatives[i][j] + gamma.contract(&cols[i], &cols[j]);
        inner(&big_g, &normal, &acc)
    });
    let second_form = (&second_form + second_form.transpose()) * 0.5;
    let shape_operator = &g_inv * &second_form;
    let mean_curvature = shape_operator.trace() / n as f64;

    // d_k g_ij = (d_k G)(E_i, E_j) + <d_k E_i, E_j> + <E_i, d_k E_j>
    let dg: Vec<DMatrix<f64>> = (0..n)
        .map(|k| {
            let mut dgk = DMatrix::zeros(dim, dim);
            for c in 0..dim {
                dgk += &big_dg[c] * frame[(c, k)];
            }
            DMatrix::from_fn(n, n, |i, j| {
                inner(&dgk, &cols[i], &cols[j])
                    + inner(&big_g, &frame_derivatives[k][i], &cols[j])
                    + inner(&big_g, &cols[i], &frame_derivatives[k][j])
            })
        })
        .collect();

    let h = position[0];
    let dh = DVector::from_fn(n, |i, _| jets[0].d(i));
    let hess_coords = DMatrix::from_fn(n, n, |i, j| jets[0].dd(i, j));
    let grad_h = &g_inv * &dh;
    let grad_h_norm2 = dh.dot(&grad_h);
    let theta = normal[0];
    let warp = w.warp_jet(h)?;

    Ok(ShapeData {
        point: p.to_vec(),
        position,
        ambient_metric: big_g,
        frame,
        frame_derivatives,
        g,
        g_inv,
        dg,
        normal,
        second_form,
        shape_operator,
        mean_curvature,
        h,
        theta,
        dh,
        hess_coords,
        grad_h,
        grad_h_norm2,
        warp,
    })
}

/// Unit normal in the ambient metric with `sign(det[E | N]) = orientation`.
///
/// Works in coordinates where the metric is the identity (`G = L L^T`): the
/// frame becomes `L^T E`, its orthogonal complement is found by projecting
/// out a QR basis, and the result is mapped back with `L^{-T}`.
fn unit_normal(big_g: &DMatrix<f64>, frame: &DMatrix<f64>, orientation: f64) -> Result<DVector<f64>> {
    let dim = frame.nrows();
    let l = big_g
        .clone()
        .cholesky()
        .ok_or(Error::SingularMetric {
            condition: f64::INFINITY,
        })?
        .l();
    let e = l.transpose() * frame;
    let q = e.qr().q();
    let project = |v: DVector<f64>| &v - &q * (q.transpose() * &v);
    let mut best = DVector::zeros(dim);
    for k in 0..dim {
        let r = project(DVector::from_fn(dim, |a, _| if a == k { 1.0 } else { 0.0 }));
        if r.norm() > best.norm() {
            best = r;
        }
    }
    let best = project(best);
    let nt = best.normalize();
    let normal = l.transpose().solve_upper_triangular(&nt).ok_or(Error::SingularMetric {
        condition: f64::INFINITY,
    })?;
    let mut m = DMatrix::zeros(dim, dim);
    m.view_mut((0, 0), (dim, dim - 1)).copy_from(frame);
    m.set_column(dim - 1, &normal);
    let s = m.determinant().signum();
    Ok(normal * (s * orientation))
}

/// `H = tr(A)/n` at `p`.
pub fn mean_curvature(imm: &Immersion, p: &[f64]) -> Result<f64> {
    Ok(shape_data(imm, p)?.mean_curvature)
}

/// Shape operator obtained by differentiating the normal field,
/// `A E_i = -(D_{E_i} N)^T`, instead of projecting `D_{E_i} E_j`.
///
/// `d_i N` is recovered from the derivatives of `<N, E_j> = 0` and
/// `<N, N> = 1`, which fix it uniquely.
pub fn shape_operator_via_normal(imm: &Immersion, p: &[f64]) -> Result<DMatrix<f64>> {
    let sd = shape_data(imm, p)?;
    let w = imm.ambient();
    let n = sd.n();
    let dim = n + 1;
    let q = AmbientPoint::new(w, sd.position.clone())?;
    let (big_g, big_dg) = w.metric_with_derivatives(&q)?;
    let gamma = Christoffels::from_metric(&big_g, &big_dg);
    let cols: Vec<DVector<f64>> = (0..n).map(|i| sd.frame.column(i).into_owned()).collect();

    let mut basis = DMatrix::zeros(dim, dim);
    basis.view_mut((0, 0), (dim, n)).copy_from(&sd.frame);
    basis.set_column(n, &sd.normal);
    let lhs = basis.transpose() * &big_g;
    let lu = lhs.lu();

    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut dgi = DMatrix::zeros(dim, dim);
        for c in 0..dim {
            dgi += &big_dg[c] * cols[i][c];
        }
        let rhs = DVector::from_fn(dim, |r, _| {
            if r < n {
                -(inner(&dgi, &sd.normal, &cols[r]) + inner(&big_g, &sd.normal, &sd.frame_derivatives[i][r]))
            } else {
                -0.5 * inner(&dgi, &sd.normal, &sd.normal)
            }
        });
        let dn = lu.solve(&rhs).ok_or(Error::DegenerateImmersion {
            gram_det: 0.0,
            point: p.to_vec(),
        })?;
        let cov = dn + gamma.contract(&cols[i], &sd.normal);
        let lowered = DVector::from_fn(n, |l, _| -inner(&big_g, &cov, &cols[l]));
        a.set_column(i, &(&sd.g_inv * lowered));
    }
    Ok(a)
}

/// The same data for the opposite unit normal.
pub fn flip_orientation(sd: &ShapeData) -> ShapeData {
    let mut out = sd.clone();
    out.normal = -&sd.normal;
    out.second_form = -&sd.second_form;
    out.shape_operator = -&sd.shape_operator;
    out.mean_curvature = -sd.mean_curvature;
    out.theta = -sd.theta;
    out
}
