//! Intrinsic curvature of the induced metric.

use nalgebra::{DMatrix, DVector};

use crate::ambient::curvature_closed_form;
use crate::error::Result;
use crate::hypersurface::{shape_data, Immersion, ShapeData};
use crate::linalg::inner;

/// Ricci and scalar curvature of `(Sigma, g)` at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvaturePackage {
    /// Trace of the Gauss-equation Ricci tensor.
    pub scal_gauss: f64,
    /// Closed-form scalar curvature in terms of `h`, `|grad h|`, `H`, `|A|`.
    pub scal_formula: f64,
    /// Ricci tensor in the chart frame, lower indices.
    pub ric: DMatrix<f64>,
    /// `Ric(grad h, grad h)`.
    pub ric_gradh: f64,
    /// `|A|^2 - n H^2`.
    pub traceless_norm2: f64,
}

/// Curvature data at chart point `p`.
pub fn curvature_package(imm: &Immersion, p: &[f64]) -> Result<CurvaturePackage> {
    let sd = shape_data(imm, p)?;
    Ok(curvature_from_shape(imm, &sd))
}

/// Columns form a `g`-orthonormal tangent frame in ambient components.
pub(crate) fn orthonormal_frame(sd: &ShapeData) -> DMatrix<f64> {
    let l = sd.g.clone().cholesky().expect("first fundamental form is SPD").l();
    let l_inv_t = l.try_inverse().expect("Cholesky factor is invertible").transpose();
    &sd.frame * l_inv_t
}

fn ambient_r(imm: &Immersion, sd: &ShapeData, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> DVector<f64> {
    curvature_closed_form(&sd.ambient_metric, sd.warp, imm.ambient().k(), x, y, z)
}

/// Same as [`curvature_package`] for already computed shape data. `sd` may
/// be flipped; every output is orientation independent.
pub fn curvature_from_shape(imm: &Immersion, sd: &ShapeData) -> CurvaturePackage {
    let n = sd.n();
    let nf = n as f64;
    let big_g = &sd.ambient_metric;
    let e = orthonormal_frame(sd);
    let ecols: Vec<DVector<f64>> = (0..n).map(|a| e.column(a).into_owned()).collect();
    let cols: Vec<DVector<f64>> = (0..n).map(|i| sd.frame.column(i).into_owned()).collect();

    // Ric(X, Y) = sum_a <R(X, e_a) e_a, Y> + n H II(X, Y) - II(X, A Y)
    let ii = &sd.second_form;
    let quad = ii * &sd.g_inv * ii;
    let mut ric = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut acc = DVector::zeros(n + 1);
        for ea in &ecols {
            acc += ambient_r(imm, sd, &cols[i], ea, ea);
        }
        let lowered = big_g * acc;
        for j in 0..n {
            ric[(i, j)] = lowered.dot(&cols[j]) + nf * sd.mean_curvature * ii[(i, j)] - quad[(i, j)];
        }
    }
    let scal_gauss = (&sd.g_inv * &ric).trace();

    let [f, f1, f2] = sd.warp;
    let lf1 = f1 / f;
    let lf2 = f2 / f - lf1 * lf1;
    let k = imm.ambient().k();
    let gh = sd.grad_h_norm2;
    let a2 = sd.shape_norm2();
    let hh = sd.mean_curvature;
    let scal_formula = k / (f * f) * (nf - 1.0) * (nf - 2.0 * gh) + nf * lf1 * lf1 * (gh - (nf - 1.0))
        - (nf - 2.0) * lf2 * gh
        - nf * (f2 / f) * gh
        + nf * nf * hh * hh
        - a2;

    let ric_gradh = sd.grad_h.dot(&(&ric * &sd.grad_h));
    CurvaturePackage {
        scal_gauss,
        scal_formula,
        ric,
        ric_gradh,
        traceless_norm2: a2 - nf * hh * hh,
    }
}

/// `Ric(grad h, grad h)` straight from ambient curvature and the shape
/// operator, without assembling the Ricci tensor.
pub fn ricci_gradh_extrinsic(imm: &Immersion, p: &[f64]) -> Result<f64> {
    let sd = shape_data(imm, p)?;
    Ok(ricci_gradh_from_shape(imm, &sd))
}

pub fn ricci_gradh_from_shape(imm: &Immersion, sd: &ShapeData) -> f64 {
    let n = sd.n();
    let v = &sd.frame * &sd.grad_h;
    let e = orthonormal_frame(sd);
    let mut sum = 0.0;
    for a in 0..n {
        let ea = e.column(a).into_owned();
        let r = ambient_r(imm, sd, &ea, &v, &v);
        sum += inner(&sd.ambient_metric, &r, &ea);
    }
    let a_grad = &sd.shape_operator * &sd.grad_h;
    let a_v_v = a_grad.dot(&(&sd.g * &sd.grad_h));
    let a_v_a_v = a_grad.dot(&(&sd.g * &a_grad));
    sum + n as f64 * sd.mean_curvature * a_v_v - a_v_a_v
}
