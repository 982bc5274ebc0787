//! Finite-difference reference computations used only by tests.
//!
//! Nothing here shares code paths with the closed forms it checks beyond
//! the metric itself.

use nalgebra::{DMatrix, DVector};

use crate::ambient::{AmbientPoint, Christoffels, WarpedProduct};
use crate::error::{Error, Result};
use crate::hypersurface::Immersion;
use crate::linalg::spd_inverse;

/// Step used for finite differences of Christoffel symbols.
pub const CHRISTOFFEL_STEP: f64 = 1e-4;
/// Step of the intrinsic scalar-curvature stencil.
pub const SCALAR_STEP: f64 = 1e-3;

/// `R(X, Y) Z` from central differences of the Christoffel symbols,
/// `R^a_bcd = d_c G^a_db - d_d G^a_cb + G^a_ce G^e_db - G^a_de G^e_cb`.
pub fn curvature_from_christoffels(
    w: &WarpedProduct,
    p: &AmbientPoint,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<DVector<f64>> {
    let m = w.dim();
    let h = CHRISTOFFEL_STEP;
    let gamma = w.christoffels(p)?;
    let shifted = |c: usize, s: f64| -> Result<Christoffels> {
        let mut q = p.to_vec();
        q[c] += s;
        w.christoffels(&AmbientPoint::new(w, q)?)
    };
    let mut dgamma = Vec::with_capacity(m);
    for c in 0..m {
        let (plus, minus) = (shifted(c, h)?, shifted(c, -h)?);
        dgamma.push((plus, minus));
    }
    let d = |c: usize, a: usize, b: usize, e: usize| (dgamma[c].0.get(a, b, e) - dgamma[c].1.get(a, b, e)) / (2.0 * h);
    let mut out = DVector::zeros(m);
    for a in 0..m {
        let mut s = 0.0;
        for b in 0..m {
            for c in 0..m {
                for dd in 0..m {
                    let coeff = z[b] * x[c] * y[dd];
                    if coeff == 0.0 {
                        continue;
                    }
                    let mut r = d(c, a, dd, b) - d(dd, a, c, b);
                    for e in 0..m {
                        r += gamma.get(a, c, e) * gamma.get(e, dd, b) - gamma.get(a, dd, e) * gamma.get(e, c, b);
                    }
                    s += r * coeff;
                }
            }
        }
        out[a] = s;
    }
    Ok(out)
}

fn induced_metric(imm: &Immersion, p: &[f64]) -> Result<DMatrix<f64>> {
    let w = imm.ambient();
    let jets = imm.component_jets(p)?;
    let q = AmbientPoint::new(w, jets.iter().map(|j| j.value()).collect())?;
    let big_g = w.metric(&q)?;
    let n = imm.n();
    let e = DMatrix::from_fn(n + 1, n, |a, i| jets[a].d(i));
    Ok(e.transpose() * big_g * e)
}

/// Intrinsic scalar curvature from the induced metric sampled on a
/// five-point stencil around `p`.
#[allow(clippy::needless_range_loop)]
pub fn scalar_fd_oracle(imm: &Immersion, p: &[f64]) -> Result<f64> {
    let h = SCALAR_STEP;
    let margin = 3.0 * h;
    if !(imm.chart().clearance(p) >= margin) {
        return Err(Error::BoundaryTooClose {
            point: p.to_vec(),
            margin,
        });
    }
    let n = imm.n();
    let at = |offsets: &[(usize, f64)]| -> Result<DMatrix<f64>> {
        let mut q = p.to_vec();
        for &(i, s) in offsets {
            q[i] += s;
        }
        induced_metric(imm, &q)
    };
    let g = at(&[])?;
    let g_inv = spd_inverse(&g).ok_or(Error::DegenerateImmersion {
        gram_det: g.determinant(),
        point: p.to_vec(),
    })?;

    let mut dg = Vec::with_capacity(n);
    let mut ddg = vec![vec![DMatrix::zeros(n, n); n]; n];
    for i in 0..n {
        let f2 = at(&[(i, 2.0 * h)])?;
        let f1 = at(&[(i, h)])?;
        let m1 = at(&[(i, -h)])?;
        let m2 = at(&[(i, -2.0 * h)])?;
        dg.push((&m2 - &f2 + (&f1 - &m1) * 8.0) / (12.0 * h));
        ddg[i][i] = ((&f2 + &m2) * -1.0 + (&f1 + &m1) * 16.0 - &g * 30.0) / (12.0 * h * h);
        for j in 0..i {
            let pp = at(&[(i, h), (j, h)])?;
            let pm = at(&[(i, h), (j, -h)])?;
            let mp = at(&[(i, -h), (j, h)])?;
            let mm = at(&[(i, -h), (j, -h)])?;
            let mixed = (pp - pm - mp + mm) / (4.0 * h * h);
            ddg[i][j] = mixed.clone();
            ddg[j][i] = mixed;
        }
    }

    // Gamma^k_ij and d_m Gamma^k_ij.
    let first_kind = |l: usize, i: usize, j: usize| 0.5 * (dg[i][(l, j)] + dg[j][(i, l)] - dg[l][(i, j)]);
    let d_first_kind =
        |m: usize, l: usize, i: usize, j: usize| 0.5 * (ddg[m][i][(l, j)] + ddg[m][j][(i, l)] - ddg[m][l][(i, j)]);
    let dg_inv: Vec<DMatrix<f64>> = (0..n).map(|m| -(&g_inv * &dg[m] * &g_inv)).collect();
    let idx = |k: usize, i: usize, j: usize| (k * n + i) * n + j;
    let mut gam = vec![0.0; n * n * n];
    let mut dgam = vec![vec![0.0; n * n * n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += g_inv[(k, l)] * first_kind(l, i, j);
                }
                gam[idx(k, i, j)] = s;
                for m in 0..n {
                    let mut ds = 0.0;
                    for l in 0..n {
                        ds += dg_inv[m][(k, l)] * first_kind(l, i, j) + g_inv[(k, l)] * d_first_kind(m, l, i, j);
                    }
                    dgam[m][idx(k, i, j)] = ds;
                }
            }
        }
    }

    // Ric_bd = R^a_bad.
    let mut ric = DMatrix::zeros(n, n);
    for b in 0..n {
        for d in 0..n {
            let mut s = 0.0;
            for a in 0..n {
                s += dgam[a][idx(a, d, b)] - dgam[d][idx(a, a, b)];
                for e in 0..n {
                    s += gam[idx(a, a, e)] * gam[idx(e, d, b)] - gam[idx(a, d, e)] * gam[idx(e, a, b)];
                }
            }
            ric[(b, d)] = s;
        }
    }
    Ok((&g_inv * ric).trace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{Fiber, Interval};

    #[test]
    fn hyperbolic_sectional_curvature() {
        let w = WarpedProduct::from_text(Interval::real_line(), "exp(t)", Fiber::Flat, 2).unwrap();
        let p = AmbientPoint::new(&w, vec![0.3, 0.1, -0.2]).unwrap();
        let x = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let y = DVector::from_vec(vec![0.0, (-0.3f64).exp(), 0.0]);
        let r = curvature_from_christoffels(&w, &p, &x, &y, &y).unwrap();
        let g = w.metric(&p).unwrap();
        let k = r.dot(&(&g * &x));
        assert!((k + 1.0).abs() < 1e-6, "{k}");
    }
}
