use nalgebra::{DMatrix, DVector};

/// `u^T G v`.
pub(crate) fn inner(g: &DMatrix<f64>, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    u.dot(&(g * v))
}

/// Inverse of a symmetric positive definite matrix, symmetrized.
pub(crate) fn spd_inverse(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let inv = m.clone().cholesky()?.inverse();
    Some((&inv + inv.transpose()) * 0.5)
}

/// Max-abs entry.
pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// Eigenvalues of `g^{-1} s` for symmetric `s` and SPD `g`, ascending.
pub(crate) fn generalized_sym_eigenvalues(s: &DMatrix<f64>, g: &DMatrix<f64>) -> Option<Vec<f64>> {
    let l = g.clone().cholesky()?.l();
    let l_inv = l.clone().try_inverse()?;
    let c = &l_inv * s * l_inv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut ev: Vec<f64> = c.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Some(ev)
}
