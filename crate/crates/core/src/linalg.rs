//! Small dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{SymmetricEigen, SVD};

use crate::{CMat, Complex64};

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Frobenius (Hilbert-Schmidt) norm.
pub fn hs_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖U U* − I‖_F`.
pub fn unitarity_defect(u: &CMat) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    hs_norm(&(u * u.adjoint() - identity(u.nrows())))
}

/// Unitary factor `W V*` of the polar decomposition `M = (W V*)(V Σ V*)`.
pub fn polar_unitary(m: &CMat) -> CMat {
    let svd = SVD::new(m.clone(), true, true);
    let u = svd.u.expect("svd u");
    let v_t = svd.v_t.expect("svd v_t");
    u * v_t
}

/// Eigen-decomposition of a Hermitian matrix with ascending eigenvalues;
/// eigenvector columns follow the same order.
pub fn hermitian_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Orthonormal basis of the (numerical) null space of `m`: right singular
/// vectors whose singular value is at most `rel_tol * σ_max`. Always returns at
/// least the vector of the smallest singular value.
pub fn null_space(m: &CMat, rel_tol: f64) -> Vec<Vec<Complex64>> {
    let cols = m.ncols();
    // Pad to at least square so that every right singular vector is returned.
    let padded = if m.nrows() < cols {
        let mut p = CMat::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("svd v_t");
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let mut idx: Vec<usize> = (0..sv.len()).collect();
    idx.sort_by(|&a, &b| sv[a].total_cmp(&sv[b]));
    let mut out = Vec::new();
    for (k, &i) in idx.iter().enumerate() {
        if k == 0 || sv[i] <= rel_tol * smax {
            out.push((0..cols).map(|c| v_t[(i, c)].conj()).collect());
        }
    }
    out
}

/// Trace of a square matrix.
pub fn trace(m: &CMat) -> Complex64 {
    m.trace()
}
