//! JSON encodings for complex numbers and matrices.
//!
//! A complex number is `[re, im]`; a matrix is a row-major nested array of
//! those.

use crate::{CMat, Complex64};

pub type JsonComplex = [f64; 2];
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

pub fn complex_to_json(z: Complex64) -> JsonComplex {
    [z.re, z.im]
}

pub fn complex_from_json(v: JsonComplex) -> Complex64 {
    Complex64::new(v[0], v[1])
}

pub fn matrix_to_json(m: &CMat) -> JsonMatrix {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| complex_to_json(m[(r, c)])).collect())
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> crate::Result<CMat> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(crate::Error::ShapeMismatch("ragged matrix rows".into()));
    }
    Ok(CMat::from_fn(n, m, |r, c| complex_from_json(rows[r][c])))
}

pub fn vec_to_json(v: &[Complex64]) -> Vec<JsonComplex> {
    v.iter().copied().map(complex_to_json).collect()
}

pub fn vec_from_json(v: &[JsonComplex]) -> Vec<Complex64> {
    v.iter().copied().map(complex_from_json).collect()
}
