//! Small dense complex linear algebra on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type CVector = DVector<C64>;
pub type CMatrix = DMatrix<C64>;

/// Relative determinant threshold below which a matrix is treated as singular.
pub const SINGULAR_REL_TOL: f64 = 1e-12;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn vector(entries: &[C64]) -> CVector {
    CVector::from_column_slice(entries)
}

pub fn real_vector(entries: &[f64]) -> CVector {
    CVector::from_iterator(entries.len(), entries.iter().map(|&x| c64(x, 0.0)))
}

/// Builds a matrix from row-major entries.
pub fn matrix(n: usize, rows: &[C64]) -> CMatrix {
    CMatrix::from_row_slice(n, n, rows)
}

pub fn real_matrix(n: usize, rows: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(n, n, rows.iter().map(|&x| c64(x, 0.0)))
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn euclidean_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `|det m| / (||m||_F / sqrt(n))^n`, which lies in `[0, 1]` and equals one
/// exactly for nonzero multiples of unitary matrices.
pub fn relative_determinant(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let scale = frobenius_norm(m) / (n as f64).sqrt();
    if scale == 0.0 {
        return 0.0;
    }
    m.determinant().norm() / scale.powi(n as i32)
}

pub fn is_invertible(m: &CMatrix) -> bool {
    m.is_square() && relative_determinant(m) > SINGULAR_REL_TOL
}
