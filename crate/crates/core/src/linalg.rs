//! Small dense-matrix helpers shared across modules.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Eigendecomposition of a Hermitian matrix, eigenpairs sorted by ascending
/// eigenvalue. Only the Hermitian part of the input is used.
pub fn hermitian_eigen(h: &DMatrix<Complex64>) -> (Vec<f64>, Vec<DVector<Complex64>>) {
    let herm = (h + h.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(herm);
    let mut pairs: Vec<(f64, DVector<Complex64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(j, &val)| (val, eig.eigenvectors.column(j).into_owned()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// `exp(iH)` for Hermitian `H`, via eigendecomposition. Unitary up to
/// eigensolver accuracy.
pub fn exp_i_hermitian(h: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(h.clone());
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&lambda| Complex64::new(0.0, lambda).exp())
        .collect();
    let v = &eig.eigenvectors;
    let scaled = DMatrix::from_fn(h.nrows(), h.ncols(), |i, j| v[(i, j)] * phases[j]);
    scaled * v.adjoint()
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    let herm = (m + m.adjoint()).scale(0.5);
    SymmetricEigen::new(herm)
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |acc, &v| acc.min(v))
}

/// Deterministic 64-bit mixer used to derive independent sub-seeds from a
/// master seed, e.g. per Monte-Carlo trial or per manifold block.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0x9E37_79B9_7F4A_7C15)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
