//! Centralized numerical tolerances.
//!
//! All matrix residuals are measured in the Frobenius norm. Tolerances that
//! scale with block size are stated per unit of block dimension: a block on
//! manifold `n` (side `n + 1`) is allowed `TOL * (n + 1)`.

/// Hermiticity of density-operator blocks, `‖B − B†‖_F` (absolute).
pub const HERMITICITY: f64 = 1e-12;

/// Positive semidefiniteness: smallest eigenvalue may not fall below
/// `-PSD_PER_DIM * (n + 1)`.
pub const PSD_PER_DIM: f64 = 1e-10;

/// Trace normalization, `|tr ρ + deficit − 1|`, and the manifold-weight
/// trace condition `|Σ (n+1) r_n − 1|`.
pub const TRACE: f64 = 1e-10;

/// Pure-state normalization, `|‖ψ‖₂ − 1|`.
pub const STATE_NORM: f64 = 1e-12;

/// Unitarity of lossless blocks, `‖U†U − I‖_F ≤ UNITARITY_PER_DIM * (n + 1)`.
pub const UNITARITY_PER_DIM: f64 = 1e-12;

/// Default unpolarization verdict tolerance, applied per block as
/// `VERDICT_PER_DIM * (n + 1)`. Eigensolver-limited accuracy with
/// dimension-linear headroom.
pub const VERDICT_PER_DIM: f64 = 1e-10;

/// Relative singular-value cutoff for the commutant nullspace: singular
/// values below `COMMUTANT_SV_CUTOFF * σ_max` count as zero. The spectral
/// gap between zero and nonzero singular values is O(1), so this is robust.
pub const COMMUTANT_SV_CUTOFF: f64 = 1e-8;
