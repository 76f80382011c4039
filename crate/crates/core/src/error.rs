use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("manifold {n} exceeds truncation n_max = {n_max}")]
    ManifoldOutOfRange { n: usize, n_max: usize },

    #[error("block at manifold {n} must be {expected}x{expected}, got {rows}x{cols}")]
    BadBlockShape {
        n: usize,
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("direct sum must contain at least the vacuum block")]
    EmptyDirectSum,

    #[error("operator dimensions do not match: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("manifold weight r_{n} = {value} is negative")]
    NegativeWeight { n: usize, value: f64 },

    #[error("trace condition violated: sum of (n+1) r_n = {sum}, expected 1")]
    TraceCondition { sum: f64 },

    #[error("mean photon number must be positive, got {value}")]
    NonpositiveMeanPhotons { value: f64 },

    #[error("state vector has norm {norm}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("amplitude vector has length {len}, expected {expected} for n_max = {n_max}")]
    BadAmplitudeCount {
        len: usize,
        expected: usize,
        n_max: usize,
    },

    #[error("not a density operator: {reason}")]
    InvalidDensity { reason: String },

    #[error("block at manifold {n} is not unitary: residual {residual:.3e}")]
    NotUnitary { n: usize, residual: f64 },

    #[error("moment order {order} is outside 1..={max}")]
    MomentOrder { order: usize, max: usize },
}
