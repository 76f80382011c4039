//! The on-disk state format.
//!
//! A state file is a JSON document holding the block-diagonal matrix of a
//! density operator:
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "kind": "density",
//!   "n_max": 1,
//!   "blocks": [
//!     {"n": 0, "matrix": [[1.0000000000000000e0, 0.0000000000000000e0]]}
//!   ],
//!   "metadata": {"truncation_deficit": 0.0000000000000000e0}
//! }
//! ```
//!
//! `matrix` is the row-major `(n+1)²` list of `[re, im]` pairs for the
//! block on manifold `n`; manifolds without an entry are zero blocks.
//! Files of kind `"density"` must pass density-operator validation on load.

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

use unpol_core::fock::{manifold_dimension, BlockOperator, DirectSumOperator};
use unpol_core::states::DensityOperator;

use crate::canon::{escape_str, fmt_f64};

pub const FORMAT_VERSION: u32 = 1;
pub const KIND_DENSITY: &str = "density";

#[derive(Debug, Clone, Deserialize)]
pub struct StateFile {
    pub format_version: u32,
    pub kind: String,
    pub n_max: usize,
    pub blocks: Vec<BlockEntry>,
    #[serde(default)]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct BlockEntry {
    pub n: usize,
    /// Row-major `(n+1)²` entries as `[re, im]`.
    pub matrix: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Default, Deserialize)]
pub struct Metadata {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub truncation_deficit: f64,
}

#[derive(Debug, Error)]
pub enum StateFileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("unsupported format_version {0}, expected {FORMAT_VERSION}")]
    Version(u32),

    #[error("unsupported kind {0:?}, expected {KIND_DENSITY:?}")]
    Kind(String),

    #[error("duplicate block for manifold {0}")]
    DuplicateBlock(usize),

    #[error("block manifold {n} exceeds n_max {n_max}")]
    BlockOutOfRange { n: usize, n_max: usize },

    #[error("block at manifold {n} has {len} entries, expected {expected}")]
    BadBlockLength { n: usize, len: usize, expected: usize },

    #[error("non-finite entry in block at manifold {n}")]
    NonFinite { n: usize },

    #[error("non-finite truncation_deficit")]
    NonFiniteDeficit,

    #[error(transparent)]
    Core(#[from] unpol_core::Error),
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self, StateFileError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Captures a density operator. Exactly-zero blocks are omitted; the
    /// truncation deficit always lands in the metadata.
    pub fn from_density(rho: &DensityOperator, label: Option<String>) -> Self {
        let blocks = rho
            .op()
            .blocks()
            .iter()
            .filter(|block| !block.is_zero())
            .map(|block| {
                let dim = block.dim();
                let mut matrix = Vec::with_capacity(dim * dim);
                for row in 0..dim {
                    for col in 0..dim {
                        let z = block.matrix()[(row, col)];
                        matrix.push([z.re, z.im]);
                    }
                }
                BlockEntry {
                    n: block.n(),
                    matrix,
                }
            })
            .collect();
        Self {
            format_version: FORMAT_VERSION,
            kind: KIND_DENSITY.to_string(),
            n_max: rho.n_max(),
            blocks,
            metadata: Some(Metadata {
                label,
                truncation_deficit: rho.truncation_deficit(),
            }),
        }
    }

    /// Rebuilds the density operator, validating the document and the
    /// density-operator invariants.
    pub fn to_density(&self) -> Result<DensityOperator, StateFileError> {
        if self.format_version != FORMAT_VERSION {
            return Err(StateFileError::Version(self.format_version));
        }
        if self.kind != KIND_DENSITY {
            return Err(StateFileError::Kind(self.kind.clone()));
        }
        let deficit = self
            .metadata
            .as_ref()
            .map(|m| m.truncation_deficit)
            .unwrap_or(0.0);
        if !deficit.is_finite() {
            return Err(StateFileError::NonFiniteDeficit);
        }

        let mut blocks: Vec<BlockOperator> = (0..=self.n_max).map(BlockOperator::zero).collect();
        let mut seen = vec![false; self.n_max + 1];
        for entry in &self.blocks {
            if entry.n > self.n_max {
                return Err(StateFileError::BlockOutOfRange {
                    n: entry.n,
                    n_max: self.n_max,
                });
            }
            if seen[entry.n] {
                return Err(StateFileError::DuplicateBlock(entry.n));
            }
            seen[entry.n] = true;
            let dim = manifold_dimension(entry.n);
            if entry.matrix.len() != dim * dim {
                return Err(StateFileError::BadBlockLength {
                    n: entry.n,
                    len: entry.matrix.len(),
                    expected: dim * dim,
                });
            }
            if entry
                .matrix
                .iter()
                .any(|[re, im]| !re.is_finite() || !im.is_finite())
            {
                return Err(StateFileError::NonFinite { n: entry.n });
            }
            let m = nalgebra_matrix(dim, &entry.matrix);
            blocks[entry.n] = BlockOperator::new(entry.n, m)?;
        }
        let op = DirectSumOperator::from_blocks(blocks)?;
        Ok(DensityOperator::from_parts(op, deficit)?)
    }

    /// Canonical serialization: fixed key order, blocks ascending in `n`,
    /// floats with 17 significant digits, trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"format_version\": {},\n", self.format_version));
        out.push_str(&format!("  \"kind\": \"{}\",\n", escape_str(&self.kind)));
        out.push_str(&format!("  \"n_max\": {},\n", self.n_max));
        let mut blocks: Vec<&BlockEntry> = self.blocks.iter().collect();
        blocks.sort_by_key(|b| b.n);
        if blocks.is_empty() {
            out.push_str("  \"blocks\": []");
        } else {
            out.push_str("  \"blocks\": [\n");
            for (i, block) in blocks.iter().enumerate() {
                let entries: Vec<String> = block
                    .matrix
                    .iter()
                    .map(|[re, im]| format!("[{}, {}]", fmt_f64(*re), fmt_f64(*im)))
                    .collect();
                out.push_str(&format!(
                    "    {{\"n\": {}, \"matrix\": [{}]}}{}\n",
                    block.n,
                    entries.join(", "),
                    if i + 1 < blocks.len() { "," } else { "" }
                ));
            }
            out.push_str("  ]");
        }
        if let Some(meta) = &self.metadata {
            out.push_str(",\n  \"metadata\": {");
            if let Some(label) = &meta.label {
                out.push_str(&format!("\"label\": \"{}\", ", escape_str(label)));
            }
            out.push_str(&format!(
                "\"truncation_deficit\": {}}}",
                fmt_f64(meta.truncation_deficit)
            ));
        }
        out.push_str("\n}\n");
        out
    }
}

fn nalgebra_matrix(dim: usize, flat: &[[f64; 2]]) -> nalgebra::DMatrix<Complex64> {
    nalgebra::DMatrix::from_fn(dim, dim, |row, col| {
        let [re, im] = flat[row * dim + col];
        Complex64::new(re, im)
    })
}
