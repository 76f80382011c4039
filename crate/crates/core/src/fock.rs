//! Two-mode Fock basis and the block-diagonal (direct-sum) data model.
//!
//! States with a fixed total photon number `n` span the excitation manifold
//! of dimension `n + 1`. Within a manifold the basis is ordered by `n_a`
//! ascending: `|0,n⟩, |1,n−1⟩, …, |n,0⟩`. Across manifolds the basis is
//! ordered by `n` ascending, so the full truncated space has dimension
//! `(n_max+1)(n_max+2)/2`.
//!
//! Every photon-number-conserving operator is a direct sum of one dense
//! block per manifold; cross-manifold matrix elements are identically zero
//! and are never stored.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

use crate::{Error, Result};

/// A two-mode Fock basis label `|n_a, n_b⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeOccupation {
    /// Photons in mode a.
    pub n_a: usize,
    /// Photons in mode b.
    pub n_b: usize,
}

impl ModeOccupation {
    pub fn new(n_a: usize, n_b: usize) -> Self {
        Self { n_a, n_b }
    }

    /// Total photon number; identifies the excitation manifold.
    pub fn total(&self) -> usize {
        self.n_a + self.n_b
    }
}

/// Dimension of the manifold with `n` photons.
pub fn manifold_dimension(n: usize) -> usize {
    n + 1
}

/// Dimension of the full space truncated at `n_max`.
pub fn total_dimension(n_max: usize) -> usize {
    (n_max + 1) * (n_max + 2) / 2
}

/// Locates a basis state inside its manifold: returns `(n, offset)` where
/// `n = n_a + n_b` and `offset = n_a` under the `n_a`-ascending ordering.
pub fn basis_offset(occ: ModeOccupation) -> (usize, usize) {
    (occ.total(), occ.n_a)
}

/// Inverse of [`basis_offset`] within manifold `n`.
///
/// Panics if `offset > n`.
pub fn occupation_at(n: usize, offset: usize) -> ModeOccupation {
    assert!(offset <= n, "offset {offset} outside manifold {n}");
    ModeOccupation::new(offset, n - offset)
}

/// Position of `|n_a, n_b⟩` in the cross-manifold basis ordering
/// `|0,0⟩, |0,1⟩, |1,0⟩, |0,2⟩, …`.
pub fn global_index(occ: ModeOccupation) -> usize {
    let (n, offset) = basis_offset(occ);
    n * (n + 1) / 2 + offset
}

/// One dense complex matrix acting inside a single excitation manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator {
    n: usize,
    matrix: DMatrix<Complex64>,
}

impl BlockOperator {
    /// Wraps a matrix as the block on manifold `n`; the matrix must be
    /// square with side `n + 1`.
    pub fn new(n: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let side = manifold_dimension(n);
        if matrix.nrows() != side || matrix.ncols() != side {
            return Err(Error::BadBlockShape {
                n,
                expected: side,
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        Ok(Self { n, matrix })
    }

    pub fn zero(n: usize) -> Self {
        let side = manifold_dimension(n);
        Self {
            n,
            matrix: DMatrix::zeros(side, side),
        }
    }

    pub fn identity(n: usize) -> Self {
        let side = manifold_dimension(n);
        Self {
            n,
            matrix: DMatrix::identity(side, side),
        }
    }

    /// `value * I` on manifold `n`.
    pub fn scalar(n: usize, value: Complex64) -> Self {
        let side = manifold_dimension(n);
        Self {
            n,
            matrix: DMatrix::from_fn(side, side, |i, j| {
                if i == j {
                    value
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }

    /// Builds the block entrywise; `f(row, col)` indexes the `n_a`-ascending
    /// basis.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let side = manifold_dimension(n);
        Self {
            n,
            matrix: DMatrix::from_fn(side, side, f),
        }
    }

    /// Manifold photon number.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Matrix side, `n + 1`.
    pub fn dim(&self) -> usize {
        manifold_dimension(self.n)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n: self.n,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// `‖B − B†‖_F`.
    pub fn hermiticity_residual(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).norm()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            n: self.n,
            matrix: self.matrix.map(|z| z * s),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }
}

macro_rules! block_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &BlockOperator {
            type Output = BlockOperator;

            fn $method(self, rhs: &BlockOperator) -> BlockOperator {
                assert_eq!(
                    self.n, rhs.n,
                    "block operands live on different manifolds ({} vs {})",
                    self.n, rhs.n
                );
                BlockOperator {
                    n: self.n,
                    matrix: &self.matrix $op &rhs.matrix,
                }
            }
        }
    };
}

block_binop!(Add, add, +);
block_binop!(Sub, sub, -);
block_binop!(Mul, mul, *);

/// A photon-number-conserving operator stored as one block per manifold,
/// `blocks[n]` acting on the `n`-photon manifold, for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectSumOperator {
    blocks: Vec<BlockOperator>,
}

impl DirectSumOperator {
    /// Assembles a direct sum from blocks ordered by manifold; block `k`
    /// must carry `n == k` with matching dimension.
    pub fn from_blocks(blocks: Vec<BlockOperator>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::EmptyDirectSum);
        }
        for (k, block) in blocks.iter().enumerate() {
            if block.n() != k {
                return Err(Error::BadBlockShape {
                    n: k,
                    expected: manifold_dimension(k),
                    rows: block.matrix().nrows(),
                    cols: block.matrix().ncols(),
                });
            }
        }
        let dim_sum: usize = blocks.iter().map(BlockOperator::dim).sum();
        assert_eq!(
            dim_sum,
            total_dimension(blocks.len() - 1),
            "direct-sum dimensions are inconsistent"
        );
        Ok(Self { blocks })
    }

    /// Builds the direct sum from a per-manifold constructor.
    pub fn from_fn(n_max: usize, f: impl Fn(usize) -> BlockOperator) -> Result<Self> {
        Self::from_blocks((0..=n_max).map(f).collect())
    }

    pub fn zero(n_max: usize) -> Self {
        Self::from_fn(n_max, BlockOperator::zero).expect("zero blocks are well-formed")
    }

    pub fn identity(n_max: usize) -> Self {
        Self::from_fn(n_max, BlockOperator::identity).expect("identity blocks are well-formed")
    }

    pub fn n_max(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn block(&self, n: usize) -> &BlockOperator {
        &self.blocks[n]
    }

    pub fn blocks(&self) -> &[BlockOperator] {
        &self.blocks
    }

    pub fn total_dimension(&self) -> usize {
        total_dimension(self.n_max())
    }

    pub fn trace(&self) -> Complex64 {
        self.blocks.iter().map(BlockOperator::trace).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            blocks: self.blocks.iter().map(BlockOperator::adjoint).collect(),
        }
    }

    /// Frobenius norm of the whole operator (blocks are orthogonal pieces).
    pub fn frobenius_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let x = b.frobenius_norm();
                x * x
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Applies `f` to each block, preserving the manifold layout.
    pub fn map_blocks(&self, f: impl Fn(&BlockOperator) -> BlockOperator) -> Result<Self> {
        Self::from_blocks(self.blocks.iter().map(f).collect())
    }
}

/// Embeds a single block into a direct sum that is zero on every other
/// manifold. Fails if the block lies beyond the truncation.
pub fn embed_block(block: BlockOperator, n_max: usize) -> Result<DirectSumOperator> {
    if block.n() > n_max {
        return Err(Error::ManifoldOutOfRange {
            n: block.n(),
            n_max,
        });
    }
    let target = block.n();
    DirectSumOperator::from_fn(n_max, |n| {
        if n == target {
            block.clone()
        } else {
            BlockOperator::zero(n)
        }
    })
}
