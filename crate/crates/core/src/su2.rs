//! Schwinger SU(2) generators, photon number and Casimir blocks.
//!
//! The three generators are built per manifold directly from the two-mode
//! ladder matrix elements
//!
//! ```text
//! a†b |n_a, n_b⟩ = √((n_a+1) n_b) |n_a+1, n_b−1⟩
//! ab† |n_a, n_b⟩ = √(n_a (n_b+1)) |n_a−1, n_b+1⟩
//! ```
//!
//! never by truncating infinite-dimensional mode operators, so each block
//! closes exactly on its manifold. On the `n`-photon manifold they realize
//! the spin-`n/2` representation: `[L_k, L_l] = i ε_klm L_m` and
//! `L₁² + L₂² + L₃² = (n/2)(n/2 + 1) I`.

use num_complex::Complex64;

use crate::fock::BlockOperator;
use crate::{Error, Result};

/// Quantized Stokes operators are twice the Schwinger generators:
/// `S_k = STOKES_FACTOR * L_k`. The proportionality convention is fixed
/// here once; no separate Stokes operator family is exposed.
pub const STOKES_FACTOR: f64 = 2.0;

/// Selects one of the three SU(2) generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `(a†b + ab†)/2`, the mode-exchange quadrature.
    L1,
    /// `(a†b − ab†)/(2i)`, the generator of geometric rotations.
    L2,
    /// `(a†a − b†b)/2`, the generator of differential phase shifts.
    L3,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::L1, Generator::L2, Generator::L3];

    /// The conventional index k ∈ {1, 2, 3}.
    pub fn index(self) -> usize {
        match self {
            Generator::L1 => 1,
            Generator::L2 => 2,
            Generator::L3 => 3,
        }
    }

    pub fn from_index(k: usize) -> Option<Self> {
        match k {
            1 => Some(Generator::L1),
            2 => Some(Generator::L2),
            3 => Some(Generator::L3),
            _ => None,
        }
    }
}

/// The generator `L_k` restricted to the `n`-photon manifold, as an
/// `(n+1)×(n+1)` Hermitian block in the `n_a`-ascending basis.
pub fn schwinger_block(k: Generator, n: usize) -> BlockOperator {
    // Off-diagonal ladder amplitude between offsets i and i+1:
    // ⟨i+1, n−i−1| a†b |i, n−i⟩ = √((i+1)(n−i)).
    let ladder = |i: usize| (((i + 1) * (n - i)) as f64).sqrt();
    BlockOperator::from_fn(n, |row, col| match k {
        Generator::L1 => {
            if row == col + 1 {
                Complex64::new(0.5 * ladder(col), 0.0)
            } else if col == row + 1 {
                Complex64::new(0.5 * ladder(row), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
        Generator::L2 => {
            if row == col + 1 {
                Complex64::new(0.0, -0.5 * ladder(col))
            } else if col == row + 1 {
                Complex64::new(0.0, 0.5 * ladder(row))
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
        Generator::L3 => {
            if row == col {
                // Offset i holds |i, n−i⟩, so (n_a − n_b)/2 = i − n/2.
                Complex64::new(row as f64 - n as f64 / 2.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
    })
}

/// Total photon number restricted to manifold `n`: the scalar block `n·I`.
pub fn photon_number_block(n: usize) -> BlockOperator {
    BlockOperator::scalar(n, Complex64::new(n as f64, 0.0))
}

/// The Casimir `L₁² + L₂² + L₃²` on manifold `n`: the scalar block
/// `(n/2)(n/2 + 1)·I`.
pub fn casimir_block(n: usize) -> BlockOperator {
    let half = n as f64 / 2.0;
    BlockOperator::scalar(n, Complex64::new(half * (half + 1.0), 0.0))
}

/// `AB − BA` for two blocks on the same manifold.
pub fn commutator(a: &BlockOperator, b: &BlockOperator) -> Result<BlockOperator> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(&(a * b) - &(b * a))
}
