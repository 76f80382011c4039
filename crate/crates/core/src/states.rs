//! Density operators on the truncated two-mode space.
//!
//! The data model is block-diagonal: cross-manifold coherences are outside
//! the representable set. Every transformation in scope conserves photon
//! number and the unpolarized family is block-diagonal, so nothing of
//! interest is lost; a pure state with support on several manifolds is
//! admitted only through explicit dephasing, which [`pure_density`] flags.
//!
//! Truncated constructions record the probability weight lost beyond
//! `n_max` in `truncation_deficit` instead of renormalizing, so analyses
//! see the true truncated operator. Renormalization is a separate,
//! explicit call.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::fock::{
    global_index, total_dimension, BlockOperator, DirectSumOperator, ModeOccupation,
};
use crate::linalg::min_eigenvalue;
use crate::transforms::LosslessUnitary;
use crate::{tolerance, Error, Result};

/// Nonnegative weights `r_n`, one per manifold, defining an unpolarized
/// state `ρ = ⊕ r_n I_{n+1}`. Indexed by photon number `n`, so the trace
/// condition reads `Σ (n+1) r_n = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldWeights {
    weights: Vec<f64>,
}

impl ManifoldWeights {
    /// Validates nonnegativity and the trace condition to `1e-10`.
    ///
    /// Zero weights are admitted (rather than requiring strict positivity)
    /// so finite truncations of infinite-support states are expressible.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyDirectSum);
        }
        for (n, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::NegativeWeight { n, value: w });
            }
        }
        let sum: f64 = weights
            .iter()
            .enumerate()
            .map(|(n, &w)| (n + 1) as f64 * w)
            .sum();
        if (sum - 1.0).abs() > tolerance::TRACE {
            return Err(Error::TraceCondition { sum });
        }
        Ok(Self { weights })
    }

    pub fn n_max(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weight(&self, n: usize) -> f64 {
        self.weights[n]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// A normalized state vector over the cross-manifold basis
/// `|0,0⟩, |0,1⟩, |1,0⟩, |0,2⟩, …` up to `n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector {
    n_max: usize,
    amplitudes: Vec<Complex64>,
}

impl PureStateVector {
    pub fn new(n_max: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let expected = total_dimension(n_max);
        if amplitudes.len() != expected {
            return Err(Error::BadAmplitudeCount {
                len: amplitudes.len(),
                expected,
                n_max,
            });
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tolerance::STATE_NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { n_max, amplitudes })
    }

    /// The basis state `|n_a, n_b⟩` embedded in a truncation at `n_max`.
    pub fn basis_state(occ: ModeOccupation, n_max: usize) -> Result<Self> {
        if occ.total() > n_max {
            return Err(Error::ManifoldOutOfRange {
                n: occ.total(),
                n_max,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); total_dimension(n_max)];
        amplitudes[global_index(occ)] = Complex64::new(1.0, 0.0);
        Ok(Self { n_max, amplitudes })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, occ: ModeOccupation) -> Complex64 {
        self.amplitudes[global_index(occ)]
    }

    /// The component inside manifold `n`, as a dense vector of length `n+1`.
    pub fn manifold_component(&self, n: usize) -> DVector<Complex64> {
        let start = n * (n + 1) / 2;
        DVector::from_fn(n + 1, |i, _| self.amplitudes[start + i])
    }
}

/// A block-diagonal density operator: Hermitian PSD blocks with
/// `tr ρ + truncation_deficit = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    op: DirectSumOperator,
    truncation_deficit: f64,
}

/// Residuals against the density-operator invariants, as reported by
/// [`DensityOperator::diagnostics`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDiagnostics {
    /// Largest per-block `‖B − B†‖_F`.
    pub hermiticity_residual: f64,
    /// Smallest eigenvalue over all (hermitized) blocks, clamped to zero
    /// when every block is positive semidefinite, so this residual is 0
    /// for a valid state and the offending eigenvalue otherwise.
    pub min_eigenvalue: f64,
    /// `|tr ρ + deficit − 1|`.
    pub trace_residual: f64,
    /// True iff all residuals are within the invariants (the eigenvalue
    /// floor scales as `−1e-10·(n+1)` per block).
    pub pass: bool,
}

impl DensityOperator {
    /// Wraps a direct sum after checking the density-operator invariants.
    pub fn from_parts(op: DirectSumOperator, truncation_deficit: f64) -> Result<Self> {
        let rho = Self::from_parts_unchecked(op, truncation_deficit);
        let diag = rho.diagnostics();
        if !diag.pass {
            return Err(Error::InvalidDensity {
                reason: format!(
                    "hermiticity {:.3e}, min eigenvalue {:.3e}, trace residual {:.3e}",
                    diag.hermiticity_residual, diag.min_eigenvalue, diag.trace_residual
                ),
            });
        }
        Ok(rho)
    }

    /// Wraps without validating. Intended for diagnostics of deliberately
    /// broken operators; anything built here should go through
    /// [`DensityOperator::diagnostics`] before being trusted.
    pub fn from_parts_unchecked(op: DirectSumOperator, truncation_deficit: f64) -> Self {
        Self {
            op,
            truncation_deficit,
        }
    }

    pub fn op(&self) -> &DirectSumOperator {
        &self.op
    }

    pub fn n_max(&self) -> usize {
        self.op.n_max()
    }

    pub fn block(&self, n: usize) -> &BlockOperator {
        self.op.block(n)
    }

    pub fn truncation_deficit(&self) -> f64 {
        self.truncation_deficit
    }

    pub fn trace(&self) -> f64 {
        self.op.trace().re
    }

    /// Probability carried by manifold `n`.
    pub fn manifold_probability(&self, n: usize) -> f64 {
        self.op.block(n).trace().re
    }

    /// Residuals against the invariants: per-block hermiticity, smallest
    /// block eigenvalue, and trace normalization including the deficit.
    pub fn diagnostics(&self) -> StateDiagnostics {
        let mut hermiticity_residual: f64 = 0.0;
        let mut min_eig = f64::INFINITY;
        let mut psd_ok = true;
        for block in self.op.blocks() {
            hermiticity_residual = hermiticity_residual.max(block.hermiticity_residual());
            let lambda = min_eigenvalue(block.matrix());
            min_eig = min_eig.min(lambda);
            if lambda < -tolerance::PSD_PER_DIM * block.dim() as f64 {
                psd_ok = false;
            }
        }
        let trace_residual = (self.trace() + self.truncation_deficit - 1.0).abs();
        StateDiagnostics {
            hermiticity_residual,
            min_eigenvalue: min_eig.min(0.0),
            trace_residual,
            pass: hermiticity_residual <= tolerance::HERMITICITY
                && psd_ok
                && trace_residual <= tolerance::TRACE,
        }
    }

    /// Rescales so the truncated operator has unit trace and zero deficit.
    /// This is deliberately not done implicitly anywhere.
    pub fn renormalized(&self) -> Result<Self> {
        let trace = self.trace();
        if trace <= 0.0 {
            return Err(Error::InvalidDensity {
                reason: format!("cannot renormalize trace {trace}"),
            });
        }
        let scale = Complex64::new(1.0 / trace, 0.0);
        let op = self.op.map_blocks(|b| b.scale(scale))?;
        Self::from_parts(op, 0.0)
    }

    /// Conjugation `UρU†` by a lossless unitary with the same truncation.
    pub fn transformed(&self, unitary: &LosslessUnitary) -> Result<Self> {
        if unitary.n_max() != self.n_max() {
            return Err(Error::DimensionMismatch {
                left: total_dimension(self.n_max()),
                right: total_dimension(unitary.n_max()),
            });
        }
        let op = self
            .op
            .map_blocks(|b| &(unitary.block(b.n()) * b) * &unitary.block(b.n()).adjoint())?;
        Ok(Self {
            op,
            truncation_deficit: self.truncation_deficit,
        })
    }
}

/// The general unpolarized state `ρ = ⊕ r_n I_{n+1}`: every block is the
/// scalar `r_n` times the identity of its manifold.
pub fn unpolarized_state(weights: &ManifoldWeights) -> DensityOperator {
    let op = DirectSumOperator::from_fn(weights.n_max(), |n| {
        BlockOperator::scalar(n, Complex64::new(weights.weight(n), 0.0))
    })
    .expect("scalar blocks are well-formed");
    DensityOperator::from_parts(op, 0.0).expect("valid weights give a valid density operator")
}

/// Two-mode thermal state with the given mean photon number per mode,
/// truncated at `n_max`. With `x = n̄/(1+n̄)` every basis state of manifold
/// `n` carries weight `(1−x)² xⁿ`; the weight beyond the truncation is
/// recorded as the deficit, not renormalized away.
pub fn thermal_state(mean_photons_per_mode: f64, n_max: usize) -> Result<DensityOperator> {
    if mean_photons_per_mode <= 0.0 || !mean_photons_per_mode.is_finite() {
        return Err(Error::NonpositiveMeanPhotons {
            value: mean_photons_per_mode,
        });
    }
    let x = mean_photons_per_mode / (1.0 + mean_photons_per_mode);
    let base = (1.0 - x) * (1.0 - x);
    let mut captured = 0.0;
    let op = DirectSumOperator::from_fn(n_max, |n| {
        let w = base * x.powi(n as i32);
        BlockOperator::scalar(n, Complex64::new(w, 0.0))
    })?;
    for n in 0..=n_max {
        captured += (n + 1) as f64 * base * x.powi(n as i32);
    }
    let deficit = 1.0 - captured;
    DensityOperator::from_parts(op, deficit)
}

/// Result of projecting a pure state onto the block-diagonal data model.
#[derive(Debug, Clone, PartialEq)]
pub struct DephasedPure {
    pub rho: DensityOperator,
    /// True iff the input had support on more than one manifold, in which
    /// case the cross-manifold coherences were discarded.
    pub coherence_discarded: bool,
}

/// `|ψ⟩⟨ψ|` as a block-diagonal density operator. If `ψ` spans several
/// manifolds only the block-diagonal (dephased) part is representable and
/// the discarded coherence is flagged.
pub fn pure_density(psi: &PureStateVector) -> DephasedPure {
    let n_max = psi.n_max();
    let mut populated = 0usize;
    let op = DirectSumOperator::from_fn(n_max, |n| {
        let component = psi.manifold_component(n);
        let block = DMatrix::from_fn(n + 1, n + 1, |i, j| component[i] * component[j].conj());
        BlockOperator::new(n, block).expect("outer product has manifold dimension")
    })
    .expect("dephased blocks are well-formed");
    for n in 0..=n_max {
        if psi.manifold_component(n).iter().any(|a| a.norm_sqr() > 0.0) {
            populated += 1;
        }
    }
    let rho = DensityOperator::from_parts(op, 0.0)
        .expect("dephased pure state is a valid density operator");
    DephasedPure {
        rho,
        coherence_discarded: populated > 1,
    }
}
