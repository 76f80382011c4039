//! Lossless (photon-number-conserving) unitaries.
//!
//! The linear family `exp(i(φ₁L₁ + φ₂L₂ + φ₃L₃))` acts as the same group
//! element on every manifold and covers every combination of differential
//! phase shifts and geometric rotations. A general lossless unitary is an
//! independent unitary on each manifold; [`random_lossless`] samples that
//! larger family for invariance testing.
//!
//! Matrix exponentials go through the Hermitian eigendecomposition of the
//! generator, so blocks are unitary up to eigensolver accuracy.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::fock::{BlockOperator, DirectSumOperator};
use crate::linalg::{derive_seed, exp_i_hermitian};
use crate::su2::{schwinger_block, Generator};
use crate::{tolerance, Error, Result};

/// Generator coefficients (radians) of a linear lossless transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Angles {
    pub phi_1: f64,
    pub phi_2: f64,
    pub phi_3: f64,
}

impl Su2Angles {
    pub fn new(phi_1: f64, phi_2: f64, phi_3: f64) -> Self {
        Self { phi_1, phi_2, phi_3 }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    /// Euclidean length of the coefficient vector; for Haar-sampled angles
    /// this is the SU(2) rotation angle in `[0, 2π]`.
    pub fn rotation_angle(&self) -> f64 {
        (self.phi_1 * self.phi_1 + self.phi_2 * self.phi_2 + self.phi_3 * self.phi_3).sqrt()
    }
}

/// A direct sum whose every block is unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct LosslessUnitary {
    op: DirectSumOperator,
}

impl LosslessUnitary {
    /// Validates per-block unitarity (`‖U†U − I‖_F ≤ 1e-12·(n+1)`) and wraps
    /// the direct sum.
    pub fn from_direct_sum(op: DirectSumOperator) -> Result<Self> {
        for block in op.blocks() {
            let residual = unitarity_residual(block);
            if residual > tolerance::UNITARITY_PER_DIM * block.dim() as f64 {
                return Err(Error::NotUnitary {
                    n: block.n(),
                    residual,
                });
            }
        }
        Ok(Self { op })
    }

    pub fn identity(n_max: usize) -> Self {
        Self {
            op: DirectSumOperator::identity(n_max),
        }
    }

    pub fn op(&self) -> &DirectSumOperator {
        &self.op
    }

    pub fn block(&self, n: usize) -> &BlockOperator {
        self.op.block(n)
    }

    pub fn n_max(&self) -> usize {
        self.op.n_max()
    }
}

/// `‖U†U − I‖_F` for a single block.
pub fn unitarity_residual(block: &BlockOperator) -> f64 {
    let gram = &block.adjoint() * block;
    (&gram - &BlockOperator::identity(block.n())).frobenius_norm()
}

/// `exp(i(φ₁L₁ + φ₂L₂ + φ₃L₃))` restricted to manifold `n`.
pub fn evolution_block(angles: Su2Angles, n: usize) -> BlockOperator {
    let generator = &(&schwinger_block(Generator::L1, n).scale(real(angles.phi_1))
        + &schwinger_block(Generator::L2, n).scale(real(angles.phi_2)))
        + &schwinger_block(Generator::L3, n).scale(real(angles.phi_3));
    BlockOperator::new(n, exp_i_hermitian(generator.matrix()))
        .expect("exponential preserves block shape")
}

/// The linear lossless transformation as a direct sum over `n = 0..=n_max`.
pub fn evolution(angles: Su2Angles, n_max: usize) -> LosslessUnitary {
    let op = DirectSumOperator::from_fn(n_max, |n| evolution_block(angles, n))
        .expect("evolution blocks are well-formed");
    LosslessUnitary::from_direct_sum(op).expect("eigendecomposition yields unitary blocks")
}

/// Differential phase shift between the two modes: `evolution((0, 0, θ))`.
pub fn differential_phase(theta: f64, n_max: usize) -> LosslessUnitary {
    evolution(Su2Angles::new(0.0, 0.0, theta), n_max)
}

/// Geometric rotation about the propagation direction: `evolution((0, θ, 0))`.
///
/// The pair (rotations, phase shifts) generated by L₂ and L₃ defines the
/// invariance group used throughout; generating from {L₁, L₂} or {L₁, L₃}
/// instead would give an equivalent definition.
pub fn geometric_rotation(theta: f64, n_max: usize) -> LosslessUnitary {
    evolution(Su2Angles::new(0.0, theta, 0.0), n_max)
}

/// Haar-distributed SU(2) angles: a uniform unit quaternion mapped to
/// axis–angle form, `φ = angle · axis` with angle in `[0, 2π]`.
pub fn haar_su2_angles(seed: u64) -> Su2Angles {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q: [f64; 4] = {
        let mut draw = || rng.sample::<f64, _>(StandardNormal);
        let mut v = [draw(), draw(), draw(), draw()];
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            v[0] = 1.0;
        } else {
            for x in &mut v {
                *x /= norm;
            }
        }
        v
    };
    let angle = 2.0 * q[0].clamp(-1.0, 1.0).acos();
    let axis_norm = (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
    if axis_norm < 1e-300 {
        // angle ≈ 0 or 2π; the axis is immaterial.
        Su2Angles::new(angle, 0.0, 0.0)
    } else {
        let s = angle / axis_norm;
        Su2Angles::new(q[1] * s, q[2] * s, q[3] * s)
    }
}

/// Haar-random linear lossless unitary: Haar on SU(2), lifted to every
/// manifold. Deterministic in `seed`.
pub fn haar_random_su2(seed: u64, n_max: usize) -> LosslessUnitary {
    evolution(haar_su2_angles(seed), n_max)
}

/// A general lossless unitary: an independent Haar-random unitary on each
/// manifold (QR of a complex Gaussian matrix with phase-fixed R diagonal).
/// Deterministic in `seed`; each block draws from its own stream, so the
/// block at manifold `n` does not depend on `n_max`.
pub fn random_lossless(seed: u64, n_max: usize) -> LosslessUnitary {
    let op = DirectSumOperator::from_fn(n_max, |n| {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, n as u64));
        BlockOperator::new(n, haar_unitary_matrix(&mut rng, n + 1))
            .expect("sampled block has manifold dimension")
    })
    .expect("sampled blocks are well-formed");
    LosslessUnitary::from_direct_sum(op).expect("QR yields unitary blocks")
}

fn haar_unitary_matrix(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<Complex64> {
    let gauss = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        ) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = gauss.qr();
    let q = qr.q();
    let r = qr.r();
    // Fix the phase gauge so the distribution is Haar rather than
    // QR-convention dependent.
    DMatrix::from_fn(dim, dim, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { d / d.norm() };
        q[(i, j)] * phase
    })
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}
