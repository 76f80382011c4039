//! Unpolarization analysis.
//!
//! A state is unpolarized when it is invariant under every geometric
//! rotation and differential phase shift. Three independent routes to that
//! verdict are implemented and cross-checked:
//!
//! 1. block-scalar residuals: distance of each block from the multiple of
//!    the identity with the same trace,
//! 2. commutator norms `‖[ρ, L_k]‖_F` for all three generators (commuting
//!    with L₂ and L₃ already forces commuting with L₁),
//! 3. Monte-Carlo invariance under sampled lossless unitaries.
//!
//! [`commutant_dimension`] re-derives by brute force why the routes agree:
//! the only Hermitian matrices commuting with L₂ and L₃ on a manifold are
//! the scalars.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::fock::BlockOperator;
use crate::linalg::{derive_seed, hermitian_eigen};
use crate::states::DensityOperator;
use crate::su2::{schwinger_block, Generator};
use crate::transforms::{haar_random_su2, random_lossless, LosslessUnitary};
use crate::{tolerance, Error, Result};

/// Largest moment order served by [`stokes_moment_tensor`] (the tensor has
/// `3^order` entries).
pub const MAX_MOMENT_ORDER: usize = 6;

/// Which family of lossless unitaries a Monte-Carlo run samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitaryFamily {
    /// The linear family `exp(i φ·L)`, Haar on SU(2).
    Linear,
    /// Independent Haar-random unitaries on every manifold.
    General,
}

/// Per-manifold evidence underlying an unpolarization verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct UnpolarizationReport {
    /// Base tolerance; each block is allowed `tolerance * (n + 1)`.
    pub tolerance: f64,
    /// `‖[ρ_n, L_k]‖_F` indexed by manifold, then k = 1, 2, 3.
    pub commutator_norms: Vec<[f64; 3]>,
    /// `‖ρ_n − (tr ρ_n / (n+1)) I‖_F` per manifold.
    pub block_scalar_residuals: Vec<f64>,
    /// True iff both routes are within tolerance on every manifold.
    pub verdict: bool,
}

impl UnpolarizationReport {
    /// Allowed residual on manifold `n`.
    pub fn threshold(&self, n: usize) -> f64 {
        self.tolerance * (n + 1) as f64
    }
}

/// `‖[ρ_n, L_k]‖_F` for every manifold and every generator.
pub fn commutator_norms(rho: &DensityOperator) -> Vec<[f64; 3]> {
    (0..=rho.n_max())
        .map(|n| {
            let block = rho.block(n);
            let mut norms = [0.0; 3];
            for (slot, k) in Generator::ALL.into_iter().enumerate() {
                let lk = schwinger_block(k, n);
                let comm = &(block * &lk) - &(&lk * block);
                norms[slot] = comm.frobenius_norm();
            }
            norms
        })
        .collect()
}

/// Distance of each block from its trace-matched scalar block.
pub fn block_scalar_residuals(rho: &DensityOperator) -> Vec<f64> {
    (0..=rho.n_max())
        .map(|n| {
            let block = rho.block(n);
            let scalar = BlockOperator::scalar(n, block.trace() / (n + 1) as f64);
            (block - &scalar).frobenius_norm()
        })
        .collect()
}

/// Tests whether `ρ` has the unpolarized form, reporting both the
/// block-scalar and the commutator route so they cross-check each other.
/// `base_tolerance` is applied per block as `base_tolerance * (n + 1)`;
/// [`tolerance::VERDICT_PER_DIM`] is the conventional default.
pub fn is_unpolarized(rho: &DensityOperator, base_tolerance: f64) -> UnpolarizationReport {
    let commutator_norms = commutator_norms(rho);
    let block_scalar_residuals = block_scalar_residuals(rho);
    let verdict = (0..=rho.n_max()).all(|n| {
        let threshold = base_tolerance * (n + 1) as f64;
        block_scalar_residuals[n] <= threshold
            && commutator_norms[n].iter().all(|&norm| norm <= threshold)
    });
    UnpolarizationReport {
        tolerance: base_tolerance,
        commutator_norms,
        block_scalar_residuals,
        verdict,
    }
}

/// An orthonormal basis (over the reals) of the Hermitian matrices on
/// manifold `n` that commute with both L₂ and L₃, found as the nullspace
/// of the stacked commutation constraints. Singular values below
/// `1e-8 · σ_max` count as zero.
pub fn commutant_basis(n: usize) -> Vec<DMatrix<Complex64>> {
    let dim = n + 1;
    let herm_basis = hermitian_basis(dim);
    let generators = [
        schwinger_block(Generator::L2, n),
        schwinger_block(Generator::L3, n),
    ];
    // Rows: Re and Im of every entry of both commutators; columns: the
    // (n+1)² real coordinates over the Hermitian basis.
    let rows = 4 * dim * dim;
    let cols = herm_basis.len();
    let mut constraints = DMatrix::<f64>::zeros(rows, cols);
    for (col, basis_elem) in herm_basis.iter().enumerate() {
        let mut row = 0;
        for gen in &generators {
            let comm = basis_elem * gen.matrix() - gen.matrix() * basis_elem;
            for entry in comm.iter() {
                constraints[(row, col)] = entry.re;
                constraints[(row + 1, col)] = entry.im;
                row += 2;
            }
        }
    }
    let svd = constraints.svd(false, true);
    let v_t = svd.v_t.expect("SVD with V requested");
    let sv_max = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    let cutoff = tolerance::COMMUTANT_SV_CUTOFF * sv_max.max(1.0);
    let mut basis = Vec::new();
    for (i, &sv) in svd.singular_values.iter().enumerate() {
        if sv <= cutoff {
            let coords = v_t.row(i);
            let mut x = DMatrix::<Complex64>::zeros(dim, dim);
            for (j, elem) in herm_basis.iter().enumerate() {
                x += elem.map(|z| z * Complex64::new(coords[j], 0.0));
            }
            basis.push(x);
        }
    }
    basis
}

/// Dimension of the commutant of {L₂, L₃} within the Hermitian matrices on
/// manifold `n`. Irreducibility forces 1 for every `n`.
pub fn commutant_dimension(n: usize) -> usize {
    commutant_basis(n).len()
}

/// Orthonormal real basis of Hermitian `dim × dim` matrices.
fn hermitian_basis(dim: usize) -> Vec<DMatrix<Complex64>> {
    let mut basis = Vec::with_capacity(dim * dim);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..dim {
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        m[(i, i)] = Complex64::new(1.0, 0.0);
        basis.push(m);
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let mut sym = DMatrix::<Complex64>::zeros(dim, dim);
            sym[(i, j)] = Complex64::new(inv_sqrt2, 0.0);
            sym[(j, i)] = Complex64::new(inv_sqrt2, 0.0);
            basis.push(sym);
            let mut asym = DMatrix::<Complex64>::zeros(dim, dim);
            asym[(i, j)] = Complex64::new(0.0, inv_sqrt2);
            asym[(j, i)] = Complex64::new(0.0, -inv_sqrt2);
            basis.push(asym);
        }
    }
    basis
}

/// `Σ_n ‖U_n ρ_n U_n† − ρ_n‖_F`: how far conjugation by `unitary` moves the
/// state.
pub fn invariance_deviation(rho: &DensityOperator, unitary: &LosslessUnitary) -> Result<f64> {
    if rho.n_max() != unitary.n_max() {
        return Err(Error::DimensionMismatch {
            left: rho.n_max() + 1,
            right: unitary.n_max() + 1,
        });
    }
    let mut total = 0.0;
    for n in 0..=rho.n_max() {
        let u = unitary.block(n);
        let moved = &(u * rho.block(n)) * &u.adjoint();
        total += (&moved - rho.block(n)).frobenius_norm();
    }
    Ok(total)
}

/// Worst-case [`invariance_deviation`] over `trials` sampled unitaries of
/// the chosen family. The maximum (not the mean) is reported because the
/// definition quantifies over all transformations. Deterministic in
/// `seed`; trial `t` uses a sub-seed derived from `(seed, t)`, so trials
/// could run in any order.
///
/// Panics if `trials == 0`.
pub fn monte_carlo_invariance(
    rho: &DensityOperator,
    trials: usize,
    seed: u64,
    family: UnitaryFamily,
) -> f64 {
    assert!(trials >= 1, "at least one trial is required");
    let n_max = rho.n_max();
    (0..trials)
        .map(|t| {
            let trial_seed = derive_seed(seed, t as u64);
            let unitary = match family {
                UnitaryFamily::Linear => haar_random_su2(trial_seed, n_max),
                UnitaryFamily::General => random_lossless(trial_seed, n_max),
            };
            invariance_deviation(rho, &unitary).expect("trial unitaries share the truncation")
        })
        .fold(0.0, f64::max)
}

/// All Stokes-generator moments of a fixed order:
/// `⟨L_{k1} ⋯ L_{km}⟩ = Σ_n tr(ρ_n L_{k1}|_n ⋯ L_{km}|_n)` for every index
/// tuple in `{1,2,3}^m`, stored row-major in the tuple digits.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTensor {
    order: usize,
    entries: Vec<Complex64>,
}

impl MomentTensor {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Flat entries, ordered by the base-3 expansion of the index tuple
    /// (first index most significant).
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entry(&self, indices: &[Generator]) -> Complex64 {
        assert_eq!(indices.len(), self.order, "index tuple length mismatch");
        let mut flat = 0usize;
        for g in indices {
            flat = flat * 3 + (g.index() - 1);
        }
        self.entries[flat]
    }

    /// The index tuple (values in 1..=3) for a flat entry position.
    pub fn tuple(&self, mut flat: usize) -> Vec<usize> {
        let mut digits = vec![0usize; self.order];
        for slot in (0..self.order).rev() {
            digits[slot] = flat % 3 + 1;
            flat /= 3;
        }
        digits
    }
}

/// Computes the order-`m` moment tensor of `ρ`. Orders outside
/// `1..=MAX_MOMENT_ORDER` are rejected (cost grows as `3^m`).
pub fn stokes_moment_tensor(rho: &DensityOperator, order: usize) -> Result<MomentTensor> {
    if order == 0 || order > MAX_MOMENT_ORDER {
        return Err(Error::MomentOrder {
            order,
            max: MAX_MOMENT_ORDER,
        });
    }
    let n_max = rho.n_max();
    let generator_blocks: Vec<[BlockOperator; 3]> = (0..=n_max)
        .map(|n| {
            [
                schwinger_block(Generator::L1, n),
                schwinger_block(Generator::L2, n),
                schwinger_block(Generator::L3, n),
            ]
        })
        .collect();
    let count = 3usize.pow(order as u32);
    let mut entries = vec![Complex64::new(0.0, 0.0); count];
    for (flat, entry) in entries.iter_mut().enumerate() {
        let mut digits = vec![0usize; order];
        let mut rem = flat;
        for slot in (0..order).rev() {
            digits[slot] = rem % 3;
            rem /= 3;
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (n, generators) in generator_blocks.iter().enumerate() {
            let mut chain = rho.block(n).clone();
            for &d in &digits {
                chain = &chain * &generators[d];
            }
            total += chain.trace();
        }
        *entry = total;
    }
    Ok(MomentTensor { order, entries })
}

/// The classical notion of unpolarized light: a vanishing Stokes vector,
/// i.e. all first-order moments within `tol` of zero. Strictly weaker than
/// [`is_unpolarized`]; see the two-photon state `|1,1⟩`.
pub fn classical_unpolarized_test(rho: &DensityOperator, tol: f64) -> bool {
    let first = stokes_moment_tensor(rho, 1).expect("order 1 is always valid");
    first.entries().iter().all(|m| m.norm() <= tol)
}

/// One rotation-invariant ("circularly polarized") state: an eigenstate of
/// the geometric-rotation generator L₂.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationEigenstate {
    pub eigenvalue: f64,
    /// Unit vector in the manifold basis.
    pub vector: DVector<Complex64>,
}

/// The `n + 1` orthonormal eigenstates of L₂ on manifold `n`, sorted by
/// ascending eigenvalue; the spectrum is `{−n/2, −n/2+1, …, n/2}`. Each
/// eigenstate's density operator is invariant under every geometric
/// rotation.
pub fn rotation_eigenbasis(n: usize) -> Vec<RotationEigenstate> {
    let l2 = schwinger_block(Generator::L2, n);
    let (values, vectors) = hermitian_eigen(l2.matrix());
    values
        .into_iter()
        .zip(vectors)
        .map(|(eigenvalue, vector)| RotationEigenstate { eigenvalue, vector })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{total_dimension, ModeOccupation};
    use crate::states::{
        pure_density, thermal_state, unpolarized_state, ManifoldWeights, PureStateVector,
    };
    use crate::transforms::geometric_rotation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn basis_density(n_a: usize, n_b: usize, n_max: usize) -> DensityOperator {
        let psi = PureStateVector::basis_state(ModeOccupation::new(n_a, n_b), n_max).unwrap();
        pure_density(&psi).rho
    }

    fn uniform_weights(n_max: usize) -> ManifoldWeights {
        let total = total_dimension(n_max) as f64;
        ManifoldWeights::new(vec![1.0 / total; n_max + 1]).unwrap()
    }

    #[test]
    fn commutator_norms_for_vacuum_are_zero() {
        let rho = basis_density(0, 0, 0);
        let norms = commutator_norms(&rho);
        assert_eq!(norms, vec![[0.0, 0.0, 0.0]]);
    }

    #[test]
    fn commutator_norms_vanish_for_unpolarized() {
        let rho = unpolarized_state(&uniform_weights(5));
        for per_manifold in commutator_norms(&rho) {
            for norm in per_manifold {
                assert!(norm <= 1e-13);
            }
        }
    }

    #[test]
    fn commutator_norm_of_single_photon_basis_state() {
        // ρ = |0,1⟩⟨0,1| gives ‖[ρ, L1]‖_F = 1/√2 on the one-photon manifold.
        let rho = basis_density(0, 1, 1);
        let norms = commutator_norms(&rho);
        assert!((norms[1][0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        // L3 commutes with any diagonal state.
        assert!(norms[1][2] < 1e-15);
    }

    #[test]
    fn thermal_state_is_unpolarized() {
        let rho = thermal_state(1.0, 12).unwrap();
        let report = is_unpolarized(&rho, tolerance::VERDICT_PER_DIM);
        assert!(report.verdict);
        for nbar in [0.1, 0.5, 2.0, 5.0] {
            let rho = thermal_state(nbar, 12).unwrap();
            assert!(is_unpolarized(&rho, tolerance::VERDICT_PER_DIM).verdict);
        }
    }

    #[test]
    fn two_photon_basis_state_is_polarized() {
        let rho = basis_density(1, 1, 2);
        let report = is_unpolarized(&rho, tolerance::VERDICT_PER_DIM);
        assert!(!report.verdict);
        // diag(0,1,0) sits √(6)/3 away from its scalar part (1/3)I.
        assert!((report.block_scalar_residuals[2] - 6.0_f64.sqrt() / 3.0).abs() < 1e-14);
    }

    #[test]
    fn equal_single_photon_mixture_is_unpolarized() {
        let rho = unpolarized_state(&ManifoldWeights::new(vec![0.0, 0.5]).unwrap());
        assert!(is_unpolarized(&rho, tolerance::VERDICT_PER_DIM).verdict);
    }

    #[test]
    fn report_verdict_consistent_with_residuals() {
        let rho = thermal_state(0.5, 6).unwrap();
        let report = is_unpolarized(&rho, tolerance::VERDICT_PER_DIM);
        if report.verdict {
            for n in 0..=rho.n_max() {
                assert!(report.block_scalar_residuals[n] <= report.threshold(n));
                for norm in report.commutator_norms[n] {
                    assert!(norm <= report.threshold(n));
                }
            }
        }
    }

    #[test]
    fn commutant_dimension_examples() {
        assert_eq!(commutant_dimension(0), 1);
        assert_eq!(commutant_dimension(1), 1);
        assert_eq!(commutant_dimension(5), 1);
    }

    #[test]
    fn schur_oracle_to_n_ten() {
        for n in 0..=10 {
            assert_eq!(commutant_dimension(n), 1, "commutant dimension at n={n}");
        }
    }

    #[test]
    fn commutant_basis_is_scalar_and_kills_l1() {
        // Any Hermitian matrix commuting with L2 and L3 must also commute
        // with L1; built from the commutant basis, checked for n ≤ 6.
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 0..=6usize {
            let basis = commutant_basis(n);
            assert_eq!(basis.len(), 1);
            let l1 = schwinger_block(Generator::L1, n);
            let l2 = schwinger_block(Generator::L2, n);
            let l3 = schwinger_block(Generator::L3, n);
            for _ in 0..100 {
                let coeff = rng.random::<f64>() * 2.0 - 1.0;
                let x = basis[0].map(|z| z * Complex64::new(coeff, 0.0));
                let norm = x.norm().max(1e-300);
                let x = x.map(|z| z / Complex64::new(norm, 0.0));
                let comm = |g: &BlockOperator| (&x * g.matrix() - g.matrix() * &x).norm();
                assert!(comm(&l2) <= 1e-12);
                assert!(comm(&l3) <= 1e-12);
                assert!(comm(&l1) <= 1e-9);
            }
        }
    }

    #[test]
    fn invariance_deviation_examples() {
        let rho = thermal_state(1.0, 4).unwrap();
        let identity = LosslessUnitary::identity(4);
        assert_eq!(invariance_deviation(&rho, &identity).unwrap(), 0.0);

        for seed in [3u64, 17, 99] {
            let linear = haar_random_su2(seed, 4);
            assert!(invariance_deviation(&rho, &linear).unwrap() <= 1e-10);
            let general = random_lossless(seed, 4);
            assert!(invariance_deviation(&rho, &general).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn invariance_deviation_checks_truncation() {
        let rho = thermal_state(1.0, 4).unwrap();
        let unitary = LosslessUnitary::identity(3);
        assert!(matches!(
            invariance_deviation(&rho, &unitary),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn monte_carlo_invariance_examples() {
        let rho = unpolarized_state(&uniform_weights(3));
        assert!(monte_carlo_invariance(&rho, 100, 5, UnitaryFamily::Linear) <= 1e-10);

        let pinned = basis_density(1, 1, 2);
        assert!(monte_carlo_invariance(&pinned, 100, 5, UnitaryFamily::Linear) > 1e-2);

        let vacuum = basis_density(0, 0, 0);
        assert!(monte_carlo_invariance(&vacuum, 10, 5, UnitaryFamily::General) <= 1e-12);
    }

    #[test]
    fn monte_carlo_is_deterministic_in_seed() {
        let rho = basis_density(0, 2, 2);
        let a = monte_carlo_invariance(&rho, 25, 123, UnitaryFamily::General);
        let b = monte_carlo_invariance(&rho, 25, 123, UnitaryFamily::General);
        assert_eq!(a, b);
    }

    #[test]
    fn vacuum_moments_vanish_at_all_orders() {
        let rho = basis_density(0, 0, 0);
        for order in 1..=4 {
            let tensor = stokes_moment_tensor(&rho, order).unwrap();
            assert!(tensor.entries().iter().all(|m| m.norm() == 0.0));
        }
    }

    #[test]
    fn two_photon_moments_match_derived_values() {
        let rho = basis_density(1, 1, 2);
        let first = stokes_moment_tensor(&rho, 1).unwrap();
        for k in Generator::ALL {
            assert!(first.entry(&[k]).norm() <= 1e-14);
        }
        let second = stokes_moment_tensor(&rho, 2).unwrap();
        assert!((second.entry(&[Generator::L1, Generator::L1]) - c(1.0, 0.0)).norm() < 1e-14);
        assert!((second.entry(&[Generator::L2, Generator::L2]) - c(1.0, 0.0)).norm() < 1e-14);
        assert!(second.entry(&[Generator::L3, Generator::L3]).norm() < 1e-14);
        // Casimir cross-check: the diagonal must sum to ⟨L²⟩ = 2 here.
        let diag_sum: Complex64 = Generator::ALL
            .into_iter()
            .map(|k| second.entry(&[k, k]))
            .sum();
        assert!((diag_sum - c(2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn casimir_consistency_for_random_mixtures() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let n_max = 4;
            // Random diagonal mixture across manifolds.
            let mut weights: Vec<f64> = (0..total_dimension(n_max))
                .map(|_| rng.random::<f64>())
                .collect();
            let total: f64 = weights.iter().sum();
            for w in &mut weights {
                *w /= total;
            }
            let mut idx = 0;
            let blocks: Vec<BlockOperator> = (0..=n_max)
                .map(|n| {
                    let mut m = DMatrix::<Complex64>::zeros(n + 1, n + 1);
                    for i in 0..=n {
                        m[(i, i)] = c(weights[idx], 0.0);
                        idx += 1;
                    }
                    BlockOperator::new(n, m).unwrap()
                })
                .collect();
            let rho = DensityOperator::from_parts(
                crate::fock::DirectSumOperator::from_blocks(blocks).unwrap(),
                0.0,
            )
            .unwrap();
            let second = stokes_moment_tensor(&rho, 2).unwrap();
            let diag_sum: f64 = Generator::ALL
                .into_iter()
                .map(|k| second.entry(&[k, k]).re)
                .sum();
            let expected: f64 = (0..=n_max)
                .map(|n| {
                    let half = n as f64 / 2.0;
                    rho.manifold_probability(n) * half * (half + 1.0)
                })
                .sum();
            assert!((diag_sum - expected).abs() <= 1e-10);
        }
    }

    #[test]
    fn first_moments_are_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10 {
            let rho = random_mixed_state(&mut rng, 3);
            let first = stokes_moment_tensor(&rho, 1).unwrap();
            for entry in first.entries() {
                assert!(entry.im.abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn moments_of_unpolarized_states_are_conjugation_invariant() {
        let rho = unpolarized_state(&uniform_weights(3));
        let reference: Vec<MomentTensor> = (1..=4)
            .map(|order| stokes_moment_tensor(&rho, order).unwrap())
            .collect();
        for seed in 0..20u64 {
            let u = haar_random_su2(seed, 3);
            let moved = rho.transformed(&u).unwrap();
            for (order, expected) in (1..=4).zip(&reference) {
                let tensor = stokes_moment_tensor(&moved, order).unwrap();
                for (a, b) in tensor.entries().iter().zip(expected.entries()) {
                    assert!(
                        (a - b).norm() <= 1e-9,
                        "order-{order} moment moved by {:e} under seed {seed}",
                        (a - b).norm()
                    );
                }
            }
        }
    }

    #[test]
    fn moment_order_bounds_are_enforced() {
        let rho = basis_density(0, 0, 0);
        assert!(matches!(
            stokes_moment_tensor(&rho, 0),
            Err(Error::MomentOrder { .. })
        ));
        assert!(matches!(
            stokes_moment_tensor(&rho, 7),
            Err(Error::MomentOrder { .. })
        ));
        assert!(stokes_moment_tensor(&rho, 6).is_ok());
    }

    #[test]
    fn hidden_polarization_witness() {
        // |1,1⟩ is classically unpolarized but fails the quantum test.
        let rho = basis_density(1, 1, 2);
        assert!(classical_unpolarized_test(&rho, 1e-12));
        assert!(!is_unpolarized(&rho, tolerance::VERDICT_PER_DIM).verdict);

        // Any unpolarized state passes the classical test as well.
        let unpol = unpolarized_state(&uniform_weights(3));
        assert!(classical_unpolarized_test(&unpol, 1e-12));

        // |1,0⟩ has ⟨L3⟩ = 1/2 and fails it.
        let tilted = basis_density(1, 0, 1);
        assert!(!classical_unpolarized_test(&tilted, 1e-12));
        let first = stokes_moment_tensor(&tilted, 1).unwrap();
        assert!((first.entry(&[Generator::L3]) - c(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rotation_eigenbasis_spectra() {
        let vacuum = rotation_eigenbasis(0);
        assert_eq!(vacuum.len(), 1);
        assert!(vacuum[0].eigenvalue.abs() < 1e-14);

        let one = rotation_eigenbasis(1);
        assert_eq!(one.len(), 2);
        assert!((one[0].eigenvalue + 0.5).abs() < 1e-12);
        assert!((one[1].eigenvalue - 0.5).abs() < 1e-12);
        // The +1/2 eigenvector is (|0,1⟩ − i|1,0⟩)/√2 up to phase.
        let expected = DVector::from_vec(vec![
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            c(0.0, -std::f64::consts::FRAC_1_SQRT_2),
        ]);
        let overlap: Complex64 = expected
            .iter()
            .zip(one[1].vector.iter())
            .map(|(e, v)| e.conj() * v)
            .sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);

        let three = rotation_eigenbasis(3);
        let values: Vec<f64> = three.iter().map(|s| s.eigenvalue).collect();
        for (got, want) in values.iter().zip([-1.5, -0.5, 0.5, 1.5]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rotation_eigenstates_are_rotation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for n in 1..=4usize {
            for state in rotation_eigenbasis(n) {
                let block = DMatrix::from_fn(n + 1, n + 1, |i, j| {
                    state.vector[i] * state.vector[j].conj()
                });
                for _ in 0..5 {
                    let theta = rng.random::<f64>() * 2.0 * std::f64::consts::PI;
                    let u = geometric_rotation(theta, n);
                    let ub = u.block(n).matrix();
                    let moved = ub * &block * ub.adjoint();
                    assert!((&moved - &block).norm() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn detectors_agree_on_a_small_corpus() {
        // Equivalence of the three routes on a mixed bag of states.
        let mut corpus: Vec<DensityOperator> = vec![
            unpolarized_state(&uniform_weights(4)),
            thermal_state(0.8, 4).unwrap(),
            basis_density(1, 1, 4),
            basis_density(0, 3, 4),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..10 {
            corpus.push(random_mixed_state(&mut rng, 4));
        }
        for (i, rho) in corpus.iter().enumerate() {
            let tol = 1e-8;
            let report = is_unpolarized(rho, tol);
            let scalar_verdict = (0..=rho.n_max())
                .all(|n| report.block_scalar_residuals[n] <= report.threshold(n));
            let commutator_verdict = (0..=rho.n_max())
                .all(|n| report.commutator_norms[n].iter().all(|&x| x <= report.threshold(n)));
            let mc = monte_carlo_invariance(rho, 50, 900 + i as u64, UnitaryFamily::Linear);
            let mc_verdict = mc <= tol * total_dimension(rho.n_max()) as f64;
            assert_eq!(scalar_verdict, commutator_verdict, "state {i}");
            assert_eq!(scalar_verdict, mc_verdict, "state {i}: mc deviation {mc:e}");
        }
    }

    fn random_mixed_state(rng: &mut ChaCha8Rng, n_max: usize) -> DensityOperator {
        let blocks: Vec<BlockOperator> = (0..=n_max)
            .map(|n| {
                let g = DMatrix::from_fn(n + 1, n + 1, |_, _| {
                    c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                });
                let psd = &g * g.adjoint();
                BlockOperator::new(n, psd).unwrap()
            })
            .collect();
        let op = crate::fock::DirectSumOperator::from_blocks(blocks).unwrap();
        let trace = op.trace().re;
        let op = op
            .map_blocks(|b| b.scale(c(1.0 / trace, 0.0)))
            .unwrap();
        DensityOperator::from_parts(op, 0.0).unwrap()
    }
}
