//! Property tests for the algebra and state constructors.

use proptest::prelude::*;

use unpol_core::analysis::{is_unpolarized, monte_carlo_invariance, UnitaryFamily};
use unpol_core::fock::BlockOperator;
use unpol_core::states::{unpolarized_state, ManifoldWeights};
use unpol_core::tolerance;
use unpol_core::transforms::{evolution, unitarity_residual, Su2Angles};

fn angle() -> impl Strategy<Value = f64> {
    -10.0f64..10.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolution_blocks_are_unitary(p1 in angle(), p2 in angle(), p3 in angle()) {
        let u = evolution(Su2Angles::new(p1, p2, p3), 5);
        for block in u.op().blocks() {
            prop_assert!(unitarity_residual(block) <= 1e-12 * block.dim() as f64);
        }
    }

    #[test]
    fn same_axis_phases_compose_additively(alpha in angle(), beta in angle()) {
        let ua = evolution(Su2Angles::new(0.0, 0.0, alpha), 3);
        let ub = evolution(Su2Angles::new(0.0, 0.0, beta), 3);
        let uab = evolution(Su2Angles::new(0.0, 0.0, alpha + beta), 3);
        for n in 0..=3 {
            let composed = ua.block(n) * ub.block(n);
            prop_assert!((&composed - uab.block(n)).frobenius_norm() <= 1e-10);
        }
    }

    #[test]
    fn normalized_weights_always_build_unpolarized_states(
        raw in prop::collection::vec(0.01f64..1.0, 1..8),
    ) {
        // Rescale arbitrary positive weights onto the trace condition.
        let sum: f64 = raw.iter().enumerate().map(|(n, w)| (n + 1) as f64 * w).sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / sum).collect();
        let weights = ManifoldWeights::new(weights).unwrap();
        let check: f64 = weights
            .weights()
            .iter()
            .enumerate()
            .map(|(n, w)| (n + 1) as f64 * w)
            .sum();
        prop_assert!((check - 1.0).abs() <= 1e-10);

        let rho = unpolarized_state(&weights);
        prop_assert!(rho.diagnostics().pass);
        prop_assert!(is_unpolarized(&rho, tolerance::VERDICT_PER_DIM).verdict);
        for n in 0..=rho.n_max() {
            let scalar = BlockOperator::scalar(
                n,
                unpol_core::Complex64::new(weights.weight(n), 0.0),
            );
            prop_assert!((rho.block(n) - &scalar).frobenius_norm() == 0.0);
        }
    }

    #[test]
    fn unpolarized_states_survive_sampled_lossless_maps(seed in any::<u64>()) {
        let weights = ManifoldWeights::new(vec![0.25, 0.25, 0.25 / 3.0]).unwrap();
        let rho = unpolarized_state(&weights);
        let linear = monte_carlo_invariance(&rho, 4, seed, UnitaryFamily::Linear);
        prop_assert!(linear <= 1e-10);
        let general = monte_carlo_invariance(&rho, 4, seed, UnitaryFamily::General);
        prop_assert!(general <= 1e-10);
    }
}
