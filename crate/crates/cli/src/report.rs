//! Machine-readable analysis reports.

use serde::Deserialize;

use unpol_core::analysis::{
    is_unpolarized, monte_carlo_invariance, MomentTensor, UnitaryFamily,
};
use unpol_core::fock::total_dimension;
use unpol_core::states::DensityOperator;

use crate::canon::fmt_f64;

/// Everything `unpol check` measured, plus the settings that produced it.
/// The overall verdict requires the block-scalar and commutator routes to
/// pass on every manifold and both Monte-Carlo families to stay below the
/// summed-deviation threshold.
#[derive(Debug, Clone, Deserialize)]
pub struct ReportFile {
    pub tool_version: String,
    pub seed: u64,
    pub trials: usize,
    /// Base tolerance; manifold `n` is allowed `tolerance * (n+1)` and the
    /// Monte-Carlo deviation, summed over manifolds, `tolerance * total_dim`.
    pub tolerance: f64,
    pub n_max: usize,
    pub verdict: bool,
    pub block_scalar_residuals: Vec<f64>,
    /// `‖[ρ_n, L_k]‖_F` per manifold for k = 1, 2, 3.
    pub commutator_norms: Vec<[f64; 3]>,
    pub mc_linear_max_deviation: f64,
    pub mc_general_max_deviation: f64,
    pub mc_threshold: f64,
}

impl ReportFile {
    /// Runs the full analysis: both deterministic routes plus Monte-Carlo
    /// invariance over the linear and the general lossless family.
    pub fn build(rho: &DensityOperator, tolerance: f64, trials: usize, seed: u64) -> Self {
        let report = is_unpolarized(rho, tolerance);
        let mc_linear = monte_carlo_invariance(rho, trials, seed, UnitaryFamily::Linear);
        let mc_general = monte_carlo_invariance(rho, trials, seed, UnitaryFamily::General);
        let mc_threshold = tolerance * total_dimension(rho.n_max()) as f64;
        let verdict = report.verdict && mc_linear <= mc_threshold && mc_general <= mc_threshold;
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            trials,
            tolerance,
            n_max: rho.n_max(),
            verdict,
            block_scalar_residuals: report.block_scalar_residuals,
            commutator_norms: report.commutator_norms,
            mc_linear_max_deviation: mc_linear,
            mc_general_max_deviation: mc_general,
            mc_threshold,
        }
    }

    pub fn to_canonical_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"tool_version\": \"{}\",\n", self.tool_version));
        out.push_str(&format!("  \"seed\": {},\n", self.seed));
        out.push_str(&format!("  \"trials\": {},\n", self.trials));
        out.push_str(&format!("  \"tolerance\": {},\n", fmt_f64(self.tolerance)));
        out.push_str(&format!("  \"n_max\": {},\n", self.n_max));
        out.push_str(&format!("  \"verdict\": {},\n", self.verdict));
        let residuals: Vec<String> = self
            .block_scalar_residuals
            .iter()
            .map(|&r| fmt_f64(r))
            .collect();
        out.push_str(&format!(
            "  \"block_scalar_residuals\": [{}],\n",
            residuals.join(", ")
        ));
        let norms: Vec<String> = self
            .commutator_norms
            .iter()
            .map(|ks| {
                format!(
                    "[{}, {}, {}]",
                    fmt_f64(ks[0]),
                    fmt_f64(ks[1]),
                    fmt_f64(ks[2])
                )
            })
            .collect();
        out.push_str(&format!("  \"commutator_norms\": [{}],\n", norms.join(", ")));
        out.push_str(&format!(
            "  \"mc_linear_max_deviation\": {},\n",
            fmt_f64(self.mc_linear_max_deviation)
        ));
        out.push_str(&format!(
            "  \"mc_general_max_deviation\": {},\n",
            fmt_f64(self.mc_general_max_deviation)
        ));
        out.push_str(&format!(
            "  \"mc_threshold\": {}\n",
            fmt_f64(self.mc_threshold)
        ));
        out.push_str("}\n");
        out
    }
}

/// Canonical JSON for a moment tensor, each entry labelled with its index
/// tuple (values in 1..=3 selecting L₁, L₂, L₃).
pub fn moments_to_canonical_json(tensor: &MomentTensor) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"order\": {},\n", tensor.order()));
    out.push_str("  \"entries\": [\n");
    let count = tensor.entries().len();
    for (flat, value) in tensor.entries().iter().enumerate() {
        let tuple = tensor.tuple(flat);
        let indices: Vec<String> = tuple.iter().map(usize::to_string).collect();
        out.push_str(&format!(
            "    {{\"indices\": [{}], \"re\": {}, \"im\": {}}}{}\n",
            indices.join(", "),
            fmt_f64(value.re),
            fmt_f64(value.im),
            if flat + 1 < count { "," } else { "" }
        ));
    }
    out.push_str("  ]\n}\n");
    out
}
