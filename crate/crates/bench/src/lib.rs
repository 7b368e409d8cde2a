//! Parameter sets shared by the benchmarks.

use htc_core::ModelParams;

/// λ² = 1 ensembles at √N·Ω = 2.4, from a few hundred states to the
/// twenty-molecule reference size.
pub fn ensembles() -> Vec<(&'static str, ModelParams)> {
    [("n4", 4), ("n8", 8), ("n20", 20)]
        .into_iter()
        .map(|(name, n)| {
            let p = ModelParams {
                n_molecules: n,
                ..Default::default()
            }
            .with_collective_rabi(2.4);
            (name, p)
        })
        .collect()
}
