use serde::{Deserialize, Serialize};

use crate::enumeration::{DEFAULT_MAX_COSETS, DEFAULT_SUBGROUP_BOUND};

/// Budgets and knobs shared by the pipeline stages.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    pub max_cosets: usize,
    pub subgroup_bound: usize,
    /// Largest group order handed to the bar-resolution oracle.
    pub bar_bound: usize,
    /// p-adic precision `k` for lifting.
    pub precision: u32,
    /// Node budget for the permutation-basis search.
    pub backtrack_budget: usize,
    /// Overrides the automatic last filtration level.
    pub max_level: Option<usize>,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_cosets: DEFAULT_MAX_COSETS,
            subgroup_bound: DEFAULT_SUBGROUP_BOUND,
            bar_bound: 32,
            precision: 20,
            backtrack_budget: 100_000,
            max_level: None,
            seed: 0x5eed,
        }
    }
}
