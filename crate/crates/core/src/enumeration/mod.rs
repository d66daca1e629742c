//! Finite quotients `G = F/R` as explicit multiplication tables.

mod coset;
mod subgroups;
mod table;

pub use coset::todd_coxeter;
pub use subgroups::{
    all_subgroups, conjugacy_classes, fixed_cosets, orbits_on_cosets, verify_subgroup,
    DEFAULT_SUBGROUP_BOUND,
};
pub use table::{FiniteGroupTable, Subgroup};

/// Default coset budget.
pub const DEFAULT_MAX_COSETS: usize = 1_000_000;
