//! Exact integer and modular linear algebra.

mod hnf;
mod lattice;
mod matrix;
mod modular;
mod snf;

pub use hnf::{hermite_normal_form, HermiteForm};
pub use lattice::{lattice_quotient, lattice_quotient_sparse, AbelianInvariants};
pub use matrix::IntMatrix;
pub use modular::{
    column_smith, identity, mat_inverse, mat_mul, mat_vec, nullspace_mod_p, rank_mod_p, transpose, ColumnSmith,
    FpEchelon, ModMatrix, ModRing,
};
pub use snf::{invariant_factors, smith_normal_form, SmithForm};
