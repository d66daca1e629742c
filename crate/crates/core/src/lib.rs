//! Quasirationality of finite presentations, Schur multipliers and
//! permutation-module recognition for finite p-groups.

pub mod config;
pub mod enumeration;
pub mod error;
pub mod groupring;
pub mod intlinalg;
pub mod presentation;
pub mod permrec;
pub mod relmod;
mod serde_bigint_list;

pub use config::Config;
pub use enumeration::{todd_coxeter, FiniteGroupTable, Subgroup};
pub use error::{Error, Result};
pub use intlinalg::{AbelianInvariants, IntMatrix};
pub use presentation::{parse_presentation, Letter, Presentation, Word};
pub use relmod::{QrReport, RelationLattice, Verdict};
