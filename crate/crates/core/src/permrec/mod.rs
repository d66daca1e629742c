//! Modules carried by the coinvariants, permutation-module recognition over
//! `F_p`, lifting to `Z/p^k` and the level-by-level comparison of the two.

mod harness;
mod lift;
mod module;
mod recognize;

pub use harness::{harness_lattice, theorem1_harness, HarnessLevel, HarnessReport, Quadrant};
pub use lift::gen_perm_lift;
pub use module::{
    change_basis, module_from_coinvariants, permutation_module, random_invertible, transition_map,
    CoinvariantModule, GModule, Reduction,
};
pub use recognize::{
    perm_recognize_modp, verify_certificate, Certificate, CertificateSlot, PermDecomposition,
    Status, Summand, Twist,
};
