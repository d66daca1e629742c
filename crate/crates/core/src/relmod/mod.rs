//! The relation module of a finite presentation, its coinvariants, the
//! quasirationality check and two independent routes to `H_2(G, Z)`.

mod bar;
mod lattice;
mod qr;

pub use bar::{bar_d2, bar_d3, bar_h2};
pub use lattice::{
    abelianization, abelianization_order, coinvariants, translate, Coinvariants, RelationLattice,
};
pub use qr::{hopf_h2, qr_check_full, qr_check_lattice, HopfH2, LevelRecord, QrReport, Verdict};
