use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::enumeration::todd_coxeter;
use crate::error::{Error, Result};
use crate::groupring::dimension_series;
use crate::intlinalg::{lattice_quotient, AbelianInvariants};
use crate::presentation::Presentation;

use super::lattice::{abelianization, abelianization_order, coinvariants, order_u64, RelationLattice};

/// Coinvariants under one term `D_n` of the dimension series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub n: usize,
    /// `|G / D_n|`.
    pub quotient_order: usize,
    pub invariants: AbelianInvariants,
    #[serde(with = "crate::serde_bigint_list")]
    pub p_torsion: Vec<BigInt>,
    /// `D_n = 1`: the coinvariants are the lattice itself.
    pub vacuous: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Qr,
    NotQr { witness_level: usize },
}

impl Verdict {
    pub fn is_qr(&self) -> bool {
        matches!(self, Verdict::Qr)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QrReport {
    pub prime: u64,
    pub order: usize,
    pub levels: Vec<LevelRecord>,
    /// First `n` with `D_n = 1`.
    pub n0: usize,
    /// Whether every level up to `n0` was examined.
    pub complete: bool,
    pub justification: String,
    /// `R/[R,F]`.
    pub coinvariants_g: AbelianInvariants,
    pub verdict: Verdict,
    /// Some level has p-torsion exactly when `R/[R,F]` does.
    pub equivalence_holds: bool,
}

/// Enumerates, builds the lattice and runs [`qr_check_lattice`].
pub fn qr_check_full(pres: &Presentation, p: u64, config: &Config) -> Result<QrReport> {
    let tbl = todd_coxeter(pres, config.max_cosets)?;
    let lat = RelationLattice::new(pres, Arc::new(tbl))?;
    qr_check_lattice(&lat, p, config)
}

pub fn qr_check_lattice(lat: &RelationLattice, p: u64, config: &Config) -> Result<QrReport> {
    let tbl = lat.group();
    let series = dimension_series(tbl, p)?;
    let n0 = series.len();
    let last = match config.max_level {
        Some(0) => return Err(Error::Precondition("max level must be at least 1".into())),
        Some(l) => l,
        None => n0,
    };
    let mut levels = Vec::with_capacity(last);
    let mut base: Option<LevelRecord> = None;
    for n in 1..=last {
        let d = &series[n.min(n0) - 1];
        if n > n0 {
            // identical to level n0
            let rec = base.clone().unwrap();
            levels.push(LevelRecord { n, ..rec });
            continue;
        }
        let c = coinvariants(lat, d)?;
        let vacuous = d.is_trivial();
        if vacuous && (!c.invariants.is_torsion_free() || c.invariants.free_rank != lat.rank()) {
            return Err(Error::Invariant(format!(
                "coinvariants under the trivial subgroup are {}, not the lattice",
                c.invariants
            )));
        }
        let rec = LevelRecord {
            n,
            quotient_order: tbl.order() / d.order(),
            p_torsion: c.p_torsion(p),
            invariants: c.invariants,
            vacuous,
        };
        if vacuous {
            base = Some(rec.clone());
        }
        levels.push(rec);
    }
    let coinvariants_g = coinvariants(lat, &tbl.whole())?.invariants;
    let witness = levels.iter().find(|l| !l.p_torsion.is_empty()).map(|l| l.n);
    let verdict = match witness {
        Some(n) => Verdict::NotQr { witness_level: n },
        None => Verdict::Qr,
    };
    let equivalence_holds = witness.is_some() == !coinvariants_g.p_torsion(p).is_empty();
    let justification = format!(
        "D_{n0} = 1 in the {p}-group of order {}; for every n >= {n0} the coinvariants equal the \
         relation lattice, free abelian of rank {}, so levels beyond {n0} carry no torsion",
        tbl.order(),
        lat.rank()
    );
    Ok(QrReport {
        prime: p,
        order: tbl.order(),
        levels,
        n0,
        complete: last >= n0,
        justification,
        coinvariants_g,
        verdict,
        equivalence_holds,
    })
}

/// The multiplier as the torsion of `R/[R,F]`, with the surrounding exact
/// sequence checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopfH2 {
    pub h2: AbelianInvariants,
    /// `R/[R,F]`.
    pub coinvariants: AbelianInvariants,
    /// `Z^X / (relator exponent vectors)`.
    pub gab: AbelianInvariants,
    /// `coker(R/[R,F] -> Z^X)`.
    pub cokernel: AbelianInvariants,
}

pub fn hopf_h2(pres: &Presentation, lat: &RelationLattice) -> Result<HopfH2> {
    let tbl = lat.group();
    let coinv = coinvariants(lat, &tbl.whole())?.invariants;
    if coinv.free_rank != pres.arity() {
        return Err(Error::Invariant(format!(
            "R/[R,F] has free rank {}, expected {}",
            coinv.free_rank,
            pres.arity()
        )));
    }
    let images: Vec<Vec<BigInt>> =
        lat.basis().row_vecs().iter().map(|v| lat.augmentation_blocks(v)).collect();
    let cokernel = lattice_quotient(pres.arity(), &images);
    let gab = abelianization(pres);
    if cokernel != gab {
        return Err(Error::Invariant(format!(
            "cokernel of R/[R,F] -> Z^X is {cokernel}, abelianization is {gab}"
        )));
    }
    if order_u64(&gab) != Some(abelianization_order(tbl) as u64) {
        return Err(Error::Invariant(format!(
            "abelianization {gab} disagrees with |G/[G,G]| = {}",
            abelianization_order(tbl)
        )));
    }
    Ok(HopfH2 { h2: coinv.torsion_part(), coinvariants: coinv, gab, cokernel })
}
