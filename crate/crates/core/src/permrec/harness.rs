use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::enumeration::todd_coxeter;
use crate::error::{Error, Result};
use crate::groupring::dimension_series;
use crate::presentation::Presentation;
use crate::relmod::{qr_check_lattice, RelationLattice};

use super::lift::gen_perm_lift;
use super::module::{module_from_coinvariants, transition_map, Reduction};
use super::recognize::{perm_recognize_modp, PermDecomposition, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quadrant {
    BothCertified,
    BothRefuted,
    /// Permutation mod `p`, refuted lift.
    ModPOnly,
    /// Generalized permutation lift, refuted mod `p`.
    LiftOnly,
    Undecided,
}

impl Quadrant {
    fn of(modp: Status, lift: Status) -> Self {
        match (modp, lift) {
            (Status::Certified, Status::Certified) => Quadrant::BothCertified,
            (a, b) if a.is_refuted() && b.is_refuted() => Quadrant::BothRefuted,
            (Status::Certified, b) if b.is_refuted() => Quadrant::ModPOnly,
            (a, Status::Certified) if a.is_refuted() => Quadrant::LiftOnly,
            _ => Quadrant::Undecided,
        }
    }

    pub fn is_violation(self) -> bool {
        matches!(self, Quadrant::ModPOnly | Quadrant::LiftOnly)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessLevel {
    pub n: usize,
    pub quotient_order: usize,
    pub dim: usize,
    pub modp: PermDecomposition,
    pub lift: PermDecomposition,
    pub quadrant: Quadrant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub prime: u64,
    pub precision: u32,
    pub levels: Vec<HarnessLevel>,
    pub violations: usize,
    pub unknowns: usize,
    /// Precisions at which stalled lifts failed.
    pub stalls: Vec<u32>,
    pub transitions_checked: usize,
}

impl HarnessReport {
    pub fn count(&self, q: Quadrant) -> usize {
        self.levels.iter().filter(|l| l.quadrant == q).count()
    }

    /// `certified=a;refuted=b;unknown=c;violations=d`.
    pub fn summary(&self) -> String {
        format!(
            "certified={};refuted={};unknown={};violations={}",
            self.count(Quadrant::BothCertified),
            self.count(Quadrant::BothRefuted),
            self.unknowns,
            self.violations
        )
    }
}

/// Compares mod-`p` permutation recognition with the lift to `Z/p^k` on
/// every level of a QR presentation.
pub fn theorem1_harness(pres: &Presentation, p: u64, config: &Config) -> Result<HarnessReport> {
    let tbl = todd_coxeter(pres, config.max_cosets)?;
    let lat = RelationLattice::new(pres, Arc::new(tbl))?;
    harness_lattice(&lat, p, config)
}

pub fn harness_lattice(lat: &RelationLattice, p: u64, config: &Config) -> Result<HarnessReport> {
    let qr = qr_check_lattice(lat, p, config)?;
    if !qr.verdict.is_qr() {
        return Err(Error::Precondition(format!(
            "presentation is not QR at p = {p}: torsion at level {}",
            qr.levels.iter().find(|l| !l.p_torsion.is_empty()).map_or(0, |l| l.n)
        )));
    }
    let series = dimension_series(lat.group(), p)?;
    let k = config.precision;
    let levels = qr.levels.len().min(series.len());
    let results: Vec<_> = (0..levels)
        .into_par_iter()
        .map(|i| {
            let d = &series[i];
            let pk = module_from_coinvariants(lat, d, p, Reduction::ModPk(k))?;
            let mp = module_from_coinvariants(lat, d, p, Reduction::ModP)?;
            let modp = perm_recognize_modp(&mp.module, config)?;
            let lift = match modp.status {
                Status::Certified => {
                    let reduced = pk.module.reduce(1)?;
                    let direct = perm_recognize_modp(&reduced, config)?;
                    if direct.status == Status::Certified {
                        gen_perm_lift(&pk.module, &direct, config)?
                    } else {
                        direct
                    }
                }
                // a twisted lift would reduce to a permutation module
                s => PermDecomposition { status: s, ..modp.clone() },
            };
            let level = HarnessLevel {
                n: i + 1,
                quotient_order: pk.module.group().order(),
                dim: pk.module.dim(),
                quadrant: Quadrant::of(modp.status, lift.status),
                modp,
                lift,
            };
            Ok((level, pk))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut transitions_checked = 0;
    for w in results.windows(2) {
        transition_map(&w[1].1, &w[0].1)?;
        transitions_checked += 1;
    }
    let levels: Vec<HarnessLevel> = results.into_iter().map(|(l, _)| l).collect();
    let violations = levels.iter().filter(|l| l.quadrant.is_violation()).count();
    let unknowns = levels.iter().filter(|l| l.quadrant == Quadrant::Undecided).count();
    let stalls = levels.iter().filter_map(|l| l.lift.failing_precision).collect();
    Ok(HarnessReport { prime: p, precision: k, levels, violations, unknowns, stalls, transitions_checked })
}
