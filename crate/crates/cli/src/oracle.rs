//! Raw outputs of the independent oracles.

use serde::Serialize;

use qrlab::enumeration::{all_subgroups, conjugacy_classes};
use qrlab::groupring::delta_dimensions;
use qrlab::relmod::bar_h2;
use qrlab::{AbelianInvariants, Config, FiniteGroupTable, Result};

#[derive(Serialize)]
pub struct BarH2 {
    pub order: usize,
    pub h2: AbelianInvariants,
    pub text: String,
}

pub fn bar(tbl: &FiniteGroupTable, cfg: &Config) -> Result<BarH2> {
    let h2 = bar_h2(tbl, cfg.bar_bound)?;
    Ok(BarH2 { order: tbl.order(), text: h2.to_string(), h2 })
}

#[derive(Serialize)]
pub struct DeltaDims {
    pub prime: u64,
    /// `dim Δ^n` for `n = 1, 2, ...` through the first zero.
    pub dims: Vec<usize>,
}

pub fn delta_dims(tbl: &FiniteGroupTable, p: u64) -> Result<DeltaDims> {
    Ok(DeltaDims { prime: p, dims: delta_dimensions(tbl, p)? })
}

#[derive(Serialize)]
pub struct SubgroupEntry {
    pub order: usize,
    pub members: Vec<usize>,
    pub generators: Vec<usize>,
    pub class: usize,
}

pub fn subgroups(tbl: &FiniteGroupTable, cfg: &Config) -> Result<Vec<SubgroupEntry>> {
    let subs = all_subgroups(tbl, cfg.subgroup_bound)?;
    let classes = conjugacy_classes(tbl, &subs);
    let mut class_of = vec![0; subs.len()];
    for (c, members) in classes.iter().enumerate() {
        for &i in members {
            class_of[i] = c;
        }
    }
    Ok(subs
        .iter()
        .zip(class_of)
        .map(|(s, class)| SubgroupEntry {
            order: s.order(),
            members: s.members().to_vec(),
            generators: s.generators().to_vec(),
            class,
        })
        .collect())
}
