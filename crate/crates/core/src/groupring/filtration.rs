//! Powers of the augmentation ideal of `F_pG` and the dimension subgroups
//! `D_n = {g : g - 1 ∈ Δ^n}` they cut out.

use crate::enumeration::{FiniteGroupTable, Subgroup};
use crate::error::{Error, Result};
use crate::intlinalg::{FpEchelon, ModRing};

// coefficient vector of g - 1 over F_p
fn delta_vector(n: usize, p: u64, g: usize) -> Vec<u64> {
    let mut v = vec![0u64; n];
    if g != 0 {
        v[g] = 1;
        v[0] = p - 1;
    }
    v
}

/// Bases of `Δ^1, Δ^2, ...` up to `Δ^max_n`, stopping early once the powers
/// stabilize (at zero for p-groups).
fn delta_powers(tbl: &FiniteGroupTable, p: u64, max_n: usize) -> Result<Vec<FpEchelon>> {
    let ring = ModRing::field(p)?;
    let n = tbl.order();
    let mut first = FpEchelon::new(ring, n);
    for g in 1..n {
        first.insert(&delta_vector(n, p, g));
    }
    let mut powers = vec![first];
    while powers.len() < max_n && powers.last().unwrap().dim() > 0 {
        let prev = powers.last().unwrap();
        let mut next = FpEchelon::new(ring, n);
        // b (g - 1) = b g - b for b in the basis of the previous power
        'outer: for b in prev.rows() {
            for g in 1..n {
                let mut v = vec![0u64; n];
                for (x, &c) in b.iter().enumerate() {
                    if c != 0 {
                        let xg = tbl.mul(x, g);
                        v[xg] = ring.add(v[xg], c);
                        v[x] = ring.sub(v[x], c);
                    }
                }
                next.insert(&v);
                if next.dim() == prev.dim() {
                    break 'outer;
                }
            }
        }
        if next.dim() == prev.dim() {
            break;
        }
        powers.push(next);
    }
    Ok(powers)
}

/// Echelonized basis of `Δ^n ⊆ F_pG`, `n ≥ 1`.
pub fn delta_power_basis(tbl: &FiniteGroupTable, p: u64, n: usize) -> Result<Vec<Vec<u64>>> {
    if n == 0 {
        return Err(Error::Precondition("augmentation powers start at n = 1".into()));
    }
    let powers = delta_powers(tbl, p, n)?;
    Ok(powers[n.min(powers.len()) - 1].rows().to_vec())
}

/// Dimensions of `Δ^1, Δ^2, ...` through the first zero.
pub fn delta_dimensions(tbl: &FiniteGroupTable, p: u64) -> Result<Vec<usize>> {
    tbl.require_p_group(p)?;
    Ok(delta_powers(tbl, p, usize::MAX)?.iter().map(FpEchelon::dim).collect())
}

fn members_in(tbl: &FiniteGroupTable, p: u64, delta_n: &FpEchelon) -> Vec<usize> {
    (0..tbl.order())
        .filter(|&g| delta_n.contains(&delta_vector(tbl.order(), p, g)))
        .collect()
}

/// `D_n(G)` for a `p`-group.
pub fn dimension_subgroup(tbl: &FiniteGroupTable, p: u64, n: usize) -> Result<Subgroup> {
    tbl.require_p_group(p)?;
    if n == 0 {
        return Err(Error::Precondition("dimension subgroups start at n = 1".into()));
    }
    let powers = delta_powers(tbl, p, n)?;
    let d = tbl.subgroup_from_members(&members_in(tbl, p, &powers[n.min(powers.len()) - 1]))?;
    if !tbl.is_normal(&d) {
        return Err(Error::Invariant(format!("D_{n} is not normal")));
    }
    Ok(d)
}

/// `D_1 ⊇ D_2 ⊇ ... ⊇ D_{n0} = {1}` from the augmentation powers.
pub fn dimension_series(tbl: &FiniteGroupTable, p: u64) -> Result<Vec<Subgroup>> {
    tbl.require_p_group(p)?;
    let powers = delta_powers(tbl, p, usize::MAX)?;
    let mut series = Vec::new();
    for dn in &powers {
        let d = tbl.subgroup_from_members(&members_in(tbl, p, dn))?;
        if !tbl.is_normal(&d) {
            return Err(Error::Invariant(format!("D_{} is not normal", series.len() + 1)));
        }
        if let Some(prev) = series.last() {
            if !d.is_subgroup_of(prev) {
                return Err(Error::Invariant("dimension series is not descending".into()));
            }
        }
        let done = d.is_trivial();
        series.push(d);
        if done {
            break;
        }
    }
    Ok(series)
}

/// The same chain through the recursion `D_n = [D_{n-1}, G] (D_{⌈n/p⌉})^p`.
pub fn jennings_series(tbl: &FiniteGroupTable, p: u64) -> Result<Vec<Subgroup>> {
    tbl.require_p_group(p)?;
    let whole = tbl.whole();
    let mut series = vec![whole.clone()];
    while !series.last().unwrap().is_trivial() {
        let n = series.len() + 1;
        let comm = tbl.commutator_subgroup(series.last().unwrap(), &whole);
        let src = &series[n.div_ceil(p as usize) - 1];
        let powers: Vec<usize> = src.members().iter().map(|&g| tbl.power(g, p as usize)).collect();
        let mut gens = comm.generators().to_vec();
        gens.extend(powers);
        series.push(tbl.subgroup_generated(&gens));
        if series.len() > tbl.order() + 1 {
            return Err(Error::Invariant("Jennings recursion does not reach the identity".into()));
        }
    }
    Ok(series)
}
