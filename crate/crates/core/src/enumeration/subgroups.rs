use std::collections::HashSet;

use crate::error::{Error, Result};

use super::table::{FiniteGroupTable, Subgroup};

/// Default bound on the group order for subgroup-lattice computations.
pub const DEFAULT_SUBGROUP_BOUND: usize = 512;

fn bitset(h: &Subgroup, n: usize) -> Vec<u64> {
    let mut bits = vec![0u64; n.div_ceil(64)];
    for &g in h.members() {
        bits[g / 64] |= 1 << (g % 64);
    }
    bits
}

/// Every subgroup exactly once, sorted by order and then member set.
///
/// For p-groups each subgroup sits at the top of a chain in which every step
/// has index p and is normal in the next, so it suffices to extend a known
/// subgroup `H` by elements `g` normalizing `H` with `g^p ∈ H`. Other groups
/// fall back to extending by arbitrary elements.
pub fn all_subgroups(tbl: &FiniteGroupTable, bound: usize) -> Result<Vec<Subgroup>> {
    let n = tbl.order();
    if n > bound {
        return Err(Error::OrderBound { operation: "subgroup enumeration", order: n, bound });
    }
    let p = smallest_prime_factor(n);
    let p_group = p.map(|p| tbl.is_p_group(p as u64)).unwrap_or(true);

    let trivial = tbl.trivial_subgroup();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(bitset(&trivial, n));
    let mut found = vec![trivial];
    let mut i = 0;
    while i < found.len() {
        let h = found[i].clone();
        i += 1;
        for g in 0..n {
            if h.contains(g) {
                continue;
            }
            if p_group {
                let p = p.unwrap();
                if !h.contains(tbl.power(g, p)) {
                    continue;
                }
                if !h.members().iter().all(|&x| h.contains(tbl.conjugate(g, x))) {
                    continue;
                }
            }
            let mut gens = h.generators().to_vec();
            gens.push(g);
            let k = tbl.subgroup_generated(&gens);
            if seen.insert(bitset(&k, n)) {
                found.push(k);
            }
        }
    }
    for h in &found {
        verify_subgroup(tbl, h)?;
    }
    found.sort_by(|a, b| (a.order(), a.members()).cmp(&(b.order(), b.members())));
    Ok(found)
}

fn smallest_prime_factor(n: usize) -> Option<usize> {
    (2..=n).find(|d| n.is_multiple_of(*d))
}

pub fn verify_subgroup(tbl: &FiniteGroupTable, h: &Subgroup) -> Result<()> {
    if !h.contains(0) {
        return Err(Error::Invariant("subgroup misses the identity".into()));
    }
    for &a in h.members() {
        if !h.contains(tbl.inv(a)) {
            return Err(Error::Invariant("subgroup not closed under inverses".into()));
        }
        for &b in h.members() {
            if !h.contains(tbl.mul(a, b)) {
                return Err(Error::Invariant("subgroup not closed under multiplication".into()));
            }
        }
    }
    Ok(())
}

/// Conjugacy classes of the given sorted subgroup list. Each class is a list
/// of indices into `subgroups`; its first entry, the least member set, is the
/// canonical representative.
pub fn conjugacy_classes(tbl: &FiniteGroupTable, subgroups: &[Subgroup]) -> Vec<Vec<usize>> {
    let mut class_of = vec![usize::MAX; subgroups.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..subgroups.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut class = Vec::new();
        for g in 0..tbl.order() {
            let c = tbl.conjugate_subgroup(g, &subgroups[i]);
            if let Some(j) = subgroups.iter().position(|s| s.members() == c.members()) {
                if class_of[j] == usize::MAX {
                    class_of[j] = id;
                    class.push(j);
                }
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    classes
}

/// Number of orbits of left multiplication by `q` on the left cosets `G/h`.
pub fn orbits_on_cosets(tbl: &FiniteGroupTable, h: &Subgroup, q: &Subgroup) -> usize {
    let ids = tbl.left_coset_ids(h);
    let reps = tbl.left_transversal(h);
    let mut seen = vec![false; tbl.order()];
    let mut orbits = 0;
    for &r in &reps {
        if seen[r] {
            continue;
        }
        orbits += 1;
        for &x in q.members() {
            seen[ids[tbl.mul(x, r)]] = true;
        }
    }
    orbits
}

/// Number of cosets `gH` fixed by every element of `q` (the Burnside mark).
pub fn fixed_cosets(tbl: &FiniteGroupTable, h: &Subgroup, q: &Subgroup) -> usize {
    let ids = tbl.left_coset_ids(h);
    tbl.left_transversal(h)
        .into_iter()
        .filter(|&r| q.members().iter().all(|&x| ids[tbl.mul(x, r)] == r))
        .count()
}
