//! `H_2(G, Z)` from the normalized bar complex, independent of any presentation.

use crate::enumeration::FiniteGroupTable;
use crate::error::{Error, Result};
use crate::intlinalg::{lattice_quotient_sparse, AbelianInvariants};

fn collect(mut terms: Vec<(usize, i64)>) -> Vec<(usize, i64)> {
    terms.sort_unstable_by_key(|t| t.0);
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(terms.len());
    for (c, v) in terms {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|t| t.1 != 0);
    out
}

/// Boundary `d_2 [g|h] = [h] - [gh] + [g]` as sparse rows over `C_1`.
pub fn bar_d2(tbl: &FiniteGroupTable) -> Vec<Vec<(usize, i64)>> {
    let m = tbl.order() - 1;
    let mut rows = Vec::with_capacity(m * m);
    for g in 1..=m {
        for h in 1..=m {
            let mut t = vec![(h - 1, 1), (g - 1, 1)];
            let gh = tbl.mul(g, h);
            if gh != 0 {
                t.push((gh - 1, -1));
            }
            rows.push(collect(t));
        }
    }
    rows
}

/// Boundary `d_3 [g|h|k] = [h|k] - [gh|k] + [g|hk] - [g|h]` over `C_2`.
pub fn bar_d3(tbl: &FiniteGroupTable) -> Vec<Vec<(usize, i64)>> {
    let m = tbl.order() - 1;
    let idx = |a: usize, b: usize| (a - 1) * m + (b - 1);
    let mut rows = Vec::with_capacity(m * m * m);
    for g in 1..=m {
        for h in 1..=m {
            let gh = tbl.mul(g, h);
            for k in 1..=m {
                let hk = tbl.mul(h, k);
                let mut t = vec![(idx(h, k), 1), (idx(g, h), -1)];
                if gh != 0 {
                    t.push((idx(gh, k), -1));
                }
                if hk != 0 {
                    t.push((idx(g, hk), 1));
                }
                rows.push(collect(t));
            }
        }
    }
    rows
}

/// `ker d_2 / im d_3`, for `|G| ≤ bound`.
pub fn bar_h2(tbl: &FiniteGroupTable, bound: usize) -> Result<AbelianInvariants> {
    let n = tbl.order();
    if n > bound {
        return Err(Error::OrderBound { operation: "bar resolution", order: n, bound });
    }
    let m = n - 1;
    let c1 = m;
    let c2 = m * m;
    let coker_d2 = lattice_quotient_sparse(c1, bar_d2(tbl));
    let coker_d3 = lattice_quotient_sparse(c2, bar_d3(tbl));
    let rank_d2 = c1 - coker_d2.free_rank;
    let rank_d3 = c2 - coker_d3.free_rank;
    let free_rank = (c2 - rank_d2)
        .checked_sub(rank_d3)
        .ok_or_else(|| Error::Invariant("bar complex: image of d_3 exceeds the kernel of d_2".into()))?;
    Ok(AbelianInvariants { free_rank, torsion: coker_d3.torsion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::todd_coxeter;
    use crate::presentation::parse_presentation;

    fn table(text: &str) -> FiniteGroupTable {
        todd_coxeter(&parse_presentation(text).unwrap(), 10_000).unwrap()
    }

    #[test]
    fn boundary_squares_to_zero() {
        let t = table("gens: a,b; relators: a^3, b^2, a*b*a*b; prime: 2;");
        let d2 = bar_d2(&t);
        for row in bar_d3(&t) {
            let mut acc = vec![0i64; t.order() - 1];
            for (c, v) in row {
                for &(j, w) in &d2[c] {
                    acc[j] += v * w;
                }
            }
            assert!(acc.iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn small_multipliers() {
        assert_eq!(bar_h2(&FiniteGroupTable::trivial(), 32).unwrap().to_string(), "0");
        let c4 = table("gens: a; relators: a^4; prime: 2;");
        assert_eq!(bar_h2(&c4, 32).unwrap().to_string(), "0");
        let v4 = table("gens: a,b; relators: a^2, b^2, a*b*a^-1*b^-1; prime: 2;");
        assert_eq!(bar_h2(&v4, 32).unwrap().to_string(), "Z/2");
        let s3 = table("gens: a,b; relators: a^3, b^2, a*b*a*b; prime: 2;");
        assert_eq!(bar_h2(&s3, 32).unwrap().to_string(), "0");
        assert!(matches!(bar_h2(&c4, 3), Err(Error::OrderBound { .. })));
    }
}
