use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::hnf::hermite_normal_form;
use super::matrix::IntMatrix;
use super::snf::invariant_factors;

/// A finitely generated abelian group `Z^free_rank ⊕ ⊕ Z/d_i` with
/// `1 < d_1 | d_2 | ...`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    #[serde(with = "crate::serde_bigint_list")]
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// From the invariant factors of a relation matrix on `generators` generators.
    pub fn from_invariant_factors(generators: usize, factors: &[BigInt]) -> Self {
        let rank = factors.iter().filter(|d| !d.is_zero()).count();
        let mut torsion: Vec<BigInt> =
            factors.iter().filter(|d| !d.is_zero() && !d.abs().is_one()).map(|d| d.abs()).collect();
        torsion.sort();
        AbelianInvariants { free_rank: generators - rank, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Group order, when finite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    pub fn torsion_part(&self) -> AbelianInvariants {
        AbelianInvariants { free_rank: 0, torsion: self.torsion.clone() }
    }

    /// The `p`-primary part of the torsion subgroup.
    pub fn p_torsion(&self, p: u64) -> Vec<BigInt> {
        let p = BigInt::from(p);
        self.torsion
            .iter()
            .filter_map(|d| {
                let mut part = BigInt::one();
                let mut x = d.clone();
                while x.is_multiple_of(&p) {
                    x /= &p;
                    part *= &p;
                }
                (!part.is_one()).then_some(part)
            })
            .collect()
    }

    pub fn torsion_u64(&self) -> Option<Vec<u64>> {
        self.torsion.iter().map(ToPrimitive::to_u64).collect()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `Z^n / span(generators)`.
pub fn lattice_quotient(n: usize, generators: &[Vec<BigInt>]) -> AbelianInvariants {
    let small: Option<Vec<Vec<(usize, i64)>>> = generators
        .iter()
        .map(|g| {
            assert_eq!(g.len(), n, "generator of the wrong length");
            g.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(j, x)| x.to_i64().map(|v| (j, v)))
                .collect()
        })
        .collect();
    match small {
        Some(rows) => sparse_quotient(n, rows),
        None => dense_quotient(n, generators.to_vec()),
    }
}

/// `Z^n / span(generators)` for small-integer sparse rows `(column, value)`.
pub fn lattice_quotient_sparse(n: usize, generators: Vec<Vec<(usize, i64)>>) -> AbelianInvariants {
    sparse_quotient(n, generators)
}

fn dense_quotient(n: usize, rows: Vec<Vec<BigInt>>) -> AbelianInvariants {
    let m = IntMatrix::from_bigint_rows(n, rows);
    let h = hermite_normal_form(&m);
    AbelianInvariants::from_invariant_factors(n, &invariant_factors(&h.basis))
}

struct Sparse {
    rows: Vec<Vec<(usize, i64)>>,
    occ: Vec<BTreeSet<usize>>,
}

impl Sparse {
    fn coeff(&self, r: usize, c: usize) -> i64 {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |e| e.0).map(|k| row[k].1).unwrap_or(0)
    }

    /// rows[i] -= f * rows[r]; `None` on overflow.
    fn combine(&self, i: usize, r: usize, f: i64) -> Option<Vec<(usize, i64)>> {
        let (a, b) = (&self.rows[i], &self.rows[r]);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() || y < b.len() {
            let ca = a.get(x).map_or(usize::MAX, |e| e.0);
            let cb = b.get(y).map_or(usize::MAX, |e| e.0);
            if ca < cb {
                out.push(a[x]);
                x += 1;
            } else {
                let t = b[y].1.checked_mul(f)?;
                let v = if ca == cb {
                    x += 1;
                    a[x - 1].1.checked_sub(t)?
                } else {
                    t.checked_neg()?
                };
                if v != 0 {
                    out.push((cb, v));
                }
                y += 1;
            }
        }
        Some(out)
    }

    fn set_row(&mut self, i: usize, new: Vec<(usize, i64)>) {
        for &(c, _) in &self.rows[i] {
            self.occ[c].remove(&i);
        }
        for &(c, _) in &new {
            self.occ[c].insert(i);
        }
        self.rows[i] = new;
    }

    /// Eliminates column `c` using the unit entry of row `r`; `false` on overflow.
    fn eliminate(&mut self, r: usize, c: usize) -> bool {
        let s = self.coeff(r, c);
        debug_assert!(s == 1 || s == -1);
        let others: Vec<usize> = self.occ[c].iter().copied().filter(|&i| i != r).collect();
        for i in others {
            let f = self.coeff(i, c) * s;
            match self.combine(i, r, f) {
                Some(new) => self.set_row(i, new),
                None => return false,
            }
        }
        self.set_row(r, Vec::new());
        true
    }
}

fn sparse_quotient(n: usize, mut rows: Vec<Vec<(usize, i64)>>) -> AbelianInvariants {
    for r in &mut rows {
        r.sort_unstable_by_key(|e| e.0);
        r.retain(|e| e.1 != 0);
    }
    let mut sp = Sparse { occ: vec![BTreeSet::new(); n], rows: Vec::new() };
    for (i, r) in rows.into_iter().enumerate() {
        for &(c, _) in &r {
            sp.occ[c].insert(i);
        }
        sp.rows.push(r);
    }
    let mut eliminated = 0usize;
    let mut progress = true;
    while progress {
        progress = false;
        for r in 0..sp.rows.len() {
            // unit entry whose column is shortest, lowest column on ties
            let pick = sp.rows[r]
                .iter()
                .filter(|e| e.1 == 1 || e.1 == -1)
                .min_by_key(|e| (sp.occ[e.0].len(), e.0))
                .map(|e| e.0);
            let Some(c) = pick else { continue };
            if !sp.eliminate(r, c) {
                // the rows so far are exact; finish densely
                return dense_remainder(n, &sp, eliminated);
            }
            eliminated += 1;
            progress = true;
        }
    }
    dense_remainder(n, &sp, eliminated)
}

fn remaining(sp: &Sparse) -> (Vec<usize>, Vec<Vec<(usize, i64)>>) {
    let cols: Vec<usize> = (0..sp.occ.len()).filter(|&c| !sp.occ[c].is_empty()).collect();
    let rows: BTreeSet<Vec<(usize, i64)>> =
        sp.rows.iter().filter(|r| !r.is_empty()).cloned().collect();
    (cols, rows.into_iter().collect())
}

fn dense_remainder(n: usize, sp: &Sparse, eliminated: usize) -> AbelianInvariants {
    let (cols, rows) = remaining(sp);
    let index: std::collections::HashMap<usize, usize> =
        cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let dense: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![BigInt::zero(); cols.len()];
            for &(c, x) in r {
                v[index[&c]] = BigInt::from(x);
            }
            v
        })
        .collect();
    let rest = dense_quotient(cols.len(), dense);
    // eliminated columns are killed; untouched columns stay free
    AbelianInvariants { free_rank: rest.free_rank + (n - cols.len() - eliminated), ..rest }
}
