use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Row Hermite normal form: a reduced basis of the row lattice.
///
/// Rows are nonzero with strictly increasing pivot columns, pivots positive
/// and entries above each pivot reduced into `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteForm {
    pub basis: IntMatrix,
    pub pivots: Vec<usize>,
}

impl HermiteForm {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates of `v` in the basis, or `None` if `v` is outside the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.basis.cols());
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for (r, &c) in self.pivots.iter().enumerate() {
            let (q, rem) = rest[c].div_rem(&self.basis[(r, c)]);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (j, x) in rest.iter_mut().enumerate().skip(c) {
                    let b = &self.basis[(r, j)];
                    if !b.is_zero() {
                        *x -= &q * b;
                    }
                }
            }
            coords.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }
}

/// HNF of the lattice spanned by the rows of `a`.
pub fn hermite_normal_form(a: &IntMatrix) -> HermiteForm {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            // smallest |entry| in column c among rows r.., lowest index on ties
            let mut best: Option<usize> = None;
            for i in r..rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                if best.is_none_or(|b| m[(i, c)].abs() < m[(b, c)].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap_rows(r, b);
            let p = m[(r, c)].clone();
            let mut done = true;
            for i in r + 1..rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let q = m[(i, c)].div_floor(&p);
                m.add_row_multiple(i, r, &-q);
                done &= m[(i, c)].is_zero();
            }
            if done {
                break;
            }
        }
        if m[(r, c)].is_zero() {
            continue;
        }
        if m[(r, c)].is_negative() {
            m.negate_row(r);
        }
        let p = m[(r, c)].clone();
        for i in 0..r {
            let q = m[(i, c)].div_floor(&p);
            m.add_row_multiple(i, r, &-q);
        }
        pivots.push(c);
        r += 1;
    }
    let basis = IntMatrix::from_bigint_rows(cols, (0..r).map(|i| m.row(i).to_vec()).collect());
    HermiteForm { basis, pivots }
}
