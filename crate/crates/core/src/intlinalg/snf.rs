use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// `diagonal = u * a * v` with `u`, `v` unimodular; the inverses are kept too.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Invariant factors `d_1 | d_2 | ...`, including zeros, of length `min(m, n)`.
    pub fn invariants(&self) -> Vec<BigInt> {
        self.diagonal.diagonal()
    }

    pub fn rank(&self) -> usize {
        self.invariants().iter().filter(|d| !d.is_zero()).count()
    }
}

struct Transforms {
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

struct Elim {
    d: IntMatrix,
    t: Option<Transforms>,
}

impl Elim {
    // row[dst] += k row[src]
    fn row_add(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_row_multiple(dst, src, k);
        if let Some(t) = &mut self.t {
            t.u.add_row_multiple(dst, src, k);
            t.u_inv.add_col_multiple(src, dst, &-k);
        }
    }

    fn col_add(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_col_multiple(dst, src, k);
        if let Some(t) = &mut self.t {
            t.v.add_col_multiple(dst, src, k);
            t.v_inv.add_row_multiple(src, dst, &-k);
        }
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        if let Some(t) = &mut self.t {
            t.u.swap_rows(a, b);
            t.u_inv.swap_cols(a, b);
        }
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        if let Some(t) = &mut self.t {
            t.v.swap_cols(a, b);
            t.v_inv.swap_rows(a, b);
        }
    }

    fn row_negate(&mut self, i: usize) {
        self.d.negate_row(i);
        if let Some(t) = &mut self.t {
            t.u.negate_row(i);
            t.u_inv.negate_col(i);
        }
    }

    /// Smallest nonzero |entry| in the trailing block, ties to the lowest (row, col).
    fn pivot(&self, s: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in s..self.d.rows() {
            for j in s..self.d.cols() {
                let x = &self.d[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.d[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let (m, n) = (self.d.rows(), self.d.cols());
        for s in 0..m.min(n) {
            loop {
                let Some((pi, pj)) = self.pivot(s) else { return };
                self.row_swap(s, pi);
                self.col_swap(s, pj);
                let p = self.d[(s, s)].clone();
                let mut clean = true;
                for i in s + 1..m {
                    if self.d[(i, s)].is_zero() {
                        continue;
                    }
                    let q = self.d[(i, s)].div_floor(&p);
                    self.row_add(i, s, &-q);
                    clean &= self.d[(i, s)].is_zero();
                }
                for j in s + 1..n {
                    if self.d[(s, j)].is_zero() {
                        continue;
                    }
                    let q = self.d[(s, j)].div_floor(&p);
                    self.col_add(j, s, &-q);
                    clean &= self.d[(s, j)].is_zero();
                }
                if !clean {
                    continue;
                }
                // divisibility: fold an offending row into the pivot row
                let bad = (s + 1..m).find(|&i| (s + 1..n).any(|j| !self.d[(i, j)].is_multiple_of(&p)));
                match bad {
                    Some(i) => self.row_add(s, i, &BigInt::from(1)),
                    None => break,
                }
            }
            if self.d[(s, s)].is_negative() {
                self.row_negate(s);
            }
        }
    }
}

/// Smith normal form with deterministic pivoting and full transforms.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut e = Elim {
        d: a.clone(),
        t: Some(Transforms {
            u: IntMatrix::identity(m),
            u_inv: IntMatrix::identity(m),
            v: IntMatrix::identity(n),
            v_inv: IntMatrix::identity(n),
        }),
    };
    e.run();
    let t = e.t.unwrap();
    SmithForm { diagonal: e.d, u: t.u, u_inv: t.u_inv, v: t.v, v_inv: t.v_inv }
}

/// Invariant factors only, without transforms.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let mut e = Elim { d: a.clone(), t: None };
    e.run();
    e.d.diagonal()
}
