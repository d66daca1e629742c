//! Dense linear algebra over `Z/p^k`, with `k = 1` giving the field `F_p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModRing {
    p: u64,
    k: u32,
    modulus: u64,
}

impl ModRing {
    /// `Z/p^k`; `p^k` must stay below `2^62`.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !crate::presentation::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::Precondition("precision must be at least 1".into()));
        }
        let mut m: u64 = 1;
        for _ in 0..k {
            m = m
                .checked_mul(p)
                .filter(|&m| m < 1 << 62)
                .ok_or(Error::PrecisionBound { p, k })?;
        }
        Ok(ModRing { p, k, modulus: m })
    }

    pub fn field(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus { s - self.modulus } else { s }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b { a - b } else { a + self.modulus - b }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 { 0 } else { self.modulus - a }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.modulus as i64) as u64
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.modulus)).to_u64().unwrap()
    }

    /// Symmetric representative in `(-m/2, m/2]`.
    pub fn to_signed(&self, a: u64) -> i64 {
        if a > self.modulus / 2 { a as i64 - self.modulus as i64 } else { a as i64 }
    }

    /// `p`-adic valuation, `k` for zero.
    pub fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            return self.k;
        }
        let mut v = 0;
        let mut x = a;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(self.is_unit(a), "inverse of a non-unit");
        let (mut r0, mut r1) = (self.modulus as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        t0.rem_euclid(self.modulus as i128) as u64
    }

    pub fn pow_p(&self, e: u32) -> u64 {
        self.p.pow(e) % self.modulus
    }

    /// The same ring at a lower precision.
    pub fn truncate(&self, k: u32) -> Result<Self> {
        ModRing::new(self.p, k)
    }

    pub fn reduce_vec(&self, v: &[u64]) -> Vec<u64> {
        v.iter().map(|&x| x % self.modulus).collect()
    }
}

pub type ModMatrix = Vec<Vec<u64>>;

/// `a * b` for dense matrices over the ring.
pub fn mat_mul(ring: &ModRing, a: &ModMatrix, b: &ModMatrix) -> ModMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            let mut out = vec![0u64; cols];
            for (k, &x) in row.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (o, &y) in out.iter_mut().zip(&b[k]) {
                    if y != 0 {
                        *o = ring.add(*o, ring.mul(x, y));
                    }
                }
            }
            out
        })
        .collect()
}

/// `a * v` for a column vector `v`.
pub fn mat_vec(ring: &ModRing, a: &ModMatrix, v: &[u64]) -> Vec<u64> {
    a.iter()
        .map(|row| {
            row.iter().zip(v).fold(0, |acc, (&x, &y)| ring.add(acc, ring.mul(x, y)))
        })
        .collect()
}

pub fn identity(n: usize) -> ModMatrix {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
}

/// Inverse over the ring, `None` when the matrix is singular mod `p`.
pub fn mat_inverse(ring: &ModRing, a: &ModMatrix) -> Option<ModMatrix> {
    let n = a.len();
    let mut m: ModMatrix = a.iter().map(|r| ring.reduce_vec(r)).collect();
    let mut inv = identity(n);
    for c in 0..n {
        let piv = (c..n).find(|&r| ring.is_unit(m[r][c]))?;
        m.swap(c, piv);
        inv.swap(c, piv);
        let s = ring.inv(m[c][c]);
        for j in 0..n {
            m[c][j] = ring.mul(m[c][j], s);
            inv[c][j] = ring.mul(inv[c][j], s);
        }
        for r in 0..n {
            if r == c || m[r][c] == 0 {
                continue;
            }
            let f = m[r][c];
            for j in 0..n {
                let (x, y) = (ring.mul(f, m[c][j]), ring.mul(f, inv[c][j]));
                m[r][j] = ring.sub(m[r][j], x);
                inv[r][j] = ring.sub(inv[r][j], y);
            }
        }
    }
    Some(inv)
}

pub fn transpose(a: &ModMatrix, cols: usize) -> ModMatrix {
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// Incrementally built row echelon basis of a subspace of `F_p^n`.
///
/// Rows are kept fully reduced with a leading 1, so membership and
/// coordinates in the inserted vectors come out of a single pass.
#[derive(Clone, Debug)]
pub struct FpEchelon {
    ring: ModRing,
    n: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    // each echelon row as a combination of the inserted vectors
    combos: Vec<Vec<u64>>,
    inserted: usize,
}

impl FpEchelon {
    pub fn new(ring: ModRing, n: usize) -> Self {
        assert_eq!(ring.k(), 1, "echelon forms need a field");
        FpEchelon { ring, n, rows: Vec::new(), pivots: Vec::new(), combos: Vec::new(), inserted: 0 }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; returns the remainder and the combination used.
    fn reduce_with(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let r = &self.ring;
        let mut w = r.reduce_vec(v);
        let mut combo = vec![0u64; self.inserted];
        for (row, (&c, cmb)) in self.rows.iter().zip(self.pivots.iter().zip(&self.combos)) {
            let f = w[c];
            if f == 0 {
                continue;
            }
            for (x, &y) in w.iter_mut().zip(row) {
                if y != 0 {
                    *x = r.sub(*x, r.mul(f, y));
                }
            }
            for (x, &y) in combo.iter_mut().zip(cmb) {
                if y != 0 {
                    *x = r.add(*x, r.mul(f, y));
                }
            }
        }
        (w, combo)
    }

    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        self.reduce_with(v).0
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.n);
        let r = self.ring;
        let idx = self.inserted;
        self.inserted += 1;
        for c in &mut self.combos {
            c.push(0);
        }
        let (mut w, combo) = self.reduce_with(v);
        // w = v - sum combo_i * (inserted_i)
        let mut combo: Vec<u64> = combo.iter().map(|&x| r.neg(x)).collect();
        combo.resize(self.inserted, 0);
        combo[idx] = 1;
        let Some(c) = w.iter().position(|&x| x != 0) else { return false };
        let s = r.inv(w[c]);
        for x in &mut w {
            *x = r.mul(*x, s);
        }
        for x in &mut combo {
            *x = r.mul(*x, s);
        }
        for (row, cmb) in self.rows.iter_mut().zip(&mut self.combos) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(&w) {
                *x = r.sub(*x, r.mul(f, y));
            }
            for (x, &y) in cmb.iter_mut().zip(&combo) {
                *x = r.sub(*x, r.mul(f, y));
            }
        }
        let pos = self.pivots.partition_point(|&p| p < c);
        self.rows.insert(pos, w);
        self.pivots.insert(pos, c);
        self.combos.insert(pos, combo);
        true
    }

    /// Coefficients expressing `v` in the inserted vectors, if `v` lies in the span.
    pub fn solve(&self, v: &[u64]) -> Option<Vec<u64>> {
        let (w, combo) = self.reduce_with(v);
        w.iter().all(|&x| x == 0).then_some(combo)
    }

    /// A basis of a complement: the unit vectors at non-pivot columns.
    pub fn complement_basis(&self) -> Vec<Vec<u64>> {
        (0..self.n)
            .filter(|c| self.pivots.binary_search(c).is_err())
            .map(|c| {
                let mut e = vec![0; self.n];
                e[c] = 1;
                e
            })
            .collect()
    }
}

/// Rank over `F_p`.
pub fn rank_mod_p(ring: &ModRing, rows: &[Vec<u64>], n: usize) -> usize {
    let mut e = FpEchelon::new(*ring, n);
    for r in rows {
        e.insert(r);
    }
    e.dim()
}

/// Basis of `{v : a v = 0}` over `F_p`, `a` having `n` columns.
pub fn nullspace_mod_p(ring: &ModRing, a: &[Vec<u64>], n: usize) -> Vec<Vec<u64>> {
    let mut e = FpEchelon::new(*ring, n);
    for r in a {
        e.insert(r);
    }
    let free: Vec<usize> = (0..n).filter(|c| e.pivots.binary_search(c).is_err()).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &c) in e.rows.iter().zip(&e.pivots) {
                v[c] = ring.neg(row[f]);
            }
            v
        })
        .collect()
}

/// Column reduction of `a` over `Z/p^k`: an invertible `q` and exponents `e`
/// such that the solutions of `a v = 0` are exactly `v = q y` with
/// `p^{e_i} y_i = 0`. Columns beyond the rank get exponent `k`.
#[derive(Clone, Debug)]
pub struct ColumnSmith {
    pub q: ModMatrix,
    pub exponents: Vec<u32>,
}

impl ColumnSmith {
    /// Vectors `q e_i` whose slot can be scaled freely at precision `j`:
    /// the solutions of `a v = 0 (mod p^j)` reduce mod `p` onto their span.
    pub fn liftable_directions(&self, j: u32) -> Vec<Vec<u64>> {
        let n = self.exponents.len();
        (0..n)
            .filter(|&i| self.exponents[i] >= j)
            .map(|i| (0..n).map(|r| self.q[r][i]).collect())
            .collect()
    }
}

pub fn column_smith(ring: &ModRing, a: &[Vec<u64>], n: usize) -> ColumnSmith {
    let r = *ring;
    let mut d: ModMatrix = a.iter().map(|row| r.reduce_vec(row)).collect();
    let m = d.len();
    let mut q = identity(n);
    let mut exps = vec![r.k(); n];
    for s in 0..m.min(n) {
        // entry of least valuation, lowest (row, col) on ties
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in d.iter().enumerate().skip(s) {
            for (j, &x) in row.iter().enumerate().skip(s) {
                let v = r.valuation(x);
                if v < r.k() && best.is_none_or(|b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((e, pi, pj)) = best else { break };
        d.swap(s, pi);
        for row in d.iter_mut() {
            row.swap(s, pj);
        }
        for row in q.iter_mut() {
            row.swap(s, pj);
        }
        let pe = r.pow_p(e);
        let u_inv = r.inv(d[s][s] / pe);
        for i in s + 1..m {
            let f = r.mul(d[i][s] / pe, u_inv);
            if f == 0 {
                continue;
            }
            for j in s..n {
                let t = r.mul(f, d[s][j]);
                d[i][j] = r.sub(d[i][j], t);
            }
        }
        for j in s + 1..n {
            let f = r.mul(d[s][j] / pe, u_inv);
            if f == 0 {
                continue;
            }
            for row in d.iter_mut() {
                let t = r.mul(f, row[s]);
                row[j] = r.sub(row[j], t);
            }
            for row in q.iter_mut() {
                let t = r.mul(f, row[s]);
                row[j] = r.sub(row[j], t);
            }
        }
        exps[s] = e;
    }
    ColumnSmith { q, exponents: exps }
}
