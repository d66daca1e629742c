use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::enumeration::{FiniteGroupTable, Subgroup};
use crate::error::{Error, Result};
use crate::groupring::fox_rows;
use crate::intlinalg::{
    hermite_normal_form, lattice_quotient, smith_normal_form, AbelianInvariants, HermiteForm,
    IntMatrix, SmithForm,
};
use crate::presentation::Presentation;

/// The relation module `R/[R,R]` as a sublattice of `Z^{|X|·|G|}`, spanned by
/// the `G`-translates of the Fox rows of the relators.
///
/// Construction checks the rank law, `G`-stability and exactness of
/// `0 -> lattice -> (ZG)^X -> IG -> 0`.
#[derive(Clone, Debug)]
pub struct RelationLattice {
    group: Arc<FiniteGroupTable>,
    arity: usize,
    hnf: HermiteForm,
    generator_rows: IntMatrix,
    // generator actions in basis coordinates, row convention: x -> x * A
    actions: Vec<IntMatrix>,
}

/// `g · v` for a vector of `|X|` blocks over `ZG`.
pub fn translate(tbl: &FiniteGroupTable, g: usize, v: &[BigInt]) -> Vec<BigInt> {
    let n = tbl.order();
    let mut out = vec![BigInt::zero(); v.len()];
    for (b, block) in v.chunks(n).enumerate() {
        for (h, c) in block.iter().enumerate() {
            if !c.is_zero() {
                out[b * n + tbl.mul(g, h)] = c.clone();
            }
        }
    }
    out
}

impl RelationLattice {
    pub fn new(pres: &Presentation, tbl: Arc<FiniteGroupTable>) -> Result<Self> {
        let rows = fox_rows(pres, &tbl)?;
        let n = tbl.order();
        let width = pres.arity() * n;
        let mut span = Vec::with_capacity(rows.rows() * n);
        for j in 0..rows.rows() {
            for g in 0..n {
                span.push(translate(&tbl, g, rows.row(j)));
            }
        }
        let hnf = hermite_normal_form(&IntMatrix::from_bigint_rows(width, span));
        let mut lat = RelationLattice {
            group: tbl,
            arity: pres.arity(),
            hnf,
            generator_rows: rows,
            actions: Vec::new(),
        };
        lat.check_rank()?;
        lat.actions = lat.compute_actions()?;
        lat.check_exactness()?;
        Ok(lat)
    }

    pub fn group(&self) -> &FiniteGroupTable {
        &self.group
    }

    pub fn group_arc(&self) -> Arc<FiniteGroupTable> {
        Arc::clone(&self.group)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.hnf.basis
    }

    pub fn generator_rows(&self) -> &IntMatrix {
        &self.generator_rows
    }

    pub fn rank(&self) -> usize {
        self.hnf.rank()
    }

    /// `|G|(|X| - 1) + 1`.
    pub fn expected_rank(&self) -> usize {
        (self.group.order() * self.arity + 1).saturating_sub(self.group.order())
    }

    /// Basis coordinates of a lattice vector.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        self.hnf.coordinates(v)
    }

    /// Action of generator `i` in basis coordinates (row convention).
    pub fn generator_action(&self, i: usize) -> &IntMatrix {
        &self.actions[i]
    }

    /// Action matrix of an arbitrary element, built along its canonical word.
    pub fn element_action(&self, g: usize) -> IntMatrix {
        let tbl = &self.group;
        // row convention composes right to left: A_{gh} = A_h A_g
        let mut m = IntMatrix::identity(self.rank());
        for &l in tbl.element_words()[g].letters() {
            let a = if l.inverse {
                self.inverse_action(l.generator)
            } else {
                self.actions[l.generator].clone()
            };
            m = a.mul(&m);
        }
        m
    }

    fn inverse_action(&self, i: usize) -> IntMatrix {
        let x = self.group.gen_images()[i];
        let o = self.group.element_order(x);
        let mut m = IntMatrix::identity(self.rank());
        for _ in 0..o - 1 {
            m = m.mul(&self.actions[i]);
        }
        m
    }

    fn check_rank(&self) -> Result<()> {
        if self.rank() != self.expected_rank() {
            return Err(Error::Invariant(format!(
                "relation lattice has rank {}, expected {}",
                self.rank(),
                self.expected_rank()
            )));
        }
        Ok(())
    }

    // translates of the basis by the generators; stability on generators
    // gives stability under the whole group
    fn compute_actions(&self) -> Result<Vec<IntMatrix>> {
        let r = self.rank();
        let mut out = Vec::with_capacity(self.arity);
        for &x in self.group.gen_images() {
            let mut rows = Vec::with_capacity(r);
            for k in 0..r {
                let t = translate(&self.group, x, self.hnf.basis.row(k));
                let c = self.coordinates(&t).ok_or_else(|| {
                    Error::Invariant("relation lattice is not stable under the group".into())
                })?;
                rows.push(c);
            }
            out.push(IntMatrix::from_bigint_rows(r, rows));
        }
        Ok(out)
    }

    fn check_exactness(&self) -> Result<()> {
        let n = self.group.order();
        let width = self.arity * n;
        let q = lattice_quotient(width, &self.hnf.basis.row_vecs());
        if !q.is_torsion_free() || q.free_rank + 1 != n {
            return Err(Error::Invariant(format!(
                "relation lattice is not the kernel onto the augmentation ideal: quotient {q}"
            )));
        }
        // the images g x_i - g span the augmentation ideal
        let mut rows = Vec::with_capacity(width);
        for &x in self.group.gen_images() {
            for g in 0..n {
                let mut v = vec![BigInt::zero(); n];
                v[self.group.mul(g, x)] += 1;
                v[g] -= 1;
                rows.push(v);
            }
        }
        let c = lattice_quotient(n, &rows);
        if c != (AbelianInvariants { free_rank: 1, torsion: vec![] }) {
            return Err(Error::Invariant(format!("augmentation ideal cokernel is {c}, not Z")));
        }
        Ok(())
    }

    /// Blockwise augmentation: the image of a lattice vector in `Z^X`.
    pub fn augmentation_blocks(&self, v: &[BigInt]) -> Vec<BigInt> {
        v.chunks(self.group.order()).map(|b| b.iter().sum()).collect()
    }
}

/// Coinvariants of the lattice under a subgroup `D`, in basis coordinates:
/// `Z^r / span{rows of A_d - 1 : d ∈ gens(D)}`.
#[derive(Clone, Debug)]
pub struct Coinvariants {
    pub subgroup: Subgroup,
    pub invariants: AbelianInvariants,
    pub relations: IntMatrix,
}

impl Coinvariants {
    pub fn smith(&self) -> SmithForm {
        smith_normal_form(&self.relations)
    }

    /// The diagonal of the Smith form extended by zeros to the full rank.
    pub fn padded_invariants(s: &SmithForm, r: usize) -> Vec<BigInt> {
        let mut d = s.invariants();
        d.resize(r, BigInt::zero());
        d
    }

    pub fn p_torsion(&self, p: u64) -> Vec<BigInt> {
        self.invariants.p_torsion(p)
    }
}

/// Coinvariants under `D`.
///
/// Only the generators of `D` are used: `dd' - 1 = (d - 1)d' + (d' - 1)`
/// puts every other `d - 1` in the span.
pub fn coinvariants(lat: &RelationLattice, d: &Subgroup) -> Result<Coinvariants> {
    let tbl = lat.group();
    if !d.members().iter().all(|&g| g < tbl.order()) || !d.contains(0) {
        return Err(Error::Precondition("subgroup does not belong to the lattice's group".into()));
    }
    let r = lat.rank();
    let mut rows = Vec::new();
    for &g in d.generators() {
        let mut a = lat.element_action(g);
        for k in 0..r {
            a[(k, k)] -= BigInt::one();
        }
        rows.extend(a.row_vecs().into_iter().filter(|v| v.iter().any(|x| !x.is_zero())));
    }
    let invariants = lattice_quotient(r, &rows);
    Ok(Coinvariants { subgroup: d.clone(), invariants, relations: IntMatrix::from_bigint_rows(r, rows) })
}

/// `|G/[G,G]|` from the table.
pub fn abelianization_order(tbl: &FiniteGroupTable) -> usize {
    let whole = tbl.whole();
    tbl.order() / tbl.commutator_subgroup(&whole, &whole).order()
}

/// Invariants of `Z^X / (relator exponent vectors)`.
pub fn abelianization(pres: &Presentation) -> AbelianInvariants {
    let m = pres.exponent_matrix();
    let rows: Vec<Vec<BigInt>> =
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    lattice_quotient(pres.arity(), &rows)
}

pub(crate) fn order_u64(a: &AbelianInvariants) -> Option<u64> {
    a.order().and_then(|o| o.to_u64())
}
