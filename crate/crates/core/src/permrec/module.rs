use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::enumeration::{FiniteGroupTable, Subgroup};
use crate::error::{Error, Result};
use crate::intlinalg::{
    identity, mat_inverse, mat_mul, mat_vec, nullspace_mod_p, FpEchelon, IntMatrix, ModMatrix,
    ModRing,
};
use crate::relmod::{coinvariants, RelationLattice};

/// A finite group acting on `(Z/p^k)^dim`, column convention: `v -> ρ(g) v`.
#[derive(Clone, Debug)]
pub struct GModule {
    group: Arc<FiniteGroupTable>,
    ring: ModRing,
    dim: usize,
    action: Vec<ModMatrix>,
    // ρ(g) for every element
    elements: Vec<ModMatrix>,
}

impl GModule {
    /// Checks that the generator matrices define a homomorphism from the group.
    pub fn new(
        group: Arc<FiniteGroupTable>,
        ring: ModRing,
        dim: usize,
        action: Vec<ModMatrix>,
    ) -> Result<Self> {
        if action.len() != group.arity() {
            return Err(Error::Precondition(format!(
                "{} action matrices for {} generators",
                action.len(),
                group.arity()
            )));
        }
        for a in &action {
            if a.len() != dim || a.iter().any(|r| r.len() != dim) {
                return Err(Error::Precondition("action matrices must be square of one size".into()));
            }
        }
        let action: Vec<ModMatrix> =
            action.into_iter().map(|a| a.iter().map(|r| ring.reduce_vec(r)).collect()).collect();
        let inverses: Vec<ModMatrix> = action
            .iter()
            .map(|a| mat_inverse(&ring, a))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Precondition("action matrix is not invertible".into()))?;
        let mut elements = Vec::with_capacity(group.order());
        for w in group.element_words() {
            let mut m = identity(dim);
            for &l in w.letters() {
                let a = if l.inverse { &inverses[l.generator] } else { &action[l.generator] };
                m = mat_mul(&ring, &m, a);
            }
            elements.push(m);
        }
        for g in 0..group.order() {
            for (i, &x) in group.gen_images().iter().enumerate() {
                if mat_mul(&ring, &elements[g], &action[i]) != elements[group.mul(g, x)] {
                    return Err(Error::Precondition(
                        "action does not respect the group's relations".into(),
                    ));
                }
            }
        }
        Ok(GModule { group, ring, dim, action, elements })
    }

    pub fn group(&self) -> &FiniteGroupTable {
        &self.group
    }

    pub fn group_arc(&self) -> Arc<FiniteGroupTable> {
        Arc::clone(&self.group)
    }

    pub fn ring(&self) -> ModRing {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator_action(&self) -> &[ModMatrix] {
        &self.action
    }

    pub fn rho(&self, g: usize) -> &ModMatrix {
        &self.elements[g]
    }

    pub fn act(&self, g: usize, v: &[u64]) -> Vec<u64> {
        mat_vec(&self.ring, &self.elements[g], v)
    }

    /// The same module at precision `k` (must not exceed the current one).
    pub fn reduce(&self, k: u32) -> Result<GModule> {
        if k > self.ring.k() {
            return Err(Error::Precondition("reduction cannot raise the precision".into()));
        }
        let ring = self.ring.truncate(k)?;
        let red = |m: &ModMatrix| -> ModMatrix { m.iter().map(|r| ring.reduce_vec(r)).collect() };
        Ok(GModule {
            group: Arc::clone(&self.group),
            ring,
            dim: self.dim,
            action: self.action.iter().map(red).collect(),
            elements: self.elements.iter().map(red).collect(),
        })
    }

    /// Basis of the fixed space `M^H`; the ring must be a field.
    pub fn fixed_space(&self, h: &Subgroup) -> Vec<Vec<u64>> {
        let r = self.ring;
        let mut rows = Vec::new();
        for &g in h.generators() {
            let m = &self.elements[g];
            for (i, row) in m.iter().enumerate() {
                let mut row = row.clone();
                row[i] = r.sub(row[i], 1);
                rows.push(row);
            }
        }
        nullspace_mod_p(&r, &rows, self.dim)
    }

    /// `Σ_{t ∈ Q/S} ρ(t) v`.
    pub fn relative_trace(&self, q: &Subgroup, s: &Subgroup, v: &[u64]) -> Vec<u64> {
        let ids = self.group.left_coset_ids(s);
        let mut reps: Vec<usize> = q.members().iter().map(|&t| ids[t]).collect();
        reps.sort_unstable();
        reps.dedup();
        let mut out = vec![0u64; self.dim];
        for t in reps {
            for (o, x) in out.iter_mut().zip(self.act(t, v)) {
                *o = self.ring.add(*o, x);
            }
        }
        out
    }
}

/// Permutation action of the group on the disjoint union of `G/H_i`, as a
/// module over `ring`. Basis vector order: summand by summand, cosets in the
/// order of the canonical left transversal.
pub fn permutation_module(
    group: Arc<FiniteGroupTable>,
    ring: ModRing,
    subgroups: &[Subgroup],
) -> Result<GModule> {
    let mut offsets = Vec::new();
    let mut total = 0;
    let mut transversals = Vec::new();
    for h in subgroups {
        let t = group.left_transversal(h);
        offsets.push(total);
        total += t.len();
        transversals.push(t);
    }
    let mut action = Vec::with_capacity(group.arity());
    for &x in group.gen_images() {
        let mut m = vec![vec![0u64; total]; total];
        for (h, (t, &off)) in subgroups.iter().zip(transversals.iter().zip(&offsets)) {
            let ids = group.left_coset_ids(h);
            for (j, &g) in t.iter().enumerate() {
                let img = ids[group.mul(x, g)];
                let i = t.binary_search(&img).unwrap();
                m[off + i][off + j] = 1;
            }
        }
        action.push(m);
    }
    GModule::new(group, ring, total, action)
}

/// A random matrix invertible mod `p`.
pub fn random_invertible(ring: &ModRing, n: usize, rng: &mut ChaCha8Rng) -> (ModMatrix, ModMatrix) {
    loop {
        let m: ModMatrix =
            (0..n).map(|_| (0..n).map(|_| rng.random_range(0..ring.modulus())).collect()).collect();
        if let Some(inv) = mat_inverse(ring, &m) {
            return (m, inv);
        }
    }
}

/// `B ρ B^{-1}` for every generator.
pub fn change_basis(m: &GModule, b: &ModMatrix, b_inv: &ModMatrix) -> Result<GModule> {
    let r = m.ring;
    let action = m.action.iter().map(|a| mat_mul(&r, &mat_mul(&r, b, a), b_inv)).collect();
    GModule::new(m.group_arc(), r, m.dim, action)
}

/// Which part of the coinvariants a module is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// `⊗ F_p`: the summands `Z/d` with `p | d`, including the free ones.
    ModP,
    /// The free part over `Z/p^k`; requires no `p`-torsion.
    ModPk(u32),
}

/// A module built from coinvariants, with the coordinates needed to map
/// between levels.
#[derive(Clone, Debug)]
pub struct CoinvariantModule {
    pub module: GModule,
    /// Projection of `G` onto the acting quotient `G/D`.
    pub projection: Vec<usize>,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    /// Smith coordinates kept in the module.
    pub kept: Vec<usize>,
}

/// The `G/D`-module carried by the coinvariants of the lattice under `D`.
pub fn module_from_coinvariants(
    lat: &RelationLattice,
    d: &Subgroup,
    p: u64,
    reduction: Reduction,
) -> Result<CoinvariantModule> {
    let tbl = lat.group();
    if !tbl.is_normal(d) {
        return Err(Error::Precondition("coinvariants under a non-normal subgroup".into()));
    }
    let coinv = coinvariants(lat, d)?;
    let smith = coinv.smith();
    let r = lat.rank();
    let diag = crate::relmod::Coinvariants::padded_invariants(&smith, r);
    let pb = BigInt::from(p);
    let (ring, kept): (ModRing, Vec<usize>) = match reduction {
        Reduction::ModP => {
            let kept = (0..r).filter(|&i| (&diag[i] % &pb).is_zero()).collect();
            (ModRing::field(p)?, kept)
        }
        Reduction::ModPk(k) => {
            if !coinv.p_torsion(p).is_empty() {
                return Err(Error::Torsion(format!(
                    "coinvariants {} have {p}-torsion",
                    coinv.invariants
                )));
            }
            (ModRing::new(p, k)?, (0..r).filter(|&i| diag[i].is_zero()).collect())
        }
    };
    let (quotient, projection) = tbl.quotient(d)?;
    let mut action = Vec::with_capacity(tbl.arity());
    for i in 0..tbl.arity() {
        let m = smith.v_inv.mul(lat.generator_action(i)).mul(&smith.v);
        // transpose of the kept block: column convention
        let block: ModMatrix = kept
            .iter()
            .map(|&a| kept.iter().map(|&b| ring.from_bigint(&m[(b, a)])).collect())
            .collect();
        action.push(block);
    }
    let module = GModule::new(Arc::new(quotient), ring, kept.len(), action)?;
    Ok(CoinvariantModule { module, projection, v: smith.v, v_inv: smith.v_inv, kept })
}

/// The map from the module at a deeper level onto the one above it, column
/// convention, checked to be surjective mod `p` and equivariant.
pub fn transition_map(deeper: &CoinvariantModule, upper: &CoinvariantModule) -> Result<ModMatrix> {
    let ring = upper.module.ring();
    if deeper.module.ring() != ring {
        return Err(Error::GroupMismatch);
    }
    let m = deeper.v_inv.mul(&upper.v);
    let t: ModMatrix = upper
        .kept
        .iter()
        .map(|&a| deeper.kept.iter().map(|&b| ring.from_bigint(&m[(b, a)])).collect())
        .collect();
    let field = ModRing::field(ring.p())?;
    let mut e = FpEchelon::new(field, deeper.kept.len());
    for row in &t {
        e.insert(&field.reduce_vec(row));
    }
    if e.dim() != upper.kept.len() {
        return Err(Error::Invariant("transition map is not surjective".into()));
    }
    for (a, b) in deeper.module.generator_action().iter().zip(upper.module.generator_action()) {
        if mat_mul(&ring, &t, a) != mat_mul(&ring, b, &t) {
            return Err(Error::Invariant("transition map is not equivariant".into()));
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::todd_coxeter;
    use crate::groupring::dimension_series;
    use crate::presentation::parse_presentation;

    fn lattice(text: &str) -> RelationLattice {
        let p = parse_presentation(text).unwrap();
        let t = todd_coxeter(&p, 10_000).unwrap();
        RelationLattice::new(&p, Arc::new(t)).unwrap()
    }

    #[test]
    fn cyclic_levels_are_trivial() {
        let lat = lattice("gens: a; relators: a^4; prime: 2;");
        for d in dimension_series(lat.group(), 2).unwrap() {
            let m = module_from_coinvariants(&lat, &d, 2, Reduction::ModPk(5)).unwrap();
            assert_eq!(m.module.dim(), 1);
            assert_eq!(m.module.generator_action()[0], vec![vec![1]]);
        }
    }

    #[test]
    fn quaternion_levels_and_transitions() {
        let lat = lattice("gens: a,b; relators: a*b*a=b, b*a*b=a; prime: 2;");
        let series = dimension_series(lat.group(), 2).unwrap();
        let top = module_from_coinvariants(&lat, &series[0], 2, Reduction::ModP).unwrap();
        assert_eq!(top.module.group().order(), 1);
        assert_eq!(top.module.dim(), 2);
        let mods: Vec<_> = series
            .iter()
            .map(|d| module_from_coinvariants(&lat, d, 2, Reduction::ModPk(4)).unwrap())
            .collect();
        assert_eq!(mods.last().unwrap().module.dim(), 9);
        for w in mods.windows(2) {
            transition_map(&w[1], &w[0]).unwrap();
        }
    }

    #[test]
    fn torsion_blocks_padic_mode() {
        let lat = lattice("gens: a,b; relators: a^2, b^2, a*b*a^-1*b^-1; prime: 2;");
        let g = lat.group().whole();
        assert!(matches!(
            module_from_coinvariants(&lat, &g, 2, Reduction::ModPk(3)),
            Err(Error::Torsion(_))
        ));
        let m = module_from_coinvariants(&lat, &g, 2, Reduction::ModP).unwrap();
        assert_eq!(m.module.dim(), 3);
    }

    #[test]
    fn free_presentation_gives_zero_module() {
        let lat = lattice("gens: ; relators: ; prime: 2;");
        let m = module_from_coinvariants(&lat, &lat.group().whole(), 2, Reduction::ModP).unwrap();
        assert_eq!(m.module.dim(), 0);
    }

    #[test]
    fn bad_action_is_rejected() {
        let p = parse_presentation("gens: a; relators: a^2; prime: 2;").unwrap();
        let t = Arc::new(todd_coxeter(&p, 100).unwrap());
        let r = ModRing::new(2, 3).unwrap();
        assert!(GModule::new(Arc::clone(&t), r, 1, vec![vec![vec![3]]]).is_ok());
        assert!(GModule::new(Arc::clone(&t), r, 1, vec![vec![vec![2]]]).is_err());
        let r16 = ModRing::new(2, 4).unwrap();
        // 5^2 = 9 mod 16
        assert!(GModule::new(t, r16, 1, vec![vec![vec![5]]]).is_err());
    }
}
