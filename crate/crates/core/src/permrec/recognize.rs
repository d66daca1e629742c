use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::enumeration::{
    all_subgroups, conjugacy_classes, fixed_cosets, orbits_on_cosets, FiniteGroupTable, Subgroup,
};
use crate::error::{Error, Result};
use crate::intlinalg::{mat_vec, FpEchelon, ModRing};

use super::module::GModule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Certified,
    RefutedByMarks,
    /// An exhaustive search over every candidate found no permuted basis.
    RefutedBySearch,
    Unknown,
}

impl Status {
    pub fn is_refuted(self) -> bool {
        matches!(self, Status::RefutedByMarks | Status::RefutedBySearch)
    }
}

/// A character `H -> {±1}`, given by its kernel; trivial when the kernel is `H`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Twist {
    Trivial,
    Sign { kernel: Vec<usize> },
}

impl Twist {
    pub fn sign(&self, h: usize) -> i8 {
        match self {
            Twist::Trivial => 1,
            Twist::Sign { kernel } => {
                if kernel.binary_search(&h).is_ok() {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Twist::Trivial)
    }
}

/// `multiplicity` copies of the module induced from `twist` on `subgroup`,
/// the canonical representative of its conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Summand {
    pub order: usize,
    pub subgroup: Vec<usize>,
    pub multiplicity: usize,
    pub twist: Twist,
}

/// One generating vector `v`, fixed by `subgroup` up to `twist`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateSlot {
    pub subgroup: Subgroup,
    pub vector: Vec<u64>,
    pub twist: Twist,
}

/// A basis `{ρ(t) v_i}` permuted up to sign by every generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub slots: Vec<CertificateSlot>,
    pub basis: Vec<Vec<u64>>,
    /// For each generator and basis index `j`: `ρ(x) b_j = sign · b_target`.
    pub permutations: Vec<Vec<(usize, i8)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermDecomposition {
    pub status: Status,
    pub prime: u64,
    pub precision: u32,
    pub summands: Vec<Summand>,
    pub certificate: Option<Certificate>,
    pub reason: String,
    /// First precision at which a lift failed.
    pub failing_precision: Option<u32>,
    pub search_nodes: usize,
}

impl PermDecomposition {
    fn verdict(status: Status, ring: ModRing, reason: impl Into<String>) -> Self {
        PermDecomposition {
            status,
            prime: ring.p(),
            precision: ring.k(),
            summands: Vec::new(),
            certificate: None,
            reason: reason.into(),
            failing_precision: None,
            search_nodes: 0,
        }
    }

    /// Builds and verifies the certificate spanned by the given slots.
    pub fn certify(m: &GModule, slots: Vec<CertificateSlot>) -> Result<PermDecomposition> {
        let cert = build_certificate(m, slots)?;
        verify_certificate(m, &cert)?;
        let summands = summands_of(m.group(), &cert.slots)?;
        let generalized = cert.slots.iter().any(|s| !s.twist.is_trivial());
        Ok(PermDecomposition {
            status: Status::Certified,
            prime: m.ring().p(),
            precision: m.ring().k(),
            summands,
            certificate: Some(cert),
            reason: if generalized {
                "signed permuted basis verified".into()
            } else {
                "permuted basis verified".into()
            },
            failing_precision: None,
            search_nodes: 0,
        })
    }

    /// Certified with some nontrivial sign twist.
    pub fn is_generalized_only(&self) -> bool {
        self.status == Status::Certified && self.summands.iter().any(|s| !s.twist.is_trivial())
    }

    /// Subgroup classes with multiplicity, ignoring twists.
    pub fn subgroup_multiset(&self) -> Vec<(Vec<usize>, usize)> {
        let mut acc: HashMap<Vec<usize>, usize> = HashMap::new();
        for s in &self.summands {
            *acc.entry(s.subgroup.clone()).or_default() += s.multiplicity;
        }
        let mut v: Vec<_> = acc.into_iter().collect();
        v.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        v
    }
}

fn build_certificate(m: &GModule, slots: Vec<CertificateSlot>) -> Result<Certificate> {
    let tbl = m.group();
    let mut basis = Vec::new();
    let mut offsets = Vec::new();
    for s in &slots {
        offsets.push(basis.len());
        for t in tbl.left_transversal(&s.subgroup) {
            basis.push(m.act(t, &s.vector));
        }
    }
    let mut permutations = Vec::with_capacity(tbl.arity());
    for &x in tbl.gen_images() {
        let mut perm = Vec::with_capacity(basis.len());
        for (s, &off) in slots.iter().zip(&offsets) {
            let ids = tbl.left_coset_ids(&s.subgroup);
            let reps = tbl.left_transversal(&s.subgroup);
            for &t in &reps {
                let xt = tbl.mul(x, t);
                let t2 = ids[xt];
                let h = tbl.mul(tbl.inv(t2), xt);
                let j = reps.binary_search(&t2).unwrap();
                perm.push((off + j, s.twist.sign(h)));
            }
        }
        permutations.push(perm);
    }
    Ok(Certificate { slots, basis, permutations })
}

/// Exact check that the basis is a basis and that each generator permutes it
/// with the recorded signs.
pub fn verify_certificate(m: &GModule, cert: &Certificate) -> Result<()> {
    let ring = m.ring();
    if cert.basis.len() != m.dim() {
        return Err(Error::Invariant(format!(
            "certificate has {} vectors for a module of dimension {}",
            cert.basis.len(),
            m.dim()
        )));
    }
    let field = ModRing::field(ring.p())?;
    let mut e = FpEchelon::new(field, m.dim());
    for b in &cert.basis {
        if !e.insert(&field.reduce_vec(b)) {
            return Err(Error::Invariant("certificate vectors are dependent mod p".into()));
        }
    }
    for (a, perm) in m.generator_action().iter().zip(&cert.permutations) {
        for (b, &(target, sign)) in cert.basis.iter().zip(perm) {
            if sign == -1 && ring.p() != 2 {
                return Err(Error::Invariant("sign twist for an odd prime".into()));
            }
            let img = mat_vec(&ring, a, b);
            let want: Vec<u64> =
                cert.basis[target].iter().map(|&y| if sign < 0 { ring.neg(y) } else { y }).collect();
            if img != want {
                return Err(Error::Invariant("generator does not permute the certificate".into()));
            }
        }
    }
    Ok(())
}

fn summands_of(tbl: &FiniteGroupTable, slots: &[CertificateSlot]) -> Result<Vec<Summand>> {
    let subs = all_subgroups(tbl, usize::MAX)?;
    let classes = conjugacy_classes(tbl, &subs);
    let class_of = |h: &Subgroup| -> usize {
        classes
            .iter()
            .position(|c| c.iter().any(|&i| subs[i].members() == h.members()))
            .unwrap()
    };
    let mut acc: HashMap<(usize, Twist), usize> = HashMap::new();
    for s in slots {
        *acc.entry((class_of(&s.subgroup), s.twist.clone())).or_default() += 1;
    }
    let mut out: Vec<Summand> = acc
        .into_iter()
        .map(|((c, twist), multiplicity)| {
            let rep = &subs[classes[c][0]];
            Summand { order: rep.order(), subgroup: rep.members().to_vec(), multiplicity, twist }
        })
        .collect();
    out.sort_by(|a, b| b.order.cmp(&a.order).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Subgroup data shared by marks and search.
pub(crate) struct Lattice {
    pub subs: Vec<Subgroup>,
    pub classes: Vec<Vec<usize>>,
    fixed: HashMap<usize, Vec<Vec<u64>>>,
}

impl Lattice {
    pub fn new(tbl: &FiniteGroupTable, bound: usize) -> Result<Self> {
        let subs = all_subgroups(tbl, bound)?;
        let classes = conjugacy_classes(tbl, &subs);
        Ok(Lattice { subs, classes, fixed: HashMap::new() })
    }

    pub fn rep(&self, class: usize) -> &Subgroup {
        &self.subs[self.classes[class][0]]
    }

    pub fn fixed(&mut self, m: &GModule, i: usize) -> &Vec<Vec<u64>> {
        let subs = &self.subs;
        self.fixed.entry(i).or_insert_with(|| m.fixed_space(&subs[i]))
    }

    /// Echelon of `Σ_{S maximal in Q} Tr_S^Q(M^S)`, `Q` the representative of `class`.
    pub fn trace_span(&mut self, m: &GModule, class: usize, p: u64) -> FpEchelon {
        let qi = self.classes[class][0];
        let q = self.subs[qi].clone();
        let mut e = FpEchelon::new(m.ring(), m.dim());
        for si in 0..self.subs.len() {
            let s = self.subs[si].clone();
            if s.order() * p as usize != q.order() || !s.is_subgroup_of(&q) {
                continue;
            }
            for v in self.fixed(m, si).clone() {
                e.insert(&m.relative_trace(&q, &s, &v));
            }
        }
        e
    }
}

/// Multiplicities per class from the Brauer quotient dimensions, solving the
/// triangular marks system from the largest subgroups down.
fn solve_marks(
    tbl: &FiniteGroupTable,
    lat: &Lattice,
    brauer: &[usize],
) -> std::result::Result<Vec<usize>, String> {
    let nc = lat.classes.len();
    let mut order: Vec<usize> = (0..nc).collect();
    order.sort_by(|&a, &b| lat.rep(b).order().cmp(&lat.rep(a).order()).then(a.cmp(&b)));
    let mut mult = vec![0i64; nc];
    for (pos, &q) in order.iter().enumerate() {
        let qs = lat.rep(q);
        let mut rest = brauer[q] as i64;
        for &h in &order[..pos] {
            rest -= mult[h] * fixed_cosets(tbl, lat.rep(h), qs) as i64;
        }
        let diag = fixed_cosets(tbl, qs, qs) as i64;
        if rest % diag != 0 {
            return Err(format!("marks give a non-integral multiplicity at a subgroup of order {}", qs.order()));
        }
        if rest < 0 {
            return Err(format!("marks give a negative multiplicity at a subgroup of order {}", qs.order()));
        }
        mult[q] = rest / diag;
    }
    Ok(mult.into_iter().map(|x| x as usize).collect())
}

/// What the search found for one slot.
pub(crate) struct Chosen<T> {
    pub class: usize,
    pub vector: Vec<u64>,
    pub extra: T,
}

pub(crate) enum SearchOutcome<T> {
    Found(Vec<Chosen<T>>),
    Exhausted { complete: bool },
    Budget,
}

pub(crate) struct SearchSpace {
    slots: Vec<usize>,
    candidates: Vec<Vec<Vec<u64>>>,
    complete: bool,
    // per class Q: the span of T_Q and I_{N(Q)} M^Q; the certificate's
    // Q-fixed vectors must stay independent modulo it
    seeds: Vec<FpEchelon>,
    // [slot class][class Q]: one coset representative per N(Q)-orbit of the
    // Q-fixed cosets
    fixed_reps: Vec<Vec<Vec<usize>>>,
    transversals: Vec<Vec<usize>>,
}

const ENUMERATION_LIMIT: u64 = 4096;
const RANDOM_CANDIDATES: usize = 512;

fn normalizer(tbl: &FiniteGroupTable, h: &Subgroup) -> Vec<usize> {
    (0..tbl.order())
        .filter(|&g| h.generators().iter().all(|&x| h.contains(tbl.conjugate(g, x))))
        .collect()
}

/// Coset representatives of `G/K` fixed by `Q`, one per orbit of `N`.
fn fixed_orbit_reps(tbl: &FiniteGroupTable, k: &Subgroup, q: &Subgroup, n: &[usize]) -> Vec<usize> {
    let ids = tbl.left_coset_ids(k);
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    for t in tbl.left_transversal(k) {
        if !q.generators().iter().all(|&h| ids[tbl.mul(h, t)] == t) || seen.contains(&t) {
            continue;
        }
        for &x in n {
            seen.insert(ids[tbl.mul(x, t)]);
        }
        reps.push(t);
    }
    reps
}

impl SearchSpace {
    pub fn new(
        m: &GModule,
        lat: &mut Lattice,
        mult: &[usize],
        traces: Vec<FpEchelon>,
        seed: u64,
    ) -> Self {
        let ring = m.ring();
        let tbl = m.group();
        let nc = lat.classes.len();
        let mut seeds = traces;
        let mut normalizers = Vec::with_capacity(nc);
        for (c, e) in seeds.iter_mut().enumerate() {
            let h = lat.rep(c).clone();
            let norm = normalizer(tbl, &h);
            let gens = tbl.subgroup_generated(&norm).generators().to_vec();
            for w in lat.fixed(m, lat.classes[c][0]).clone() {
                for &g in &gens {
                    let gw = m.act(g, &w);
                    let d: Vec<u64> = gw.iter().zip(&w).map(|(&a, &b)| ring.sub(a, b)).collect();
                    e.insert(&d);
                }
            }
            normalizers.push(norm);
        }
        let mut classes: Vec<usize> = (0..nc).filter(|&c| mult[c] > 0).collect();
        classes.sort_by(|&a, &b| lat.rep(b).order().cmp(&lat.rep(a).order()).then(a.cmp(&b)));
        let mut slots = Vec::new();
        for &c in &classes {
            slots.extend(std::iter::repeat_n(c, mult[c]));
        }
        let mut fixed_reps = vec![Vec::new(); nc];
        for &d in &classes {
            fixed_reps[d] = (0..nc)
                .map(|c| fixed_orbit_reps(tbl, lat.rep(d), lat.rep(c), &normalizers[c]))
                .collect();
        }
        let mut candidates = vec![Vec::new(); nc];
        let mut complete = true;
        for &c in &classes {
            let basis = lat.fixed(m, lat.classes[c][0]).clone();
            let d = basis.len() as u32;
            let mut seen = HashSet::new();
            let mut list = Vec::new();
            let mut push = |v: Vec<u64>, list: &mut Vec<Vec<u64>>| {
                if !seeds[c].contains(&v) && seen.insert(v.clone()) {
                    list.push(v);
                }
            };
            for b in &basis {
                push(b.clone(), &mut list);
            }
            let combine = |coef: &[u64]| -> Vec<u64> {
                let mut v = vec![0u64; m.dim()];
                for (c, b) in coef.iter().zip(&basis) {
                    if *c != 0 {
                        for (x, &y) in v.iter_mut().zip(b) {
                            *x = ring.add(*x, ring.mul(*c, y));
                        }
                    }
                }
                v
            };
            let p = ring.p();
            if p.checked_pow(d).is_some_and(|n| n <= ENUMERATION_LIMIT) {
                let total = p.pow(d);
                for code in 1..total {
                    let mut coef = Vec::with_capacity(d as usize);
                    let mut x = code;
                    for _ in 0..d {
                        coef.push(x % p);
                        x /= p;
                    }
                    push(combine(&coef), &mut list);
                }
            } else {
                complete = false;
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (c as u64).wrapping_mul(0x9e37_79b9));
                for _ in 0..RANDOM_CANDIDATES {
                    let coef: Vec<u64> = (0..d).map(|_| rng.random_range(0..p)).collect();
                    push(combine(&coef), &mut list);
                }
            }
            candidates[c] = list;
        }
        let transversals = (0..nc).map(|c| tbl.left_transversal(lat.rep(c))).collect();
        SearchSpace { slots, candidates, complete, seeds, fixed_reps, transversals }
    }

    /// Depth-first search with a node budget; `accept` may veto a candidate
    /// or attach data to it.
    pub fn run<T: Clone>(
        &self,
        m: &GModule,
        budget: usize,
        nodes: &mut usize,
        accept: &mut dyn FnMut(usize, &[u64]) -> Option<T>,
    ) -> SearchOutcome<T> {
        let mut chosen = Vec::new();
        let total = FpEchelon::new(m.ring(), m.dim());
        match self.dfs(m, 0, 0, &total, &self.seeds, &mut chosen, budget, nodes, accept) {
            Some(true) => SearchOutcome::Found(chosen),
            Some(false) => SearchOutcome::Exhausted { complete: self.complete },
            None => SearchOutcome::Budget,
        }
    }

    // the new vector's Q-fixed translates must be independent modulo each
    // class's current span
    fn extend(&self, m: &GModule, c: usize, v: &[u64], spans: &[FpEchelon]) -> Option<Vec<FpEchelon>> {
        let mut out = spans.to_vec();
        for (q, reps) in self.fixed_reps[c].iter().enumerate() {
            for &t in reps {
                if !out[q].insert(&m.act(t, v)) {
                    return None;
                }
            }
        }
        Some(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs<T: Clone>(
        &self,
        m: &GModule,
        slot: usize,
        start: usize,
        total: &FpEchelon,
        spans: &[FpEchelon],
        chosen: &mut Vec<Chosen<T>>,
        budget: usize,
        nodes: &mut usize,
        accept: &mut dyn FnMut(usize, &[u64]) -> Option<T>,
    ) -> Option<bool> {
        if slot == self.slots.len() {
            return Some(total.dim() == m.dim());
        }
        let c = self.slots[slot];
        for (idx, v) in self.candidates[c].iter().enumerate().skip(start) {
            *nodes += 1;
            if *nodes > budget {
                return None;
            }
            let Some(next) = self.extend(m, c, v, spans) else { continue };
            let mut t = total.clone();
            if !self.transversals[c].iter().all(|&g| t.insert(&m.act(g, v))) {
                continue;
            }
            let Some(extra) = accept(c, v) else { continue };
            chosen.push(Chosen { class: c, vector: v.clone(), extra });
            let next_start = if self.slots.get(slot + 1) == Some(&c) { idx + 1 } else { 0 };
            match self.dfs(m, slot + 1, next_start, &t, &next, chosen, budget, nodes, accept) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {
                    chosen.pop();
                }
            }
        }
        Some(false)
    }
}

/// Everything the recognizer learned before searching.
pub(crate) struct Prepared {
    pub lattice: Lattice,
    pub multiplicities: Vec<usize>,
    pub traces: Vec<FpEchelon>,
}

/// Runs the invariant checks; `Err(decomposition)` for a definite answer.
pub(crate) fn prepare(
    m: &GModule,
    config: &Config,
) -> Result<std::result::Result<Prepared, PermDecomposition>> {
    let ring = m.ring();
    if ring.k() != 1 {
        return Err(Error::Precondition("mod-p recognition needs a module over F_p".into()));
    }
    let p = ring.p();
    let tbl = m.group();
    if !tbl.is_p_group(p) {
        return Ok(Err(PermDecomposition::verdict(
            Status::Unknown,
            ring,
            format!("group of order {} is not a {p}-group", tbl.order()),
        )));
    }
    let mut lat = match Lattice::new(tbl, config.subgroup_bound) {
        Ok(l) => l,
        Err(e) if e.is_budget_error() => {
            return Ok(Err(PermDecomposition::verdict(Status::Unknown, ring, e.to_string())))
        }
        Err(e) => return Err(e),
    };
    let nc = lat.classes.len();
    let mut brauer = Vec::with_capacity(nc);
    let mut traces = Vec::with_capacity(nc);
    let mut fixed_dims = Vec::with_capacity(nc);
    for c in 0..nc {
        let t = lat.trace_span(m, c, p);
        let f = lat.fixed(m, lat.classes[c][0]).len();
        brauer.push(f - t.dim());
        fixed_dims.push(f);
        traces.push(t);
    }
    let mult = match solve_marks(tbl, &lat, &brauer) {
        Ok(x) => x,
        Err(why) => return Ok(Err(PermDecomposition::verdict(Status::RefutedByMarks, ring, why))),
    };
    for q in 0..nc {
        let expect: usize =
            (0..nc).map(|h| mult[h] * orbits_on_cosets(tbl, lat.rep(h), lat.rep(q))).sum();
        if expect != fixed_dims[q] {
            return Ok(Err(PermDecomposition::verdict(
                Status::RefutedByMarks,
                ring,
                format!(
                    "fixed points of a subgroup of order {} have dimension {}, the marks predict {expect}",
                    lat.rep(q).order(),
                    fixed_dims[q]
                ),
            )));
        }
    }
    Ok(Ok(Prepared { lattice: lat, multiplicities: mult, traces }))
}

pub(crate) fn decomposition_from<T>(
    m: &GModule,
    lat: &Lattice,
    chosen: &[Chosen<T>],
    twist: impl Fn(&T) -> Twist,
    vector: impl Fn(&Chosen<T>) -> Vec<u64>,
    nodes: usize,
) -> Result<PermDecomposition> {
    let slots = chosen
        .iter()
        .map(|c| CertificateSlot {
            subgroup: lat.rep(c.class).clone(),
            vector: vector(c),
            twist: twist(&c.extra),
        })
        .collect();
    let mut d = PermDecomposition::certify(m, slots)?;
    d.search_nodes = nodes;
    Ok(d)
}

/// Three-valued recognition of permutation modules over `F_p`.
pub fn perm_recognize_modp(m: &GModule, config: &Config) -> Result<PermDecomposition> {
    let ring = m.ring();
    let prep = match prepare(m, config)? {
        Ok(p) => p,
        Err(d) => return Ok(d),
    };
    let Prepared { mut lattice, multiplicities, traces } = prep;
    let space = SearchSpace::new(m, &mut lattice, &multiplicities, traces, config.seed);
    let mut nodes = 0;
    match space.run(m, config.backtrack_budget, &mut nodes, &mut |_, _| Some(())) {
        SearchOutcome::Found(chosen) => {
            decomposition_from(m, &lattice, &chosen, |_| Twist::Trivial, |c| c.vector.clone(), nodes)
        }
        SearchOutcome::Exhausted { complete: true } => {
            let mut d = PermDecomposition::verdict(
                Status::RefutedBySearch,
                ring,
                "no candidate generators span a permuted basis",
            );
            d.search_nodes = nodes;
            Ok(d)
        }
        SearchOutcome::Exhausted { complete: false } => {
            let mut d = PermDecomposition::verdict(
                Status::Unknown,
                ring,
                "sampled candidates exhausted without a permuted basis",
            );
            d.search_nodes = nodes;
            Ok(d)
        }
        SearchOutcome::Budget => {
            let mut d = PermDecomposition::verdict(Status::Unknown, ring, "search budget exhausted");
            d.search_nodes = nodes;
            Ok(d)
        }
    }
}
