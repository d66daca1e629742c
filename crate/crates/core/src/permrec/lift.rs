use std::collections::HashMap;

use crate::config::Config;
use crate::enumeration::Subgroup;
use crate::error::{Error, Result};
use crate::intlinalg::{column_smith, mat_inverse, mat_vec, ColumnSmith, ModMatrix, ModRing};

use super::module::GModule;
use super::recognize::{
    decomposition_from, prepare, CertificateSlot, PermDecomposition, Prepared, SearchOutcome,
    SearchSpace, Status, Twist,
};

/// Solutions of `ρ(h) v = ξ(h) v` over `Z/p^k`, for one subgroup and twist.
struct TwistedFixed {
    twist: Twist,
    smith: ColumnSmith,
    q_inv_mod_p: ModMatrix,
}

impl TwistedFixed {
    fn new(m: &GModule, h: &Subgroup, twist: Twist) -> Result<Self> {
        let ring = m.ring();
        let n = m.dim();
        let mut rows = Vec::new();
        for &g in h.generators() {
            let s = twist.sign(g);
            for (i, row) in m.rho(g).iter().enumerate() {
                let mut row = row.clone();
                row[i] = if s > 0 { ring.sub(row[i], 1) } else { ring.add(row[i], 1) };
                rows.push(row);
            }
        }
        let smith = column_smith(&ring, &rows, n);
        let field = ModRing::field(ring.p())?;
        let q1: ModMatrix = smith.q.iter().map(|r| field.reduce_vec(r)).collect();
        let q_inv_mod_p = mat_inverse(&field, &q1)
            .ok_or_else(|| Error::Invariant("column reduction lost invertibility".into()))?;
        Ok(TwistedFixed { twist, smith, q_inv_mod_p })
    }

    /// A twisted-fixed vector over `Z/p^k` reducing to `v`, or the first
    /// precision at which no such vector exists.
    fn lift(&self, ring: ModRing, v: &[u64]) -> std::result::Result<Vec<u64>, u32> {
        let field = ModRing::field(ring.p()).expect("prime already checked");
        let y = mat_vec(&field, &self.q_inv_mod_p, &field.reduce_vec(v));
        let k = ring.k();
        let fail = y
            .iter()
            .zip(&self.smith.exponents)
            .filter(|(&yi, &e)| yi != 0 && e < k)
            .map(|(_, &e)| e + 1)
            .min();
        if let Some(j) = fail {
            return Err(j);
        }
        let n = v.len();
        let mut out = vec![0u64; n];
        for (i, &yi) in y.iter().enumerate() {
            if yi == 0 {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                *o = ring.add(*o, ring.mul(yi, self.smith.q[r][i]));
            }
        }
        Ok(out)
    }
}

/// Twists admitted on `H`: trivial, and for `p = 2` the sign characters,
/// one per subgroup of index 2.
fn twists(h: &Subgroup, subs: &[Subgroup], p: u64) -> Vec<Twist> {
    let mut out = vec![Twist::Trivial];
    if p == 2 {
        for k in subs {
            if k.order() * 2 == h.order() && k.is_subgroup_of(h) {
                out.push(Twist::Sign { kernel: k.members().to_vec() });
            }
        }
    }
    out
}

struct Lifter<'a> {
    m: &'a GModule,
    subs: Vec<Subgroup>,
    cache: HashMap<(Vec<usize>, Twist), TwistedFixed>,
    // highest precision reached by a failing attempt
    best_failure: Option<u32>,
}

impl<'a> Lifter<'a> {
    fn new(m: &'a GModule, subs: Vec<Subgroup>) -> Self {
        Lifter { m, subs, cache: HashMap::new(), best_failure: None }
    }

    fn lift(&mut self, h: &Subgroup, v: &[u64]) -> Result<Option<(Twist, Vec<u64>)>> {
        let ring = self.m.ring();
        let mut worst = 0;
        for twist in twists(h, &self.subs, ring.p()) {
            let key = (h.members().to_vec(), twist.clone());
            if !self.cache.contains_key(&key) {
                let t = TwistedFixed::new(self.m, h, twist)?;
                self.cache.insert(key.clone(), t);
            }
            let tf = &self.cache[&key];
            match tf.lift(ring, v) {
                Ok(w) => return Ok(Some((tf.twist.clone(), w))),
                Err(j) => worst = worst.max(j),
            }
        }
        self.best_failure = Some(self.best_failure.map_or(worst, |b| b.max(worst)));
        Ok(None)
    }
}

/// Lifts a mod-`p` permuted basis of `M / p` to a basis of `M` over `Z/p^k`
/// permuted up to the admitted twists.
pub fn gen_perm_lift(
    m: &GModule,
    d: &PermDecomposition,
    config: &Config,
) -> Result<PermDecomposition> {
    let ring = m.ring();
    if d.status != Status::Certified {
        return Err(Error::Precondition("lifting needs a certified mod-p decomposition".into()));
    }
    if ring.k() > config.precision {
        return Err(Error::PrecisionBound { p: ring.p(), k: ring.k() });
    }
    let cert = d
        .certificate
        .as_ref()
        .ok_or_else(|| Error::Precondition("certified decomposition without a certificate".into()))?;
    let m1 = m.reduce(1)?;
    let prep = match prepare(&m1, config)? {
        Ok(p) => p,
        Err(_) => {
            return Err(Error::Precondition(
                "the module mod p does not match the certified decomposition".into(),
            ))
        }
    };
    let mut lifter = Lifter::new(m, prep.lattice.subs.clone());

    // the given certificate first
    let mut slots = Vec::with_capacity(cert.slots.len());
    for s in &cert.slots {
        match lifter.lift(&s.subgroup, &s.vector)? {
            Some((twist, vector)) => {
                slots.push(CertificateSlot { subgroup: s.subgroup.clone(), vector, twist })
            }
            None => break,
        }
    }
    if slots.len() == cert.slots.len() {
        let mut out = PermDecomposition::certify(m, slots)?;
        if d.subgroup_multiset() != out.subgroup_multiset() {
            return Err(Error::Invariant("lift changed the subgroup multiset".into()));
        }
        out.reason = format!("{} to precision {}", out.reason, ring.k());
        return Ok(out);
    }

    // search again, accepting only generators that lift
    let Prepared { mut lattice, multiplicities, traces } = prep;
    let space = SearchSpace::new(&m1, &mut lattice, &multiplicities, traces, config.seed);
    let mut nodes = 0;
    let reps: Vec<Subgroup> = (0..lattice.classes.len()).map(|c| lattice.rep(c).clone()).collect();
    let mut failure = None;
    let outcome = space.run(&m1, config.backtrack_budget, &mut nodes, &mut |c, v| {
        match lifter.lift(&reps[c], v) {
            Ok(x) => x,
            Err(e) => {
                failure.get_or_insert(e);
                None
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    match outcome {
        SearchOutcome::Found(chosen) => {
            let mut out = decomposition_from(
                m,
                &lattice,
                &chosen,
                |(t, _)| t.clone(),
                |c| c.extra.1.clone(),
                nodes,
            )?;
            out.reason = format!("{} to precision {} after a second search", out.reason, ring.k());
            Ok(out)
        }
        other => {
            let why = match other {
                SearchOutcome::Budget => "search budget exhausted while lifting",
                _ => "no mod-p generators lift",
            };
            Ok(PermDecomposition {
                status: Status::Unknown,
                prime: ring.p(),
                precision: ring.k(),
                summands: Vec::new(),
                certificate: None,
                reason: why.into(),
                failing_precision: lifter.best_failure,
                search_nodes: nodes,
            })
        }
    }
}
