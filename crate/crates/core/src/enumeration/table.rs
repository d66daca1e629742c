use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::{Letter, Word};

/// An enumerated finite group: full multiplication table plus the images of
/// the presentation generators.
///
/// Elements are indexed in breadth-first order from the identity, scanning
/// columns `x_0, x_0^-1, x_1, x_1^-1, ...`; element 0 is the identity and
/// `element_words[g]` is the shortlex-least word representing `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroupTable {
    order: usize,
    mult: Vec<usize>,
    inv: Vec<usize>,
    gen_images: Vec<usize>,
    element_words: Vec<Word>,
}

/// A subgroup of a [`FiniteGroupTable`], given by its sorted member indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    members: Vec<usize>,
    generators: Vec<usize>,
}

impl Subgroup {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&g| other.contains(g))
    }
}

impl FiniteGroupTable {
    /// Builds the canonical table of the group generated by `arity` elements
    /// under a right action `act(element, column)` on `n` points, where the
    /// action is regular (points are group elements, point 0 the identity).
    pub(crate) fn from_regular_action(
        n: usize,
        arity: usize,
        act: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let ncols = 2 * arity;
        // breadth-first renumbering
        let mut new_index = vec![usize::MAX; n];
        let mut old_of = Vec::with_capacity(n);
        let mut parent = Vec::with_capacity(n);
        let mut last_col = Vec::with_capacity(n);
        let mut words = Vec::with_capacity(n);
        new_index[0] = 0;
        old_of.push(0);
        parent.push(usize::MAX);
        last_col.push(usize::MAX);
        words.push(Word::empty());
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for col in 0..ncols {
                let t = act(old_of[e], col);
                if new_index[t] == usize::MAX {
                    let id = old_of.len();
                    new_index[t] = id;
                    old_of.push(t);
                    parent.push(e);
                    last_col.push(col);
                    let mut w = words[e].letters().to_vec();
                    w.push(Letter::from_column(col));
                    words.push(w.into_iter().collect());
                    queue.push_back(id);
                }
            }
        }
        if old_of.len() != n {
            return Err(Error::Invariant(format!(
                "generators reach {} of {} elements",
                old_of.len(),
                n
            )));
        }
        let right = |e: usize, col: usize| new_index[act(old_of[e], col)];
        let mut mult = vec![0usize; n * n];
        for i in 0..n {
            mult[i * n] = i;
        }
        for j in 1..n {
            let (pj, cj) = (parent[j], last_col[j]);
            for i in 0..n {
                mult[i * n + j] = right(mult[i * n + pj], cj);
            }
        }
        let mut inv = vec![usize::MAX; n];
        for i in 0..n {
            for j in 0..n {
                if mult[i * n + j] == 0 {
                    inv[i] = j;
                    break;
                }
            }
            if inv[i] == usize::MAX {
                return Err(Error::Invariant(format!("element {i} has no inverse")));
            }
        }
        let gen_images = (0..arity).map(|g| right(0, 2 * g)).collect();
        Ok(FiniteGroupTable { order: n, mult, inv, gen_images, element_words: words })
    }

    /// Canonical table of the group generated by `gen_images` inside an
    /// abstract group of order `n` with multiplication `mul` and identity 0.
    pub fn from_multiplication(
        n: usize,
        mul: impl Fn(usize, usize) -> usize,
        gen_images: &[usize],
    ) -> Result<Self> {
        let inverses: Vec<usize> = gen_images
            .iter()
            .map(|&g| (0..n).find(|&h| mul(g, h) == 0).ok_or_else(|| Error::Invariant("no inverse".into())))
            .collect::<Result<_>>()?;
        Self::from_regular_action(n, gen_images.len(), |e, col| {
            let g = if col % 2 == 0 { gen_images[col / 2] } else { inverses[col / 2] };
            mul(e, g)
        })
    }

    pub fn trivial() -> Self {
        FiniteGroupTable {
            order: 1,
            mult: vec![0],
            inv: vec![0],
            gen_images: vec![],
            element_words: vec![Word::empty()],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Number of presentation generators.
    pub fn arity(&self) -> usize {
        self.gen_images.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn gen_images(&self) -> &[usize] {
        &self.gen_images
    }

    pub fn element_words(&self) -> &[Word] {
        &self.element_words
    }

    pub fn mult_row(&self, a: usize) -> &[usize] {
        &self.mult[a * self.order..(a + 1) * self.order]
    }

    pub fn letter_image(&self, l: Letter) -> usize {
        let g = self.gen_images[l.generator];
        if l.inverse {
            self.inv[g]
        } else {
            g
        }
    }

    /// Image of a free-group word in the group.
    pub fn word_image(&self, w: &Word) -> Result<usize> {
        let mut e = 0;
        for &l in w.letters() {
            if l.generator >= self.arity() {
                return Err(Error::GeneratorOutOfRange { index: l.generator, arity: self.arity() });
            }
            e = self.mul(e, self.letter_image(l));
        }
        Ok(e)
    }

    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        // g h g^-1
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        // a^-1 b^-1 a b
        let ai = self.inv(a);
        let bi = self.inv(b);
        self.mul(self.mul(ai, bi), self.mul(a, b))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn power(&self, g: usize, mut k: usize) -> usize {
        let mut acc = 0;
        let mut base = g;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// True when the order is a power of `p` (including `p^0`).
    pub fn is_p_group(&self, p: u64) -> bool {
        let mut n = self.order as u64;
        while n.is_multiple_of(p) {
            n /= p;
        }
        n == 1
    }

    pub fn require_p_group(&self, p: u64) -> Result<()> {
        if self.is_p_group(p) {
            Ok(())
        } else {
            Err(Error::NotPGroup { order: self.order, p })
        }
    }

    /// Checks the group axioms: exhaustively for order at most `exhaustive`,
    /// otherwise on a deterministic sample of triples.
    pub fn verify_group_law(&self, exhaustive: usize) -> Result<()> {
        let n = self.order;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(Error::Invariant(format!("0 is not an identity for {a}")));
            }
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return Err(Error::Invariant(format!("bad inverse of {a}")));
            }
        }
        let check = |a: usize, b: usize, c: usize| {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                Err(Error::Invariant(format!("associativity fails at ({a}, {b}, {c})")))
            } else {
                Ok(())
            }
        };
        if n <= exhaustive {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            // xorshift sample, fixed seed
            let mut s = 0x9E37_79B9_7F4A_7C15u64;
            let mut next = || {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                (s % n as u64) as usize
            };
            for _ in 0..200_000 {
                let (a, b, c) = (next(), next(), next());
                check(a, b, c)?;
            }
        }
        Ok(())
    }

    /// Smallest subgroup containing `gens`.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Subgroup {
        let mut gens: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        gens.sort_unstable();
        gens.dedup();
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut members = vec![0];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &g in &gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        Subgroup { members, generators: gens }
    }

    /// Builds a [`Subgroup`] from an explicit member set, checking closure.
    pub fn subgroup_from_members(&self, members: &[usize]) -> Result<Subgroup> {
        let mut m = members.to_vec();
        m.sort_unstable();
        m.dedup();
        let h = self.subgroup_generated(&m);
        if h.members != m {
            return Err(Error::Invariant("member set is not closed under multiplication".into()));
        }
        // a small generating set: greedily add elements not yet generated
        let mut gens: Vec<usize> = Vec::new();
        let mut cur = self.subgroup_generated(&[]);
        for &g in &m {
            if !cur.contains(g) {
                gens.push(g);
                cur = self.subgroup_generated(&gens);
            }
        }
        Ok(Subgroup { members: m, generators: gens })
    }

    pub fn whole(&self) -> Subgroup {
        let members: Vec<usize> = (0..self.order).collect();
        let mut s = self.subgroup_generated(&self.gen_images);
        s.members = members;
        s
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.subgroup_generated(&[])
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.gen_images.iter().all(|&g| h.members.iter().all(|&x| h.contains(self.conjugate(g, x))))
    }

    pub fn conjugate_subgroup(&self, g: usize, h: &Subgroup) -> Subgroup {
        let mut members: Vec<usize> = h.members.iter().map(|&x| self.conjugate(g, x)).collect();
        members.sort_unstable();
        let generators = h.generators.iter().map(|&x| self.conjugate(g, x)).collect();
        Subgroup { members, generators }
    }

    /// Subgroup generated by all commutators `[a, b]`, `a ∈ A`, `b ∈ B`.
    pub fn commutator_subgroup(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut gens = Vec::new();
        for &x in &a.members {
            for &y in &b.members {
                gens.push(self.commutator(x, y));
            }
        }
        self.subgroup_generated(&gens)
    }

    /// Subgroup generated by two subgroups.
    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let gens: Vec<usize> = a.generators.iter().chain(b.generators.iter()).copied().collect();
        self.subgroup_generated(&gens)
    }

    /// Left coset id of each element relative to `h`: the least member of `gH`.
    pub fn left_coset_ids(&self, h: &Subgroup) -> Vec<usize> {
        (0..self.order)
            .map(|g| h.members.iter().map(|&x| self.mul(g, x)).min().unwrap())
            .collect()
    }

    /// Canonical left-coset representatives of `h`, sorted.
    pub fn left_transversal(&self, h: &Subgroup) -> Vec<usize> {
        let mut reps = self.left_coset_ids(h);
        reps.sort_unstable();
        reps.dedup();
        reps
    }

    /// Quotient by a normal subgroup, with the projection `G -> G/N`.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroupTable, Vec<usize>)> {
        if !self.is_normal(n) {
            return Err(Error::Precondition("quotient by a subgroup that is not normal".into()));
        }
        let ids = self.left_coset_ids(n);
        let reps = self.left_transversal(n);
        let mut pos = vec![usize::MAX; self.order];
        for (i, &r) in reps.iter().enumerate() {
            pos[r] = i;
        }
        let coset = |g: usize| pos[ids[g]];
        let q = Self::from_regular_action(reps.len(), self.arity(), |c, col| {
            let g = self.letter_image(Letter::from_column(col));
            coset(self.mul(reps[c], g))
        })?;
        // map G -> canonical quotient indices via the generator images
        let mut proj = vec![usize::MAX; self.order];
        for (g, w) in self.element_words.iter().enumerate() {
            proj[g] = q.word_image(w)?;
        }
        for g in 0..self.order {
            if proj[g] != proj[ids[g]] || (coset(g) == coset(0)) != (proj[g] == 0) {
                return Err(Error::Invariant("inconsistent quotient projection".into()));
            }
        }
        Ok((q, proj))
    }
}
