//! Coset enumeration over the trivial subgroup, HLT strategy with lookahead.
//!
//! Follows the classical formulation (Holt, Eick & O'Brien, Handbook of
//! Computational Group Theory, ch. 5): cosets are processed in order, each is
//! scanned and filled under every relator, then its row is completed. When the
//! table reaches its capacity a lookahead pass scans every live coset without
//! defining new ones, the coincidences it uncovers are processed and the table
//! is compacted.

use crate::error::{Error, Result};
use crate::presentation::Presentation;

use super::table::FiniteGroupTable;

const UNDEF: usize = usize::MAX;

struct Full;

struct CosetTable {
    ncols: usize,
    rows: Vec<usize>,
    parent: Vec<usize>,
    relators: Vec<Vec<usize>>,
    capacity: usize,
    queue: Vec<usize>,
}

impl CosetTable {
    fn new(pres: &Presentation, capacity: usize) -> Self {
        let ncols = 2 * pres.arity();
        let relators = pres
            .relators()
            .iter()
            .map(|r| r.letters().iter().map(|l| l.column()).collect())
            .collect();
        CosetTable {
            ncols,
            rows: vec![UNDEF; ncols],
            parent: vec![0],
            relators,
            capacity,
            queue: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn get(&self, c: usize, col: usize) -> usize {
        self.rows[c * self.ncols + col]
    }

    #[inline]
    fn set(&mut self, c: usize, col: usize, v: usize) {
        self.rows[c * self.ncols + col] = v;
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, col: usize) -> std::result::Result<(), Full> {
        if self.len() >= self.capacity {
            return Err(Full);
        }
        let d = self.len();
        self.parent.push(d);
        self.rows.extend(std::iter::repeat_n(UNDEF, self.ncols));
        self.set(c, col, d);
        self.set(d, col ^ 1, c);
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = c;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for col in 0..self.ncols {
                let d = self.get(g, col);
                if d == UNDEF {
                    continue;
                }
                self.set(d, col ^ 1, UNDEF);
                let mu = self.rep(g);
                let nu = self.rep(d);
                let m = self.get(mu, col);
                if m != UNDEF {
                    self.merge(nu, m);
                } else {
                    let n = self.get(nu, col ^ 1);
                    if n != UNDEF {
                        self.merge(mu, n);
                    } else {
                        self.set(mu, col, nu);
                        self.set(nu, col ^ 1, mu);
                    }
                }
            }
        }
    }

    /// Scans `w` at coset `c`; defines new cosets only when `fill` is set.
    fn scan(&mut self, c: usize, r: usize, fill: bool) -> std::result::Result<(), Full> {
        let len = self.relators[r].len();
        if len == 0 {
            return Ok(());
        }
        let mut f = c;
        let mut i = 0usize;
        let mut b = c;
        let mut j = len as isize - 1;
        loop {
            while (i as isize) <= j {
                let col = self.relators[r][i];
                let next = self.get(f, col);
                if next == UNDEF {
                    break;
                }
                f = next;
                i += 1;
            }
            if (i as isize) > j {
                if f != c {
                    self.coincidence(f, c);
                }
                return Ok(());
            }
            while j >= i as isize {
                let col = self.relators[r][j as usize] ^ 1;
                let next = self.get(b, col);
                if next == UNDEF {
                    break;
                }
                b = next;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                let col = self.relators[r][i];
                self.set(f, col, b);
                self.set(b, col ^ 1, f);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            let col = self.relators[r][i];
            self.define(f, col)?;
        }
    }

    fn lookahead(&mut self) {
        let mut c = 0;
        while c < self.len() {
            for r in 0..self.relators.len() {
                if !self.is_live(c) {
                    break;
                }
                // scanning without filling never allocates
                let _ = self.scan(c, r, false);
            }
            c += 1;
        }
    }

    /// Renumbers live cosets consecutively; returns the old-to-new map.
    fn compact(&mut self) -> Vec<usize> {
        let n = self.len();
        let mut map = vec![UNDEF; n];
        let mut next = 0;
        for c in 0..n {
            if self.is_live(c) {
                map[c] = next;
                next += 1;
            }
        }
        let mut rows = Vec::with_capacity(next * self.ncols);
        for c in 0..n {
            if map[c] == UNDEF {
                continue;
            }
            for col in 0..self.ncols {
                let v = self.get(c, col);
                rows.push(if v == UNDEF { UNDEF } else { map[v] });
            }
        }
        self.rows = rows;
        self.parent = (0..next).collect();
        map
    }

    fn process(&mut self, c: usize) -> std::result::Result<(), Full> {
        for r in 0..self.relators.len() {
            if !self.is_live(c) {
                return Ok(());
            }
            self.scan(c, r, true)?;
        }
        for col in 0..self.ncols {
            if !self.is_live(c) {
                return Ok(());
            }
            if self.get(c, col) == UNDEF {
                self.define(c, col)?;
            }
        }
        Ok(())
    }

    fn run(&mut self) -> Result<()> {
        let mut c = 0;
        while c < self.len() {
            if self.is_live(c)
                && self.process(c).is_err() {
                    self.lookahead();
                    let live = (0..self.len()).filter(|&x| self.is_live(x)).count();
                    if live >= self.capacity {
                        return Err(Error::CosetBudget { max_cosets: self.capacity });
                    }
                    let map = self.compact();
                    // resume at the first live coset not before c
                    c = map[c..].iter().copied().find(|&m| m != UNDEF).unwrap_or(self.len());
                    continue;
                }
            c += 1;
        }
        self.compact();
        Ok(())
    }
}

/// Enumerates `F/R` for the presentation, failing once more than
/// `max_cosets` cosets would be needed.
pub fn todd_coxeter(pres: &Presentation, max_cosets: usize) -> Result<FiniteGroupTable> {
    if max_cosets == 0 {
        return Err(Error::Precondition("max_cosets must be at least 1".into()));
    }
    let mut t = CosetTable::new(pres, max_cosets);
    t.run()?;
    let n = t.len();
    for c in 0..n {
        for col in 0..t.ncols {
            if t.get(c, col) == UNDEF {
                return Err(Error::Invariant(format!("coset table incomplete at ({c}, {col})")));
            }
        }
    }
    let table = FiniteGroupTable::from_regular_action(n, pres.arity(), |c, col| t.get(c, col))?;
    for (i, r) in pres.relators().iter().enumerate() {
        if table.word_image(r)? != 0 {
            return Err(Error::Invariant(format!("relator {i} does not map to the identity")));
        }
    }
    Ok(table)
}
