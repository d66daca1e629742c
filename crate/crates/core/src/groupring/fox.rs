//! Free differential calculus pushed into `ZG`.

use num_bigint::BigInt;

use crate::enumeration::FiniteGroupTable;
use crate::error::{Error, Result};
use crate::intlinalg::IntMatrix;
use crate::presentation::{Presentation, Word};

/// Blocks `π(∂w/∂x_i)` for every generator, concatenated: entry
/// `i * |G| + g` is the coefficient of `g` in the `i`-th derivative.
pub fn fox_row(tbl: &FiniteGroupTable, w: &Word) -> Result<Vec<i64>> {
    let n = tbl.order();
    let mut row = vec![0i64; tbl.arity() * n];
    let mut prefix = 0usize;
    for &l in w.letters() {
        if l.generator >= tbl.arity() {
            return Err(Error::GeneratorOutOfRange { index: l.generator, arity: tbl.arity() });
        }
        let next = tbl.mul(prefix, tbl.letter_image(l));
        if l.inverse {
            // ∂(u x^-1) = ∂u - u x^-1
            row[l.generator * n + next] -= 1;
        } else {
            row[l.generator * n + prefix] += 1;
        }
        prefix = next;
    }
    Ok(row)
}

/// `Σ_i a_i (π(x_i) - 1)` for a row of blocks.
pub fn fox_boundary(tbl: &FiniteGroupTable, row: &[i64]) -> Vec<i64> {
    let n = tbl.order();
    let mut out = vec![0i64; n];
    for (i, &x) in tbl.gen_images().iter().enumerate() {
        for g in 0..n {
            let a = row[i * n + g];
            if a != 0 {
                out[tbl.mul(g, x)] += a;
                out[g] -= a;
            }
        }
    }
    out
}

/// One row per relator, checked against the fundamental identity.
pub fn fox_rows(pres: &Presentation, tbl: &FiniteGroupTable) -> Result<IntMatrix> {
    if pres.arity() != tbl.arity() {
        return Err(Error::TableMismatch(format!(
            "presentation has {} generators, table {}",
            pres.arity(),
            tbl.arity()
        )));
    }
    let mut rows = Vec::with_capacity(pres.relators().len());
    for (j, r) in pres.relators().iter().enumerate() {
        if tbl.word_image(r)? != 0 {
            return Err(Error::TableMismatch(format!("relator {j} is not trivial in the table")));
        }
        let row = fox_row(tbl, r)?;
        if fox_boundary(tbl, &row).iter().any(|&x| x != 0) {
            return Err(Error::Invariant(format!("fundamental identity fails for relator {j}")));
        }
        rows.push(row.into_iter().map(BigInt::from).collect());
    }
    Ok(IntMatrix::from_bigint_rows(tbl.arity() * tbl.order(), rows))
}
