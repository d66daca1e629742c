use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::enumeration::FiniteGroupTable;
use crate::error::{Error, Result};

/// Coefficient ring of a group ring element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    ModP(u64),
}

/// An element of `ZG` or `F_pG`, dense over the canonical element order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement<'g> {
    group: &'g FiniteGroupTable,
    ring: Coefficients,
    coeffs: Vec<BigInt>,
}

impl<'g> GroupRingElement<'g> {
    pub fn zero(group: &'g FiniteGroupTable, ring: Coefficients) -> Self {
        GroupRingElement { group, ring, coeffs: vec![BigInt::zero(); group.order()] }
    }

    pub fn one(group: &'g FiniteGroupTable, ring: Coefficients) -> Self {
        Self::basis(group, ring, 0)
    }

    pub fn basis(group: &'g FiniteGroupTable, ring: Coefficients, g: usize) -> Self {
        let mut x = Self::zero(group, ring);
        x.coeffs[g] = BigInt::one();
        x
    }

    /// `g - 1`.
    pub fn delta(group: &'g FiniteGroupTable, ring: Coefficients, g: usize) -> Self {
        Self::basis(group, ring, g).sub(&Self::one(group, ring)).unwrap()
    }

    pub fn from_coeffs(
        group: &'g FiniteGroupTable,
        ring: Coefficients,
        coeffs: Vec<BigInt>,
    ) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::Precondition(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        let mut x = GroupRingElement { group, ring, coeffs };
        x.normalize();
        Ok(x)
    }

    pub fn group(&self) -> &'g FiniteGroupTable {
        self.group
    }

    pub fn ring(&self) -> Coefficients {
        self.ring
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> &BigInt {
        &self.coeffs[g]
    }

    fn normalize(&mut self) {
        if let Coefficients::ModP(p) = self.ring {
            let p = BigInt::from(p);
            for c in &mut self.coeffs {
                *c = c.mod_floor(&p);
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if (std::ptr::eq(self.group, other.group) || self.group == other.group)
            && self.ring == other.ring {
                return Ok(());
            }
        Err(Error::GroupMismatch)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Self::from_coeffs(self.group, self.ring, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Self::from_coeffs(self.group, self.ring, coeffs)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * k).collect();
        Self::from_coeffs(self.group, self.ring, coeffs).unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Sum of the coefficients (reduced mod `p` over `F_p`).
    pub fn augmentation(&self) -> BigInt {
        let s: BigInt = self.coeffs.iter().sum();
        match self.ring {
            Coefficients::Integers => s,
            Coefficients::ModP(p) => s.mod_floor(&BigInt::from(p)),
        }
    }
}

/// Convolution product `x * y` through the multiplication table.
pub fn gr_multiply<'g>(
    x: &GroupRingElement<'g>,
    y: &GroupRingElement<'g>,
) -> Result<GroupRingElement<'g>> {
    x.check(y)?;
    let g = x.group;
    let mut out = vec![BigInt::zero(); g.order()];
    for (a, ca) in x.coeffs.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        let row = g.mult_row(a);
        for (b, cb) in y.coeffs.iter().enumerate() {
            if !cb.is_zero() {
                out[row[b]] += ca * cb;
            }
        }
    }
    GroupRingElement::from_coeffs(g, x.ring, out)
}

impl fmt::Display for GroupRingElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(g, c)| format!("{c}*g{g}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteGroupTable {
        FiniteGroupTable::from_multiplication(n, |a, b| (a + b) % n, &[1]).unwrap()
    }

    #[test]
    fn units_and_augmentation() {
        let g = cyclic(4);
        let z = Coefficients::Integers;
        let a = g.gen_images()[0];
        let x = GroupRingElement::basis(&g, z, a).scale(&BigInt::from(3));
        let one = GroupRingElement::one(&g, z);
        assert_eq!(gr_multiply(&x, &one).unwrap(), x);
        assert_eq!(GroupRingElement::delta(&g, z, a).augmentation(), BigInt::zero());
        let h = g.mul(a, a);
        let y = x.add(&GroupRingElement::basis(&g, z, h).scale(&BigInt::from(2))).unwrap();
        assert_eq!(y.augmentation(), BigInt::from(5));
    }

    #[test]
    fn fourth_power_of_delta_in_c4() {
        let g = cyclic(4);
        let z = Coefficients::Integers;
        let a = g.gen_images()[0];
        let d = GroupRingElement::delta(&g, z, a);
        let mut p = GroupRingElement::one(&g, z);
        for _ in 0..4 {
            p = gr_multiply(&p, &d).unwrap();
        }
        // (a-1)^4 = a^4 - 4a^3 + 6a^2 - 4a + 1 = 2 - 4a + 6a^2 - 4a^3
        let expect: Vec<i64> = {
            let mut v = vec![0i64; 4];
            for (k, c) in [1i64, -4, 6, -4, 1].iter().enumerate() {
                v[g.power(a, k)] += c;
            }
            v
        };
        assert_eq!(p.coeffs(), &expect.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>()[..]);
        assert!(p.augmentation().is_zero());
        let f2 = Coefficients::ModP(2);
        let d2 = GroupRingElement::delta(&g, f2, a);
        let mut q = GroupRingElement::one(&g, f2);
        for _ in 0..4 {
            q = gr_multiply(&q, &d2).unwrap();
        }
        assert!(q.is_zero());
    }

    #[test]
    fn commuting_deltas_and_mismatch() {
        let g = cyclic(6);
        let z = Coefficients::Integers;
        let x = GroupRingElement::delta(&g, z, 2);
        let y = GroupRingElement::delta(&g, z, 3);
        assert_eq!(gr_multiply(&x, &y).unwrap(), gr_multiply(&y, &x).unwrap());
        let w = GroupRingElement::delta(&g, Coefficients::ModP(2), 3);
        assert_eq!(gr_multiply(&x, &w), Err(Error::GroupMismatch));
    }
}
