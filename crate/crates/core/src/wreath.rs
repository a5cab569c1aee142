//! The covering group (Z^k)^n ⋊ S_n.
//!
//! An element `(z̄_1,…,z̄_n; σ)` acts on an n-tuple of points of R^k by
//! `(x_1,…,x_n) ↦ (z̄_1 + x_{σ⁻¹(1)}, …, z̄_n + x_{σ⁻¹(n)})`, and the product is
//!
//! ```text
//! (α; σ)(β; τ) = (α_1 + β_{σ⁻¹(1)}, …, α_n + β_{σ⁻¹(n)}; στ).
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::IntVec;
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathElement {
    k: usize,
    trans: Vec<IntVec>,
    perm: Permutation,
}

impl WreathElement {
    pub fn new(k: usize, trans: Vec<IntVec>, perm: Permutation) -> Result<Self> {
        if trans.len() != perm.len() {
            return Err(Error::DimensionMismatch { expected: perm.len(), found: trans.len() });
        }
        if let Some(bad) = trans.iter().find(|t| t.dim() != k) {
            return Err(Error::DimensionMismatch { expected: k, found: bad.dim() });
        }
        Ok(WreathElement { k, trans, perm })
    }

    pub fn identity(k: usize, n: usize) -> Self {
        WreathElement { k, trans: vec![IntVec::zeros(k); n], perm: Permutation::identity(n) }
    }

    /// A pure permutation `(0̄,…,0̄; σ)`.
    pub fn from_perm(k: usize, perm: Permutation) -> Self {
        WreathElement { k, trans: vec![IntVec::zeros(k); perm.len()], perm }
    }

    /// A pure translation `(z̄_1,…,z̄_n; id)`.
    pub fn from_translations(k: usize, trans: Vec<IntVec>) -> Result<Self> {
        let n = trans.len();
        Self::new(k, trans, Permutation::identity(n))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn translations(&self) -> &[IntVec] {
        &self.trans
    }

    /// The translation at 1-based position `i`.
    pub fn translation(&self, i: usize) -> &IntVec {
        &self.trans[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity() && self.trans.iter().all(IntVec::is_zero)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch { expected: self.k, found: other.k });
        }
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: other.n() });
        }
        Ok(())
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        compose(self, other)
    }

    pub fn inverse(&self) -> Self {
        invert(self)
    }

    /// Action on an n-tuple of points of R^k (used by numeric checks).
    pub fn act(&self, points: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let inv = self.perm.inverse();
        (1..=self.n())
            .map(|i| {
                let src = &points[inv.apply(i) - 1];
                src.iter()
                    .zip(self.translation(i).iter())
                    .map(|(x, z)| x + num_traits::ToPrimitive::to_f64(z).unwrap_or(f64::NAN))
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.trans.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ";{})", self.perm)
    }
}

pub fn compose(a: &WreathElement, b: &WreathElement) -> Result<WreathElement> {
    a.check_compatible(b)?;
    let a_inv = a.perm.inverse();
    let trans = (1..=a.n()).map(|i| a.translation(i) + b.translation(a_inv.apply(i))).collect();
    Ok(WreathElement { k: a.k, trans, perm: a.perm.compose(&b.perm) })
}

/// `(α; σ)⁻¹ = (−α_{σ(1)}, …, −α_{σ(n)}; σ⁻¹)`.
pub fn invert(a: &WreathElement) -> WreathElement {
    let trans = (1..=a.n()).map(|j| -a.translation(a.perm.apply(j))).collect();
    WreathElement { k: a.k, trans, perm: a.perm.inverse() }
}

/// `aᵐ` by binary exponentiation; negative exponents invert first.
pub fn power(a: &WreathElement, m: &BigInt) -> WreathElement {
    let mut base = if m.is_negative() { invert(a) } else { a.clone() };
    let mut e = m.abs();
    let mut acc = WreathElement::identity(a.k, a.n());
    let two = BigInt::from(2);
    while !e.is_zero() {
        if e.is_odd() {
            acc = compose(&acc, &base).expect("same shape");
        }
        e = e.div_floor(&two);
        if !e.is_zero() {
            base = compose(&base, &base).expect("same shape");
        }
    }
    acc
}

/// `d · a · d⁻¹`.
pub fn conjugate(d: &WreathElement, a: &WreathElement) -> Result<WreathElement> {
    compose(&compose(d, a)?, &invert(d))
}
