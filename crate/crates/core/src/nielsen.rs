//! Nielsen and Reidemeister numbers of affine n-valued maps.
//!
//! For a map induced by an irreducible morphism with linear part `A`, each of
//! the `n` lifted factors is affine with the same matrix, so
//! `N = n·|det(I − A)|` when every factor is considered; for general
//! morphisms the σ-classes contribute independently.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::affine::{decide_affine_irreducible, AffineRealization, Verdict};
use crate::error::{Error, Result};
use crate::morphism::TorusMorphism;
use crate::rational::{format_rational, RatMat, RatVec};

/// A nonnegative count that may be infinite.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtCount {
    Finite(BigRational),
    Infinite,
}

impl fmt::Display for ExtCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtCount::Finite(q) => write!(f, "{}", format_rational(q)),
            ExtCount::Infinite => write!(f, "∞"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NielsenReport {
    /// det(I − A_i), one entry per factor.
    pub dets: Vec<BigRational>,
    pub nielsen: BigRational,
    pub reidemeister: ExtCount,
    /// Breakdown over σ-classes when computed from a morphism.
    pub per_component: Vec<ComponentNielsen>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentNielsen {
    /// Original indices of the class, in increasing order.
    pub index_map: Vec<usize>,
    pub realization: AffineRealization,
    pub nielsen: BigRational,
    pub reidemeister: ExtCount,
}

impl NielsenReport {
    /// `false` flags data that cannot come from an honest n-valued map.
    pub fn nielsen_is_integral(&self) -> bool {
        self.nielsen.is_integer()
    }
}

impl fmt::Display for NielsenReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={}, R={}", format_rational(&self.nielsen), self.reidemeister)
    }
}

/// Combines per-factor linear parts `A_1, …, A_n`.
pub fn nielsen_affine(matrices: &[RatMat]) -> Result<NielsenReport> {
    let mut dets = Vec::with_capacity(matrices.len());
    for a in matrices {
        let k = a.rows();
        dets.push(RatMat::identity(k).sub(a)?.det()?);
    }
    let nielsen = dets.iter().fold(BigRational::zero(), |acc, d| acc + d.abs());
    let reidemeister = if dets.iter().any(Zero::is_zero) { ExtCount::Infinite } else { ExtCount::Finite(nielsen.clone()) };
    Ok(NielsenReport { dets, nielsen, reidemeister, per_component: Vec::new() })
}

pub fn nielsen_of_realization(r: &AffineRealization) -> Result<NielsenReport> {
    nielsen_affine(&vec![r.matrix().clone(); r.n()])
}

/// Numbers for the map determined by `psi`, which must be affine on every
/// σ-class.
pub fn nielsen_of_morphism(psi: &TorusMorphism) -> Result<NielsenReport> {
    let mut matrices = Vec::with_capacity(psi.n());
    let mut per_component = Vec::new();
    for (c, component) in psi.decompose().into_iter().enumerate() {
        match decide_affine_irreducible(&component.morphism)? {
            Verdict::Affine(r) => {
                matrices.extend(std::iter::repeat_n(r.matrix().clone(), r.n()));
                let own = nielsen_of_realization(&r)?;
                per_component.push(ComponentNielsen {
                    index_map: component.index_map,
                    realization: r,
                    nielsen: own.nielsen,
                    reidemeister: own.reidemeister,
                });
            }
            other => {
                let witness = other.witness().cloned().ok_or_else(|| Error::Internal("no verdict".into()))?;
                return Err(Error::ComponentNotAffine { component: c + 1, witness });
            }
        }
    }
    let mut report = nielsen_affine(&matrices)?;
    report.per_component = per_component;
    Ok(report)
}

/// Fixed points of `t ↦ A t + a` on T^k, counted by brute force over the
/// integer vectors `m` with `(I − A) x = a + m` for some `x ∈ [0,1)^k`.
pub fn count_fixed_points_affine(a: &RatMat, shift: &RatVec) -> Result<BigInt> {
    let k = a.rows();
    if shift.dim() != k {
        return Err(Error::DimensionMismatch { expected: k, found: shift.dim() });
    }
    let b = RatMat::identity(k).sub(a)?;
    if b.det()?.is_zero() {
        return Err(Error::DegenerateLefschetz { factor: 1 });
    }
    let b_inv = b.inverse()?;
    let mut lo = Vec::with_capacity(k);
    let mut hi = Vec::with_capacity(k);
    for l in 0..k {
        let (mut min, mut max) = (BigRational::zero(), BigRational::zero());
        for c in 0..k {
            let e = b.get(l, c);
            if e.is_negative() {
                min += e;
            } else {
                max += e;
            }
        }
        lo.push((min - &shift[l]).ceil().to_integer());
        hi.push((max - &shift[l]).floor().to_integer());
    }

    let one = BigRational::from_integer(1.into());
    let mut count = BigInt::zero();
    let mut m = lo.clone();
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return Ok(count);
    }
    loop {
        let rhs = shift + &RatVec::new(m.iter().cloned().map(BigRational::from_integer).collect());
        let x = b_inv.apply(&rhs)?;
        if x.entries().iter().all(|v| !v.is_negative() && *v < one) {
            count += 1;
        }
        let mut j = k;
        loop {
            if j == 0 {
                return Ok(count);
            }
            j -= 1;
            if m[j] < hi[j] {
                m[j] += 1;
                m[j + 1..].clone_from_slice(&lo[j + 1..]);
                break;
            }
        }
    }
}

/// Points `x` with `x ∈ f(x)`, summed over factors.
pub fn count_fixed_points(r: &AffineRealization) -> Result<BigInt> {
    Ok(count_fixed_points_per_factor(r)?.into_iter().sum())
}

/// Fixed points of each factor `t ↦ A t + ā_i`.
pub fn count_fixed_points_per_factor(r: &AffineRealization) -> Result<Vec<BigInt>> {
    (1..=r.n())
        .map(|i| {
            count_fixed_points_affine(r.matrix(), r.point(i)).map_err(|e| match e {
                Error::DegenerateLefschetz { .. } => Error::DegenerateLefschetz { factor: i },
                other => other,
            })
        })
        .collect()
}
