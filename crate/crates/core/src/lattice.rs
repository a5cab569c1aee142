//! Integer vectors and sublattices of Z^k in Hermite normal form.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::RatMat;

/// A vector in Z^k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVec(Vec<BigInt>);

impl IntVec {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVec(entries)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        IntVec(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zeros(k: usize) -> Self {
        IntVec(vec![BigInt::zero(); k])
    }

    /// The standard basis vector e_j, with `j` zero-based.
    pub fn unit(k: usize, j: usize) -> Self {
        let mut v = Self::zeros(k);
        v.0[j] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigInt> {
        self.0.iter()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &BigInt) -> IntVec {
        IntVec(self.0.iter().map(|x| x * c).collect())
    }

    /// `true` when every entry is divisible by `m` (i.e. the vector lies in mZ^k).
    pub fn divisible_by(&self, m: &BigInt) -> bool {
        self.0.iter().all(|x| x.is_multiple_of(m))
    }

    /// Exact division by `m`; `None` if some entry is not a multiple.
    pub fn div_exact(&self, m: &BigInt) -> Option<IntVec> {
        if m.is_zero() || !self.divisible_by(m) {
            return None;
        }
        Some(IntVec(self.0.iter().map(|x| x / m).collect()))
    }

    fn check_dim(&self, k: usize) -> Result<()> {
        if self.dim() != k {
            return Err(Error::DimensionMismatch { expected: k, found: self.dim() });
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for IntVec {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl Add for &IntVec {
    type Output = IntVec;
    fn add(self, rhs: &IntVec) -> IntVec {
        assert_eq!(self.dim(), rhs.dim(), "adding vectors of different dimension");
        IntVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVec {
    type Output = IntVec;
    fn sub(self, rhs: &IntVec) -> IntVec {
        assert_eq!(self.dim(), rhs.dim(), "subtracting vectors of different dimension");
        IntVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVec {
    type Output = IntVec;
    fn neg(self) -> IntVec {
        IntVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Index of a sublattice in Z^k; infinite when the rank is deficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl LatticeIndex {
    pub fn is_finite(&self) -> bool {
        matches!(self, LatticeIndex::Finite(_))
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(n) => write!(f, "{n}"),
            LatticeIndex::Infinite => write!(f, "inf"),
        }
    }
}

/// A sublattice of Z^k stored by its row-style Hermite normal form.
///
/// Rows are echelonized with strictly increasing pivot columns, pivots are
/// positive and entries above each pivot lie in `[0, pivot)`. The form is
/// canonical, so two bases generate the same lattice iff they are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeBasis {
    k: usize,
    rows: Vec<IntVec>,
}

impl LatticeBasis {
    pub fn zero(k: usize) -> Self {
        LatticeBasis { k, rows: Vec::new() }
    }

    pub fn full(k: usize) -> Self {
        LatticeBasis { k, rows: (0..k).map(|j| IntVec::unit(k, j)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[IntVec] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.k && self.rows.iter().enumerate().all(|(i, r)| r[i].is_one())
    }

    pub fn contains(&self, v: &IntVec) -> Result<bool> {
        lattice_contains(self, v)
    }

    pub fn index(&self) -> LatticeIndex {
        lattice_index(self)
    }
}

impl fmt::Display for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ">")
    }
}

fn pivot_column(row: &[BigInt]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

fn axpy(target: &mut [BigInt], f: &BigInt, source: &[BigInt]) {
    for (t, s) in target.iter_mut().zip(source) {
        *t -= f * s;
    }
}

/// Integer row reduction of `rows` restricted to the column range `0..cols`.
///
/// Only unimodular row operations are used. Returns the rank; rows from the
/// rank onwards are zero on the first `cols` columns. With `reduce_above`
/// the entries above each pivot are brought into `[0, pivot)`.
fn echelonize(rows: &mut [Vec<BigInt>], cols: usize, reduce_above: bool) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        loop {
            let best = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let Some(p) = best else { break };
            rows.swap(p, r);
            let (head, tail) = rows.split_at_mut(r + 1);
            let pivot_row = &head[r];
            let mut cleared = true;
            for row in tail.iter_mut() {
                if row[c].is_zero() {
                    continue;
                }
                let f = row[c].div_floor(&pivot_row[c]);
                axpy(row, &f, pivot_row);
                if !row[c].is_zero() {
                    cleared = false;
                }
            }
            if cleared {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        if reduce_above {
            let (head, tail) = rows.split_at_mut(r);
            let pivot_row = &tail[0];
            for row in head.iter_mut() {
                let f = row[c].div_floor(&pivot_row[c]);
                if !f.is_zero() {
                    axpy(row, &f, pivot_row);
                }
            }
        }
        r += 1;
    }
    r
}

/// Hermite normal form of the lattice spanned by `generators` in Z^k.
pub fn hnf(generators: &[IntVec], k: usize) -> Result<LatticeBasis> {
    for g in generators {
        g.check_dim(k)?;
    }
    let mut rows: Vec<Vec<BigInt>> = generators.iter().map(|g| g.0.clone()).collect();
    let rank = echelonize(&mut rows, k, true);
    rows.truncate(rank);
    Ok(LatticeBasis { k, rows: rows.into_iter().map(IntVec).collect() })
}

/// Membership test by back-substitution against the echelon rows.
pub fn lattice_contains(lattice: &LatticeBasis, v: &IntVec) -> Result<bool> {
    v.check_dim(lattice.k)?;
    let mut rest = v.0.clone();
    for row in &lattice.rows {
        let c = pivot_column(&row.0).expect("HNF rows are nonzero");
        if rest[..c].iter().any(|x| !x.is_zero()) {
            return Ok(false);
        }
        let (q, r) = rest[c].div_rem(&row[c]);
        if !r.is_zero() {
            return Ok(false);
        }
        axpy(&mut rest, &q, &row.0);
    }
    Ok(rest.iter().all(Zero::is_zero))
}

pub fn lattice_index(lattice: &LatticeBasis) -> LatticeIndex {
    if lattice.rows.len() < lattice.k {
        return LatticeIndex::Infinite;
    }
    let product = lattice
        .rows
        .iter()
        .map(|r| r[pivot_column(&r.0).expect("HNF rows are nonzero")].clone())
        .product();
    LatticeIndex::Finite(product)
}

/// The lattice `{z ∈ Z^k | M z = 0}` for a rational `M` with k columns.
///
/// Computed by echelonizing `[Mᵀ | I]` with unimodular row operations: rows
/// that vanish on the `Mᵀ` block carry a basis of the (saturated) kernel in
/// their identity block.
pub fn integer_kernel(m: &RatMat) -> LatticeBasis {
    let (eqs, k) = (m.rows(), m.cols());
    let scales = m.row_denominator_lcms();
    let mut rows: Vec<Vec<BigInt>> = (0..k)
        .map(|j| {
            let mut row = Vec::with_capacity(eqs + k);
            for (i, s) in scales.iter().enumerate() {
                let x = m.get(i, j) * num_rational::BigRational::from_integer(s.clone());
                row.push(x.to_integer());
            }
            row.extend((0..k).map(|l| if l == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let rank = echelonize(&mut rows, eqs, false);
    let kernel: Vec<IntVec> = rows[rank..].iter().map(|r| IntVec(r[eqs..].to_vec())).collect();
    hnf(&kernel, k).expect("kernel vectors have dimension k")
}
