//! Exact rational vectors and matrices.
//!
//! Everything here is small and dense; the matrices that show up are k×k
//! with k the torus dimension, or stacks of a few of those.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::IntVec;

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p/q` or `p`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(p)?, q))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatVec(Vec<BigRational>);

impl RatVec {
    pub fn new(entries: Vec<BigRational>) -> Self {
        RatVec(entries)
    }

    pub fn zeros(k: usize) -> Self {
        RatVec(vec![BigRational::zero(); k])
    }

    pub fn from_ints(v: &IntVec) -> Self {
        RatVec(v.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(BigRational::is_integer)
    }

    /// The integer vector with the same entries, if every entry is integral.
    pub fn to_int(&self) -> Option<IntVec> {
        if !self.is_integral() {
            return None;
        }
        Some(IntVec::new(self.0.iter().map(|q| q.to_integer()).collect()))
    }

    pub fn scale(&self, c: &BigRational) -> RatVec {
        RatVec(self.0.iter().map(|x| x * c).collect())
    }
}

impl std::ops::Index<usize> for RatVec {
    type Output = BigRational;
    fn index(&self, i: usize) -> &BigRational {
        &self.0[i]
    }
}

impl Add for &RatVec {
    type Output = RatVec;
    fn add(self, rhs: &RatVec) -> RatVec {
        assert_eq!(self.dim(), rhs.dim());
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RatVec {
    type Output = RatVec;
    fn sub(self, rhs: &RatVec) -> RatVec {
        assert_eq!(self.dim(), rhs.dim());
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RatVec {
    type Output = RatVec;
    fn neg(self) -> RatVec {
        RatVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_rational(x))?;
        }
        write!(f, ")")
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.data[i * k + i] = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend(r);
        }
        Ok(RatMat { rows: n_rows, cols, data })
    }

    /// Convenience constructor for small literals; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
        .expect("ragged matrix literal")
    }

    /// The matrix whose rows are the given integer vectors.
    pub fn from_int_rows(rows: &[IntVec], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.dim() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.dim() });
            }
            for (j, x) in r.iter().enumerate() {
                m.data[i * cols + j] = BigRational::from_integer(x.clone());
            }
        }
        Ok(m)
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[RatVec], rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.dim() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: c.dim() });
            }
            for i in 0..rows {
                m.data[i * cols.len() + j] = c[i].clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RatVec {
        RatVec::new((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(BigRational::is_integer)
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &RatMat) -> Result<RatMat> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = BigRational::zero();
                for l in 0..self.cols {
                    acc += self.get(i, l) * rhs.get(l, j);
                }
                out.data[i * rhs.cols + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &RatVec) -> Result<RatVec> {
        if v.dim() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.dim() });
        }
        Ok(RatVec::new(
            (0..self.rows)
                .map(|i| {
                    self.row(i).iter().zip(v.entries()).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
                })
                .collect(),
        ))
    }

    pub fn apply_int(&self, v: &IntVec) -> Result<RatVec> {
        self.apply(&RatVec::from_ints(v))
    }

    pub fn sub(&self, rhs: &RatMat) -> Result<RatMat> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, found: rhs.rows * rhs.cols });
        }
        Ok(RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[RatMat]) -> Result<RatMat> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: b.cols });
            }
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Ok(RatMat { rows, cols, data })
    }

    /// Determinant by fraction-exact Gaussian elimination.
    pub fn det(&self) -> Result<BigRational> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Ok(BigRational::zero());
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let pivot = a.get(c, c).clone();
            det *= &pivot;
            for r in c + 1..n {
                if a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c) / &pivot;
                for j in c..n {
                    let v = a.get(r, j) - &f * a.get(c, j);
                    a.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<RatMat> {
        solve_exact(self, &RatMat::identity(self.rows))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Row-wise least common multiple of denominators; multiplying row `i` by
    /// the `i`-th entry gives an integer row.
    pub(crate) fn row_denominator_lcms(&self) -> Vec<BigInt> {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom())))
            .collect()
    }
}

impl fmt::Display for RatMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", format_rational(self.get(i, j)))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Solves `M·X = B` exactly.
///
/// `M` may have more rows than columns as long as the system is consistent;
/// the solution of the full-rank part is returned and checked against every
/// remaining row. Inconsistency is reported before rank deficiency.
pub fn solve_exact(m: &RatMat, b: &RatMat) -> Result<RatMat> {
    if m.rows != b.rows {
        return Err(Error::DimensionMismatch { expected: m.rows, found: b.rows });
    }
    let (rows, unknowns, rhs_cols) = (m.rows, m.cols, b.cols);
    let width = unknowns + rhs_cols;
    let mut aug = RatMat::zeros(rows, width);
    for i in 0..rows {
        for j in 0..unknowns {
            aug.set(i, j, m.get(i, j).clone());
        }
        for j in 0..rhs_cols {
            aug.set(i, unknowns + j, b.get(i, j).clone());
        }
    }

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..unknowns {
        let Some(p) = (r..rows).find(|&i| !aug.get(i, c).is_zero()) else {
            continue;
        };
        aug.swap_rows(p, r);
        let inv = aug.get(r, c).recip();
        for j in c..width {
            let v = aug.get(r, j) * &inv;
            aug.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || aug.get(i, c).is_zero() {
                continue;
            }
            let f = aug.get(i, c).clone();
            for j in c..width {
                let v = aug.get(i, j) - &f * aug.get(r, j);
                aug.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }

    for i in r..rows {
        if (unknowns..width).any(|j| !aug.get(i, j).is_zero()) {
            return Err(Error::Inconsistent);
        }
    }
    if r < unknowns {
        return Err(Error::Singular);
    }

    let mut x = RatMat::zeros(unknowns, rhs_cols);
    for (i, &c) in pivots.iter().enumerate() {
        for j in 0..rhs_cols {
            x.set(c, j, aug.get(i, unknowns + j).clone());
        }
    }
    Ok(x)
}
