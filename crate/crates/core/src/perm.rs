//! Permutations of {1,…,n}.
//!
//! Indices are 1-based throughout the public API so that formulas such as
//! `σ⁻¹(i)` read the same in code as in the usual notation. Composition follows the
//! functional convention: `(στ)(i) = σ(τ(i))`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    /// `img[i - 1] = σ(i)`.
    img: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { img: (1..=n).collect() }
    }

    /// Builds a permutation from its image array `[σ(1), …, σ(n)]`.
    pub fn from_images(img: Vec<usize>) -> Result<Self> {
        let n = img.len();
        let mut seen = vec![false; n];
        for &x in &img {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::InvalidPermutation(format!("{img:?} is not a bijection of 1..={n}")));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation { img })
    }

    /// Builds a permutation of {1,…,n} from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut img: Vec<usize> = (1..=n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for &x in cycle {
                if x == 0 || x > n {
                    return Err(Error::InvalidPermutation(format!("{x} is outside 1..={n}")));
                }
                if used[x - 1] {
                    return Err(Error::InvalidPermutation(format!("{x} appears in more than one place")));
                }
                used[x - 1] = true;
            }
            for (pos, &x) in cycle.iter().enumerate() {
                img[x - 1] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Ok(Permutation { img })
    }

    /// Parses cycle notation such as `"(1 2)(3 4)"`, `"(1,2,3)"` or `"id"`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() || t == "id" || t == "()" {
            return Ok(Self::identity(n));
        }
        let mut cycles = Vec::new();
        let mut rest = t;
        while !rest.is_empty() {
            let Some(after_open) = rest.strip_prefix('(') else {
                return Err(Error::Parse(format!("expected '(' in permutation {text:?}")));
            };
            let Some(close) = after_open.find(')') else {
                return Err(Error::Parse(format!("unclosed cycle in permutation {text:?}")));
            };
            let body = &after_open[..close];
            let cycle = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad entry {s:?} in permutation {text:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = after_open[close + 1..].trim_start();
        }
        Self::from_cycles(n, &cycles)
    }

    pub fn len(&self) -> usize {
        self.img.len()
    }

    pub fn is_empty(&self) -> bool {
        self.img.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.img
    }

    /// `σ(i)`; panics when `i` is outside 1..=n.
    pub fn apply(&self, i: usize) -> usize {
        self.img[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(p, &x)| x == p + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (p, &x) in self.img.iter().enumerate() {
            inv[x - 1] = p + 1;
        }
        Permutation { img: inv }
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "composing permutations of different degree");
        Permutation { img: other.img.iter().map(|&x| self.img[x - 1]).collect() }
    }

    /// `σᵐ` for any integer `m`; the exponent is reduced modulo the order.
    pub fn pow(&self, m: &BigInt) -> Self {
        let order = BigInt::from(self.order());
        let e = m.mod_floor(&order).to_usize().expect("reduced exponent fits in usize");
        let mut img = vec![0; self.len()];
        for cycle in self.cycles() {
            let len = cycle.len();
            for (pos, &x) in cycle.iter().enumerate() {
                img[x - 1] = cycle[(pos + e) % len];
            }
        }
        Permutation { img }
    }

    pub fn pow_i64(&self, m: i64) -> Self {
        self.pow(&BigInt::from(m))
    }

    /// Disjoint cycles, each listed forward (`x, σ(x), σ²(x), …`) from its
    /// smallest element, ordered by smallest element. Fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start - 1] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start - 1] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x - 1] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Order of the permutation: lcm of its cycle lengths.
    pub fn order(&self) -> usize {
        self.cycles().iter().fold(1, |acc, c| acc.lcm(&c.len()))
    }

    /// The permutation restricted to a σ-invariant subset, relabelled so that
    /// `subset[p]` becomes `p + 1`.
    pub fn restrict(&self, subset: &[usize]) -> Result<Self> {
        let mut label = vec![0; self.len() + 1];
        for (p, &x) in subset.iter().enumerate() {
            label[x] = p + 1;
        }
        let img = subset
            .iter()
            .map(|&x| match label[self.apply(x)] {
                0 => Err(Error::InvalidPermutation(format!("subset {subset:?} is not invariant"))),
                l => Ok(l),
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(img)
    }
}

/// The cycle of `sigma` through `i`, listed as `i, σ⁻¹(i), σ⁻²(i), …`, and
/// its length.
pub fn cycle_of(sigma: &Permutation, i: usize) -> Result<(Vec<usize>, usize)> {
    if i == 0 || i > sigma.len() {
        return Err(Error::IndexOutOfRange { index: i, n: sigma.len() });
    }
    let inv = sigma.inverse();
    let mut cycle = vec![i];
    let mut x = inv.apply(i);
    while x != i {
        cycle.push(x);
        x = inv.apply(x);
    }
    let len = cycle.len();
    Ok((cycle, len))
}

/// Canonical cycle notation: nontrivial cycles from their smallest element,
/// space separated, or `id`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nontrivial: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if nontrivial.is_empty() {
            return write!(f, "id");
        }
        for c in nontrivial {
            let body: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}
