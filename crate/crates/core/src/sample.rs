//! Random morphisms and realizations for property tests and benchmarks.
//!
//! Irreducible morphisms are drawn through their affine lift data: pick a
//! transitive abelian σ, a matrix `A` with `A·S ⊆ Z^k` for the stabilizer
//! `S`, and points `ā_i ≡ A z̄_i (mod Z^k)` along a transversal. Every
//! irreducible morphism with that σ arises this way, whether or not it is
//! affine.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::affine::{check_realization, induced_morphism, AffineRealization};
use crate::error::{Error, Result};
use crate::lattice::IntVec;
use crate::morphism::{Component, TorusMorphism};
use crate::perm::Permutation;
use crate::rational::{RatMat, RatVec};
use crate::wreath::WreathElement;

/// Range of the integer entries drawn for matrices and translations.
pub const ENTRY_RANGE: i64 = 3;

const MAX_ATTEMPTS: usize = 1000;

pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Permutation {
    let mut img: Vec<usize> = (1..=n).collect();
    img.shuffle(rng);
    Permutation::from_images(img).expect("a shuffle is a bijection")
}

pub fn random_int_vec<R: Rng + ?Sized>(rng: &mut R, k: usize, range: i64) -> IntVec {
    IntVec::new((0..k).map(|_| BigInt::from(rng.gen_range(-range..=range))).collect())
}

/// Entries `p/q` with `|p| ≤ range·q`, `1 ≤ q ≤ 6`.
pub fn random_rat_vec<R: Rng + ?Sized>(rng: &mut R, k: usize, range: i64) -> RatVec {
    RatVec::new(
        (0..k)
            .map(|_| {
                let q = rng.gen_range(1..=6i64);
                BigRational::new(rng.gen_range(-range * q..=range * q).into(), q.into())
            })
            .collect(),
    )
}

pub fn random_int_matrix<R: Rng + ?Sized>(rng: &mut R, k: usize, range: i64) -> RatMat {
    let rows: Vec<Vec<i64>> = (0..k).map(|_| (0..k).map(|_| rng.gen_range(-range..=range)).collect()).collect();
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    RatMat::from_i64(&refs)
}

pub fn random_wreath_element<R: Rng + ?Sized>(rng: &mut R, k: usize, n: usize, range: i64) -> WreathElement {
    let trans = (0..n).map(|_| random_int_vec(rng, k, range)).collect();
    WreathElement::new(k, trans, random_permutation(rng, n)).expect("shapes agree")
}

fn divisors_above_one(m: usize) -> Vec<usize> {
    (2..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

fn is_transitive(sigmas: &[Permutation], n: usize) -> bool {
    let mut seen = vec![false; n + 1];
    let mut stack = vec![1];
    seen[1] = true;
    let mut count = 1;
    while let Some(p) = stack.pop() {
        for s in sigmas {
            let q = s.apply(p);
            if !seen[q] {
                seen[q] = true;
                count += 1;
                stack.push(q);
            }
        }
    }
    count == n
}

/// `k` commuting permutations of {1,…,n} acting transitively.
///
/// A transitive abelian group acts regularly, so the group is drawn as a
/// product of cyclic groups of total order `n`, labelled randomly.
pub fn random_transitive_sigma<R: Rng + ?Sized>(rng: &mut R, k: usize, n: usize) -> Vec<Permutation> {
    let mut orders = Vec::new();
    let mut rest = n;
    while rest > 1 {
        let d = *divisors_above_one(rest).choose(rng).expect("rest > 1 has a divisor");
        orders.push(d);
        rest /= d;
    }
    if orders.len() > k {
        orders = vec![n];
    }
    let mut labels: Vec<usize> = (1..=n).collect();
    labels.shuffle(rng);

    // Mixed-radix encoding of group elements.
    let encode = |digits: &[usize]| digits.iter().zip(&orders).fold(0, |acc, (d, o)| acc * o + d);
    let decode = |mut x: usize| {
        let mut digits = vec![0; orders.len()];
        for (slot, o) in digits.iter_mut().zip(&orders).rev() {
            *slot = x % o;
            x /= o;
        }
        digits
    };
    let translate = |g: &[usize]| {
        let mut img = vec![0; n];
        for x in 0..n {
            let shifted: Vec<usize> = decode(x).iter().zip(g).zip(&orders).map(|((a, b), o)| (a + b) % o).collect();
            img[labels[x] - 1] = labels[encode(&shifted)];
        }
        Permutation::from_images(img).expect("translation is a bijection")
    };

    for attempt in 0..=50 {
        let gens: Vec<Vec<usize>> = (0..k)
            .map(|j| {
                if attempt == 50 {
                    // Fall back to the standard generators, which always work.
                    (0..orders.len()).map(|l| usize::from(l == j)).collect()
                } else {
                    orders.iter().map(|&o| rng.gen_range(0..o)).collect()
                }
            })
            .collect();
        let sigmas: Vec<Permutation> = gens.iter().map(|g| translate(g)).collect();
        if is_transitive(&sigmas, n) {
            return sigmas;
        }
    }
    unreachable!("standard generators of the group act transitively")
}

/// Shortest-path transversal: `z̄_p` with `σ_{z̄_p}⁻¹(1) = p`.
fn transversal(sigmas: &[Permutation], k: usize, n: usize) -> Vec<IntVec> {
    let inverses: Vec<Permutation> = sigmas.iter().map(Permutation::inverse).collect();
    let mut z: Vec<Option<IntVec>> = vec![None; n];
    z[0] = Some(IntVec::zeros(k));
    let mut queue = std::collections::VecDeque::from([1usize]);
    while let Some(p) = queue.pop_front() {
        let zp = z[p - 1].clone().expect("queued points are labelled");
        for (j, inv) in inverses.iter().enumerate() {
            let q = inv.apply(p);
            if z[q - 1].is_none() {
                z[q - 1] = Some(&zp + &IntVec::unit(k, j));
                queue.push_back(q);
            }
        }
    }
    z.into_iter().map(|x| x.expect("sigma is transitive")).collect()
}

/// Random lift data `(A, ā)` compatible with a transitive `sigmas`. The
/// points may coincide modulo Z^k, in which case the induced morphism is not
/// affine.
pub fn random_lift_data<R: Rng + ?Sized>(
    rng: &mut R,
    sigmas: &[Permutation],
    k: usize,
    n: usize,
) -> Result<AffineRealization> {
    let pure = TorusMorphism::pure_permutation(k, sigmas.to_vec())?;
    let stab = pure.stabilizer(1)?;
    let basis = RatMat::from_int_rows(stab.rows(), k)?;
    let p = random_int_matrix(rng, k, ENTRY_RANGE);
    let a = p.mul(&basis.transpose().inverse()?)?;
    let points = transversal(sigmas, k, n)
        .iter()
        .enumerate()
        .map(|(idx, z)| {
            let az = a.apply_int(z)?;
            if idx == 0 {
                Ok(az)
            } else {
                Ok(&az - &RatVec::from_ints(&random_int_vec(rng, k, ENTRY_RANGE)))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    AffineRealization::new(a, points)
}

/// A random irreducible morphism; affine or not.
pub fn random_irreducible_morphism<R: Rng + ?Sized>(rng: &mut R, k: usize, n: usize) -> Result<TorusMorphism> {
    let sigmas = random_transitive_sigma(rng, k, n);
    let r = random_lift_data(rng, &sigmas, k, n)?;
    induced_morphism(&r, &sigmas)
}

/// A random irreducible morphism together with an affine realization of it.
pub fn random_affine_irreducible<R: Rng + ?Sized>(
    rng: &mut R,
    k: usize,
    n: usize,
) -> Result<(TorusMorphism, AffineRealization)> {
    for _ in 0..MAX_ATTEMPTS {
        let sigmas = random_transitive_sigma(rng, k, n);
        let r = random_lift_data(rng, &sigmas, k, n)?;
        let psi = induced_morphism(&r, &sigmas)?;
        if check_realization(&r, &psi).is_ok() {
            return Ok((psi, r));
        }
    }
    Err(Error::Internal(format!("no affine sample found for k={k}, n={n}")))
}

/// Random sizes summing to `n`, each at least 1, with at least `min_parts`
/// parts when `n` allows it.
fn random_composition<R: Rng + ?Sized>(rng: &mut R, n: usize, min_parts: usize) -> Vec<usize> {
    loop {
        let mut parts = Vec::new();
        let mut rest = n;
        while rest > 0 {
            let s = rng.gen_range(1..=rest);
            parts.push(s);
            rest -= s;
        }
        if parts.len() >= min_parts.min(n) {
            return parts;
        }
    }
}

fn glue<R: Rng + ?Sized>(rng: &mut R, k: usize, n: usize, pieces: Vec<TorusMorphism>) -> Result<TorusMorphism> {
    let mut labels: Vec<usize> = (1..=n).collect();
    labels.shuffle(rng);
    let mut offset = 0;
    let components: Vec<Component> = pieces
        .into_iter()
        .map(|m| {
            let mut index_map = labels[offset..offset + m.n()].to_vec();
            index_map.sort_unstable();
            offset += m.n();
            Component { morphism: m, index_map }
        })
        .collect();
    TorusMorphism::from_components(k, n, &components)
}

/// A random morphism with randomly many σ-classes.
pub fn random_morphism<R: Rng + ?Sized>(rng: &mut R, k: usize, n: usize) -> Result<TorusMorphism> {
    let sizes = random_composition(rng, n, 1);
    let pieces = sizes.iter().map(|&m| random_irreducible_morphism(rng, k, m)).collect::<Result<Vec<_>>>()?;
    glue(rng, k, n, pieces)
}

/// A morphism with at least two σ-classes, each of them affine.
pub fn random_reducible_affine<R: Rng + ?Sized>(rng: &mut R, k: usize, n: usize) -> Result<TorusMorphism> {
    if n < 2 {
        return Err(Error::BadParameters("a reducible morphism needs n ≥ 2".into()));
    }
    let sizes = random_composition(rng, n, 2);
    let pieces =
        sizes.iter().map(|&m| random_affine_irreducible(rng, k, m).map(|(psi, _)| psi)).collect::<Result<Vec<_>>>()?;
    glue(rng, k, n, pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::verify_realization;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sigma_is_transitive_and_commuting() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=6 {
            for k in 1..=3 {
                let s = random_transitive_sigma(&mut rng, k, n);
                assert_eq!(s.len(), k);
                assert!(is_transitive(&s, n));
                for a in &s {
                    for b in &s {
                        assert_eq!(a.compose(b), b.compose(a));
                    }
                }
            }
        }
    }

    #[test]
    fn affine_samples_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let k = rng.gen_range(1..=3);
            let n = rng.gen_range(1..=4);
            let (psi, r) = random_affine_irreducible(&mut rng, k, n).unwrap();
            assert!(psi.is_irreducible());
            assert!(verify_realization(&r, &psi));
        }
    }

    #[test]
    fn reducible_samples_have_several_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..=4 {
            let psi = random_reducible_affine(&mut rng, 2, n).unwrap();
            assert!(psi.class_partition().len() >= 2);
        }
    }
}
