use nvtorus::sample::{random_affine_irreducible, random_int_matrix, random_rat_vec, random_reducible_affine};
use nvtorus::{
    count_fixed_points, count_fixed_points_affine, nielsen_affine, nielsen_of_morphism, nielsen_of_realization,
    AffineRealization, ExtCount, RatMat,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn det_i_minus(a: &RatMat) -> BigRational {
    RatMat::identity(a.rows()).sub(a).unwrap().det().unwrap()
}

#[test]
fn single_valued_counts_equal_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    let mut checked = 0;
    while checked < 100 {
        let k = rng.gen_range(1..=3);
        let a = random_int_matrix(&mut rng, k, 3);
        let d = det_i_minus(&a);
        if d.is_zero() {
            continue;
        }
        let shift = random_rat_vec(&mut rng, k, 2);
        let count = count_fixed_points_affine(&a, &shift).unwrap();
        assert_eq!(BigRational::from_integer(count.clone()), d.abs());
        let report = nielsen_affine(std::slice::from_ref(&a)).unwrap();
        assert_eq!(report.nielsen, d.abs());
        assert_eq!(report.reidemeister, ExtCount::Finite(d.abs()));
        checked += 1;
    }
}

#[test]
fn multivalued_counts_equal_nielsen() {
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    let mut checked = 0;
    while checked < 30 {
        let k = rng.gen_range(1..=2);
        let n = rng.gen_range(2..=3);
        let (_, r) = random_affine_irreducible(&mut rng, k, n).unwrap();
        if det_i_minus(r.matrix()).is_zero() {
            continue;
        }
        let report = nielsen_of_realization(&r).unwrap();
        assert!(report.nielsen_is_integral());
        assert_eq!(BigRational::from_integer(count_fixed_points(&r).unwrap()), report.nielsen);
        checked += 1;
    }
}

#[test]
fn additivity_over_components() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for _ in 0..25 {
        let k = rng.gen_range(1..=2);
        let n = rng.gen_range(2..=4);
        let psi = random_reducible_affine(&mut rng, k, n).unwrap();
        let whole = nielsen_of_morphism(&psi).unwrap();
        let parts: BigRational = psi
            .decompose()
            .iter()
            .map(|c| nielsen_of_morphism(&c.morphism).unwrap().nielsen)
            .fold(BigRational::zero(), |a, b| a + b);
        assert_eq!(whole.nielsen, parts);
        assert_eq!(whole.per_component.len(), psi.class_partition().len());
    }
}

#[test]
fn degenerate_matrix_has_infinite_reidemeister() {
    let r = AffineRealization::new(RatMat::identity(2), vec![nvtorus::RatVec::zeros(2)]).unwrap();
    let report = nielsen_of_realization(&r).unwrap();
    assert_eq!(report.reidemeister, ExtCount::Infinite);
    assert!(count_fixed_points(&r).is_err());
    assert_eq!(report.nielsen, BigRational::from_integer(BigInt::zero()));
}
