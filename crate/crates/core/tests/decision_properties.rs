use nvtorus::sample::{random_affine_irreducible, random_irreducible_morphism, random_morphism, random_wreath_element};
use nvtorus::wreath::power;
use nvtorus::{
    check_necessary, check_necessary_with, conjugate_morphism, construct_realization, decide_affine_irreducible,
    has_torsion_image, induced_morphism, rebase_lift, representative_set, verify_realization, IntVec, RatVec,
    ScanMode, TorusMorphism, Verdict, WreathElement,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vec(rng: &mut ChaCha8Rng, k: usize, r: i64) -> IntVec {
    IntVec::from_i64(&(0..k).map(|_| rng.gen_range(-r..=r)).collect::<Vec<_>>())
}

fn shape(rng: &mut ChaCha8Rng) -> (usize, usize) {
    (rng.gen_range(1..=3), rng.gen_range(1..=4))
}

#[test]
fn realizations_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..60 {
        let (k, n) = shape(&mut rng);
        let (psi, _) = random_affine_irreducible(&mut rng, k, n).unwrap();
        let r = construct_realization(&psi).unwrap();
        assert!(verify_realization(&r, &psi));
        assert_eq!(induced_morphism(&r, &psi.sigma_generators()).unwrap(), psi);
        assert_eq!(construct_realization(&induced_morphism(&r, &psi.sigma_generators()).unwrap()).unwrap(), r);
    }
}

/// On a realization, A is the same for every factor and maps the stabilizer
/// into Z^k.
#[test]
fn restricted_matrices_coincide_for_irreducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..60 {
        let (k, n) = shape(&mut rng);
        let psi = random_irreducible_morphism(&mut rng, k, n).unwrap();
        let a1 = psi.restricted_phi_matrix(1).unwrap();
        for i in 2..=n {
            assert_eq!(psi.restricted_phi_matrix(i).unwrap(), a1);
        }
    }
}

/// The representative scan and the full box |z_j| ≤ 2 n_j agree, and every
/// witness re-checks from scratch.
#[test]
fn representatives_agree_with_full_box() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut obstructed = 0;
    for _ in 0..80 {
        let (k, n) = shape(&mut rng);
        let psi = random_morphism(&mut rng, k, n).unwrap();
        let reps = check_necessary(&psi);
        let full = check_necessary_with(&psi, ScanMode::FullBox);
        assert_eq!(reps.is_obstructed(), full.is_obstructed(), "{psi}");
        if let Some(w) = reps.witness() {
            obstructed += 1;
            assert!(w.recheck(&psi).unwrap());
            // Divisibility of φ_i(n z̄) is divisibility of A_i z̄ by 1.
            let az = psi.restricted_phi_matrix(w.index).unwrap().apply_int(&w.z).unwrap();
            assert!(az.is_integral());
        }
        if let Some(w) = full.witness() {
            assert!(w.recheck(&psi).unwrap());
        }
    }
    assert!(obstructed > 0);
}

#[test]
fn representative_set_covers_every_sigma() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..40 {
        let (k, n) = shape(&mut rng);
        let psi = random_morphism(&mut rng, k, n).unwrap();
        let mut seen: Vec<_> = representative_set(&psi).iter().map(|z| psi.sigma_at(z).unwrap()).collect();
        seen.push(psi.sigma_at(&IntVec::zeros(k)).unwrap());
        for _ in 0..20 {
            let z = random_vec(&mut rng, k, 8);
            assert!(seen.contains(&psi.sigma_at(&z).unwrap()));
        }
    }
}

/// Irreducible decisions agree with the necessary scan, and verdicts survive
/// conjugation by any deck transformation.
#[test]
fn verdicts_are_lift_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..60 {
        let (k, n) = shape(&mut rng);
        let psi = random_irreducible_morphism(&mut rng, k, n).unwrap();
        let d = random_wreath_element(&mut rng, k, n, 4);
        let moved = conjugate_morphism(&psi, &d).unwrap();
        let v1 = decide_affine_irreducible(&psi).unwrap();
        let v2 = decide_affine_irreducible(&moved).unwrap();
        assert_eq!(matches!(v1, Verdict::Affine(_)), matches!(v2, Verdict::Affine(_)));
        assert_eq!(v1.is_obstructed(), check_necessary(&psi).is_obstructed());
    }
}

#[test]
fn rebase_realizes_any_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut done = 0;
    while done < 60 {
        let (k, n) = shape(&mut rng);
        let psi = random_morphism(&mut rng, k, n).unwrap();
        let z = random_vec(&mut rng, k, 2);
        let i = rng.gen_range(1..=n);
        let len = psi.cycle_length(i, &z).unwrap();
        let target = psi.phi_component(i, &z.scale(&BigInt::from(len))).unwrap();
        let mut parts: Vec<IntVec> = (1..len).map(|_| random_vec(&mut rng, k, 5)).collect();
        let rest = parts.iter().fold(target.clone(), |acc, p| &acc - p);
        parts.push(rest);
        let rebased = rebase_lift(&psi, i, &z, &parts).unwrap();
        let sigma = rebased.sigma_at(&z).unwrap();
        let (cycle, _) = nvtorus::cycle_of(&sigma, i).unwrap();
        for (m, &x) in cycle.iter().enumerate() {
            assert_eq!(rebased.phi_component(x, &z).unwrap(), parts[m]);
        }
        assert_eq!(check_necessary(&rebased).is_obstructed(), check_necessary(&psi).is_obstructed());
        done += 1;
    }
}

/// Torsion in the image, found by brute force: ψ(z̄) has finite order iff
/// ψ(z̄)^{ord σ_z̄} is the identity, because that power is a pure translation.
fn brute_force_torsion(psi: &TorusMorphism, radius: i64) -> Option<IntVec> {
    let k = psi.k();
    let mut pts = vec![vec![]];
    for _ in 0..k {
        pts = pts.into_iter().flat_map(|p: Vec<i64>| (-radius..=radius).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    pts.into_iter().map(|p| IntVec::from_i64(&p)).find(|z| {
        let g = psi.evaluate(z).unwrap();
        !g.is_identity() && power(&g, &BigInt::from(g.perm().order())).is_identity()
    })
}

#[test]
fn torsion_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for _ in 0..80 {
        let (k, n) = shape(&mut rng);
        let psi = random_morphism(&mut rng, k, n).unwrap();
        match has_torsion_image(&psi).unwrap() {
            Some(z) => {
                let g: WreathElement = psi.evaluate(&z).unwrap();
                assert!(!g.is_identity());
                assert!(power(&g, &BigInt::from(g.perm().order())).is_identity());
            }
            None => assert_eq!(brute_force_torsion(&psi, 3), None, "{psi}"),
        }
    }
}

/// Torsion forces some φ_i(n z̄) = 0̄ with z̄ ∉ S_i, hence non-affineness.
#[test]
fn torsion_implies_obstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for _ in 0..80 {
        let (k, n) = shape(&mut rng);
        let psi = random_morphism(&mut rng, k, n).unwrap();
        if has_torsion_image(&psi).unwrap().is_some() {
            assert!(check_necessary(&psi).is_obstructed());
        }
    }
}

#[test]
fn constructed_points_are_distinct_and_normalized() {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    for _ in 0..40 {
        let (k, n) = shape(&mut rng);
        let (psi, _) = random_affine_irreducible(&mut rng, k, n).unwrap();
        let r = construct_realization(&psi).unwrap();
        assert_eq!(r.point(1), &RatVec::zeros(k));
        for i in 1..=n {
            for j in i + 1..=n {
                assert!(!(r.point(i) - r.point(j)).is_integral());
            }
        }
    }
}
