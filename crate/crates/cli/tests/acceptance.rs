//! End-to-end acceptance checks, one test per criterion. Each test also
//! prints a single `criterion N: PASS|FAIL` line.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use nvtorus::sample::{
    random_affine_irreducible, random_int_matrix, random_irreducible_morphism, random_morphism, random_rat_vec,
    random_reducible_affine, random_wreath_element,
};
use nvtorus::wreath::{compose, invert};
use nvtorus::{
    check_necessary, check_necessary_with, conjugate_morphism, construct_realization, count_fixed_points,
    count_fixed_points_affine, cycle_of, decide_affine_irreducible, example_klein_four, example_rotation,
    example_translated, has_torsion_image, induced_morphism, nielsen_affine, nielsen_of_morphism,
    nielsen_of_realization, rebase_lift, verify_realization, IntVec, RatMat, ScanMode, TorusMorphism, Verdict,
};
use nvtorus_cli::{print_spec, run_args};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn report(n: u32, what: &str, check: impl FnOnce()) {
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check));
    println!("criterion {n}: {} - {what}", if result.is_ok() { "PASS" } else { "FAIL" });
    if let Err(e) = result {
        std::panic::resume_unwind(e);
    }
}

/// Runs `decide` on `psi` through a spec file and returns (exit, text, json).
fn decide_via_cli(psi: &TorusMorphism) -> (i32, String, Value) {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("spec.json");
    std::fs::write(&file, print_spec(psi)).unwrap();
    let f = file.to_str().unwrap();
    let (text_out, _) = run_args(["nvtorus", "decide", f]);
    let (json_out, as_json) = run_args(["nvtorus", "--json", "decide", f]);
    assert!(as_json);
    assert_eq!(text_out.exit, json_out.exit);
    (text_out.exit, text_out.text, json_out.json)
}

#[test]
fn criterion_01_rotation_maps_are_not_affine() {
    report(1, "rotation maps: NOT AFFINE with witness z=(1,0), phi(nz)=0", || {
        for n in 2..=5usize {
            let start = Instant::now();
            let psi = example_rotation(n, 2).unwrap().morphism().clone();
            let (exit, text, json) = decide_via_cli(&psi);
            assert_eq!(exit, 2);
            assert_eq!(text, format!("NOT AFFINE; witness i=1, z=(1,0), phi({n}z)=(0,0) ∈ {n}Z²"));
            let w = &json["components"][0]["witness"];
            assert_eq!(w["z"], serde_json::json!([1, 0]));
            assert_eq!(w["value"], serde_json::json!([0, 0]));
            assert_eq!(w["cycleLength"], n);
            assert!(start.elapsed() < Duration::from_secs(1));
        }
    });
}

#[test]
fn criterion_02_translated_maps_are_not_affine_without_torsion() {
    report(2, "translated maps: NOT AFFINE with phi(n(1,0))=(n,0), torsion-free image", || {
        for n in 2..=4usize {
            let psi = example_translated(n).unwrap().morphism().clone();
            let (exit, text, json) = decide_via_cli(&psi);
            assert_eq!(exit, 2);
            assert_eq!(text, format!("NOT AFFINE; witness i=1, z=(1,0), phi({n}z)=({n},0) ∈ {n}Z²"));
            assert_eq!(json["components"][0]["witness"]["value"], serde_json::json!([n, 0]));
            assert_eq!(has_torsion_image(&psi).unwrap(), None);
            match decide_affine_irreducible(&psi).unwrap() {
                Verdict::NotAffine(w) => assert!(w.recheck(&psi).unwrap()),
                other => panic!("unexpected {other:?}"),
            }
        }
    });
}

#[test]
fn criterion_03_four_valued_examples_have_torsion() {
    report(3, "four-valued pure-permutation morphisms: torsion and NOT AFFINE", || {
        let klein = example_klein_four().unwrap().morphism().clone();
        let cyclic = nvtorus::example_cyclic_four().unwrap().morphism().clone();
        assert_eq!(cyclic.image(1).perm().to_string(), "(1 2 3 4)");
        assert_eq!(cyclic.image(2).perm().to_string(), "(1 3)(2 4)");
        for psi in [klein, cyclic] {
            let z = has_torsion_image(&psi).unwrap().expect("torsion");
            assert!(!psi.evaluate(&z).unwrap().is_identity());
            assert!(matches!(decide_affine_irreducible(&psi).unwrap(), Verdict::NotAffine(_)));
            assert_eq!(decide_via_cli(&psi).0, 2);
        }
    });
}

fn example_json(args: &[&str]) -> Value {
    let mut full = vec!["nvtorus", "--json", "example"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--grid", "50", "--tol-eq", "1e-9", "--sep-min", "0.05"]);
    let start = Instant::now();
    let (out, _) = run_args(full.clone());
    assert!(start.elapsed() < Duration::from_secs(5), "{full:?} too slow");
    assert_eq!(out.exit, 0, "{full:?}: {}", out.text);
    out.json
}

#[test]
fn criterion_04_constructions_verify_numerically() {
    report(4, "built-in constructions: residual < 1e-9, separation > 0.05 on a 50x50 grid", || {
        let mut runs: Vec<Vec<String>> = Vec::new();
        for n in 2..=5 {
            runs.push(vec!["rotation".into(), "--n".into(), n.to_string()]);
            runs.push(vec!["translated".into(), "--n".into(), n.to_string()]);
        }
        runs.push(vec!["klein-four".into()]);
        runs.push(vec!["cyclic-four".into()]);
        for args in runs {
            let refs: Vec<&str> = args.iter().map(String::as_str).collect();
            let json = example_json(&refs);
            let r = &json["report"];
            assert_eq!(r["pass"], true, "{args:?}");
            assert_eq!(r["samplesChecked"], 2500);
            assert!(r["maxEquivarianceResidual"].as_f64().unwrap() < 1e-9);
            assert!(r["minPairwiseSeparation"].as_f64().unwrap() > 0.05);
        }
    });
}

#[test]
fn criterion_05_realizations_round_trip() {
    report(5, "100 random affine realizations: construct(induced(R)) = R", || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let (k, n) = (rng.gen_range(1..=3), rng.gen_range(1..=4));
            let (psi, r) = random_affine_irreducible(&mut rng, k, n).unwrap();
            assert_eq!(induced_morphism(&r, &psi.sigma_generators()).unwrap(), psi);
            let rebuilt = construct_realization(&psi).unwrap();
            assert_eq!(rebuilt, r);
            assert!(verify_realization(&rebuilt, &psi));
        }
    });
}

fn det_i_minus(a: &RatMat) -> BigRational {
    RatMat::identity(a.rows()).sub(a).unwrap().det().unwrap()
}

#[test]
fn criterion_06_nielsen_matches_fixed_point_count() {
    report(6, "Nielsen number equals the fixed-point count", || {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut done = 0;
        while done < 200 {
            let k = rng.gen_range(1..=3);
            let a = random_int_matrix(&mut rng, k, 3);
            let d = det_i_minus(&a);
            if d.is_zero() {
                continue;
            }
            let shift = random_rat_vec(&mut rng, k, 2);
            let count = BigRational::from_integer(count_fixed_points_affine(&a, &shift).unwrap());
            assert_eq!(count, d.abs());
            assert_eq!(nielsen_affine(std::slice::from_ref(&a)).unwrap().nielsen, d.abs());
            done += 1;
        }
        let mut done = 0;
        while done < 50 {
            let k = rng.gen_range(1..=3);
            let n = rng.gen_range(2..=3);
            let (_, r) = random_affine_irreducible(&mut rng, k, n).unwrap();
            if det_i_minus(r.matrix()).is_zero() {
                continue;
            }
            let report = nielsen_of_realization(&r).unwrap();
            assert_eq!(BigRational::from_integer(count_fixed_points(&r).unwrap()), report.nielsen);
            done += 1;
        }
        assert!(start.elapsed() < Duration::from_secs(30));
    });
}

#[test]
fn criterion_07_nielsen_is_additive() {
    report(7, "50 reducible morphisms: N is the sum over components", || {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let (k, n) = (rng.gen_range(1..=3), rng.gen_range(2..=4));
            let psi = random_reducible_affine(&mut rng, k, n).unwrap();
            let whole = nielsen_of_morphism(&psi).unwrap();
            let sum = psi
                .decompose()
                .iter()
                .map(|c| nielsen_of_morphism(&c.morphism).unwrap().nielsen)
                .fold(BigRational::zero(), |a, b| a + b);
            assert_eq!(whole.nielsen, sum);
        }
    });
}

#[test]
fn criterion_08_verdicts_do_not_depend_on_the_lift() {
    report(8, "100 (psi, d) pairs: verdict invariant under conjugation; rebase hits its target", || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let (k, n) = (rng.gen_range(1..=3), rng.gen_range(1..=4));
            let psi = random_irreducible_morphism(&mut rng, k, n).unwrap();
            let d = random_wreath_element(&mut rng, k, n, 5);
            let moved = conjugate_morphism(&psi, &d).unwrap();
            let affine = |p: &TorusMorphism| matches!(decide_affine_irreducible(p).unwrap(), Verdict::Affine(_));
            assert_eq!(affine(&psi), affine(&moved));

            let z = IntVec::from_i64(&(0..k).map(|_| rng.gen_range(-2..=2)).collect::<Vec<_>>());
            let i = rng.gen_range(1..=n);
            let len = psi.cycle_length(i, &z).unwrap();
            let total = psi.phi_component(i, &z.scale(&BigInt::from(len))).unwrap();
            let mut parts: Vec<IntVec> = (1..len)
                .map(|_| IntVec::from_i64(&(0..k).map(|_| rng.gen_range(-4..=4)).collect::<Vec<_>>()))
                .collect();
            parts.push(parts.iter().fold(total, |acc, p| &acc - p));
            let rebased = rebase_lift(&psi, i, &z, &parts).unwrap();
            let (cycle, _) = cycle_of(&rebased.sigma_at(&z).unwrap(), i).unwrap();
            for (m, &x) in cycle.iter().enumerate() {
                assert_eq!(rebased.phi_component(x, &z).unwrap(), parts[m]);
            }
            assert_eq!(affine(&psi), affine(&rebased));
        }
    });
}

#[test]
fn criterion_09_representatives_match_full_box() {
    report(9, "100 random morphisms: representative scan agrees with |z_j| <= 2 n_j", || {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let (k, n) = (rng.gen_range(1..=3), rng.gen_range(1..=4));
            let psi = random_morphism(&mut rng, k, n).unwrap();
            let reps = check_necessary(&psi);
            let full = check_necessary_with(&psi, ScanMode::FullBox);
            assert_eq!(reps.is_obstructed(), full.is_obstructed(), "{psi}");
        }
    });
}

#[test]
fn criterion_10_algebraic_identities() {
    report(10, "group axioms, cocycle, cycle-sum and stabilizer identities", || {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..1000 {
            let (k, n) = (rng.gen_range(1..=3), rng.gen_range(1..=5));
            let a = random_wreath_element(&mut rng, k, n, 5);
            let b = random_wreath_element(&mut rng, k, n, 5);
            let c = random_wreath_element(&mut rng, k, n, 5);
            let ab_c = compose(&compose(&a, &b).unwrap(), &c).unwrap();
            let a_bc = compose(&a, &compose(&b, &c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
            assert_eq!(compose(&a, &nvtorus::WreathElement::identity(k, n)).unwrap(), a);
            assert!(compose(&a, &invert(&a)).unwrap().is_identity());
            assert!(compose(&invert(&a), &a).unwrap().is_identity());
        }
        for _ in 0..200 {
            let (k, n) = (rng.gen_range(1..=3), rng.gen_range(1..=4));
            let psi = random_morphism(&mut rng, k, n).unwrap();
            let z1 = IntVec::from_i64(&(0..k).map(|_| rng.gen_range(-4..=4)).collect::<Vec<_>>());
            let z2 = IntVec::from_i64(&(0..k).map(|_| rng.gen_range(-4..=4)).collect::<Vec<_>>());
            let sigma = psi.sigma_at(&z1).unwrap();
            let inv = sigma.inverse();
            for i in 1..=n {
                let lhs = psi.phi_component(i, &(&z1 + &z2)).unwrap();
                let rhs = &psi.phi_component(i, &z1).unwrap() + &psi.phi_component(inv.apply(i), &z2).unwrap();
                assert_eq!(lhs, rhs);

                let (cycle, len) = cycle_of(&sigma, i).unwrap();
                let sum = cycle.iter().fold(IntVec::zeros(k), |acc, &x| &acc + &psi.phi_component(x, &z1).unwrap());
                assert_eq!(psi.phi_component(i, &z1.scale(&BigInt::from(len))).unwrap(), sum);
            }
            for class in psi.class_partition() {
                let s = psi.stabilizer(class[0]).unwrap();
                assert!(class.iter().all(|&i| psi.stabilizer(i).unwrap() == s));
            }
        }
        assert!(start.elapsed() < Duration::from_secs(10));
    });
}
