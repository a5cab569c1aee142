//! Exact algebra for n-valued maps on the torus T^k = R^k / Z^k.
//!
//! An n-valued map lifts to `n` single-valued maps `f̃_1,…,f̃_n: R^k → R^k`,
//! and the lift determines a group morphism `ψ: Z^k → (Z^k)^n ⋊ S_n`. This
//! crate decides which such morphisms come from affine n-valued maps, builds
//! the affine maps, and computes their Nielsen and Reidemeister numbers.
//!
//! ```
//! use nvtorus::{decide_affine_irreducible, Permutation, TorusMorphism, Verdict};
//!
//! let sigma = Permutation::parse(2, "(1 2)").unwrap();
//! let psi = TorusMorphism::pure_permutation(2, vec![sigma, Permutation::identity(2)]).unwrap();
//! assert!(matches!(decide_affine_irreducible(&psi).unwrap(), Verdict::NotAffine(_)));
//! ```

pub mod affine;
pub mod error;
pub mod lattice;
pub mod morphism;
pub mod nielsen;
pub mod numeric;
pub mod perm;
pub mod rational;
pub mod sample;
pub mod wreath;

pub use affine::{
    check_necessary, check_necessary_with, check_realization, conjugate_morphism, construct_realization,
    cycle_condition_violations, decide_affine_irreducible, decide_components, has_torsion_image,
    induced_morphism, lift_data, rebase_lift, representative_set, verify_realization, AffineRealization,
    ComponentVerdict, CycleViolation, RealizationDefect, ScanMode, Verdict, Witness,
};
pub use nielsen::{
    count_fixed_points, count_fixed_points_affine, count_fixed_points_per_factor, nielsen_affine, nielsen_of_morphism,
    nielsen_of_realization, ComponentNielsen, ExtCount, NielsenReport,
};
pub use error::{Error, Result};
pub use lattice::{hnf, integer_kernel, lattice_contains, lattice_index, IntVec, LatticeBasis, LatticeIndex};
pub use morphism::{Component, SigmaClassReport, TorusMorphism};
pub use perm::{cycle_of, Permutation};
pub use rational::{format_rational, parse_rational, solve_exact, RatMat, RatVec};
pub use wreath::WreathElement;
pub use numeric::{
    epsilon_perturbation, example_cyclic_four, example_klein_four, example_rotation, example_translated, verify,
    SampledMultiMap, VerificationReport,
};
