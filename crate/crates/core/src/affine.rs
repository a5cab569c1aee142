//! Deciding whether a morphism is induced by an affine n-valued map.
//!
//! For indices `i` and vectors `z̄ ∉ S_i`, an affine realization forces
//! `φ_i(n_{iz̄} z̄) ∉ n_{iz̄} Z^k`; for irreducible morphisms this is also
//! sufficient, and the realization `t̄ ↦ {A t̄ + ā_i}` is built from
//! `ā_{σ_z̄⁻¹(1)} = A z̄ − φ_1(z̄)` with `A` the linear extension of `φ_1|_S`.
//!
//! The scans only need one vector per coset of the stabilizer, which the
//! box `{Σ m_j e_j | 0 ≤ m_j < n_j}` provides (`n_j` the order of σ_{e_j}).

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::{integer_kernel, IntVec};
use crate::morphism::{multiple, Component, TorusMorphism};
use crate::perm::{cycle_of, Permutation};
use crate::rational::{RatMat, RatVec};
use crate::wreath::{conjugate, WreathElement};

/// An affine n-valued map `t̄ ↦ {A t̄ + ā_1, …, A t̄ + ā_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineRealization {
    a: RatMat,
    points: Vec<RatVec>,
}

impl AffineRealization {
    /// Only shapes are checked here; see [`check_realization`] for the rest.
    pub fn new(a: RatMat, points: Vec<RatVec>) -> Result<Self> {
        let k = a.rows();
        if a.cols() != k {
            return Err(Error::DimensionMismatch { expected: k, found: a.cols() });
        }
        if points.is_empty() {
            return Err(Error::BadParameters("a realization needs at least one point".into()));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != k) {
            return Err(Error::DimensionMismatch { expected: k, found: p.dim() });
        }
        Ok(AffineRealization { a, points })
    }

    pub fn k(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn matrix(&self) -> &RatMat {
        &self.a
    }

    pub fn points(&self) -> &[RatVec] {
        &self.points
    }

    /// ā_i, 1-based.
    pub fn point(&self, i: usize) -> &RatVec {
        &self.points[i - 1]
    }
}

impl fmt::Display for AffineRealization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.points.iter().map(ToString::to_string).collect();
        write!(f, "A={}; a=[{}]", self.a, pts.join(","))
    }
}

/// An `(i, z̄)` pair with `z̄ ∉ S_i` and `φ_i(n_{iz̄} z̄) ∈ n_{iz̄} Z^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Witness {
    pub index: usize,
    pub z: IntVec,
    pub cycle_length: usize,
    /// φ_i(n_{iz̄} z̄).
    pub value: IntVec,
}

impl Witness {
    /// Re-derives everything the witness claims directly from `psi`.
    pub fn recheck(&self, psi: &TorusMorphism) -> Result<bool> {
        let stab = psi.stabilizer(self.index)?;
        let n = psi.cycle_length(self.index, &self.z)?;
        let value = psi.phi_component(self.index, &multiple(&self.z, n))?;
        Ok(!stab.contains(&self.z)?
            && n == self.cycle_length
            && value == self.value
            && value.divisible_by(&BigInt::from(n)))
    }
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap_or(0) as usize]).collect()
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "i={}, z={}, phi({}z)={} ∈ {}Z{}",
            self.index,
            self.z,
            self.cycle_length,
            self.value,
            self.cycle_length,
            superscript(self.z.dim())
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Affine(AffineRealization),
    NotAffine(Witness),
    NecessaryFails(Witness),
    NecessaryPasses,
}

impl Verdict {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::NotAffine(w) | Verdict::NecessaryFails(w) => Some(w),
            _ => None,
        }
    }

    /// `true` for outcomes that rule out an affine realization.
    pub fn is_obstructed(&self) -> bool {
        self.witness().is_some()
    }
}

/// Which vectors the necessary-condition scan visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    /// One vector per coset: `{Σ m_j e_j | 0 ≤ m_j < n_j}`, per σ-class.
    Representatives,
    /// Every nonzero `z̄` with `|z_j| ≤ 2 n_j` (global orders); for cross-checks.
    FullBox,
}

/// All vectors with `lo_j ≤ z_j ≤ hi_j`, in lexicographic order.
fn lattice_box(lo: &[i64], hi: &[i64]) -> Vec<IntVec> {
    let mut out = Vec::new();
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return out;
    }
    let mut cur = lo.to_vec();
    loop {
        out.push(IntVec::from_i64(&cur));
        let mut j = cur.len();
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if cur[j] < hi[j] {
                cur[j] += 1;
                for (c, l) in cur[j + 1..].iter_mut().zip(&lo[j + 1..]) {
                    *c = *l;
                }
                break;
            }
        }
    }
}

fn representatives_for_orders(orders: &[usize]) -> Vec<IntVec> {
    let lo = vec![0; orders.len()];
    let hi: Vec<i64> = orders.iter().map(|&o| o as i64 - 1).collect();
    lattice_box(&lo, &hi)
}

/// `{m_1 e_1 + … + m_k e_k | 0 ≤ m_j < n_j} \ {0̄}`, lexicographic, with `n_j`
/// the order of σ_{e_j}.
pub fn representative_set(psi: &TorusMorphism) -> Vec<IntVec> {
    let all: Vec<usize> = (1..=psi.n()).collect();
    representatives_for_orders(&psi.generator_orders(&all)).into_iter().filter(|z| !z.is_zero()).collect()
}

/// Checks the pair `(i, z̄)`, returning a witness when it obstructs.
fn obstruction_at(psi: &TorusMorphism, sigma_z: &Permutation, i: usize, z: &IntVec) -> Result<Option<Witness>> {
    if sigma_z.apply(i) == i {
        return Ok(None);
    }
    let n = cycle_of(sigma_z, i)?.1;
    let value = psi.phi_component(i, &multiple(z, n))?;
    if value.divisible_by(&BigInt::from(n)) {
        return Ok(Some(Witness { index: i, z: z.clone(), cycle_length: n, value }));
    }
    Ok(None)
}

pub fn check_necessary(psi: &TorusMorphism) -> Verdict {
    check_necessary_with(psi, ScanMode::Representatives)
}

pub fn check_necessary_with(psi: &TorusMorphism, mode: ScanMode) -> Verdict {
    let scan = || -> Result<Option<Witness>> {
        match mode {
            ScanMode::Representatives => {
                for class in psi.class_partition() {
                    let reps = representatives_for_orders(&psi.generator_orders(&class));
                    for z in reps.iter().filter(|z| !z.is_zero()) {
                        let sigma_z = psi.sigma_at(z)?;
                        for &i in &class {
                            if let Some(w) = obstruction_at(psi, &sigma_z, i, z)? {
                                return Ok(Some(w));
                            }
                        }
                    }
                }
                Ok(None)
            }
            ScanMode::FullBox => {
                let all: Vec<usize> = (1..=psi.n()).collect();
                let bound: Vec<i64> = psi.generator_orders(&all).iter().map(|&o| 2 * o as i64).collect();
                let lo: Vec<i64> = bound.iter().map(|b| -b).collect();
                for z in lattice_box(&lo, &bound).iter().filter(|z| !z.is_zero()) {
                    let sigma_z = psi.sigma_at(z)?;
                    for i in 1..=psi.n() {
                        if let Some(w) = obstruction_at(psi, &sigma_z, i, z)? {
                            return Ok(Some(w));
                        }
                    }
                }
                Ok(None)
            }
        }
    };
    match scan().expect("indices and dimensions come from psi itself") {
        Some(w) => Verdict::NecessaryFails(w),
        None => Verdict::NecessaryPasses,
    }
}

fn require_irreducible(psi: &TorusMorphism) -> Result<()> {
    let classes = psi.class_partition().len();
    if classes != 1 {
        return Err(Error::NotIrreducible { classes });
    }
    Ok(())
}

/// Full decision for an irreducible morphism.
pub fn decide_affine_irreducible(psi: &TorusMorphism) -> Result<Verdict> {
    require_irreducible(psi)?;
    match check_necessary(psi) {
        Verdict::NecessaryFails(w) => Ok(Verdict::NotAffine(w)),
        _ => Ok(Verdict::Affine(construct_realization(psi)?)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentVerdict {
    pub component: Component,
    pub verdict: Verdict,
}

/// Decides every σ-class of `psi` separately. No global verdict is implied:
/// affine components may still produce colliding point sets together.
pub fn decide_components(psi: &TorusMorphism) -> Result<Vec<ComponentVerdict>> {
    psi.decompose()
        .into_iter()
        .map(|component| {
            let verdict = decide_affine_irreducible(&component.morphism)?;
            Ok(ComponentVerdict { component, verdict })
        })
        .collect()
}

/// The matrix `A` and points `ā_i` with `A z̄ + ā_i = ā_{σ_z̄⁻¹(i)} + φ_i(z̄)`
/// for an irreducible `psi`, normalized by `ā_1 = 0̄`.
///
/// This does not check that the points are distinct modulo Z^k, so it also
/// applies to morphisms that fail the divisibility condition.
pub fn lift_data(psi: &TorusMorphism) -> Result<(RatMat, Vec<RatVec>)> {
    require_irreducible(psi)?;
    let k = psi.k();
    let a = psi.restricted_phi_matrix(1)?;
    let all: Vec<usize> = (1..=psi.n()).collect();
    let mut points: Vec<Option<RatVec>> = vec![None; psi.n()];
    for z in representatives_for_orders(&psi.generator_orders(&all)) {
        let g = psi.evaluate(&z)?;
        let target = g.perm().inverse().apply(1);
        let value = &a.apply_int(&z)? - &RatVec::from_ints(g.translation(1));
        match &points[target - 1] {
            None => points[target - 1] = Some(value),
            Some(existing) if *existing == value => {}
            Some(existing) => {
                return Err(Error::Internal(format!(
                    "point {target} is not well defined: {existing} vs {value}"
                )))
            }
        }
    }
    let points = points
        .into_iter()
        .enumerate()
        .map(|(p, x)| x.ok_or_else(|| Error::Internal(format!("index {} not reached", p + 1))))
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(points[0] == RatVec::zeros(k));
    Ok((a, points))
}

pub fn construct_realization(psi: &TorusMorphism) -> Result<AffineRealization> {
    require_irreducible(psi)?;
    if let Verdict::NecessaryFails(w) = check_necessary(psi) {
        return Err(Error::ConditionViolated(w));
    }
    let (a, points) = lift_data(psi)?;
    let r = AffineRealization::new(a, points)?;
    check_realization(&r, psi).map_err(|d| Error::Internal(format!("constructed realization rejected: {d}")))?;
    Ok(r)
}

/// The morphism induced by the lift `t̄ ↦ (A t̄ + ā_1, …, A t̄ + ā_n)` when
/// σ_{e_j} is prescribed: `φ_i(e_j) = A e_j + ā_i − ā_{σ_j⁻¹(i)}`.
pub fn induced_morphism(r: &AffineRealization, sigmas: &[Permutation]) -> Result<TorusMorphism> {
    let (k, n) = (r.k(), r.n());
    if sigmas.len() != k {
        return Err(Error::DimensionMismatch { expected: k, found: sigmas.len() });
    }
    let mut images = Vec::with_capacity(k);
    for (j, sigma) in sigmas.iter().enumerate() {
        if sigma.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: sigma.len() });
        }
        let column = r.a.column(j);
        let inv = sigma.inverse();
        let trans = (1..=n)
            .map(|i| {
                let phi = &(&column + r.point(i)) - r.point(inv.apply(i));
                phi.to_int().ok_or(Error::NonIntegralTranslation { index: i, generator: j + 1 })
            })
            .collect::<Result<Vec<_>>>()?;
        images.push(WreathElement::new(k, trans, sigma.clone())?);
    }
    TorusMorphism::new(k, n, images)
}

/// Why a realization fails to realize a morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealizationDefect {
    ShapeMismatch,
    /// ā_i − ā_j ∈ Z^k: the map is not n-valued.
    CoincidentPoints { i: usize, j: usize },
    NotInducible(Error),
    /// The induced image of e_j differs from ψ(e_j).
    ImageMismatch { generator: usize },
}

impl fmt::Display for RealizationDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealizationDefect::ShapeMismatch => write!(f, "shape mismatch"),
            RealizationDefect::CoincidentPoints { i, j } => write!(f, "points {i} and {j} agree modulo Z^k"),
            RealizationDefect::NotInducible(e) => write!(f, "{e}"),
            RealizationDefect::ImageMismatch { generator } => write!(f, "image of e{generator} differs"),
        }
    }
}

pub fn check_realization(r: &AffineRealization, psi: &TorusMorphism) -> std::result::Result<(), RealizationDefect> {
    if r.k() != psi.k() || r.n() != psi.n() {
        return Err(RealizationDefect::ShapeMismatch);
    }
    for i in 1..=r.n() {
        for j in i + 1..=r.n() {
            if (r.point(i) - r.point(j)).is_integral() {
                return Err(RealizationDefect::CoincidentPoints { i, j });
            }
        }
    }
    let induced = induced_morphism(r, &psi.sigma_generators()).map_err(RealizationDefect::NotInducible)?;
    for j in 1..=psi.k() {
        if induced.image(j) != psi.image(j) {
            return Err(RealizationDefect::ImageMismatch { generator: j });
        }
    }
    Ok(())
}

pub fn verify_realization(r: &AffineRealization, psi: &TorusMorphism) -> bool {
    check_realization(r, psi).is_ok()
}

/// A nontrivial cycle of σ_z̄ on which all φ values coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleViolation {
    pub z: IntVec,
    /// `i, σ_z̄⁻¹(i), …` starting from the smallest index of the cycle.
    pub cycle: Vec<usize>,
    pub value: IntVec,
}

pub fn cycle_condition_violations(psi: &TorusMorphism) -> Vec<CycleViolation> {
    let mut out = Vec::new();
    for z in representative_set(psi) {
        let g = psi.evaluate(&z).expect("representatives have dimension k");
        for cycle in g.perm().cycles().into_iter().filter(|c| c.len() > 1) {
            let first = g.translation(cycle[0]);
            if cycle.iter().all(|&x| g.translation(x) == first) {
                let (listed, _) = cycle_of(g.perm(), cycle[0]).expect("cycle members are valid");
                out.push(CycleViolation { z: z.clone(), cycle: listed, value: first.clone() });
            }
        }
    }
    out
}

/// Some `z̄` with ψ(z̄) ≠ 1 of finite order, if the image has torsion.
///
/// ψ(z̄)^N with N the order of σ_z̄ has translation part `N·A_i z̄` at `i`, so
/// ψ(z̄) has finite order iff `A_i z̄ = 0̄` for every `i`; it is then trivial
/// iff σ_z̄ is. Hence it suffices to test σ on a basis of `∩_i ker A_i`.
pub fn has_torsion_image(psi: &TorusMorphism) -> Result<Option<IntVec>> {
    let blocks = (1..=psi.n()).map(|i| psi.restricted_phi_matrix(i)).collect::<Result<Vec<_>>>()?;
    let kernel = integer_kernel(&RatMat::vstack(&blocks)?);
    for g in kernel.rows() {
        if !psi.sigma_at(g)?.is_identity() {
            return Ok(Some(g.clone()));
        }
    }
    Ok(None)
}

/// Conjugates every basis image by `d`: the morphism induced by the lift `d·f̃`.
pub fn conjugate_morphism(psi: &TorusMorphism, d: &WreathElement) -> Result<TorusMorphism> {
    if d.k() != psi.k() {
        return Err(Error::DimensionMismatch { expected: psi.k(), found: d.k() });
    }
    if d.n() != psi.n() {
        return Err(Error::DimensionMismatch { expected: psi.n(), found: d.n() });
    }
    let images = psi.images().iter().map(|g| conjugate(d, g)).collect::<Result<Vec<_>>>()?;
    TorusMorphism::new(psi.k(), psi.n(), images)
}

/// Changes the lift so that `φ'_{σ_z̄^{-m}(i)}(z̄) = decomposition[m]`.
///
/// `decomposition` must have n_{iz̄} entries summing to φ_i(n_{iz̄} z̄). The new
/// lift shifts factor `σ_z̄^{-m}(i)` by `Σ_{j<m} (φ_{σ_z̄^{-j}(i)}(z̄) − z̄_j)`,
/// which is conjugation by a pure translation.
pub fn rebase_lift(psi: &TorusMorphism, i: usize, z: &IntVec, decomposition: &[IntVec]) -> Result<TorusMorphism> {
    let g = psi.evaluate(z)?;
    let (cycle, len) = cycle_of(g.perm(), i)?;
    if decomposition.len() != len {
        return Err(Error::BadDecomposition(format!("expected {len} parts, got {}", decomposition.len())));
    }
    if let Some(bad) = decomposition.iter().find(|p| p.dim() != psi.k()) {
        return Err(Error::BadDecomposition(format!("part {bad} does not have dimension {}", psi.k())));
    }
    let target = psi.phi_component(i, &multiple(z, len))?;
    let sum = decomposition.iter().fold(IntVec::zeros(psi.k()), |acc, p| &acc + p);
    if sum != target {
        return Err(Error::BadDecomposition(format!("parts sum to {sum}, expected {target}")));
    }

    let mut shifts = vec![IntVec::zeros(psi.k()); psi.n()];
    let mut running = IntVec::zeros(psi.k());
    for (m, &idx) in cycle.iter().enumerate() {
        shifts[idx - 1] = running.clone();
        running = &running + &(g.translation(idx) - &decomposition[m]);
    }
    debug_assert!(running.is_zero());
    let d = WreathElement::from_translations(psi.k(), shifts)?;
    let rebased = conjugate_morphism(psi, &d)?;

    let g2 = rebased.evaluate(z)?;
    for (m, &idx) in cycle.iter().enumerate() {
        if g2.translation(idx) != &decomposition[m] {
            return Err(Error::Internal(format!("rebased value at index {idx} is {}", g2.translation(idx))));
        }
    }
    if rebased.sigma_generators() != psi.sigma_generators() {
        return Err(Error::Internal("rebasing changed sigma".into()));
    }
    Ok(rebased)
}
