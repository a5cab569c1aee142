//! Sampled n-valued maps given by explicit lift factors, and a checker for
//! equivariance and n-valuedness on a grid over one period cell.

use std::f64::consts::TAU;
use std::fmt;
use std::io;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{lift_data, AffineRealization};
use crate::error::{Error, Result};
use crate::morphism::TorusMorphism;
use crate::perm::Permutation;
use crate::wreath::WreathElement;

/// `f̃_i(t̄)` for a 1-based factor index `i`.
pub type FactorFn = Arc<dyn Fn(usize, &[f64]) -> Vec<f64> + Send + Sync>;

#[derive(Clone)]
pub struct SampledMultiMap {
    k: usize,
    n: usize,
    eval: FactorFn,
    morphism: TorusMorphism,
    name: String,
    params: Vec<(String, String)>,
    amplitude_bound: Option<f64>,
}

impl fmt::Debug for SampledMultiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledMultiMap")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("morphism", &self.morphism.to_string())
            .finish()
    }
}

impl SampledMultiMap {
    pub fn new(morphism: TorusMorphism, name: impl Into<String>, eval: FactorFn) -> Self {
        SampledMultiMap {
            k: morphism.k(),
            n: morphism.n(),
            eval,
            morphism,
            name: name.into(),
            params: Vec::new(),
            amplitude_bound: None,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    /// A known bound on `|f̃_i(t̄)_j|` over all `t̄`, if any.
    pub fn with_amplitude_bound(mut self, bound: f64) -> Self {
        self.amplitude_bound = Some(bound);
        self
    }

    /// The affine map `t̄ ↦ {A t̄ + ā_i}` as a sampled map declaring `psi`.
    pub fn from_realization(r: &AffineRealization, psi: TorusMorphism) -> Self {
        let a = to_f64_rows(r);
        let points: Vec<Vec<f64>> =
            r.points().iter().map(|p| p.entries().iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect();
        let eval: FactorFn = Arc::new(move |i, t| affine_eval(&a, &points[i - 1], t));
        SampledMultiMap::new(psi, "affine", eval).with_param("realization", r)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn morphism(&self) -> &TorusMorphism {
        &self.morphism
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[(String, String)] {
        &self.params
    }

    pub fn amplitude_bound(&self) -> Option<f64> {
        self.amplitude_bound
    }

    /// `f̃_i(t̄)`, 1-based `i`.
    pub fn eval(&self, i: usize, t: &[f64]) -> Vec<f64> {
        (self.eval)(i, t)
    }

    /// Returns a copy with factor `i` replaced by `g`, keeping the declared
    /// morphism. Used to build deliberately broken maps.
    pub fn with_factor_override(&self, i: usize, g: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        let inner = self.eval.clone();
        let eval: FactorFn = Arc::new(move |l, t| if l == i { g(t) } else { inner(l, t) });
        SampledMultiMap { eval, name: format!("{}-modified", self.name), ..self.clone() }
    }

    /// Side lengths `n_j` of the period cell, the orders of σ_{e_j}.
    pub fn period(&self) -> Vec<usize> {
        let all: Vec<usize> = (1..=self.n).collect();
        self.morphism.generator_orders(&all)
    }

    /// Grid points `t_j = n_j m_j / grid`, `0 ≤ m_j < grid`, lexicographic.
    pub fn grid_points(&self, grid: usize) -> Vec<Vec<f64>> {
        let period = self.period();
        let total = grid.pow(self.k as u32);
        (0..total)
            .map(|mut idx| {
                let mut t = vec![0.0; self.k];
                for j in (0..self.k).rev() {
                    t[j] = period[j] as f64 * (idx % grid) as f64 / grid as f64;
                    idx /= grid;
                }
                t
            })
            .collect()
    }

    /// Largest `|f̃_i(t̄)_j|` over the grid.
    pub fn sampled_sup(&self, grid: usize) -> f64 {
        self.grid_points(grid)
            .par_iter()
            .map(|t| (1..=self.n).flat_map(|i| self.eval(i, t)).fold(0.0f64, |m, x| m.max(x.abs())))
            .reduce(|| 0.0, f64::max)
    }

    /// Writes sampled values as CSV: `t1..tk, factor, v1..vk`.
    pub fn write_csv<W: io::Write>(&self, grid: usize, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (1..=self.k).map(|j| format!("t{j}")).collect();
        header.push("factor".into());
        header.extend((1..=self.k).map(|j| format!("v{j}")));
        w.write_record(&header).map_err(csv_err)?;
        for t in self.grid_points(grid) {
            for i in 1..=self.n {
                let mut rec: Vec<String> = t.iter().map(ToString::to_string).collect();
                rec.push(i.to_string());
                rec.extend(self.eval(i, &t).iter().map(ToString::to_string));
                w.write_record(&rec).map_err(csv_err)?;
            }
        }
        w.flush().map_err(|e| Error::Internal(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Internal(e.to_string())
}

fn to_f64_rows(r: &AffineRealization) -> Vec<Vec<f64>> {
    let a = r.matrix();
    (0..a.rows()).map(|l| a.row(l).iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect()
}

fn affine_eval(a: &[Vec<f64>], shift: &[f64], t: &[f64]) -> Vec<f64> {
    a.iter().zip(shift).map(|(row, s)| s + row.iter().zip(t).map(|(x, y)| x * y).sum::<f64>()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub samples_checked: usize,
    pub max_equivariance_residual: f64,
    /// Sup-norm distance modulo Z^k.
    pub min_pairwise_separation: f64,
    pub pass: bool,
    pub first_failure: Option<Vec<f64>>,
}

/// Sup-norm distance between `x` and `y` in R^k / Z^k.
pub fn torus_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) - (a - b).round()).fold(0.0, |m, d| m.max(d.abs()))
}

struct GeneratorData {
    shifts: Vec<Vec<f64>>,
    inv: Permutation,
}

/// Checks `f̃_i(t̄ + e_j) = φ_i(e_j) + f̃_{σ_j⁻¹(i)}(t̄)` and pairwise
/// separation at every grid point of the period cell.
pub fn verify(map: &SampledMultiMap, grid: usize, tol_eq: f64, sep_min: f64) -> Result<VerificationReport> {
    if grid < 2 {
        return Err(Error::BadParameters(format!("grid must be at least 2, got {grid}")));
    }
    let gens: Vec<GeneratorData> = map
        .morphism
        .images()
        .iter()
        .map(|g: &WreathElement| GeneratorData {
            shifts: g.translations().iter().map(|v| v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect(),
            inv: g.perm().inverse(),
        })
        .collect();

    let points = map.grid_points(grid);
    let per_sample: Vec<(f64, f64)> = points
        .par_iter()
        .map(|t| {
            let values: Vec<Vec<f64>> = (1..=map.n).map(|i| map.eval(i, t)).collect();
            let mut residual = 0.0f64;
            for (j, g) in gens.iter().enumerate() {
                let mut moved = t.clone();
                moved[j] += 1.0;
                for i in 1..=map.n {
                    let lhs = map.eval(i, &moved);
                    let rhs = &values[g.inv.apply(i) - 1];
                    for ((l, r), s) in lhs.iter().zip(rhs).zip(&g.shifts[i - 1]) {
                        let d = (l - r - s).abs();
                        residual = if d.is_nan() { f64::INFINITY } else { residual.max(d) };
                    }
                }
            }
            let mut sep = f64::INFINITY;
            for a in 0..values.len() {
                for b in a + 1..values.len() {
                    let d = torus_distance(&values[a], &values[b]);
                    sep = if d.is_nan() { 0.0 } else { sep.min(d) };
                }
            }
            (residual, sep)
        })
        .collect();

    let max_res = per_sample.iter().map(|s| s.0).fold(0.0, f64::max);
    let min_sep = per_sample.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let first_failure =
        per_sample.iter().position(|&(r, s)| r.is_nan() || s.is_nan() || r > tol_eq || s < sep_min).map(|p| points[p].clone());
    Ok(VerificationReport {
        samples_checked: points.len(),
        max_equivariance_residual: max_res,
        min_pairwise_separation: min_sep,
        pass: first_failure.is_none(),
        first_failure,
    })
}

/// `(n ⋯ 2 1)`, the shift `i ↦ i − 1`.
pub fn descending_cycle(n: usize) -> Permutation {
    let img = (1..=n).map(|i| if i == 1 { n } else { i - 1 }).collect();
    Permutation::from_images(img).expect("a shift is a bijection")
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::BadParameters(format!("n must be at least 2, got {n}")));
    }
    Ok(())
}

fn circle_point(angle: f64, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; k];
    v[0] = 0.25 * (TAU * angle).cos();
    v[1] = 0.25 * (TAU * angle).sin();
    v
}

/// `n` points on a circle of radius ¼ turning with `t_1`; all φ are zero.
pub fn example_rotation(n: usize, k: usize) -> Result<SampledMultiMap> {
    check_n(n)?;
    if k < 2 {
        return Err(Error::BadParameters(format!("k must be at least 2, got {k}")));
    }
    let mut sigmas = vec![descending_cycle(n)];
    sigmas.extend(std::iter::repeat_n(Permutation::identity(n), k - 1));
    let psi = TorusMorphism::pure_permutation(k, sigmas)?;
    let nf = n as f64;
    let eval: FactorFn = Arc::new(move |i, t| circle_point(t[0] / nf + (i - 1) as f64 / nf, k));
    Ok(SampledMultiMap::new(psi, "rotation", eval).with_param("n", n).with_param("k", k).with_amplitude_bound(0.25))
}

/// The rotation example with `t_1` added to the first coordinate, so that
/// `φ_i(e_1) = (1,0)`. Its image has no torsion, yet it is not affine.
pub fn example_translated(n: usize) -> Result<SampledMultiMap> {
    check_n(n)?;
    let e1 = WreathElement::new(2, vec![crate::lattice::IntVec::from_i64(&[1, 0]); n], descending_cycle(n))?;
    let psi = TorusMorphism::new(2, n, vec![e1, WreathElement::identity(2, n)])?;
    let nf = n as f64;
    let eval: FactorFn = Arc::new(move |i, t| {
        let mut v = circle_point(t[0] / nf + (i - 1) as f64 / nf, 2);
        v[0] += t[0];
        v
    });
    Ok(SampledMultiMap::new(psi, "translated", eval).with_param("n", n))
}

/// Four points on two superposed circles, with σ generating the Klein
/// four-group `{id, (12)(34), (13)(24), (14)(23)}`.
pub fn example_klein_four() -> Result<SampledMultiMap> {
    let psi = TorusMorphism::pure_permutation(
        2,
        vec![Permutation::parse(4, "(1 2)(3 4)")?, Permutation::parse(4, "(1 3)(2 4)")?],
    )?;
    let eval: FactorFn = Arc::new(|i, t| {
        let a = TAU * (t[0] + ((i - 1) % 2) as f64) / 2.0;
        let b = TAU * (t[1] + ((i - 1) / 2) as f64) / 2.0;
        vec![0.25 * a.cos() + 0.125 * b.cos(), 0.25 * a.sin() + 0.125 * b.sin()]
    });
    Ok(SampledMultiMap::new(psi, "klein-four", eval).with_amplitude_bound(0.375))
}

/// Four points on a circle turning with `t_1 + 2 t_2`; σ_{e_1} = (1 2 3 4),
/// σ_{e_2} = (1 3)(2 4). Factor `i` sits at phase `−(i − 1)` quarter turns so
/// that e_1 acts by the declared 4-cycle.
pub fn example_cyclic_four() -> Result<SampledMultiMap> {
    let psi = TorusMorphism::pure_permutation(
        2,
        vec![Permutation::parse(4, "(1 2 3 4)")?, Permutation::parse(4, "(1 3)(2 4)")?],
    )?;
    let eval: FactorFn = Arc::new(|i, t| {
        let phase = ((4 - (i - 1) % 4) % 4) as f64;
        circle_point((t[0] + 2.0 * t[1] + phase) / 4.0, 2)
    });
    Ok(SampledMultiMap::new(psi, "cyclic-four", eval).with_amplitude_bound(0.25))
}

/// Grid used to estimate the amplitude of a base map.
pub const AMPLITUDE_GRID: usize = 64;

/// `t̄ ↦ {A t̄ + ā_i + ε f̃_i(t̄)}`: a map inducing `psi`, obtained by shrinking
/// a base map with trivial φ and the same σ onto the affine data of `psi`.
///
/// `ε = 1 / (2 M L)` where `M` bounds the base amplitude and `L` is the lcm
/// of the orders of σ_{e_j}; the points ā_i then differ by multiples of
/// `1/L` in every coordinate where they differ at all.
pub fn epsilon_perturbation(psi: &TorusMorphism, base: &SampledMultiMap) -> Result<SampledMultiMap> {
    if base.k() != psi.k() || base.n() != psi.n() {
        return Err(Error::BaseMismatch(format!(
            "base has k={}, n={} but the morphism has k={}, n={}",
            base.k(),
            base.n(),
            psi.k(),
            psi.n()
        )));
    }
    if base.morphism().sigma_generators() != psi.sigma_generators() {
        return Err(Error::BaseMismatch("base and morphism have different σ".into()));
    }
    if base.morphism().images().iter().any(|g| g.translations().iter().any(|v| !v.is_zero())) {
        return Err(Error::BaseMismatch("base has nonzero φ".into()));
    }
    let (a, points) = lift_data(psi)?;
    let r = AffineRealization::new(a, points)?;

    let sampled = base.sampled_sup(AMPLITUDE_GRID) * 1.1;
    let m = base.amplitude_bound().map_or(sampled, |b| b.max(sampled));
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::BadParameters(format!("base amplitude estimate {m} is unusable")));
    }
    let lcm = base.period().iter().fold(1usize, |acc, &o| acc.lcm(&o));
    let eps = 1.0 / (2.0 * m * lcm as f64);

    let a_rows = to_f64_rows(&r);
    let shifts: Vec<Vec<f64>> =
        r.points().iter().map(|p| p.entries().iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect();
    let inner = base.eval.clone();
    let eval: FactorFn = Arc::new(move |i, t| {
        let lin = affine_eval(&a_rows, &shifts[i - 1], t);
        lin.iter().zip(inner(i, t)).map(|(x, y)| x + eps * y).collect()
    });
    let points: Vec<String> = r.points().iter().map(ToString::to_string).collect();
    Ok(SampledMultiMap::new(psi.clone(), "perturbation", eval)
        .with_param("base", base.name())
        .with_param("epsilon", eps)
        .with_param("M", m)
        .with_param("A", r.matrix())
        .with_param("a", format!("[{}]", points.join(",")))
        .with_param("L", lcm))
}
