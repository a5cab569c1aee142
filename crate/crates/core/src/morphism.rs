//! Morphisms ψ = (φ_1,…,φ_n; σ): Z^k → (Z^k)^n ⋊ S_n and their structure.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::{hnf, IntVec, LatticeBasis};
use crate::perm::{cycle_of, Permutation};
use crate::rational::{solve_exact, RatMat};
use crate::wreath::{compose, power, WreathElement};

/// A morphism given by the images of the standard basis vectors.
///
/// Construction validates that the images pairwise commute, which is exactly
/// what is needed for them to define a morphism on the free abelian group Z^k.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusMorphism {
    k: usize,
    n: usize,
    images: Vec<WreathElement>,
}

/// σ-classes of a morphism together with one stabilizer per class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaClassReport {
    /// Orbits of the σ-action, each sorted, ordered by smallest element.
    pub classes: Vec<Vec<usize>>,
    pub stabilizers: Vec<LatticeBasis>,
    pub irreducible: bool,
}

/// One irreducible piece of a reducible morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub morphism: TorusMorphism,
    /// `index_map[p]` is the original index of the component's index `p + 1`.
    pub index_map: Vec<usize>,
}

/// Checks that `images` defines a morphism Z^k → (Z^k)^n ⋊ S_n.
pub fn validate(k: usize, n: usize, images: &[WreathElement]) -> Result<()> {
    if images.len() != k {
        return Err(Error::DimensionMismatch { expected: k, found: images.len() });
    }
    for img in images {
        if img.k() != k {
            return Err(Error::DimensionMismatch { expected: k, found: img.k() });
        }
        if img.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: img.n() });
        }
    }
    for a in 0..k {
        for b in a + 1..k {
            if compose(&images[a], &images[b])? != compose(&images[b], &images[a])? {
                return Err(Error::NonCommutingImages(a + 1, b + 1));
            }
        }
    }
    Ok(())
}

impl TorusMorphism {
    pub fn new(k: usize, n: usize, images: Vec<WreathElement>) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::BadParameters(format!("need k >= 1 and n >= 1, got k={k}, n={n}")));
        }
        validate(k, n, &images)?;
        Ok(TorusMorphism { k, n, images })
    }

    /// The morphism with all translations zero and the given σ on the basis.
    pub fn pure_permutation(k: usize, sigmas: Vec<Permutation>) -> Result<Self> {
        let n = sigmas.first().map_or(0, Permutation::len);
        Self::new(k, n, sigmas.into_iter().map(|s| WreathElement::from_perm(k, s)).collect())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn images(&self) -> &[WreathElement] {
        &self.images
    }

    /// ψ(e_j), with `j` 1-based.
    pub fn image(&self, j: usize) -> &WreathElement {
        &self.images[j - 1]
    }

    /// σ_{e_1}, …, σ_{e_k}.
    pub fn sigma_generators(&self) -> Vec<Permutation> {
        self.images.iter().map(|g| g.perm().clone()).collect()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(())
    }

    fn check_vector(&self, z: &IntVec) -> Result<()> {
        if z.dim() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, found: z.dim() });
        }
        Ok(())
    }

    /// ψ(z̄) = ψ(e_1)^{z_1} ⋯ ψ(e_k)^{z_k}.
    pub fn evaluate(&self, z: &IntVec) -> Result<WreathElement> {
        self.check_vector(z)?;
        let mut acc = WreathElement::identity(self.k, self.n);
        for (img, zj) in self.images.iter().zip(z.iter()) {
            acc = compose(&acc, &power(img, zj))?;
        }
        Ok(acc)
    }

    /// σ_z̄ alone, without the translation bookkeeping.
    pub fn sigma_at(&self, z: &IntVec) -> Result<Permutation> {
        self.check_vector(z)?;
        Ok(self
            .images
            .iter()
            .zip(z.iter())
            .fold(Permutation::identity(self.n), |acc, (img, zj)| acc.compose(&img.perm().pow(zj))))
    }

    pub fn sigma_classes(&self) -> SigmaClassReport {
        let classes = self.class_partition();
        let stabilizers = classes
            .iter()
            .map(|c| self.stabilizer(c[0]).expect("class members are valid indices"))
            .collect();
        SigmaClassReport { irreducible: classes.len() == 1, classes, stabilizers }
    }

    pub fn is_irreducible(&self) -> bool {
        self.class_partition().len() == 1
    }

    /// Orbits of the group generated by the σ_{e_j}, via union-find.
    pub fn class_partition(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for img in &self.images {
            for i in 1..=self.n {
                let (a, b) = (find(&mut parent, i - 1), find(&mut parent, img.perm().apply(i) - 1));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.n];
        for i in 0..self.n {
            let r = find(&mut parent, i);
            if slot[r] == usize::MAX {
                slot[r] = classes.len();
                classes.push(Vec::new());
            }
            classes[slot[r]].push(i + 1);
        }
        classes
    }

    /// The class containing index `i`.
    pub fn class_of(&self, i: usize) -> Result<Vec<usize>> {
        self.check_index(i)?;
        Ok(self.class_partition().into_iter().find(|c| c.contains(&i)).expect("partition covers all indices"))
    }

    /// S_i = {z̄ | σ_z̄(i) = i}, computed from Schreier generators of the
    /// orbit of `i`: for each orbit point `j` with transversal vector `t_j`
    /// (so `σ_{t_j}(i) = j`) and each basis direction `e_l`, the vector
    /// `t_j + e_l − t_{σ_l(j)}` fixes `i`, and these vectors generate S_i.
    pub fn stabilizer(&self, i: usize) -> Result<LatticeBasis> {
        self.check_index(i)?;
        let mut transversal: Vec<Option<IntVec>> = vec![None; self.n + 1];
        transversal[i] = Some(IntVec::zeros(self.k));
        let mut queue = VecDeque::from([i]);
        let mut orbit = Vec::new();
        while let Some(j) = queue.pop_front() {
            orbit.push(j);
            let tj = transversal[j].clone().expect("queued points have a transversal");
            for (l, img) in self.images.iter().enumerate() {
                let next = img.perm().apply(j);
                if transversal[next].is_none() {
                    transversal[next] = Some(&tj + &IntVec::unit(self.k, l));
                    queue.push_back(next);
                }
            }
        }
        let mut generators = Vec::new();
        for &j in &orbit {
            let tj = transversal[j].as_ref().expect("orbit point");
            for (l, img) in self.images.iter().enumerate() {
                let target = transversal[img.perm().apply(j)].as_ref().expect("orbit is closed");
                let g = &(tj + &IntVec::unit(self.k, l)) - target;
                if !g.is_zero() {
                    generators.push(g);
                }
            }
        }
        hnf(&generators, self.k)
    }

    /// n_{iz̄}: length of the cycle of σ_z̄ through `i`.
    pub fn cycle_length(&self, i: usize, z: &IntVec) -> Result<usize> {
        self.check_index(i)?;
        let sigma = self.sigma_at(z)?;
        Ok(cycle_of(&sigma, i)?.1)
    }

    /// φ_i(z̄): the i-th translation coordinate of ψ(z̄).
    pub fn phi_component(&self, i: usize, z: &IntVec) -> Result<IntVec> {
        self.check_index(i)?;
        Ok(self.evaluate(z)?.translation(i).clone())
    }

    /// The rational matrix A_i with A_i z̄ = φ_i(z̄) on S_i.
    pub fn restricted_phi_matrix(&self, i: usize) -> Result<RatMat> {
        let stab = self.stabilizer(i)?;
        let basis = stab.rows();
        let values = basis.iter().map(|b| self.phi_component(i, b)).collect::<Result<Vec<_>>>()?;
        // B·Aᵀ = Φ with the basis vectors and their images as rows.
        let b = RatMat::from_int_rows(basis, self.k)?;
        let phi = RatMat::from_int_rows(&values, self.k)?;
        let a = solve_exact(&b, &phi)?.transpose();
        for (bv, pv) in basis.iter().zip(&values) {
            if a.apply_int(bv)?.to_int().as_ref() != Some(pv) {
                return Err(Error::Internal(format!("A_{i} does not reproduce φ_{i}{bv}")));
            }
        }
        Ok(a)
    }

    /// Splits ψ along its σ-classes; each component is relabelled 1..m in
    /// ascending order of original index.
    pub fn decompose(&self) -> Vec<Component> {
        self.class_partition()
            .into_iter()
            .map(|class| {
                let images = self
                    .images
                    .iter()
                    .map(|img| {
                        let trans = class.iter().map(|&x| img.translation(x).clone()).collect();
                        let perm = img.perm().restrict(&class).expect("classes are invariant");
                        WreathElement::new(self.k, trans, perm).expect("shapes agree")
                    })
                    .collect();
                let morphism =
                    TorusMorphism::new(self.k, class.len(), images).expect("restriction of a morphism is a morphism");
                Component { morphism, index_map: class }
            })
            .collect()
    }

    /// Inverse of [`TorusMorphism::decompose`]: glue components back along
    /// their index maps into a morphism on `n` indices.
    pub fn from_components(k: usize, n: usize, components: &[Component]) -> Result<Self> {
        let mut covered = vec![false; n + 1];
        for c in components {
            if c.morphism.k() != k || c.index_map.len() != c.morphism.n() {
                return Err(Error::DimensionMismatch { expected: c.morphism.n(), found: c.index_map.len() });
            }
            for &x in &c.index_map {
                if x == 0 || x > n || covered[x] {
                    return Err(Error::BadParameters(format!("index maps do not partition 1..={n}")));
                }
                covered[x] = true;
            }
        }
        if covered[1..].iter().any(|&c| !c) {
            return Err(Error::BadParameters(format!("index maps do not cover 1..={n}")));
        }
        let images = (1..=k)
            .map(|j| {
                let mut trans = vec![IntVec::zeros(k); n];
                let mut img = vec![0; n];
                for c in components {
                    let g = c.morphism.image(j);
                    for (p, &x) in c.index_map.iter().enumerate() {
                        trans[x - 1] = g.translation(p + 1).clone();
                        img[x - 1] = c.index_map[g.perm().apply(p + 1) - 1];
                    }
                }
                WreathElement::new(k, trans, Permutation::from_images(img)?)
            })
            .collect::<Result<Vec<_>>>()?;
        TorusMorphism::new(k, n, images)
    }

    /// n_j: the order of σ_{e_j} restricted to the indices in `class`
    /// (pass all of 1..=n for the global order).
    pub fn generator_orders(&self, class: &[usize]) -> Vec<usize> {
        self.images
            .iter()
            .map(|img| img.perm().restrict(class).expect("class is invariant").order())
            .collect()
    }
}

impl fmt::Display for TorusMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, img) in self.images.iter().enumerate() {
            if j > 0 {
                writeln!(f)?;
            }
            write!(f, "psi(e{}) = {img}", j + 1)?;
        }
        Ok(())
    }
}

/// Integer multiple helper used by the scans: `m·z̄`.
pub(crate) fn multiple(z: &IntVec, m: usize) -> IntVec {
    z.scale(&BigInt::from(m))
}
