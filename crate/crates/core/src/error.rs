use thiserror::Error;

use crate::affine::Witness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("linear system is inconsistent")]
    Inconsistent,

    #[error("linear system is singular")]
    Singular,

    /// The images of two basis vectors do not commute, so they cannot come from a morphism on Z^k.
    #[error("images of e{0} and e{1} do not commute")]
    NonCommutingImages(usize, usize),

    #[error("morphism is not irreducible ({classes} sigma-classes)")]
    NotIrreducible { classes: usize },

    #[error("divisibility condition violated: {0}")]
    ConditionViolated(Witness),

    #[error("translation part for index {index} along e{generator} is not integral")]
    NonIntegralTranslation { index: usize, generator: usize },

    #[error("bad decomposition: {0}")]
    BadDecomposition(String),

    #[error("component {component} is not affine: {witness}")]
    ComponentNotAffine { component: usize, witness: Witness },

    #[error("det(I - A) vanishes for factor {factor}")]
    DegenerateLefschetz { factor: usize },

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error("base map does not match the morphism: {0}")]
    BaseMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A postcondition that the theory guarantees did not hold.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
