use thiserror::Error;

use crate::complex::Simplex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("empty complex")]
    EmptyComplex,
    #[error("{0:?} is not a simplex of the complex")]
    NotASimplex(Vec<String>),
    #[error("vertex order is invalid: {0}")]
    InvalidOrder(String),
    #[error("not a pseudomanifold: {0}")]
    NotPseudomanifold(String),
    #[error("orientation propagation is inconsistent at top simplex {0:?}")]
    OrientationFailure(Vec<String>),
    #[error("vertex map is not simplicial: image of {0:?} is not a simplex")]
    NotSimplicial(Vec<String>),
    #[error("perversity covers codimensions up to {have}, filtration needs {need}")]
    PerversityDomainError { have: usize, need: usize },
    #[error("invalid perversity: {0}")]
    InvalidPerversity(String),
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("map is not placid: {0}")]
    NotPlacid(String),
    #[error("action is not simplicial: {0}")]
    NotSimplicialAction(String),
    #[error("bad group: {0}")]
    BadGroup(String),
    #[error("action is not regular")]
    NotRegular,
    #[error("unknown group element {0}")]
    BadElement(String),
    #[error("complex is not oriented")]
    NotOriented,
    #[error("not a ramified covering: {0}")]
    NotRamified(String),
    #[error("degree {degree} is above the stability bound {bound}")]
    OutOfRange { degree: usize, bound: usize },
    #[error("middle intersection form unavailable: {0}")]
    FormUnavailable(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("representation does not preserve the form (element {0})")]
    NotInvariant(String),
    #[error("bad representation: {0}")]
    BadRep(String),
    #[error(
        "restricted pushforward on invariants is not invertible in degree {degree}: \
         invariants {invariants}, target {target}, rank {rank}"
    )]
    InvariantsIsoFailure { degree: usize, invariants: usize, target: usize, rank: usize },
    #[error("numerical degeneracy: {0}")]
    Degenerate(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn not_a_simplex(k: &crate::complex::SimplicialComplex, s: &Simplex) -> Self {
        Error::NotASimplex(k.labels_of(s))
    }
}
