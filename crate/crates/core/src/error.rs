use alloc::string::String;
use core::fmt;

/// A violation of the weakening law `x <= x' r y' <= y  =>  x r y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakeningWitness {
    pub x: String,
    pub x_above: String,
    pub y_below: String,
    pub y: String,
}

impl fmt::Display for WeakeningWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} <= {} r {} <= {} but ({}, {}) is missing",
            self.x, self.x_above, self.y_below, self.y, self.x, self.y
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("antisymmetry violated: `{0}` and `{1}` are mutually below each other")]
    AntisymmetryViolation(String, String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("structure has {size} elements, the cap is {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("relation is not weakening-closed: {0}")]
    NotWeakeningClosed(WeakeningWitness),
    #[error("source/target mismatch: {0}")]
    SourceTargetMismatch(String),
    #[error("map is not monotone: {0} <= {1} but their images are not ordered")]
    NotMonotone(String, String),
    #[error("not an open map: the image of the down-set {0} is not a down-set")]
    NotOpenMap(String),
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("lattice is not distributive at ({0}, {1}, {2})")]
    NotDistributive(String, String, String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("table has {got} entries, expected {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("not a hemimorphism: {0}")]
    NotHemimorphism(String),
    #[error("not a lattice homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("not a bimorphism: {0}")]
    NotBimorphism(String),
    #[error("malformed filter encoding: {0}")]
    EncodingError(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("not a monad morphism: {0}")]
    NotAMonadMorphism(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
