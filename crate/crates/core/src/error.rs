use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group order exceeds the cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("permutation degree {found} does not match expected degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("not a permutation: {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("element set is not a subgroup")]
    NotSubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("map is not a homomorphism (witness pair {0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("map is not equivariant (element {element}, point {point})")]
    NotEquivariant { element: usize, point: usize },
    #[error("map is not surjective")]
    NotSurjective,
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("cocycle violation: ({g_outer} * {g_inner}) at point {point}")]
    CocycleViolation { g_outer: usize, g_inner: usize, point: usize },
    #[error("translation by generator {generator} at point {point} is not invertible")]
    NonInvertibleTranslation { generator: usize, point: usize },
    #[error("module is not a representation of the stabilizer of point {point}")]
    WrongStabilizer { point: usize },
    #[error("point set is not invariant under the group action")]
    NotInvariant,
    #[error("resolution did not terminate within {0} steps")]
    MaxLenExceeded(usize),
    #[error("invalid structure map at level {level}, point {point}: {reason}")]
    InvalidStructureMap { level: usize, point: usize, reason: String },
    #[error("base space is not a space of subgroups")]
    WrongBase,
    #[error("module is not fixed by the subgroup at point {point}")]
    NotKFixed { point: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
