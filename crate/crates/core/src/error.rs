use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("radicand {0} is not a squarefree integer >= 2")]
    BadRadicand(u64),
    #[error("cannot combine sqrt({left}) with sqrt({right})")]
    FieldMix { left: u64, right: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {input:?}: {message}")]
    Parse { input: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ambient dimension {0} is not a positive even number")]
    OddDimension(usize),
    #[error("vector {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),
    #[error("omega(w1, w4) = {0}, expected 0")]
    NotOrthogonal(i64),
    #[error("vector {0:?} does not lie in the orthogonal of the quotient vector")]
    NotInComplement(Vec<i64>),
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("the restricted form is not unimodular (determinant {0})")]
    NotSymplectic(String),
    #[error("matrix does not preserve the symplectic form")]
    NotSymplecticMatrix,
    #[error("vector {0:?} is not in the lattice")]
    NotInLattice(Vec<i64>),
    #[error("scaling factor must be nonzero")]
    ZeroScale,
    #[error("integer overflow: entry does not fit in 64 bits")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeriodError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("expected {expected} period values, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("genus must be at least 1")]
    ZeroGenus,
    #[error("volume is not positive")]
    ZeroVolume,
    #[error("transformation is singular")]
    SingularTransform,
    #[error("internal consistency check failed: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Period(#[from] PeriodError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("volume is not positive")]
    ZeroVolume,
    #[error("p(a) = 0")]
    ZeroPeriod,
    #[error("interval ({eps1}, {eps2}) is empty")]
    EmptyInterval { eps1: String, eps2: String },
    #[error("Euclidean reduction exceeded {iterations} iterations ({generators} generators left, smallest {smallest})")]
    BudgetExceeded { iterations: u64, generators: usize, smallest: String },
    #[error("genus {0} is too small for this operation")]
    GenusTooSmall(usize),
    #[error("the character is not Haupt")]
    NotHaupt,
    #[error("the module is neither cyclic primitive nor symplectic of admissible rank")]
    BadModule,
    #[error("the character is not injective")]
    NotInjective,
    #[error("the kernel is trivial")]
    EmptyKernel,
    #[error("search box exceeds {max} vectors")]
    SearchTooLarge { max: u64 },
    #[error("internal consistency check failed: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HurwitzError {
    #[error("not a permutation: {0:?}")]
    BadPermutation(Vec<usize>),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("tau {index} is not a transposition")]
    NotTransposition { index: usize },
    #[error("commutator of sigma_h and sigma_v differs from the product of the taus")]
    RelationFails,
    #[error("generated group is not transitive: orbit of 1 is {orbit:?}")]
    NotTransitive { orbit: Vec<usize> },
    #[error("branch count {0} is odd")]
    OddBranchCount(usize),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("degree {d} exceeds the bound {max}")]
    DegreeTooLarge { d: usize, max: usize },
    #[error("genus {g} is outside the supported range")]
    GenusOutOfRange { g: usize },
    #[error("omega(alpha, beta) = {0} is not positive")]
    NonPositivePairing(i64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("internal consistency check failed: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("state violates a guard: {0}")]
    Precondition(String),
    #[error("|a x_{index} + b| is below the guard")]
    SingularDenominator { index: usize },
    #[error("guard tripped at step {step}: {reason}")]
    GuardTripped { step: usize, reason: String },
    #[error("quadrature on cycle {cycle} changed by {change:e} under refinement")]
    QuadratureDivergence { cycle: usize, change: f64 },
    #[error("step size must be positive and the horizon non-negative")]
    BadStep,
    #[error("could not determine the intersection pattern of the cycle basis")]
    CycleBasis,
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("{pointer}: {source}")]
    FieldMix { pointer: String, source: ScalarError },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Period(#[from] PeriodError),
    #[error(transparent)]
    Hurwitz(#[from] HurwitzError),
}

impl InputError {
    pub(crate) fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        InputError::Schema { pointer: pointer.into(), message: message.into() }
    }
}
