use thiserror::Error;

/// Everything that can go wrong in the library. Variants map onto the
/// domain errors of each operation; the CLI turns any of them into exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("zero ideal")]
    ZeroIdeal,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("both arguments are zero")]
    BothZero,
    #[error("objects live over different fields")]
    FieldMismatch,

    #[error("constant term of phi_T is not T")]
    BadConstantTerm,
    #[error("phi_T has tau-degree zero")]
    RankZero,
    #[error("operation requires a rank-two module, got rank {0}")]
    NotRankTwo(usize),
    #[error("automatic root search is not available over this field: {0}")]
    UnsupportedField(String),
    #[error("descent cocycle violates {0}")]
    CocycleViolation(String),
    #[error("Galois group is not cyclic")]
    NonCyclicGroup,

    #[error("mu does not intertwine source and target")]
    NotIntertwining,
    #[error("isogeny has zero constant term (inseparable)")]
    Inseparable,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("kernel structure error: {0}")]
    StructureError(String),
    #[error("right division is not exact")]
    DivisionInexact,
    #[error("isogeny chain mismatch: target of the first is not the source of the second")]
    ChainMismatch,
    #[error("isogeny is not primitive")]
    NotPrimitive,
    #[error("isogeny is not cyclic")]
    NotCyclic,
    #[error("degree is not a power of a single prime")]
    NotPrimePower,
    #[error("some conjugate of mu is not an F_q^x-multiple of mu")]
    NotScalarConjugate,
    #[error("non-CM certificate missing or insufficient: {0}")]
    Certificate(String),
    #[error("module has endomorphisms beyond F_q[T] up to tau-degree {0}")]
    ComplexMultiplication(usize),
    #[error("search cancelled")]
    Cancelled,

    #[error("metric is not a tree metric: {0}")]
    NotTreeMetric(String),
    #[error("metric is not invariant under the group action: {0}")]
    NotGInvariant(String),
    #[error("metric matrix is not symmetric with zero diagonal")]
    AsymmetricMatrix,
    #[error("malformed orbit datum: {0}")]
    BadOrbit(String),
    #[error("missing isogeny between labels {0} and {1}")]
    MissingIsogeny(usize, usize),
    #[error("orbit is not closed under the group action: {0}")]
    OrbitNotClosed(String),
    #[error("center is not realizable from the provided isogenies: {0}")]
    NotRealizable(String),

    #[error("Atkin-Lehner elements have different ambient levels")]
    AmbientMismatch,
    #[error("invalid Atkin-Lehner divisor: {0}")]
    BadAtkinLehner(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("even characteristic is not supported here")]
    EvenCharacteristicUnsupported,
    #[error("orbit is not stable under the Galois action")]
    NotGStable,
    #[error("induced map is not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
