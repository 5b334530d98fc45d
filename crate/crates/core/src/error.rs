use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the engine. Verification routines report violations
/// through [`crate::report::Report`] instead.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported specialization: {0}")]
    UnsupportedSpecialization(String),
    #[error("specialization hits a pole: {0}")]
    SpecializationPole(String),
    #[error("operands belong to different algebras: {0} vs {1}")]
    MixedAlgebras(String, String),
    #[error("generator `{0}` does not belong to {1}")]
    UnknownGenerator(String, String),
    #[error("derivative order exceeded: cannot differentiate {0}")]
    DerivationOrderExceeded(String),
    #[error("relation violated: {0}")]
    RelationViolation(String),
    #[error("element is not invertible in-engine: {0}")]
    UnsupportedInversion(String),
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("calculus is not free: {0}")]
    NotFree(String),
    #[error("psi is not a Lie algebra homomorphism: {0}")]
    NotLieHom(String),
    #[error("psi is not compatible with phi: {0}")]
    NotCompatible(String),
    #[error("module map is ambiguous: {0}")]
    AmbiguousModuleMap(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("map is not invertible: {0}")]
    NotInvertible(String),
    #[error("derivation is not in the span of the basis: {0}")]
    NotInBasisSpan(String),
    #[error("metric is not hermitian: {0}")]
    NotHermitian(String),
    #[error("not a complement of the tangential submodule: {0}")]
    NotComplement(String),
    #[error("complement is not orthogonal: {0}")]
    NotOrthogonal(String),
    #[error("algebra map is not certified surjective: {0}")]
    NotSurjective(String),
    #[error("gram matrix is singular: {0}")]
    GramSingular(String),
    #[error("module element is not tangential: {0}")]
    NotTangential(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}
