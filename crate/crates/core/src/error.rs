use thiserror::Error;

/// Errors raised by category validation, coefficient construction and
/// (co)homology computations.
///
/// Variants carry names (of objects, morphisms, simplices) so diagnostics
/// can point at the offending data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // ---- categories ----
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("object `{object}` has no identity: candidate `{candidate}` fails against `{witness}`")]
    MissingIdentity {
        object: String,
        candidate: String,
        witness: String,
    },
    #[error("composition is not associative on ({h}, {g}, {f})")]
    NonAssociative { h: String, g: String, f: String },
    #[error("composition table entry {g} . {f} = {composite} has mismatched domains")]
    CompositionDomainMismatch {
        g: String,
        f: String,
        composite: String,
    },
    #[error("composable pair {g} . {f} has no composite")]
    MissingComposite { g: String, f: String },
    #[error("composite {g} . {f} is given twice with different values")]
    ConflictingComposite { g: String, f: String },
    #[error("relation is not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("table is not a monoid: {0}")]
    NotAMonoid(String),
    #[error("object `{0}` is not in the target category")]
    ObjectNotInTarget(String),
    #[error("not a functor: {0}")]
    NotAFunctor(String),

    // ---- exact algebra ----
    #[error("degree {degree} outside complex range 0..={top}")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("diagram is not functorial: {0}")]
    NonFunctorialDiagram(String),
    #[error("matrix dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("entry `{0}` is not exact in the requested ring")]
    NotInRing(String),

    // ---- simplices ----
    #[error("map {0:?} is not order preserving")]
    NotOrderPreserving(Vec<usize>),
    #[error("invalid simplex morphism: {0}")]
    InvalidSimplexMorphism(String),
    #[error("not a composable chain: {0}")]
    NotAChain(String),

    // ---- coefficients ----
    #[error("coefficient data is not functorial: {0}")]
    NonFunctorialData(String),
    #[error("localization sends `{0}` to a non-isomorphism")]
    NotALocalization(String),
    #[error("truncated tables incomplete: {0}")]
    IncompleteTables(String),
    #[error("coface relation ({i},{j}) fails on simplex {simplex}")]
    CofaceRelationViolation { simplex: String, i: usize, j: usize },
    #[error("simplex of dimension {dim} is beyond truncation {max_dim}")]
    BeyondTruncation { dim: usize, max_dim: usize },
    #[error("truncated system has no data for non-injective map {0:?}")]
    MissingDegeneracyData(Vec<usize>),
    #[error("variance mismatch: expected {expected}")]
    VarianceMismatch { expected: &'static str },
    #[error("coefficient systems live on different categories")]
    BaseMismatch,

    // ---- complexes ----
    #[error("normalization needs pulled-back coefficients on a Thomason complex")]
    UnsupportedProvenance,
    #[error("naturality fails on {0}")]
    NaturalityViolation(String),

    // ---- Kan extensions and fibrations ----
    #[error("unsupported coefficient kind: {0}")]
    UnsupportedCoefficientKind(String),
    #[error("computation needs rational coefficients: {0}")]
    RingUnsupported(String),
    #[error("pseudofunctor is not strict: {0}")]
    NonStrictFunctor(String),
    #[error("fiberwise coefficients must be constant or pulled back from the base: {0}")]
    UnsupportedCoefficientShape(String),

    // ---- input ----
    #[error("malformed input: {0}")]
    Parse(String),

    /// A broken internal invariant (d∘d ≠ 0, SNF postcondition, ...). Always a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Short machine-readable variant name, used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownName(_) => "UnknownName",
            Error::DuplicateName(_) => "DuplicateName",
            Error::MissingIdentity { .. } => "MissingIdentity",
            Error::NonAssociative { .. } => "NonAssociative",
            Error::CompositionDomainMismatch { .. } => "CompositionDomainMismatch",
            Error::MissingComposite { .. } => "MissingComposite",
            Error::ConflictingComposite { .. } => "ConflictingComposite",
            Error::NotAPartialOrder(_) => "NotAPartialOrder",
            Error::NotAMonoid(_) => "NotAMonoid",
            Error::ObjectNotInTarget(_) => "ObjectNotInTarget",
            Error::NotAFunctor(_) => "NotAFunctor",
            Error::DegreeOutOfRange { .. } => "DegreeOutOfRange",
            Error::NonFunctorialDiagram(_) => "NonFunctorialDiagram",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotInRing(_) => "NotInRing",
            Error::NotOrderPreserving(_) => "NotOrderPreserving",
            Error::InvalidSimplexMorphism(_) => "InvalidSimplexMorphism",
            Error::NotAChain(_) => "NotAChain",
            Error::NonFunctorialData(_) => "NonFunctorialData",
            Error::NotALocalization(_) => "NotALocalization",
            Error::IncompleteTables(_) => "IncompleteTables",
            Error::CofaceRelationViolation { .. } => "CofaceRelationViolation",
            Error::BeyondTruncation { .. } => "BeyondTruncation",
            Error::MissingDegeneracyData(_) => "MissingDegeneracyData",
            Error::VarianceMismatch { .. } => "VarianceMismatch",
            Error::BaseMismatch => "BaseMismatch",
            Error::UnsupportedProvenance => "UnsupportedProvenance",
            Error::NaturalityViolation(_) => "NaturalityViolation",
            Error::UnsupportedCoefficientKind(_) => "UnsupportedCoefficientKind",
            Error::RingUnsupported(_) => "RingUnsupported",
            Error::NonStrictFunctor(_) => "NonStrictFunctor",
            Error::UnsupportedCoefficientShape(_) => "UnsupportedCoefficientShape",
            Error::Parse(_) => "Parse",
            Error::Internal(_) => "Internal",
        }
    }

    /// True for errors that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
