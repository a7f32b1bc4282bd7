use thiserror::Error;

/// Structural problems found while assembling tables, before any axiom is checked.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("dangling id `{id}` in {context}")]
    DanglingId { id: String, context: String },
    #[error("no {table} entry for `{id}`")]
    MissingEntry { table: &'static str, id: String },
    #[error("malformed tables: {0}")]
    Shape(String),
}

/// Errors raised by the constructions and decision procedures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("not an action: {0}")]
    NotAnAction(String),
    #[error("map is not surjective; uncovered: {}", .0.join(", "))]
    NotSurjective(Vec<String>),
    #[error("functors do not share a codomain")]
    CodomainMismatch,
    #[error("bibundles do not share the middle groupoid")]
    MiddleGroupoidMismatch,
    #[error("bundle and bibundle act through different groupoids")]
    GroupoidMismatch,
    #[error("bibundle is not biprincipal")]
    NotBiprincipal,
    #[error("no global section over base point `{0}`")]
    NoSection(String),
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("validation failed:\n{0}")]
    Validation(crate::report::Report),
    #[error(transparent)]
    Format(#[from] crate::format::FormatError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    InFile { path: String, source: Box<Error> },
    #[error("reconstructed groupoid is isomorphic to the target, but not through the canonical map")]
    ReconstructionMismatch,
    #[error("reconstructed groupoid is not isomorphic to the target")]
    NoIsomorphism,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
