use std::path::PathBuf;

use thiserror::Error;

use crate::terminology::ConceptId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: u64,
        message: String,
    },

    /// Relationship or anchor rows pointing at concepts the graph does not hold.
    #[error("unknown concept ids referenced: {}", join_ids(.ids))]
    DanglingReference { ids: Vec<ConceptId> },

    #[error("unresolved reference in {context}: {reference}")]
    UnresolvedReference { context: String, reference: String },

    #[error("cycle on the {axis} axis: {}", .cycle.join(" -> "))]
    Cycle { axis: String, cycle: Vec<String> },

    #[error("concept id {0} is not strictly positive")]
    InvalidId(ConceptId),

    #[error("ontology invariant violated: {0}")]
    Invariant(String),

    #[error("concept {0} not found")]
    ConceptNotFound(ConceptId),

    #[error("VCM concept '{0}' not found")]
    VcmConceptNotFound(String),

    #[error("unknown primitive {0}")]
    UnknownPrimitive(String),

    #[error("ontology file defines no primitives or concepts")]
    EmptyOntology,

    #[error("duplicate entry: {0}")]
    Duplicate(String),

    #[error("override for concept {concept} must reference a VCM concept with exactly one pictogram, '{vcm}' has {count}")]
    InvalidOverride {
        concept: ConceptId,
        vcm: String,
        count: usize,
    },

    #[error("{count} distinct shape modifiers exceed the assembly limit of {max}")]
    ModifierOverflow { count: usize, max: usize },

    #[error("malformed icon code '{code}': {reason}")]
    IconCode { code: String, reason: String },
}

impl Error {
    pub(crate) fn parse(file: impl Into<String>, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            file: file.into(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

fn join_ids(ids: &[ConceptId]) -> String {
    ids.iter().map(|id| id.to_string()).collect::<Vec<_>>().join(", ")
}
