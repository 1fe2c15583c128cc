use thiserror::Error;

/// Why a pushout complement does not exist.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GluingFailure {
    /// The match sends a deleted item and another item to the same place.
    #[error("identification: {kind} `{item}` is deleted but shares its image `{image}` with `{other}`")]
    Identification {
        kind: ItemKind,
        item: String,
        other: String,
        image: String,
    },
    /// A deleted node keeps an incident edge that the rule does not delete.
    #[error("dangling: deleting node `{node}` would leave edge `{edge}` dangling")]
    Dangling { node: String, edge: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemKind {
    Node,
    Edge,
}

impl std::fmt::Display for ItemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ItemKind::Node => f.write_str("node"),
            ItemKind::Edge => f.write_str("edge"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("invalid rule `{rule}`: {reason}")]
    InvalidRule { rule: String, reason: String },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("codomain mismatch: {0}")]
    CodomainMismatch(String),
    #[error("empty diagram: {0}")]
    EmptyDiagram(&'static str),
    #[error("arity mismatch: expected {expected} morphisms, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("left square does not commute (f∘k ≠ m∘l)")]
    SquareMismatch,
    #[error("gluing condition violated: {0}")]
    Gluing(#[from] GluingFailure),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("transformations {a} and {b} are not parallel coherent: {item} has no preimage")]
    Incoherent { a: usize, b: usize, item: String },
    #[error("not independent: {0}")]
    NotIndependent(String),
    #[error("reconstruction failed: {0}")]
    Reconstruction(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
