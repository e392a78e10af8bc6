//! Documentation-diagram engine for codebases.
//!
//! A codebase is described as an [`EntityGraph`]: entities (solutions,
//! projects, namespaces, types, members, parameters) connected by named
//! relations. On top of the graph the engine computes glyphs for every node,
//! lays the diagram out with a radial tidy tree refined by a force
//! simulation, evaluates search filters, and drives an interactive
//! exploration session.

pub mod api;
pub mod config;
pub mod extractor;
pub mod filter;
pub mod glyph;
pub mod graph;
pub mod interchange;
pub mod layout;
pub mod model;
mod par;
pub mod session;
pub mod synthetic;

pub use par::Execution;
pub use graph::{DiagnosticRollup, EntityGraph, GraphMetadata, MemberCounts, QueryError, Violation};
pub use model::{
    Accessibility, Diagnostic, DocComment, Entity, EntityId, EntityKind, MethodKind, Modifiers,
    Relation, RelationName, Severity, TypeKind,
};
