//! Test oracles for helgraph.
//!
//! Everything here is written against the raw entity and relation lists, so
//! the engine's own indices and precomputed tables are never consulted.

pub mod gen;
pub mod glyph;
pub mod layout;
pub mod mutation;
pub mod reference;
pub mod session_model;

pub use gen::{random_graph, random_query, GraphShape, RandomQuery};
pub use reference::Reference;
