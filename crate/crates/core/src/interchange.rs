//! The `.helgraph.json` interchange format.
//!
//! A document is a UTF-8 JSON object:
//!
//! ```json
//! {
//!   "formatVersion": "1.0",
//!   "metadata": { "label": "..." },
//!   "entities": [ { "id": "...", "name": "...", "kind": "type", ... } ],
//!   "relations": { "declares": [["source", "target"], ...], ... }
//! }
//! ```
//!
//! The writer emits the canonical form: entities sorted by id, relation keys
//! in a fixed order, each pair list sorted by (source, target), empty
//! relations omitted, two-space indentation and a trailing newline. The
//! reader accepts any key order and whitespace.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::graph::{EntityGraph, GraphMetadata, Violation, FORMAT_VERSION};
use crate::model::{Entity, EntityId, Relation, RelationName};

pub const FILE_EXTENSION: &str = ".helgraph.json";

#[derive(Debug, Error)]
pub enum InterchangeError {
    #[error("malformed document at line {line}, column {column}: {message}")]
    MalformedDocument {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format version `{0}`")]
    UnsupportedVersion(String),
    #[error(transparent)]
    Invalid(#[from] Violation),
}

impl From<serde_json::Error> for InterchangeError {
    fn from(e: serde_json::Error) -> Self {
        InterchangeError::MalformedDocument {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentMetadata {
    #[serde(default)]
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InterchangeDocument {
    pub format_version: String,
    pub metadata: DocumentMetadata,
    pub entities: Vec<Entity>,
    #[serde(default, deserialize_with = "unique_relations")]
    pub relations: BTreeMap<RelationName, Vec<(EntityId, EntityId)>>,
}

impl InterchangeDocument {
    pub fn from_graph(graph: &EntityGraph) -> Self {
        let relations = RelationName::ALL
            .into_iter()
            .filter(|&r| !graph.edges(r).is_empty())
            .map(|r| {
                let pairs = graph
                    .edge_ids(r)
                    .map(|(a, b)| (a.clone(), b.clone()))
                    .collect();
                (r, pairs)
            })
            .collect();
        Self {
            format_version: FORMAT_VERSION.to_owned(),
            metadata: DocumentMetadata {
                label: graph.label().to_owned(),
            },
            entities: graph.entities().to_vec(),
            relations,
        }
    }

    pub fn into_graph(self) -> Result<EntityGraph, InterchangeError> {
        if self.format_version != FORMAT_VERSION {
            return Err(InterchangeError::UnsupportedVersion(self.format_version));
        }
        let relations = self
            .relations
            .into_iter()
            .map(|(name, edges)| Relation { name, edges })
            .collect();
        let metadata = GraphMetadata {
            label: self.metadata.label,
            format_version: self.format_version,
        };
        Ok(EntityGraph::build_with_metadata(
            metadata,
            self.entities,
            relations,
        )?)
    }
}

type RelationMap = BTreeMap<RelationName, Vec<(EntityId, EntityId)>>;

fn unique_relations<'de, D>(deserializer: D) -> Result<RelationMap, D::Error>
where
    D: Deserializer<'de>,
{
    struct UniqueKeys;

    impl<'de> Visitor<'de> for UniqueKeys {
        type Value = BTreeMap<RelationName, Vec<(EntityId, EntityId)>>;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a map from relation name to [source, target] pairs")
        }

        fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
            let mut out = BTreeMap::new();
            while let Some((key, value)) = map.next_entry::<RelationName, Vec<(EntityId, EntityId)>>()? {
                if out.insert(key, value).is_some() {
                    return Err(serde::de::Error::custom(format!(
                        "duplicate relation `{key}`"
                    )));
                }
            }
            Ok(out)
        }
    }

    deserializer.deserialize_map(UniqueKeys)
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct VersionProbe {
    format_version: String,
}

/// Decodes a document and builds its graph.
pub fn parse(bytes: &[u8]) -> Result<EntityGraph, InterchangeError> {
    parse_document(bytes)?.into_graph()
}

/// Decodes a document without building the graph.
pub fn parse_document(bytes: &[u8]) -> Result<InterchangeDocument, InterchangeError> {
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    // Check the version first so a future document is reported as such rather
    // than as whatever schema change it happens to trip over.
    let probe: VersionProbe = serde_json::from_slice(bytes)?;
    if probe.format_version != FORMAT_VERSION {
        return Err(InterchangeError::UnsupportedVersion(probe.format_version));
    }
    Ok(serde_json::from_slice(bytes)?)
}

/// Canonical bytes of a graph.
pub fn write(graph: &EntityGraph) -> Vec<u8> {
    let doc = InterchangeDocument::from_graph(graph);
    let mut out = serde_json::to_vec_pretty(&doc).expect("documents always serialize");
    out.push(b'\n');
    out
}

/// `write(parse(bytes))`.
pub fn canonicalize(bytes: &[u8]) -> Result<Vec<u8>, InterchangeError> {
    parse(bytes).map(|g| write(&g))
}
