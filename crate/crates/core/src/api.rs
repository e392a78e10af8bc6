//! Operation contract shared by the HTTP server and the in-process module.
//!
//! Every client call is a [`Command`]; [`execute`] applies it to a session
//! and returns the JSON response body. Transports only translate routes and
//! status codes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::config::EngineConfig;
use crate::filter::{parse_query, FilterMode, QueryInput};
use crate::graph::EntityGraph;
use crate::layout::Point;
use crate::model::{EntityId, EntityKind, RelationName};
use crate::session::{DiagramSession, PresetId, SessionError, SessionState};

/// Summary served at startup so a viewer can size its panels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphMeta {
    pub label: String,
    pub format_version: String,
    pub entity_count: usize,
    pub kinds: BTreeMap<EntityKind, usize>,
    pub relations: BTreeMap<RelationName, usize>,
    pub roots: Vec<EntityId>,
    pub presets: Vec<PresetId>,
}

impl GraphMeta {
    pub fn of(graph: &EntityGraph) -> Self {
        let mut kinds = BTreeMap::new();
        for e in graph.entities() {
            *kinds.entry(e.kind).or_insert(0) += 1;
        }
        Self {
            label: graph.label().to_owned(),
            format_version: graph.metadata().format_version.clone(),
            entity_count: graph.len(),
            kinds,
            relations: RelationName::ALL.into_iter().map(|r| (r, graph.edges(r).len())).collect(),
            roots: graph.roots().iter().map(|&ix| graph.id_at(ix).clone()).collect(),
            presets: PresetId::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdRequest {
    pub id: EntityId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetRequest {
    pub preset: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveRequest {
    pub id: EntityId,
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub pin: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SelectRequest {
    #[serde(default)]
    pub id: Option<EntityId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterRequest {
    pub query: QueryInput,
    #[serde(default)]
    pub mode: FilterMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationToggle {
    pub relation: RelationName,
    pub visible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterResponse {
    pub matches: BTreeSet<EntityId>,
    pub state: SessionState,
}

/// One client call. The wire form is the request body with an `op` tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "camelCase")]
pub enum Command {
    Meta,
    State,
    Inspect(IdRequest),
    Expand(IdRequest),
    Collapse(IdRequest),
    Remove(IdRequest),
    Refresh,
    Preset(PresetRequest),
    Move(MoveRequest),
    Select(SelectRequest),
    Filter(FilterRequest),
    ClearHighlight,
    Layout,
    Glyphs {
        #[serde(default)]
        ids: Option<Vec<EntityId>>,
    },
    GetConfig,
    SetConfig {
        config: Box<EngineConfig>,
    },
    SetRelation(RelationToggle),
}

impl Command {
    /// Whether the command can change positions.
    pub fn moves_nodes(&self) -> bool {
        matches!(
            self,
            Self::Expand(_)
                | Self::Collapse(_)
                | Self::Remove(_)
                | Self::Refresh
                | Self::Preset(_)
                | Self::Move(_)
                | Self::Filter(FilterRequest { mode: FilterMode::Isolate, .. })
        )
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApiError {
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error("bad request: {0}")]
    BadRequest(String),
}

impl ApiError {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Session(e) => e.kind(),
            Self::BadRequest(_) => "BadRequest",
        }
    }

    /// `{"error": {"kind": ..., "message": ...}}`
    pub fn to_json(&self) -> Value {
        serde_json::json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

fn json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("api types serialize")
}

/// Applies `cmd` and returns the response body. State-changing commands
/// answer with the new [`SessionState`].
pub fn execute(session: &mut DiagramSession, cmd: Command) -> Result<Value, ApiError> {
    let state = |s: &DiagramSession| json(&s.state());
    match cmd {
        Command::Meta => Ok(json(&GraphMeta::of(session.graph()))),
        Command::State => Ok(state(session)),
        Command::Inspect(r) => Ok(json(&session.inspect(&r.id)?)),
        Command::Expand(r) => {
            session.expand(&r.id)?;
            Ok(state(session))
        }
        Command::Collapse(r) => {
            session.collapse(&r.id)?;
            Ok(state(session))
        }
        Command::Remove(r) => {
            session.remove_subtree(&r.id)?;
            Ok(state(session))
        }
        Command::Refresh => {
            session.refresh();
            Ok(state(session))
        }
        Command::Preset(r) => {
            session.apply_preset(&r.preset)?;
            Ok(state(session))
        }
        Command::Move(r) => {
            session.move_node(&r.id, Point::new(r.x, r.y), r.pin)?;
            Ok(state(session))
        }
        Command::Select(r) => {
            session.select(r.id.as_ref())?;
            Ok(state(session))
        }
        Command::Filter(r) => {
            let query = parse_query(r.query).map_err(SessionError::from)?;
            let matches = session.apply_filter(&query, r.mode);
            Ok(json(&FilterResponse { matches, state: session.state() }))
        }
        Command::ClearHighlight => {
            session.clear_highlight();
            Ok(state(session))
        }
        Command::Layout => Ok(json(&session.snapshot())),
        Command::Glyphs { ids } => {
            let exec = session.config().layout.force.execution;
            Ok(json(&session.glyphs(ids.as_deref(), exec)?))
        }
        Command::GetConfig => Ok(json(session.config())),
        Command::SetConfig { config } => {
            session.set_config(*config);
            Ok(json(session.config()))
        }
        Command::SetRelation(r) => {
            session.set_relation_visibility(r.relation, r.visible);
            Ok(state(session))
        }
    }
}

/// Parses a tagged JSON command and executes it; errors are returned in
/// the `{"error": ...}` envelope so callers always get a JSON body.
pub fn execute_json(session: &mut DiagramSession, request: &str) -> Value {
    let result = serde_json::from_str::<Command>(request)
        .map_err(|e| ApiError::BadRequest(e.to_string()))
        .and_then(|cmd| execute(session, cmd));
    result.unwrap_or_else(|e| e.to_json())
}
