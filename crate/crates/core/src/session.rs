//! Interactive exploration state over one graph.
//!
//! A node is visible iff it is not removed and every `declares` ancestor is
//! expanded. Operations that change which nodes are shown, or where they
//! are, finish with exactly one auto-layout run; selection, highlighting and
//! queries never touch the layout.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::EngineConfig;
use crate::filter::{evaluate_query, FilterError, FilterMode, FilterQuery};
use crate::glyph::{GlyphSpec, GlyphStyle, ViewState};
use crate::graph::{EntityGraph, MemberCounts};
use crate::layout::{
    run_auto_layout_observed, tidy_tree_layout, LayoutEdges, LayoutError, LayoutSnapshot,
    LayoutState, Point,
};
use crate::model::{Diagnostic, DocComment, Entity, EntityId, EntityKind, RelationName, TypeKind};
use crate::par::Execution;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("unknown entity `{0}`")]
    UnknownId(EntityId),
    #[error("`{0}` is not visible")]
    NotVisible(EntityId),
    #[error("`{0}` has no children")]
    NoChildren(EntityId),
    #[error("`{0}` is not expanded")]
    NotExpanded(EntityId),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

impl SessionError {
    /// Stable machine-readable name of the failure.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::UnknownId(_) => "UnknownId",
            Self::NotVisible(_) => "NotVisible",
            Self::NoChildren(_) => "NoChildren",
            Self::NotExpanded(_) => "NotExpanded",
            Self::UnknownPreset(_) => "UnknownPreset",
            Self::Filter(_) => "InvalidQuery",
            Self::Layout(_) => "Layout",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum PresetId {
    #[default]
    Default,
    AllTypes,
    ProjectDependencies,
    BirdsEye,
}

impl PresetId {
    pub const ALL: [PresetId; 4] =
        [Self::Default, Self::AllTypes, Self::ProjectDependencies, Self::BirdsEye];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Default => "default",
            Self::AllTypes => "allTypes",
            Self::ProjectDependencies => "projectDependencies",
            Self::BirdsEye => "birdsEye",
        }
    }
}

impl FromStr for PresetId {
    type Err = SessionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| SessionError::UnknownPreset(s.to_owned()))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Neighbors {
    pub outgoing: Vec<EntityId>,
    pub incoming: Vec<EntityId>,
}

/// Everything the side panel shows about one entity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InspectPayload {
    pub entity: Entity,
    pub declaration: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comment: Option<DocComment>,
    pub diagnostics: Vec<Diagnostic>,
    pub glyph: GlyphSpec,
    pub visible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parent: Option<EntityId>,
    pub children: Vec<EntityId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub member_counts: Option<MemberCounts>,
    pub neighbors: BTreeMap<RelationName, Neighbors>,
}

/// Source-like declaration line, e.g. `public sealed class Foo : Bar`.
pub fn declaration(graph: &EntityGraph, ix: usize) -> String {
    let e = graph.entity_at(ix);
    let keyword = match e.kind {
        EntityKind::Solution | EntityKind::Project | EntityKind::Package => {
            return e.name.clone();
        }
        EntityKind::Namespace => return format!("namespace {}", e.name),
        EntityKind::Type => match e.type_kind.unwrap_or(TypeKind::Class) {
            TypeKind::Class => "class",
            TypeKind::Struct => "struct",
            TypeKind::Enum => "enum",
            TypeKind::Interface => "interface",
            TypeKind::Delegate => "delegate",
        },
        other => other.as_str(),
    };
    let mut words: Vec<&str> = Vec::new();
    if let Some(a) = e.accessibility {
        words.push(a.keyword());
    }
    if e.modifiers.is_static {
        words.push("static");
    } else if e.modifiers.is_abstract {
        words.push("abstract");
    } else if e.modifiers.is_sealed {
        words.push("sealed");
    }
    if e.is_record {
        words.push("record");
    }
    words.push(keyword);
    words.push(&e.name);
    let mut line = words.join(" ");
    let bases: Vec<&str> = graph
        .edges(RelationName::InheritsFrom)
        .iter()
        .filter(|&&(from, _)| from == ix)
        .map(|&(_, to)| graph.entity_at(to).name.as_str())
        .collect();
    if !bases.is_empty() {
        line.push_str(" : ");
        line.push_str(&bases.join(", "));
    }
    line
}

type Observer = Box<dyn FnMut(&LayoutState) + Send>;

pub struct DiagramSession {
    graph: Arc<EntityGraph>,
    config: EngineConfig,
    style: GlyphStyle,
    expanded: Vec<bool>,
    removed: Vec<bool>,
    dimmed: Vec<bool>,
    visible: Vec<bool>,
    selection: Option<usize>,
    layout: LayoutState,
    active_preset: PresetId,
    relation_visibility: BTreeMap<RelationName, bool>,
    layout_runs: u64,
    observer: Option<Observer>,
}

impl std::fmt::Debug for DiagramSession {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DiagramSession")
            .field("graph", &self.graph.label())
            .field("visible", &self.visible_ids().len())
            .field("active_preset", &self.active_preset)
            .field("layout_runs", &self.layout_runs)
            .finish_non_exhaustive()
    }
}

impl DiagramSession {
    /// Solutions start expanded, so the initial view shows every solution
    /// and its direct children.
    pub fn new(graph: Arc<EntityGraph>, config: EngineConfig) -> Self {
        Self::with_observer(graph, config, None)
    }

    /// Like [`DiagramSession::new`], with a callback invoked after every
    /// layout iteration, including those of the initial run.
    pub fn with_observer(
        graph: Arc<EntityGraph>,
        config: EngineConfig,
        observer: Option<Observer>,
    ) -> Self {
        let n = graph.len();
        let mut s = Self {
            style: config.glyph_style(),
            relation_visibility: config.relation_visibility(),
            config,
            expanded: vec![false; n],
            removed: vec![false; n],
            dimmed: vec![false; n],
            visible: vec![false; n],
            selection: None,
            layout: LayoutState::default(),
            active_preset: PresetId::Default,
            layout_runs: 0,
            observer,
            graph,
        };
        s.set_preset_state(PresetId::Default);
        s.reseed_and_run();
        s
    }

    pub fn set_observer(&mut self, observer: Option<Observer>) {
        self.observer = observer;
    }

    pub fn graph(&self) -> &Arc<EntityGraph> {
        &self.graph
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn glyph_style(&self) -> &GlyphStyle {
        &self.style
    }

    /// Replaces the style configuration. Glyphs change immediately; the
    /// layout is left alone until the next layout-affecting operation.
    pub fn set_config(&mut self, config: EngineConfig) {
        self.style = config.glyph_style();
        self.relation_visibility = config.relation_visibility();
        self.config = config;
    }

    pub fn layout(&self) -> &LayoutState {
        &self.layout
    }

    pub fn snapshot(&self) -> LayoutSnapshot {
        self.layout.snapshot()
    }

    /// Number of auto-layout runs performed so far.
    pub fn layout_runs(&self) -> u64 {
        self.layout_runs
    }

    pub fn active_preset(&self) -> PresetId {
        self.active_preset
    }

    pub fn relation_visibility(&self) -> &BTreeMap<RelationName, bool> {
        &self.relation_visibility
    }

    /// Takes effect at the next layout run.
    pub fn set_relation_visibility(&mut self, relation: RelationName, on: bool) {
        self.relation_visibility.insert(relation, on);
    }

    fn ids_where(&self, flags: &[bool]) -> BTreeSet<EntityId> {
        flags
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(ix, _)| self.graph.id_at(ix).clone())
            .collect()
    }

    pub fn expanded_ids(&self) -> BTreeSet<EntityId> {
        self.ids_where(&self.expanded)
    }

    pub fn removed_ids(&self) -> BTreeSet<EntityId> {
        self.ids_where(&self.removed)
    }

    pub fn dimmed_ids(&self) -> BTreeSet<EntityId> {
        self.ids_where(&self.dimmed)
    }

    pub fn visible_ids(&self) -> BTreeSet<EntityId> {
        self.ids_where(&self.visible)
    }

    /// Visible node indices in ascending order.
    pub fn visible_indices(&self) -> Vec<usize> {
        (0..self.visible.len()).filter(|&ix| self.visible[ix]).collect()
    }

    /// Nodes a filter may match: visible and not removed.
    pub fn eligible_indices(&self) -> Vec<usize> {
        self.visible_indices()
    }

    pub fn is_visible(&self, id: &EntityId) -> bool {
        self.graph.index_of(id).is_some_and(|ix| self.visible[ix])
    }

    pub fn is_expanded(&self, id: &EntityId) -> bool {
        self.graph.index_of(id).is_some_and(|ix| self.expanded[ix])
    }

    pub fn selection(&self) -> Option<&EntityId> {
        self.selection.map(|ix| self.graph.id_at(ix))
    }

    fn index(&self, id: &EntityId) -> Result<usize, SessionError> {
        self.graph
            .index_of(id)
            .ok_or_else(|| SessionError::UnknownId(id.clone()))
    }

    fn visible_index(&self, id: &EntityId) -> Result<usize, SessionError> {
        let ix = self.index(id)?;
        if self.visible[ix] {
            Ok(ix)
        } else {
            Err(SessionError::NotVisible(id.clone()))
        }
    }

    fn recompute_visibility(&mut self) {
        let g = &self.graph;
        let mut stack: Vec<usize> = g.roots().to_vec();
        self.visible.iter_mut().for_each(|v| *v = false);
        while let Some(ix) = stack.pop() {
            self.visible[ix] = !self.removed[ix];
            if self.expanded[ix] {
                stack.extend_from_slice(g.children(ix));
            }
        }
        for ix in 0..self.visible.len() {
            if !self.visible[ix] {
                self.dimmed[ix] = false;
            }
        }
        if self.selection.is_some_and(|ix| !self.visible[ix]) {
            self.selection = None;
        }
    }

    fn view(&self, ix: usize) -> ViewState {
        ViewState { is_collapsed: !self.expanded[ix] }
    }

    fn layout_edges(&self) -> LayoutEdges {
        let g = &self.graph;
        let pairs = self
            .relation_visibility
            .iter()
            .filter(|(_, &on)| on)
            .flat_map(|(&r, _)| g.edges(r).iter())
            .map(|&(a, b)| (g.id_at(a), g.id_at(b)));
        LayoutEdges::resolve(&self.layout, pairs)
    }

    fn run_layout(&mut self) {
        let edges = self.layout_edges();
        let force = &self.config.layout.force;
        match self.observer.as_mut() {
            Some(observe) => {
                run_auto_layout_observed(&mut self.layout, &edges, force, |s| observe(s));
            }
            None => {
                run_auto_layout_observed(&mut self.layout, &edges, force, |_| {});
            }
        }
        self.layout_runs += 1;
    }

    /// Fresh tidy-tree positions for every visible node, then one run.
    ///
    /// A visible node whose parent is hidden (possible after isolation) is
    /// placed as if its hidden ancestors were shown.
    fn reseed_and_run(&mut self) {
        let g = &self.graph;
        let mut closure = self.visible.clone();
        for ix in 0..closure.len() {
            if self.visible[ix] {
                for a in g.ancestors(ix) {
                    if closure[a] {
                        break;
                    }
                    closure[a] = true;
                }
            }
        }
        let nodes: Vec<usize> = (0..closure.len()).filter(|&ix| closure[ix]).collect();
        let tree = tidy_tree_layout(g, &nodes, &self.config.layout.tidy)
            .expect("closure under ancestors is a tree slice");
        let positions: Vec<(EntityId, Point)> = tree
            .positions()
            .filter(|&(ix, _)| self.visible[ix])
            .map(|(ix, p)| (g.id_at(ix).clone(), p))
            .collect();
        // Pinned nodes keep their place; everything else starts fresh.
        let mut layout = LayoutState::new(positions);
        for (id, p) in self.layout.pinned_ids().zip(self.pinned_positions()) {
            let _ = layout.apply_user_move(id, p, true);
        }
        self.layout = layout;
        self.run_layout();
    }

    fn pinned_positions(&self) -> Vec<Point> {
        self.layout
            .pinned_ids()
            .map(|id| self.layout.position(id).expect("pinned ids are laid out"))
            .collect()
    }

    /// Keeps positions of nodes that stay visible, seeds newly visible ones
    /// next to their nearest positioned ancestor, then runs once.
    fn relayout_incremental(&mut self) {
        let g = &self.graph;
        let gap = self.config.layout.tidy.ring_gap;
        let seed = self.config.layout.force.seed;
        let mut placed: BTreeMap<usize, Point> = BTreeMap::new();
        for ix in self.visible_indices() {
            if let Some(p) = self.layout.position(g.id_at(ix)) {
                placed.insert(ix, p);
            }
        }
        // Pre-order, so parents are placed before their children.
        let mut order = Vec::new();
        let mut stack: Vec<usize> = g.roots().iter().rev().copied().collect();
        while let Some(ix) = stack.pop() {
            if self.visible[ix] && !placed.contains_key(&ix) {
                order.push(ix);
            }
            let before = stack.len();
            stack.extend(g.children(ix).iter().copied().filter(|&c| self.visible[c] || self.expanded[ix]));
            stack[before..].reverse();
        }
        for ix in order {
            let anchor = g
                .ancestors(ix)
                .find_map(|a| placed.get(&a).copied())
                .unwrap_or(Point::ORIGIN);
            let h = jitter_hash(seed, g.id_at(ix));
            let angle = (h >> 11) as f64 / (1u64 << 53) as f64 * std::f64::consts::TAU;
            let radius = gap * (0.25 + 0.25 * ((h & 0x7ff) as f64 / 2048.0));
            placed.insert(ix, anchor + Point::polar(radius, angle));
        }
        let positions: Vec<(EntityId, Point)> = placed
            .into_iter()
            .map(|(ix, p)| (g.id_at(ix).clone(), p))
            .collect();
        self.layout = self.layout.rebuild(positions);
        self.run_layout();
    }

    fn set_preset_state(&mut self, preset: PresetId) {
        let g = Arc::clone(&self.graph);
        self.removed.iter_mut().for_each(|f| *f = false);
        self.dimmed.iter_mut().for_each(|f| *f = false);
        self.relation_visibility = self.config.relation_visibility();
        for (ix, e) in g.entities().iter().enumerate() {
            self.expanded[ix] = !g.children(ix).is_empty()
                && match preset {
                    PresetId::Default | PresetId::ProjectDependencies => {
                        e.kind == EntityKind::Solution
                    }
                    PresetId::AllTypes => matches!(
                        e.kind,
                        EntityKind::Solution | EntityKind::Project | EntityKind::Namespace
                    ),
                    PresetId::BirdsEye => e.kind != EntityKind::Method,
                };
        }
        if preset == PresetId::ProjectDependencies {
            for (r, on) in self.relation_visibility.iter_mut() {
                *on = *r == RelationName::DependsOn;
            }
        }
        self.active_preset = preset;
        self.recompute_visibility();
    }

    pub fn expand(&mut self, id: &EntityId) -> Result<(), SessionError> {
        let ix = self.visible_index(id)?;
        if self.graph.children(ix).is_empty() {
            return Err(SessionError::NoChildren(id.clone()));
        }
        if self.expanded[ix] {
            return Ok(());
        }
        self.expanded[ix] = true;
        self.recompute_visibility();
        self.relayout_incremental();
        Ok(())
    }

    /// Descendants keep their own expansion flags, so expanding again
    /// restores the previous view.
    pub fn collapse(&mut self, id: &EntityId) -> Result<(), SessionError> {
        let ix = self.index(id)?;
        if !self.expanded[ix] {
            return Err(SessionError::NotExpanded(id.clone()));
        }
        self.expanded[ix] = false;
        self.recompute_visibility();
        self.relayout_incremental();
        Ok(())
    }

    pub fn remove_subtree(&mut self, id: &EntityId) -> Result<(), SessionError> {
        let ix = self.visible_index(id)?;
        self.removed[ix] = true;
        for d in self.graph.descendants(ix) {
            self.removed[d] = true;
        }
        self.recompute_visibility();
        self.relayout_incremental();
        Ok(())
    }

    /// Restores removed nodes, clears dimming and lays the view out from
    /// scratch.
    pub fn refresh(&mut self) {
        self.removed.iter_mut().for_each(|f| *f = false);
        self.dimmed.iter_mut().for_each(|f| *f = false);
        self.recompute_visibility();
        self.reseed_and_run();
    }

    pub fn apply_preset(&mut self, name: &str) -> Result<(), SessionError> {
        let preset: PresetId = name.parse()?;
        self.set_preset_state(preset);
        self.reseed_and_run();
        Ok(())
    }

    pub fn select(&mut self, id: Option<&EntityId>) -> Result<(), SessionError> {
        self.selection = match id {
            Some(id) => Some(self.visible_index(id)?),
            None => None,
        };
        Ok(())
    }

    pub fn move_node(&mut self, id: &EntityId, position: Point, pin: bool) -> Result<(), SessionError> {
        self.visible_index(id)?;
        self.layout.apply_user_move(id, position, pin)?;
        self.run_layout();
        Ok(())
    }

    /// Highlight dims every eligible non-match. Isolate removes each
    /// eligible non-match individually (descendants are not removed with
    /// it) and re-runs the layout if anything changed. Returns the matches.
    pub fn apply_filter(
        &mut self,
        query: &FilterQuery,
        mode: FilterMode,
    ) -> BTreeSet<EntityId> {
        let eligible = self.eligible_indices();
        let hits = evaluate_query(&self.graph, &eligible, query, self.config.layout.force.execution);
        let miss: Vec<usize> = eligible
            .into_iter()
            .filter(|&ix| !hits.contains(self.graph.id_at(ix)))
            .collect();
        match mode {
            FilterMode::Highlight => {
                self.dimmed.iter_mut().for_each(|f| *f = false);
                for ix in miss {
                    self.dimmed[ix] = true;
                }
            }
            FilterMode::Isolate => {
                self.dimmed.iter_mut().for_each(|f| *f = false);
                if !miss.is_empty() {
                    for ix in miss {
                        self.removed[ix] = true;
                    }
                    self.recompute_visibility();
                    self.relayout_incremental();
                }
            }
        }
        hits
    }

    pub fn clear_highlight(&mut self) {
        self.dimmed.iter_mut().for_each(|f| *f = false);
    }

    pub fn glyph(&self, id: &EntityId) -> Result<GlyphSpec, SessionError> {
        let ix = self.index(id)?;
        Ok(self.style.glyph_at(&self.graph, ix, self.view(ix)))
    }

    /// Glyphs of the given ids, or of every visible node when `ids` is
    /// `None`.
    pub fn glyphs(
        &self,
        ids: Option<&[EntityId]>,
        exec: Execution,
    ) -> Result<BTreeMap<EntityId, GlyphSpec>, SessionError> {
        let nodes: Vec<usize> = match ids {
            Some(ids) => ids.iter().map(|id| self.index(id)).collect::<Result<_, _>>()?,
            None => self.visible_indices(),
        };
        let views: Vec<(usize, ViewState)> = nodes.iter().map(|&ix| (ix, self.view(ix))).collect();
        let specs = self.style.glyph_batch(&self.graph, &views, exec);
        Ok(nodes
            .into_iter()
            .zip(specs)
            .map(|(ix, g)| (self.graph.id_at(ix).clone(), g))
            .collect())
    }

    /// Works for hidden nodes too.
    pub fn inspect(&self, id: &EntityId) -> Result<InspectPayload, SessionError> {
        let ix = self.index(id)?;
        let g = &self.graph;
        let e = g.entity_at(ix);
        let mut neighbors: BTreeMap<RelationName, Neighbors> = BTreeMap::new();
        for r in RelationName::ALL {
            for &(a, b) in g.edges(r) {
                if a == ix {
                    neighbors.entry(r).or_default().outgoing.push(g.id_at(b).clone());
                }
                if b == ix {
                    neighbors.entry(r).or_default().incoming.push(g.id_at(a).clone());
                }
            }
        }
        for n in neighbors.values_mut() {
            n.outgoing.sort();
            n.incoming.sort();
        }
        Ok(InspectPayload {
            entity: e.clone(),
            declaration: declaration(g, ix),
            comment: e.comment.clone(),
            diagnostics: e.diagnostics.clone(),
            glyph: self.style.glyph_at(g, ix, self.view(ix)),
            visible: self.visible[ix],
            parent: g.parent(ix).map(|p| g.id_at(p).clone()),
            children: g.children(ix).iter().map(|&c| g.id_at(c).clone()).collect(),
            member_counts: (e.kind == EntityKind::Type).then(|| g.member_counts_at(ix)),
            neighbors,
        })
    }

    /// Serializable summary of the view state.
    pub fn state(&self) -> SessionState {
        SessionState {
            visible: self.visible_ids(),
            expanded: self.expanded_ids(),
            removed: self.removed_ids(),
            dimmed: self.dimmed_ids(),
            selection: self.selection().cloned(),
            active_preset: self.active_preset,
            relation_visibility: self.relation_visibility.clone(),
            layout_runs: self.layout_runs,
            converged: self.layout.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionState {
    pub visible: BTreeSet<EntityId>,
    pub expanded: BTreeSet<EntityId>,
    pub removed: BTreeSet<EntityId>,
    pub dimmed: BTreeSet<EntityId>,
    pub selection: Option<EntityId>,
    pub active_preset: PresetId,
    pub relation_visibility: BTreeMap<RelationName, bool>,
    pub layout_runs: u64,
    pub converged: bool,
}

/// SplitMix64 over the id bytes; stable across platforms and runs.
fn jitter_hash(seed: u64, id: &EntityId) -> u64 {
    let mut h = seed ^ 0x9E37_79B9_7F4A_7C15;
    for &b in id.as_str().as_bytes() {
        h = (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01B3);
    }
    h = h.wrapping_add(0x9E37_79B9_7F4A_7C15);
    h = (h ^ (h >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    h ^ (h >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::{parse_query, QueryInput};
    use crate::model::{Accessibility, Relation, RelationName::*};

    fn sample() -> Arc<EntityGraph> {
        let g = EntityGraph::build(
            vec![
                Entity::new("S", "Kafe", EntityKind::Solution),
                Entity::new("P1", "Kafe.Core", EntityKind::Project),
                Entity::new("P2", "Kafe.Web", EntityKind::Project),
                Entity::new("N", "Services", EntityKind::Namespace),
                Entity::new("T", "Foo", EntityKind::Type).sealed(),
                Entity::new("B", "Bar", EntityKind::Type).abstrakt(),
                Entity::new("M", "Run", EntityKind::Method),
                Entity::new("A", "x", EntityKind::Parameter),
                Entity::new("Q", "P", EntityKind::Property)
                    .with_accessibility(Accessibility::Private)
                    .statik(),
            ],
            vec![
                Relation::new(
                    Declares,
                    [("S", "P1"), ("S", "P2"), ("P1", "N"), ("N", "T"), ("N", "B"), ("T", "M"), ("M", "A"), ("T", "Q")],
                ),
                Relation::new(InheritsFrom, [("T", "B")]),
                Relation::new(DependsOn, [("P2", "P1")]),
            ],
        )
        .unwrap();
        Arc::new(g)
    }

    fn ids(list: &[&str]) -> BTreeSet<EntityId> {
        list.iter().map(|&s| s.into()).collect()
    }

    fn small() -> EngineConfig {
        let mut c = EngineConfig::default();
        c.layout.force.max_iterations = 50;
        c
    }

    #[test]
    fn starts_with_solution_expanded() {
        let s = DiagramSession::new(sample(), small());
        assert_eq!(s.visible_ids(), ids(&["S", "P1", "P2"]));
        assert_eq!(s.layout_runs(), 1);
        assert_eq!(s.layout().len(), 3);
    }

    #[test]
    fn expand_collapse_round_trip() {
        let mut s = DiagramSession::new(sample(), small());
        s.expand(&"P1".into()).unwrap();
        s.expand(&"N".into()).unwrap();
        assert_eq!(s.visible_ids(), ids(&["S", "P1", "P2", "N", "T", "B"]));
        s.collapse(&"P1".into()).unwrap();
        assert_eq!(s.visible_ids(), ids(&["S", "P1", "P2"]));
        assert!(s.is_expanded(&"N".into()));
        s.expand(&"P1".into()).unwrap();
        assert_eq!(s.visible_ids().len(), 6);
        assert_eq!(s.layout_runs(), 5);
        assert_eq!(s.layout().len(), 6);
    }

    #[test]
    fn expand_errors() {
        let mut s = DiagramSession::new(sample(), small());
        assert_eq!(s.expand(&"zz".into()), Err(SessionError::UnknownId("zz".into())));
        assert_eq!(s.expand(&"N".into()), Err(SessionError::NotVisible("N".into())));
        s.expand(&"P1".into()).unwrap();
        s.expand(&"N".into()).unwrap();
        assert_eq!(s.expand(&"B".into()), Err(SessionError::NoChildren("B".into())));
        assert_eq!(s.collapse(&"B".into()), Err(SessionError::NotExpanded("B".into())));
        assert_eq!(s.layout_runs(), 3);
    }

    #[test]
    fn new_nodes_start_near_parent() {
        let mut s = DiagramSession::new(sample(), EngineConfig {
            layout: crate::config::LayoutConfig {
                force: crate::layout::ForceConfig { max_iterations: 0, ..Default::default() },
                ..Default::default()
            },
            ..Default::default()
        });
        let p = s.layout().position(&"P1".into()).unwrap();
        s.expand(&"P1".into()).unwrap();
        let n = s.layout().position(&"N".into()).unwrap();
        assert!(n.distance(p) <= 0.5 * 120.0 + 1e-9);
    }

    #[test]
    fn remove_and_refresh() {
        let mut s = DiagramSession::new(sample(), small());
        s.select(Some(&"P1".into())).unwrap();
        s.remove_subtree(&"P1".into()).unwrap();
        assert_eq!(s.visible_ids(), ids(&["S", "P2"]));
        assert_eq!(s.selection(), None);
        assert!(s.removed_ids().contains(&EntityId::from("A")));
        s.refresh();
        assert_eq!(s.visible_ids(), ids(&["S", "P1", "P2"]));
        assert!(s.removed_ids().is_empty());
    }

    #[test]
    fn refresh_twice_is_idempotent() {
        let mut s = DiagramSession::new(sample(), small());
        s.apply_preset("birdsEye").unwrap();
        s.refresh();
        let first = (s.state(), s.snapshot());
        s.refresh();
        assert_eq!((s.state().visible, s.snapshot()), (first.0.visible, first.1));
    }

    #[test]
    fn presets() {
        let mut s = DiagramSession::new(sample(), small());
        s.apply_preset("allTypes").unwrap();
        assert_eq!(s.visible_ids(), ids(&["S", "P1", "P2", "N", "T", "B"]));
        s.apply_preset("birdsEye").unwrap();
        assert!(s.is_visible(&"Q".into()));
        assert!(s.is_visible(&"M".into()));
        assert!(!s.is_visible(&"A".into()));
        s.apply_preset("projectDependencies").unwrap();
        assert_eq!(s.visible_ids(), ids(&["S", "P1", "P2"]));
        let on: Vec<_> = s.relation_visibility().iter().filter(|(_, &v)| v).map(|(r, _)| *r).collect();
        assert_eq!(on, vec![DependsOn]);
        assert_eq!(
            s.apply_preset("everything"),
            Err(SessionError::UnknownPreset("everything".into()))
        );
        assert_eq!(s.active_preset(), PresetId::ProjectDependencies);
        s.apply_preset("default").unwrap();
        assert!(s.relation_visibility()[&Declares]);
    }

    #[test]
    fn highlight_and_isolate() {
        let mut s = DiagramSession::new(sample(), small());
        s.apply_preset("allTypes").unwrap();
        let runs = s.layout_runs();
        let q = parse_query(QueryInput::full_text("foo")).unwrap();
        let hits = s.apply_filter(&q, FilterMode::Highlight);
        assert_eq!(hits, ids(&["T"]));
        assert_eq!(s.dimmed_ids(), ids(&["S", "P1", "P2", "N", "B"]));
        assert_eq!(s.layout_runs(), runs);

        s.apply_filter(&q, FilterMode::Isolate);
        assert_eq!(s.visible_ids(), ids(&["T"]));
        assert!(s.dimmed_ids().is_empty());
        assert_eq!(s.layout_runs(), runs + 1);
        assert_eq!(s.layout().ids(), &["T".into()] as &[EntityId]);

        // Nothing left to remove: no change, no layout.
        s.apply_filter(&q, FilterMode::Isolate);
        assert_eq!(s.layout_runs(), runs + 1);
    }

    #[test]
    fn move_pins() {
        let mut s = DiagramSession::new(sample(), small());
        s.move_node(&"P2".into(), Point::new(400.0, 400.0), true).unwrap();
        assert_eq!(s.layout().position(&"P2".into()), Some(Point::new(400.0, 400.0)));
        assert_eq!(
            s.move_node(&"N".into(), Point::ORIGIN, false),
            Err(SessionError::NotVisible("N".into()))
        );
    }

    #[test]
    fn inspect_payload() {
        let s = DiagramSession::new(sample(), small());
        let p = s.inspect(&"T".into()).unwrap();
        assert_eq!(p.declaration, "public sealed class Foo : Bar");
        assert!(!p.visible);
        assert_eq!(p.neighbors[&InheritsFrom].outgoing, vec![EntityId::from("B")]);
        assert_eq!(p.neighbors[&Declares].incoming, vec![EntityId::from("N")]);
        let q = s.inspect(&"Q".into()).unwrap();
        assert_eq!(q.declaration, "private static property P");
        assert_eq!(s.inspect(&"N".into()).unwrap().declaration, "namespace Services");
        assert_eq!(s.inspect(&"P1".into()).unwrap().declaration, "Kafe.Core");
        assert_eq!(
            s.inspect(&"B".into()).unwrap().declaration,
            "public abstract class Bar"
        );
    }

    #[test]
    fn observer_sees_iterations() {
        use std::sync::atomic::{AtomicUsize, Ordering};
        let count = Arc::new(AtomicUsize::new(0));
        let c = Arc::clone(&count);
        let s = DiagramSession::with_observer(
            sample(),
            small(),
            Some(Box::new(move |_| {
                c.fetch_add(1, Ordering::SeqCst);
            })),
        );
        assert!(count.load(Ordering::SeqCst) >= 1);
        assert_eq!(count.load(Ordering::SeqCst) as u64, s.layout().iteration);
    }
}
