//! Set-based model of the exploration session.

use std::collections::BTreeSet;
use std::sync::Arc;

use helgraph_core::config::EngineConfig;
use helgraph_core::filter::{parse_query, FilterMode, QueryInput};
use helgraph_core::layout::Point;
use helgraph_core::session::{DiagramSession, SessionError};
use helgraph_core::{Entity, EntityGraph, EntityId, EntityKind, Relation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gen::random_query;
use crate::reference::Reference;

/// Operation outcome, compared by error name only.
pub type Outcome = Result<(), &'static str>;

#[derive(Debug, Clone)]
pub struct SessionModel<'a> {
    pub graph: &'a Reference,
    pub expanded: BTreeSet<EntityId>,
    pub removed: BTreeSet<EntityId>,
    pub dimmed: BTreeSet<EntityId>,
    pub selection: Option<EntityId>,
    /// Layout runs the engine is expected to have performed.
    pub layout_runs: u64,
}

impl<'a> SessionModel<'a> {
    pub fn new(graph: &'a Reference) -> Self {
        let mut m = Self {
            graph,
            expanded: BTreeSet::new(),
            removed: BTreeSet::new(),
            dimmed: BTreeSet::new(),
            selection: None,
            layout_runs: 0,
        };
        m.preset("default").expect("known preset");
        m
    }

    pub fn is_visible(&self, id: &EntityId) -> bool {
        !self.removed.contains(id) && self.graph.ancestors(id).iter().all(|a| self.expanded.contains(a))
    }

    pub fn visible(&self) -> BTreeSet<EntityId> {
        self.graph.ids().filter(|id| self.is_visible(id)).cloned().collect()
    }

    fn settle(&mut self) {
        let visible = self.visible();
        self.dimmed.retain(|d| visible.contains(d));
        if self.selection.as_ref().is_some_and(|s| !visible.contains(s)) {
            self.selection = None;
        }
    }

    fn known(&self, id: &EntityId) -> Result<(), &'static str> {
        if self.graph.entities.contains_key(id) {
            Ok(())
        } else {
            Err("UnknownId")
        }
    }

    fn shown(&self, id: &EntityId) -> Result<(), &'static str> {
        self.known(id)?;
        if self.is_visible(id) {
            Ok(())
        } else {
            Err("NotVisible")
        }
    }

    pub fn expand(&mut self, id: &EntityId) -> Outcome {
        self.shown(id)?;
        if self.graph.kids(id).is_empty() {
            return Err("NoChildren");
        }
        if self.expanded.insert(id.clone()) {
            self.layout_runs += 1;
        }
        self.settle();
        Ok(())
    }

    pub fn collapse(&mut self, id: &EntityId) -> Outcome {
        self.known(id)?;
        if !self.expanded.remove(id) {
            return Err("NotExpanded");
        }
        self.layout_runs += 1;
        self.settle();
        Ok(())
    }

    pub fn remove(&mut self, id: &EntityId) -> Outcome {
        self.shown(id)?;
        self.removed.insert(id.clone());
        self.removed.extend(self.graph.descendants(id));
        self.layout_runs += 1;
        self.settle();
        Ok(())
    }

    pub fn refresh(&mut self) {
        self.removed.clear();
        self.dimmed.clear();
        self.layout_runs += 1;
        self.settle();
    }

    pub fn preset(&mut self, name: &str) -> Outcome {
        let g = self.graph;
        let expand: Box<dyn Fn(EntityKind) -> bool> = match name {
            "default" | "projectDependencies" => Box::new(|k| k == EntityKind::Solution),
            "allTypes" => Box::new(|k| {
                matches!(k, EntityKind::Solution | EntityKind::Project | EntityKind::Namespace)
            }),
            "birdsEye" => Box::new(|k| k != EntityKind::Method),
            _ => return Err("UnknownPreset"),
        };
        self.expanded = g
            .ids()
            .filter(|id| !g.kids(id).is_empty() && expand(g.entity(id).kind))
            .cloned()
            .collect();
        self.removed.clear();
        self.dimmed.clear();
        self.layout_runs += 1;
        self.settle();
        Ok(())
    }

    pub fn select(&mut self, id: Option<&EntityId>) -> Outcome {
        match id {
            Some(id) => {
                self.shown(id)?;
                self.selection = Some(id.clone());
            }
            None => self.selection = None,
        }
        Ok(())
    }

    pub fn move_node(&mut self, id: &EntityId) -> Outcome {
        self.shown(id)?;
        self.layout_runs += 1;
        Ok(())
    }

    pub fn highlight(&mut self, q: &QueryInput) -> BTreeSet<EntityId> {
        let visible = self.visible();
        let hits = self.graph.evaluate(&visible, q);
        self.dimmed = visible.difference(&hits).cloned().collect();
        hits
    }

    pub fn isolate(&mut self, q: &QueryInput) -> BTreeSet<EntityId> {
        let visible = self.visible();
        let hits = self.graph.evaluate(&visible, q);
        self.dimmed.clear();
        let miss: Vec<EntityId> = visible.difference(&hits).cloned().collect();
        if !miss.is_empty() {
            self.removed.extend(miss);
            self.layout_runs += 1;
        }
        self.settle();
        hits
    }

    /// Checks the model's own invariants.
    pub fn check(&self) -> Result<(), String> {
        let visible = self.visible();
        if !self.dimmed.is_subset(&visible) {
            return Err("dimmed is not a subset of visible".into());
        }
        if let Some(s) = &self.selection {
            if !visible.contains(s) {
                return Err(format!("selection {s} is hidden"));
            }
        }
        Ok(())
    }
}

/// Error name of an engine session failure, for comparison with the model.
pub fn error_name(e: &SessionError) -> &'static str {
    match e {
        SessionError::UnknownId(_) => "UnknownId",
        SessionError::NotVisible(_) => "NotVisible",
        SessionError::NoChildren(_) => "NoChildren",
        SessionError::NotExpanded(_) => "NotExpanded",
        SessionError::UnknownPreset(_) => "UnknownPreset",
        SessionError::Filter(_) => "Filter",
        SessionError::Layout(_) => "Layout",
    }
}

const PRESETS: &[&str] = &["default", "allTypes", "projectDependencies", "birdsEye", "everything"];

/// Runs `ops` random operations against an engine session and the model in
/// lockstep, comparing the full view state after every step.
pub fn fuzz(
    entities: &[Entity],
    relations: &[Relation],
    seed: u64,
    ops: usize,
    config: &EngineConfig,
) -> Result<(), String> {
    let reference = Reference::new(entities, relations);
    let graph = Arc::new(
        EntityGraph::build(entities.to_vec(), relations.to_vec()).map_err(|e| e.to_string())?,
    );
    let mut session = DiagramSession::new(Arc::clone(&graph), config.clone());
    let mut model = SessionModel::new(&reference);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<EntityId> = reference.ids().cloned().collect();
    compare(&session, &model, "start")?;

    for step in 0..ops {
        let visible: Vec<EntityId> = model.visible().into_iter().collect();
        let target = match rng.gen_range(0..10) {
            0 => EntityId::from("no-such-entity"),
            1..=3 => all.choose(&mut rng).expect("non-empty").clone(),
            _ => visible.choose(&mut rng).unwrap_or(&all[0]).clone(),
        };
        let label;
        let (got, want): (Outcome, Outcome) = match rng.gen_range(0..100) {
            0..=29 => {
                label = format!("expand {target}");
                (session.expand(&target).map_err(|e| error_name(&e)), model.expand(&target))
            }
            30..=44 => {
                label = format!("collapse {target}");
                (session.collapse(&target).map_err(|e| error_name(&e)), model.collapse(&target))
            }
            45..=52 => {
                label = format!("remove {target}");
                (session.remove_subtree(&target).map_err(|e| error_name(&e)), model.remove(&target))
            }
            53..=57 => {
                label = "refresh".into();
                session.refresh();
                model.refresh();
                (Ok(()), Ok(()))
            }
            58..=62 => {
                let name = *PRESETS.choose(&mut rng).expect("non-empty");
                label = format!("preset {name}");
                (session.apply_preset(name).map_err(|e| error_name(&e)), model.preset(name))
            }
            63..=72 => {
                let t = rng.gen_bool(0.8).then_some(&target);
                label = format!("select {t:?}");
                (session.select(t).map_err(|e| error_name(&e)), model.select(t))
            }
            73..=77 => {
                let p = Point::new(rng.gen_range(-500.0..500.0), rng.gen_range(-500.0..500.0));
                let pin = rng.gen_bool(0.5);
                label = format!("move {target} pin={pin}");
                (session.move_node(&target, p, pin).map_err(|e| error_name(&e)), model.move_node(&target))
            }
            78..=95 => {
                let q = random_query(&mut rng).input;
                let query = parse_query(q.clone()).map_err(|e| format!("step {step}: {e}"))?;
                let isolate = rng.gen_bool(0.3);
                label = format!("filter isolate={isolate} {q:?}");
                let (got, want) = if isolate {
                    (session.apply_filter(&query, FilterMode::Isolate), model.isolate(&q))
                } else {
                    (session.apply_filter(&query, FilterMode::Highlight), model.highlight(&q))
                };
                if got != want {
                    return Err(format!("step {step} ({label}): matches {got:?} != {want:?}"));
                }
                (Ok(()), Ok(()))
            }
            _ => {
                label = format!("inspect {target}");
                let got = session.inspect(&target);
                match (&got, reference.entities.contains_key(&target)) {
                    (Ok(p), true) if p.visible == model.is_visible(&target) => (Ok(()), Ok(())),
                    (Err(SessionError::UnknownId(_)), false) => (Ok(()), Ok(())),
                    _ => return Err(format!("step {step} ({label}): {got:?}")),
                }
            }
        };
        if got != want {
            return Err(format!("step {step} ({label}): engine {got:?}, model {want:?}"));
        }
        compare(&session, &model, &format!("step {step} ({label})"))?;
        model.check().map_err(|e| format!("step {step} ({label}): {e}"))?;
    }
    Ok(())
}

fn compare(session: &DiagramSession, model: &SessionModel<'_>, at: &str) -> Result<(), String> {
    let visible = model.visible();
    let state = session.state();
    let checks: [(&str, bool); 6] = [
        ("visible", state.visible == visible),
        ("expanded", state.expanded == model.expanded),
        ("removed", state.removed == model.removed),
        ("dimmed", state.dimmed == model.dimmed),
        ("selection", state.selection == model.selection),
        ("layout runs", state.layout_runs == model.layout_runs),
    ];
    for (what, ok) in checks {
        if !ok {
            return Err(format!("{at}: {what} differs\nengine {state:?}\nmodel visible {visible:?}"));
        }
    }
    let laid_out: BTreeSet<EntityId> = session.layout().ids().iter().cloned().collect();
    if laid_out != visible {
        return Err(format!("{at}: layout covers {} nodes, {} visible", laid_out.len(), visible.len()));
    }
    if session.layout().pinned_ids().any(|p| !visible.contains(p)) {
        return Err(format!("{at}: a hidden node is pinned"));
    }
    let eligible: BTreeSet<EntityId> =
        session.eligible_indices().into_iter().map(|ix| session.graph().id_at(ix).clone()).collect();
    let want: BTreeSet<EntityId> = visible.difference(&model.removed).cloned().collect();
    if eligible != want {
        return Err(format!("{at}: eligible set differs"));
    }
    Ok(())
}
