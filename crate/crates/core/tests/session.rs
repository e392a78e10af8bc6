use std::sync::Arc;

use helgraph_core::config::EngineConfig;
use helgraph_core::filter::{parse_query, FilterMode, QueryInput};
use helgraph_core::glyph::Indicator;
use helgraph_core::session::{DiagramSession, SessionError};
use helgraph_core::synthetic::{generate, SyntheticParams};
use helgraph_core::{Entity, EntityGraph, EntityId, EntityKind, RelationName};
use helgraph_oracles::session_model::fuzz;
use helgraph_oracles::{random_graph, GraphShape};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn quick() -> EngineConfig {
    let mut c = EngineConfig::default();
    c.layout.force.max_iterations = 5;
    c
}

fn synthetic(project_count: u32) -> Arc<EntityGraph> {
    Arc::new(generate(&SyntheticParams { project_count, ..Default::default() }).unwrap())
}

fn count(s: &DiagramSession, kind: EntityKind) -> usize {
    s.visible_ids().iter().filter(|id| s.graph().entity(id).unwrap().kind == kind).count()
}

#[test]
fn eight_project_startup() {
    let s = DiagramSession::new(synthetic(8), EngineConfig::default());
    assert_eq!(s.visible_ids().len(), 9);
    assert_eq!(count(&s, EntityKind::Solution), 1);
    assert_eq!(count(&s, EntityKind::Project), 8);
    assert_eq!(s.layout_runs(), 1);
    assert!(s.layout().converged);
}

#[test]
fn default_relation_visibility() {
    let s = DiagramSession::new(synthetic(2), quick());
    let on: Vec<RelationName> = s.relation_visibility().iter().filter(|(_, &v)| v).map(|(r, _)| *r).collect();
    assert_eq!(on, vec![RelationName::Declares, RelationName::InheritsFrom, RelationName::DependsOn]);
}

#[test]
fn two_solutions_are_both_roots() {
    let g = EntityGraph::build(
        vec![Entity::new("A", "A", EntityKind::Solution), Entity::new("B", "B", EntityKind::Solution)],
        vec![],
    )
    .unwrap();
    let s = DiagramSession::new(Arc::new(g), quick());
    assert_eq!(s.visible_ids().len(), 2);
}

#[test]
fn all_types_shows_every_type() {
    let g = synthetic(4);
    let total = g.entities().iter().filter(|e| e.kind == EntityKind::Type).count();
    let mut s = DiagramSession::new(g, quick());
    s.apply_preset("allTypes").unwrap();
    assert_eq!(count(&s, EntityKind::Type), total);
    assert_eq!(count(&s, EntityKind::Method), 0);
    s.apply_preset("projectDependencies").unwrap();
    for k in [EntityKind::Namespace, EntityKind::Type, EntityKind::Method, EntityKind::Field] {
        assert_eq!(count(&s, k), 0);
    }
    assert_eq!(s.apply_preset("nope"), Err(SessionError::UnknownPreset("nope".into())));
}

#[test]
fn collapse_examples() {
    let mut s = DiagramSession::new(synthetic(2), quick());
    let root = s.graph().id_at(s.graph().roots()[0]).clone();
    let project = s.graph().id_at(s.graph().children(s.graph().roots()[0])[0]).clone();
    s.expand(&project).unwrap();
    let expanded_view = s.visible_ids();
    s.collapse(&project).unwrap();
    assert!(s.glyph(&project).unwrap().indicators.contains(&Indicator::CollapsedShadow));
    s.expand(&project).unwrap();
    assert_eq!(s.visible_ids(), expanded_view);
    s.collapse(&root).unwrap();
    assert_eq!(s.visible_ids().into_iter().collect::<Vec<_>>(), vec![root]);
}

#[test]
fn removal_hides_from_filters_until_refresh() {
    let mut s = DiagramSession::new(synthetic(2), quick());
    s.apply_preset("allTypes").unwrap();
    let g = Arc::clone(s.graph());
    let project = g.id_at(g.children(g.roots()[0])[0]).clone();
    let some_type = g
        .descendants(g.index_of(&project).unwrap())
        .into_iter()
        .find(|&ix| g.entity_at(ix).kind == EntityKind::Type)
        .unwrap();
    let name = g.entity_at(some_type).name.clone();
    let q = parse_query(QueryInput::regex(format!("^{name}$"))).unwrap();
    s.remove_subtree(&project).unwrap();
    let hits = s.apply_filter(&q, FilterMode::Highlight);
    assert!(!hits.contains(g.id_at(some_type)));
    s.refresh();
    let hits = s.apply_filter(&q, FilterMode::Highlight);
    assert!(hits.contains(g.id_at(some_type)));
}

#[test]
fn highlight_nothing_dims_everything() {
    let mut s = DiagramSession::new(synthetic(3), quick());
    let before = s.visible_ids();
    let q = parse_query(QueryInput::regex("^$")).unwrap();
    assert!(s.apply_filter(&q, FilterMode::Highlight).is_empty());
    assert_eq!(s.dimmed_ids(), before);
    assert_eq!(s.visible_ids(), before);
}

#[test]
fn isolate_then_refresh_restores() {
    let mut s = DiagramSession::new(synthetic(3), quick());
    let before = s.visible_ids();
    let keep: EntityId = before.iter().nth(1).unwrap().clone();
    let name = s.graph().entity(&keep).unwrap().name.clone();
    let q = parse_query(QueryInput::regex(format!("^{}$", regex_escape(&name)))).unwrap();
    s.apply_filter(&q, FilterMode::Isolate);
    assert!(s.visible_ids().contains(&keep));
    assert!(s.visible_ids().len() < before.len());
    s.refresh();
    assert_eq!(s.visible_ids(), before);
}

fn regex_escape(s: &str) -> String {
    s.chars().flat_map(|c| if c.is_alphanumeric() { vec![c] } else { vec!['\\', c] }).collect()
}

#[test]
fn typeof_edges_join_the_layout_after_refresh() {
    let g = synthetic(2);
    let mut a = DiagramSession::new(Arc::clone(&g), EngineConfig::default());
    a.apply_preset("birdsEye").unwrap();
    let mut b = DiagramSession::new(g, EngineConfig::default());
    b.apply_preset("birdsEye").unwrap();
    b.set_relation_visibility(RelationName::TypeOf, true);
    assert_eq!(a.snapshot(), b.snapshot());
    b.refresh();
    a.refresh();
    assert_ne!(a.snapshot().positions, b.snapshot().positions);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn session_matches_set_model(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = GraphShape { max_nodes: 80, solutions: 1 + (seed % 2) as usize, ..Default::default() };
        let (e, r) = random_graph(&mut rng, &shape);
        if let Err(msg) = fuzz(&e, &r, seed, 150, &quick()) {
            return Err(TestCaseError::fail(msg));
        }
    }
}
