use std::collections::BTreeSet;

use helgraph_core::filter::{evaluate_query, parse_query, FilterError, QueryInput};
use helgraph_core::synthetic::{generate, SyntheticParams};
use helgraph_core::{Entity, EntityGraph, EntityId, EntityKind, Execution, Relation, RelationName, Severity, TypeKind};
use helgraph_oracles::gen::random_clause_input;
use helgraph_oracles::{random_graph, random_query, GraphShape, Reference};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

fn all(g: &EntityGraph) -> Vec<usize> {
    (0..g.len()).collect()
}

fn ids(list: &[&str]) -> BTreeSet<EntityId> {
    list.iter().map(|&s| s.into()).collect()
}

#[test]
fn parse_examples() {
    assert!(matches!(parse_query(QueryInput::regex("(")), Err(FilterError::InvalidRegex(_))));
    assert!(matches!(
        parse_query(QueryInput::builder([("memberCount", "contains", json!(5))])),
        Err(FilterError::OperatorTypeMismatch { .. })
    ));
    assert!(matches!(
        parse_query(QueryInput::builder([("color", "equals", json!("red"))])),
        Err(FilterError::UnknownProperty(_))
    ));
    assert_eq!(parse_query(QueryInput::builder([])).unwrap_err(), FilterError::EmptyBuilderQuery);
}

#[test]
fn fig3_shaped_subtree_error() {
    let g = EntityGraph::build(
        vec![
            Entity::new("S", "Kafe", EntityKind::Solution),
            Entity::new("P", "Kafe.Core", EntityKind::Project),
            Entity::new("Q", "Kafe.Web", EntityKind::Project),
            Entity::new("N", "Services", EntityKind::Namespace),
            Entity::new("T", "ProjectService", EntityKind::Type),
            Entity::new("M", "ProjectService", EntityKind::Method)
                .with_method_kind(helgraph_core::MethodKind::Constructor)
                .with_diagnostic(Severity::Error, "CS0103", "missing"),
        ],
        vec![Relation::new(RelationName::Declares, [("S", "P"), ("S", "Q"), ("P", "N"), ("N", "T"), ("T", "M")])],
    )
    .unwrap();
    let q = parse_query(QueryInput::builder([("hasSubtreeError", "is", json!(true))])).unwrap();
    assert_eq!(evaluate_query(&g, &all(&g), &q, Execution::Sequential), ids(&["S", "P", "N", "T"]));
    let q = parse_query(QueryInput::full_text("projectservice")).unwrap();
    assert_eq!(evaluate_query(&g, &all(&g), &q, Execution::Sequential), ids(&["M", "T"]));
}

#[test]
fn record_classes_on_synthetic_graph() {
    let g = generate(&SyntheticParams { project_count: 6, ..Default::default() }).unwrap();
    let q = parse_query(QueryInput::builder([
        ("typeKind", "equals", json!("class")),
        ("isRecord", "is", json!(true)),
    ]))
    .unwrap();
    let got = evaluate_query(&g, &all(&g), &q, Execution::Parallel);
    let want: BTreeSet<EntityId> = g
        .entities()
        .iter()
        .filter(|e| e.type_kind == Some(TypeKind::Class) && e.is_record)
        .map(|e| e.id.clone())
        .collect();
    assert!(!want.is_empty());
    assert_eq!(got, want);
}

#[test]
fn comment_text_covers_remarks() {
    let g = EntityGraph::build(
        vec![
            Entity::new("S", "S", EntityKind::Solution),
            Entity::new("P", "P", EntityKind::Project),
            Entity::new("T", "T", EntityKind::Type).with_comment("Loads things.", Some("Obsolete soon.".into())),
        ],
        vec![Relation::new(RelationName::Declares, [("S", "P"), ("P", "T")])],
    )
    .unwrap();
    let q = parse_query(QueryInput::builder([("commentText", "contains", json!("Obsolete"))])).unwrap();
    assert_eq!(evaluate_query(&g, &all(&g), &q, Execution::Sequential), ids(&["T"]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn evaluation_matches_linear_scan(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (e, r) = random_graph(&mut rng, &GraphShape { max_nodes: 150, diagnostic_rate: 0.1, ..Default::default() });
        let oracle = Reference::new(&e, &r);
        let g = EntityGraph::build(e, r).unwrap();
        let eligible: Vec<usize> = (0..g.len()).filter(|_| rng.gen_bool(0.8)).collect();
        let eligible_ids: Vec<EntityId> = eligible.iter().map(|&ix| g.id_at(ix).clone()).collect();
        for _ in 0..8 {
            let q = random_query(&mut rng).input;
            let query = parse_query(q.clone()).unwrap();
            let got = evaluate_query(&g, &eligible, &query, Execution::Parallel);
            prop_assert_eq!(&got, &oracle.evaluate(&eligible_ids, &q), "query {:?}", q);
            prop_assert!(got.iter().all(|id| eligible_ids.contains(id)));
        }
    }

    #[test]
    fn adding_a_clause_never_grows_the_result(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (e, r) = random_graph(&mut rng, &GraphShape { max_nodes: 150, ..Default::default() });
        let g = EntityGraph::build(e, r).unwrap();
        let mut query = parse_query(QueryInput { mode: helgraph_core::filter::SearchMode::Builder, text: None, clauses: vec![random_clause_input(&mut rng)] }).unwrap();
        let mut last = evaluate_query(&g, &all(&g), &query, Execution::Sequential);
        for _ in 0..4 {
            query = query.and(random_clause_input(&mut rng)).unwrap();
            let next = evaluate_query(&g, &all(&g), &query, Execution::Sequential);
            prop_assert!(next.is_subset(&last));
            last = next;
        }
    }

    #[test]
    fn queries_survive_serialization(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let query = parse_query(random_query(&mut rng).input).unwrap();
        let text = serde_json::to_string(&query).unwrap();
        let back: helgraph_core::filter::FilterQuery = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, query);
    }
}
