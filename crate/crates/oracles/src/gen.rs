//! Random valid graphs and random filter queries.

use helgraph_core::filter::{ClauseInput, QueryInput, SearchMode};
use helgraph_core::{
    Accessibility, Diagnostic, DocComment, Entity, EntityId, EntityKind, MethodKind, Relation,
    RelationName, Severity, TypeKind,
};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

const NAMES: &[&str] = &[
    "Project", "service", "Cache", "cacheEntry", "Node", "layout", "Filter", "QUERY", "Session",
    "glyph", "Reader", "Writer", "Store", "handler", "Factory", "Builder", "Visitor", "Context",
    "Kafe", "Core", "Web", "Data", "Model", "Services", "IO", "Text", "ProjectService", "Run",
    "Load", "Save", "Get", "Set", "Item", "Count", "x", "y", "value",
];

const COMMENT_WORDS: &[&str] = &["loads", "cache", "the", "project", "returns", "deprecated", "TODO", "node"];

#[derive(Debug, Clone, Copy)]
pub struct GraphShape {
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub solutions: usize,
    pub diagnostic_rate: f64,
    /// Chance that a new node attaches to one of the most recent nodes,
    /// which makes trees deeper.
    pub depth_bias: f64,
}

impl Default for GraphShape {
    fn default() -> Self {
        Self { min_nodes: 1, max_nodes: 200, solutions: 1, diagnostic_rate: 0.05, depth_bias: 0.5 }
    }
}

fn child_kinds(parent: EntityKind) -> &'static [EntityKind] {
    use EntityKind::*;
    match parent {
        Solution => &[Project, Project, Project, Package],
        Project => &[Namespace, Namespace, Type],
        Namespace => &[Namespace, Type, Type, Type],
        Type => &[Field, Method, Method, Property, Event, Type],
        Method => &[Parameter],
        _ => &[],
    }
}

fn pick<T: Copy>(rng: &mut impl Rng, items: &[T]) -> T {
    *items.choose(rng).expect("non-empty")
}

fn entity(rng: &mut impl Rng, id: EntityId, kind: EntityKind, shape: &GraphShape) -> Entity {
    let name = match rng.gen_range(0..3) {
        0 => pick(rng, NAMES).to_owned(),
        _ => format!("{}{}", pick(rng, NAMES), pick(rng, NAMES)),
    };
    let mut e = Entity::new(id, name, kind);
    if kind == EntityKind::Type {
        let tk = pick(rng, &TypeKind::ALL);
        e.type_kind = Some(tk);
        e.is_record = matches!(tk, TypeKind::Class | TypeKind::Struct) && rng.gen_bool(0.3);
    }
    if kind == EntityKind::Method {
        e.method_kind = Some(pick(rng, &MethodKind::ALL));
    }
    if kind == EntityKind::Type || kind.is_member() {
        e.accessibility = Some(pick(rng, &Accessibility::ALL));
        e.modifiers.is_static = rng.gen_bool(0.3);
        match rng.gen_range(0..6) {
            0 => e.modifiers.is_abstract = true,
            1 => e.modifiers.is_sealed = true,
            _ => {}
        }
    }
    if rng.gen_bool(0.3) {
        let words: Vec<&str> = (0..rng.gen_range(1..6)).map(|_| pick(rng, COMMENT_WORDS)).collect();
        let remarks = rng.gen_bool(0.4).then(|| pick(rng, COMMENT_WORDS).to_owned());
        e.comment = Some(DocComment { summary: words.join(" "), remarks });
    }
    while rng.gen_bool(shape.diagnostic_rate) {
        let severity = pick(rng, &[Severity::Error, Severity::Warning, Severity::Info]);
        e.diagnostics.push(Diagnostic {
            severity,
            code: format!("CS{:04}", rng.gen_range(0..10000)),
            message: "generated".into(),
        });
    }
    e
}

/// A valid graph with between `shape.min_nodes` and `shape.max_nodes`
/// entities, as raw parts.
///
/// Entity ids are assigned in shuffled order and the entity list is
/// shuffled, so neither id order nor list order follows the tree.
pub fn random_graph(rng: &mut impl Rng, shape: &GraphShape) -> (Vec<Entity>, Vec<Relation>) {
    let low = shape.solutions.max(1).max(shape.min_nodes);
    let n = rng.gen_range(low..=shape.max_nodes.max(low));
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let mut kinds: Vec<EntityKind> = Vec::with_capacity(n);
    let mut parent: Vec<Option<usize>> = Vec::with_capacity(n);
    let mut can_parent: Vec<usize> = Vec::new();
    for i in 0..n {
        if i < shape.solutions.max(1) {
            kinds.push(EntityKind::Solution);
            parent.push(None);
            can_parent.push(i);
            continue;
        }
        let p = if rng.gen_bool(shape.depth_bias) {
            let recent = can_parent.len().saturating_sub(4);
            can_parent[rng.gen_range(recent..can_parent.len())]
        } else {
            pick(rng, &can_parent)
        };
        let k = pick(rng, child_kinds(kinds[p]));
        kinds.push(k);
        parent.push(Some(p));
        if !child_kinds(k).is_empty() {
            can_parent.push(i);
        }
    }

    let id = |i: usize| EntityId(format!("e{:05}", labels[i]));
    let mut entities: Vec<Entity> = (0..n).map(|i| entity(rng, id(i), kinds[i], shape)).collect();
    let declares: Vec<(EntityId, EntityId)> =
        (0..n).filter_map(|i| parent[i].map(|p| (id(p), id(i)))).collect();

    let of = |k: &[EntityKind]| -> Vec<usize> { (0..n).filter(|&i| k.contains(&kinds[i])).collect() };
    let types = of(&[EntityKind::Type]);
    let typed = of(&[EntityKind::Field, EntityKind::Property, EntityKind::Event, EntityKind::Parameter]);
    let methods = of(&[EntityKind::Method]);
    let deps = of(&[EntityKind::Project, EntityKind::Package]);

    let mut inherits = Vec::new();
    let mut type_of = Vec::new();
    let mut returns = Vec::new();
    let mut references = Vec::new();
    let mut depends = Vec::new();
    if !types.is_empty() {
        for &t in &types {
            if rng.gen_bool(0.3) {
                inherits.push((id(t), id(pick(rng, &types))));
            }
        }
        for &m in &typed {
            if rng.gen_bool(0.5) {
                type_of.push((id(m), id(pick(rng, &types))));
            }
        }
        for &m in &methods {
            if rng.gen_bool(0.5) {
                returns.push((id(m), id(pick(rng, &types))));
            }
        }
    }
    for _ in 0..rng.gen_range(0..=n / 10) {
        references.push((id(rng.gen_range(0..n)), id(rng.gen_range(0..n))));
    }
    // Edges only from later to earlier nodes keep dependsOn acyclic.
    for (k, &a) in deps.iter().enumerate() {
        for &b in &deps[..k] {
            if rng.gen_bool(0.2) {
                depends.push((id(a), id(b)));
            }
        }
    }

    entities.shuffle(rng);
    let mut relations = vec![
        Relation { name: RelationName::Declares, edges: declares },
        Relation { name: RelationName::InheritsFrom, edges: inherits },
        Relation { name: RelationName::TypeOf, edges: type_of },
        Relation { name: RelationName::Returns, edges: returns },
        Relation { name: RelationName::DependsOn, edges: depends },
        Relation { name: RelationName::References, edges: references },
    ];
    for r in &mut relations {
        r.edges.shuffle(rng);
    }
    relations.shuffle(rng);
    (entities, relations)
}

/// A query in wire form, plus the raw pieces the oracle evaluates.
#[derive(Debug, Clone)]
pub struct RandomQuery {
    pub input: QueryInput,
}

const PROPERTIES: &[&str] = &[
    "name", "kind", "typeKind", "methodKind", "accessibility", "isStatic", "isAbstract", "isSealed",
    "isRecord", "memberCount", "subtreeHeight", "hasOwnError", "hasOwnWarning", "hasSubtreeError",
    "hasSubtreeWarning", "commentText", "projectName", "namespacePath",
];

fn random_text(rng: &mut impl Rng) -> String {
    let w = pick(rng, NAMES);
    let start = rng.gen_range(0..w.len());
    let end = rng.gen_range(start..=w.len());
    let s = &w[start..end];
    if rng.gen_bool(0.3) {
        s.to_uppercase()
    } else {
        s.to_owned()
    }
}

fn random_clause(rng: &mut impl Rng) -> ClauseInput {
    let property = pick(rng, PROPERTIES);
    let (operator, value): (&str, Value) = match property {
        "name" | "commentText" | "projectName" | "namespacePath" => {
            match rng.gen_range(0..4) {
                0 => ("equals", json!(pick(rng, NAMES))),
                1 => ("contains", json!(random_text(rng))),
                2 => ("startsWith", json!(random_text(rng))),
                _ => ("matchesRegex", json!(format!("^{}|{}$", random_text(rng), random_text(rng)))),
            }
        }
        "kind" | "typeKind" | "methodKind" | "accessibility" => {
            let domain: Vec<&str> = match property {
                "kind" => EntityKind::ALL.iter().map(|k| k.as_str()).collect(),
                "typeKind" => TypeKind::ALL.iter().map(|k| k.as_str()).collect(),
                "methodKind" => MethodKind::ALL.iter().map(|k| k.as_str()).collect(),
                _ => Accessibility::ALL.iter().map(|k| k.as_str()).collect(),
            };
            if rng.gen_bool(0.5) {
                ("equals", json!(pick(rng, &domain)))
            } else {
                let k = rng.gen_range(1..=3);
                let v: Vec<&str> = domain.choose_multiple(rng, k).copied().collect();
                ("oneOf", json!(v))
            }
        }
        "memberCount" | "subtreeHeight" => {
            let op = pick(rng, &["eq", "ne", "lt", "le", "gt", "ge", "=", "!=", "≠", "<", "<=", "≤", ">", ">=", "≥"]);
            (op, json!(rng.gen_range(0..8)))
        }
        _ => ("is", json!(rng.gen_bool(0.5))),
    };
    ClauseInput { property: property.into(), operator: operator.into(), value }
}

pub fn random_query(rng: &mut impl Rng) -> RandomQuery {
    let input = match rng.gen_range(0..4) {
        0 => QueryInput { mode: SearchMode::FullText, text: Some(random_text(rng)), clauses: vec![] },
        1 => {
            let pattern = match rng.gen_range(0..3) {
                0 => format!("^{}", random_text(rng)),
                1 => format!("{}$", random_text(rng)),
                _ => format!("(?i){}.*{}", random_text(rng), random_text(rng)),
            };
            QueryInput { mode: SearchMode::Regex, text: Some(pattern), clauses: vec![] }
        }
        _ => QueryInput {
            mode: SearchMode::Builder,
            text: None,
            clauses: (0..rng.gen_range(1..=3)).map(|_| random_clause(rng)).collect(),
        },
    };
    RandomQuery { input }
}

pub fn random_clause_input(rng: &mut impl Rng) -> ClauseInput {
    random_clause(rng)
}
