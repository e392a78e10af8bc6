//! Single-fault mutations of valid graphs.
//!
//! Each mutation breaks exactly one structural invariant and names the
//! violation a validator must report for it.

use helgraph_core::{Diagnostic, Entity, EntityId, EntityKind, Relation, RelationName, Severity, TypeKind};

pub struct Mutant {
    pub label: &'static str,
    pub expected: &'static str,
    pub entities: Vec<Entity>,
    pub relations: Vec<Relation>,
}

fn declares_mut(relations: &mut Vec<Relation>) -> &mut Vec<(EntityId, EntityId)> {
    if !relations.iter().any(|r| r.name == RelationName::Declares) {
        relations.push(Relation { name: RelationName::Declares, edges: vec![] });
    }
    &mut relations
        .iter_mut()
        .find(|r| r.name == RelationName::Declares)
        .expect("just ensured")
        .edges
}

fn relation_mut(relations: &mut Vec<Relation>, name: RelationName) -> &mut Vec<(EntityId, EntityId)> {
    if !relations.iter().any(|r| r.name == name) {
        relations.push(Relation { name, edges: vec![] });
    }
    &mut relations.iter_mut().find(|r| r.name == name).expect("just ensured").edges
}

/// The mutation corpus for one valid graph. Every mutation that the graph
/// can host is produced; a graph with at least one project and one type
/// hosts all of them.
pub fn mutants(entities: &[Entity], relations: &[Relation]) -> Vec<Mutant> {
    let mut out = Vec::new();
    let mut push = |label, expected, f: &dyn Fn(&mut Vec<Entity>, &mut Vec<Relation>) -> bool| {
        let mut e = entities.to_vec();
        let mut r = relations.to_vec();
        if f(&mut e, &mut r) {
            out.push(Mutant { label, expected, entities: e, relations: r });
        }
    };
    let first = |kind: EntityKind| entities.iter().find(|e| e.kind == kind).map(|e| e.id.clone());
    let solution = first(EntityKind::Solution);
    let project = first(EntityKind::Project);
    let ty = first(EntityKind::Type);

    push("duplicate id", "DuplicateId", &|e, _| {
        let copy = e[0].clone();
        e.push(copy);
        true
    });
    push("dangling declares target", "DanglingEdge", &|_, r| {
        let s = solution.clone().expect("graphs have a solution");
        declares_mut(r).push((s, EntityId::from("missing-entity")));
        true
    });
    push("dangling typeOf source", "DanglingEdge", &|_, r| {
        let Some(t) = ty.clone() else { return false };
        relation_mut(r, RelationName::TypeOf).push((EntityId::from("missing-entity"), t));
        true
    });
    push("declares cycle", "DeclaresCycle", &|e, r| {
        // Two fresh namespaces declaring each other, detached from the tree.
        e.push(Entity::new("cycle-a", "A", EntityKind::Namespace));
        e.push(Entity::new("cycle-b", "B", EntityKind::Namespace));
        let d = declares_mut(r);
        d.push(("cycle-a".into(), "cycle-b".into()));
        d.push(("cycle-b".into(), "cycle-a".into()));
        true
    });
    push("second declares parent", "MultipleParents", &|e, r| {
        let Some(p) = project.clone() else { return false };
        e.push(Entity::new("second-parent", "Other", EntityKind::Project));
        let s = solution.clone().expect("graphs have a solution");
        let d = declares_mut(r);
        d.push((s, "second-parent".into()));
        let Some(child) = d.iter().find(|(a, _)| *a == p).map(|(_, c)| c.clone()) else {
            return false;
        };
        d.push(("second-parent".into(), child));
        true
    });
    push("abstract and sealed", "IllegalModifierCombination", &|e, _| {
        let Some(t) = ty.clone() else { return false };
        let x = e.iter_mut().find(|x| x.id == t).expect("exists");
        x.modifiers.is_abstract = true;
        x.modifiers.is_sealed = true;
        true
    });
    push("record enum", "KindMismatch", &|e, _| {
        let Some(t) = ty.clone() else { return false };
        let x = e.iter_mut().find(|x| x.id == t).expect("exists");
        x.type_kind = Some(TypeKind::Enum);
        x.is_record = true;
        true
    });
    push("typeKind on a project", "KindMismatch", &|e, _| {
        let Some(p) = project.clone() else { return false };
        e.iter_mut().find(|x| x.id == p).expect("exists").type_kind = Some(TypeKind::Class);
        true
    });
    push("type without typeKind", "KindMismatch", &|e, _| {
        let Some(t) = ty.clone() else { return false };
        e.iter_mut().find(|x| x.id == t).expect("exists").type_kind = None;
        true
    });
    push("solution declares a type", "KindMismatch", &|e, r| {
        let s = solution.clone().expect("graphs have a solution");
        e.push(Entity::new("misplaced", "Misplaced", EntityKind::Type));
        declares_mut(r).push((s, "misplaced".into()));
        true
    });
    push("orphan project", "MissingParent", &|e, _| {
        e.push(Entity::new("orphan", "Orphan", EntityKind::Project));
        true
    });
    push("dependsOn cycle", "DependsOnCycle", &|e, r| {
        let s = solution.clone().expect("graphs have a solution");
        e.push(Entity::new("dep-a", "DepA", EntityKind::Project));
        e.push(Entity::new("dep-b", "DepB", EntityKind::Project));
        let d = declares_mut(r);
        d.push((s.clone(), "dep-a".into()));
        d.push((s, "dep-b".into()));
        let deps = relation_mut(r, RelationName::DependsOn);
        deps.push(("dep-a".into(), "dep-b".into()));
        deps.push(("dep-b".into(), "dep-a".into()));
        true
    });
    push("dependsOn from a type", "KindMismatch", &|_, r| {
        let (Some(t), Some(p)) = (ty.clone(), project.clone()) else { return false };
        relation_mut(r, RelationName::DependsOn).push((t, p));
        true
    });
    push("empty diagnostic code", "EmptyDiagnosticCode", &|e, _| {
        e[0].diagnostics.push(Diagnostic {
            severity: Severity::Warning,
            code: String::new(),
            message: "no code".into(),
        });
        true
    });
    out
}

/// Violation names every complete corpus must cover.
pub const INVARIANTS: &[&str] = &[
    "DuplicateId",
    "DanglingEdge",
    "DeclaresCycle",
    "MultipleParents",
    "IllegalModifierCombination",
    "KindMismatch",
    "MissingParent",
    "DependsOnCycle",
    "EmptyDiagnosticCode",
];
