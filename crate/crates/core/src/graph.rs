//! Validated, immutable entity graph.
//!
//! [`EntityGraph::build`] is the only way to obtain a graph. It checks every
//! structural invariant and fails with the first violation; [`validate`]
//! reports all of them as data. After construction the graph precomputes the
//! `declares` forest (parents, children, roots) and the per-node aggregates
//! used by glyphs and filters: subtree height, member counts and diagnostic
//! rollups.
//!
//! Entities are stored densely in ascending id order, so a node index is also
//! a rank in byte-wise id order. Edge lists are kept sorted the same way.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Entity, EntityId, EntityKind, Relation, RelationName, Severity};

pub const FORMAT_VERSION: &str = "1.0";

/// One broken structural invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "camelCase")]
pub enum Violation {
    #[error("duplicate entity id `{id}`")]
    DuplicateId { id: EntityId },
    #[error("{relation} edge ({source_id}, {target_id}) references an unknown entity")]
    DanglingEdge {
        relation: RelationName,
        source_id: EntityId,
        target_id: EntityId,
    },
    #[error("declares cycle through `{id}`")]
    DeclaresCycle { id: EntityId },
    #[error("`{id}` has multiple declares parents: {parents:?}")]
    MultipleParents { id: EntityId, parents: Vec<EntityId> },
    #[error("`{id}` is both abstract and sealed")]
    IllegalModifierCombination { id: EntityId },
    #[error("kind mismatch at `{id}`: {reason}")]
    KindMismatch { id: EntityId, reason: String },
    #[error("non-solution entity `{id}` has no declares parent")]
    MissingParent { id: EntityId },
    #[error("dependsOn cycle through `{id}`")]
    DependsOnCycle { id: EntityId },
    #[error("diagnostic on `{id}` has an empty code")]
    EmptyDiagnosticCode { id: EntityId },
}

impl Violation {
    /// Stable name of the violated invariant.
    pub fn name(&self) -> &'static str {
        match self {
            Violation::DuplicateId { .. } => "DuplicateId",
            Violation::DanglingEdge { .. } => "DanglingEdge",
            Violation::DeclaresCycle { .. } => "DeclaresCycle",
            Violation::MultipleParents { .. } => "MultipleParents",
            Violation::IllegalModifierCombination { .. } => "IllegalModifierCombination",
            Violation::KindMismatch { .. } => "KindMismatch",
            Violation::MissingParent { .. } => "MissingParent",
            Violation::DependsOnCycle { .. } => "DependsOnCycle",
            Violation::EmptyDiagnosticCode { .. } => "EmptyDiagnosticCode",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("unknown entity id `{0}`")]
    UnknownId(EntityId),
    #[error("`{0}` is not a type")]
    NotAType(EntityId),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MemberCounts {
    pub static_count: u32,
    pub instance_count: u32,
}

impl MemberCounts {
    pub fn total(&self) -> u32 {
        self.static_count + self.instance_count
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiagnosticRollup {
    pub error_in_subtree: bool,
    pub warning_in_subtree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphMetadata {
    pub label: String,
    pub format_version: String,
}

impl Default for GraphMetadata {
    fn default() -> Self {
        Self {
            label: String::new(),
            format_version: FORMAT_VERSION.to_owned(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EntityGraph {
    metadata: GraphMetadata,
    entities: Vec<Entity>,
    index: HashMap<EntityId, usize>,
    relations: BTreeMap<RelationName, Vec<(usize, usize)>>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    roots: Vec<usize>,
    depth: Vec<u32>,
    height: Vec<u32>,
    members: Vec<MemberCounts>,
    rollup: Vec<DiagnosticRollup>,
}

impl PartialEq for EntityGraph {
    fn eq(&self, other: &Self) -> bool {
        self.metadata == other.metadata
            && self.entities == other.entities
            && self.relations == other.relations
    }
}

impl EntityGraph {
    pub fn build(entities: Vec<Entity>, relations: Vec<Relation>) -> Result<Self, Violation> {
        Self::build_with_metadata(GraphMetadata::default(), entities, relations)
    }

    pub fn build_with_metadata(
        metadata: GraphMetadata,
        entities: Vec<Entity>,
        relations: Vec<Relation>,
    ) -> Result<Self, Violation> {
        let mut violations = Vec::new();
        let checked = check(&entities, &relations, &mut violations, true);
        if let Some(first) = violations.into_iter().next() {
            return Err(first);
        }
        let Checked { order, edges } = checked.expect("no violations implies a checked graph");

        let mut sorted: Vec<Option<Entity>> = entities.into_iter().map(Some).collect();
        let entities: Vec<Entity> = order
            .iter()
            .map(|&i| sorted[i].take().expect("each entity is moved once"))
            .collect();
        let index: HashMap<EntityId, usize> = entities
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), i))
            .collect();
        let relations = edges
            .into_iter()
            .map(|(name, set)| {
                let list = set
                    .into_iter()
                    .map(|(a, b)| (index[&a], index[&b]))
                    .collect::<Vec<_>>();
                (name, list)
            })
            .collect::<BTreeMap<_, _>>();

        Ok(Self::assemble(metadata, entities, index, relations))
    }

    fn assemble(
        metadata: GraphMetadata,
        entities: Vec<Entity>,
        index: HashMap<EntityId, usize>,
        mut relations: BTreeMap<RelationName, Vec<(usize, usize)>>,
    ) -> Self {
        for name in RelationName::ALL {
            relations.entry(name).or_default();
        }
        let n = entities.len();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        for &(p, c) in &relations[&RelationName::Declares] {
            parent[c] = Some(p);
            children[p].push(c);
        }
        let roots: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();

        // Pre-order from the roots; reversed it is a valid post-order.
        let mut order = Vec::with_capacity(n);
        let mut depth = vec![0u32; n];
        let mut stack: Vec<usize> = roots.iter().rev().copied().collect();
        while let Some(i) = stack.pop() {
            order.push(i);
            for &c in children[i].iter().rev() {
                depth[c] = depth[i] + 1;
                stack.push(c);
            }
        }

        let mut height = vec![0u32; n];
        let mut members = vec![MemberCounts::default(); n];
        let mut rollup = vec![DiagnosticRollup::default(); n];
        for &i in order.iter().rev() {
            for &c in &children[i] {
                height[i] = height[i].max(height[c] + 1);
                let child = &entities[c];
                if child.kind.is_member() {
                    if child.modifiers.is_static {
                        members[i].static_count += 1;
                    } else {
                        members[i].instance_count += 1;
                    }
                }
                let below = rollup[c];
                rollup[i].error_in_subtree |= below.error_in_subtree || child.has_own(Severity::Error);
                rollup[i].warning_in_subtree |=
                    below.warning_in_subtree || child.has_own(Severity::Warning);
            }
        }

        Self {
            metadata,
            entities,
            index,
            relations,
            parent,
            children,
            roots,
            depth,
            height,
            members,
            rollup,
        }
    }

    pub fn metadata(&self) -> &GraphMetadata {
        &self.metadata
    }

    pub fn label(&self) -> &str {
        &self.metadata.label
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    /// Entities in ascending id order.
    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn entity(&self, id: &EntityId) -> Option<&Entity> {
        self.index.get(id).map(|&i| &self.entities[i])
    }

    pub fn index_of(&self, id: &EntityId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn require(&self, id: &EntityId) -> Result<usize, QueryError> {
        self.index_of(id)
            .ok_or_else(|| QueryError::UnknownId(id.clone()))
    }

    pub fn entity_at(&self, ix: usize) -> &Entity {
        &self.entities[ix]
    }

    pub fn id_at(&self, ix: usize) -> &EntityId {
        &self.entities[ix].id
    }

    pub fn parent(&self, ix: usize) -> Option<usize> {
        self.parent[ix]
    }

    /// `declares` children in ascending id order.
    pub fn children(&self, ix: usize) -> &[usize] {
        &self.children[ix]
    }

    /// Nodes without a `declares` parent; always solutions.
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    /// Number of `declares` edges between `ix` and its root.
    pub fn depth(&self, ix: usize) -> u32 {
        self.depth[ix]
    }

    /// Strict ancestors, nearest first.
    pub fn ancestors(&self, ix: usize) -> impl Iterator<Item = usize> + '_ {
        std::iter::successors(self.parent[ix], move |&p| self.parent[p])
    }

    /// Strict descendants in pre-order.
    pub fn descendants(&self, ix: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack: Vec<usize> = self.children[ix].iter().rev().copied().collect();
        while let Some(i) = stack.pop() {
            out.push(i);
            stack.extend(self.children[i].iter().rev());
        }
        out
    }

    /// Edges of a relation as node-index pairs sorted by (source id, target id).
    pub fn edges(&self, relation: RelationName) -> &[(usize, usize)] {
        &self.relations[&relation]
    }

    pub fn edge_ids(
        &self,
        relation: RelationName,
    ) -> impl Iterator<Item = (&EntityId, &EntityId)> + '_ {
        self.edges(relation)
            .iter()
            .map(|&(a, b)| (self.id_at(a), self.id_at(b)))
    }

    pub fn subtree_height(&self, id: &EntityId) -> Result<u32, QueryError> {
        self.require(id).map(|i| self.height[i])
    }

    pub fn height_at(&self, ix: usize) -> u32 {
        self.height[ix]
    }

    pub fn member_counts(&self, type_id: &EntityId) -> Result<MemberCounts, QueryError> {
        let i = self.require(type_id)?;
        if self.entities[i].kind != EntityKind::Type {
            return Err(QueryError::NotAType(type_id.clone()));
        }
        Ok(self.members[i])
    }

    /// Member counts for any node; zero for nodes that declare no members.
    pub fn member_counts_at(&self, ix: usize) -> MemberCounts {
        self.members[ix]
    }

    pub fn diagnostic_rollup(&self, id: &EntityId) -> Result<DiagnosticRollup, QueryError> {
        self.require(id).map(|i| self.rollup[i])
    }

    pub fn rollup_at(&self, ix: usize) -> DiagnosticRollup {
        self.rollup[ix]
    }

    /// Re-checks every invariant. Always empty for a graph that came out of
    /// [`EntityGraph::build`].
    pub fn validate(&self) -> Vec<Violation> {
        let relations: Vec<Relation> = RelationName::ALL
            .into_iter()
            .map(|name| Relation {
                name,
                edges: self
                    .edge_ids(name)
                    .map(|(a, b)| (a.clone(), b.clone()))
                    .collect(),
            })
            .collect();
        validate(&self.entities, &relations)
    }

    /// Clones out the entities and relations, e.g. to rebuild with edits.
    pub fn to_parts(&self) -> (Vec<Entity>, Vec<Relation>) {
        let relations = RelationName::ALL
            .into_iter()
            .map(|name| Relation {
                name,
                edges: self
                    .edge_ids(name)
                    .map(|(a, b)| (a.clone(), b.clone()))
                    .collect(),
            })
            .collect();
        (self.entities.clone(), relations)
    }
}

/// Reports every violated invariant of the given parts; empty iff
/// [`EntityGraph::build`] would succeed.
pub fn validate(entities: &[Entity], relations: &[Relation]) -> Vec<Violation> {
    let mut violations = Vec::new();
    check(entities, relations, &mut violations, false);
    violations
}

struct Checked {
    /// Input positions sorted by entity id.
    order: Vec<usize>,
    edges: BTreeMap<RelationName, BTreeSet<(EntityId, EntityId)>>,
}

fn check(
    entities: &[Entity],
    relations: &[Relation],
    out: &mut Vec<Violation>,
    stop_early: bool,
) -> Option<Checked> {
    macro_rules! bail_if_early {
        () => {
            if stop_early && !out.is_empty() {
                return None;
            }
        };
    }

    let mut by_id: BTreeMap<&EntityId, usize> = BTreeMap::new();
    for (i, e) in entities.iter().enumerate() {
        if by_id.insert(&e.id, i).is_some() {
            out.push(Violation::DuplicateId { id: e.id.clone() });
        }
    }
    bail_if_early!();

    let mut edges: BTreeMap<RelationName, BTreeSet<(EntityId, EntityId)>> = BTreeMap::new();
    for rel in relations {
        let set = edges.entry(rel.name).or_default();
        for (a, b) in &rel.edges {
            if by_id.contains_key(a) && by_id.contains_key(b) {
                set.insert((a.clone(), b.clone()));
            } else {
                out.push(Violation::DanglingEdge {
                    relation: rel.name,
                    source_id: a.clone(),
                    target_id: b.clone(),
                });
            }
        }
    }
    bail_if_early!();

    for e in entities {
        check_entity(e, out);
    }
    bail_if_early!();

    let kind_of = |id: &EntityId| entities[by_id[id]].kind;

    // declares: unique parents, acyclic, kind-compatible, rooted at solutions.
    let empty = BTreeSet::new();
    let declares = edges.get(&RelationName::Declares).unwrap_or(&empty);
    let mut parents: BTreeMap<&EntityId, Vec<&EntityId>> = BTreeMap::new();
    for (p, c) in declares {
        parents.entry(c).or_default().push(p);
    }
    for (c, ps) in &parents {
        if ps.len() > 1 {
            out.push(Violation::MultipleParents {
                id: (*c).clone(),
                parents: ps.iter().map(|p| (*p).clone()).collect(),
            });
        }
    }
    bail_if_early!();

    // Each node has at most one parent here, so walking parent links either
    // reaches a root or loops.
    let parent_of = |id: &EntityId| parents.get(id).and_then(|ps| ps.first().copied());
    let mut state: BTreeMap<&EntityId, u8> = BTreeMap::new(); // 1 = on path, 2 = done
    for &start in by_id.keys() {
        let mut path = Vec::new();
        let mut cur = Some(start);
        while let Some(id) = cur {
            match state.get(id) {
                Some(2) => break,
                Some(_) => {
                    let pos = path.iter().position(|p| *p == id).unwrap_or(0);
                    let smallest = path[pos..].iter().min().copied().unwrap_or(id);
                    out.push(Violation::DeclaresCycle { id: smallest.clone() });
                    break;
                }
                None => {
                    state.insert(id, 1);
                    path.push(id);
                    cur = parent_of(id);
                }
            }
        }
        for id in path {
            state.insert(id, 2);
        }
    }
    bail_if_early!();

    for (p, c) in declares {
        let (pk, ck) = (kind_of(p), kind_of(c));
        if !pk.may_declare(ck) {
            out.push(Violation::KindMismatch {
                id: c.clone(),
                reason: format!("a {pk} cannot declare a {ck}"),
            });
        }
    }
    for e in entities {
        if e.kind != EntityKind::Solution && !parents.contains_key(&e.id) {
            out.push(Violation::MissingParent { id: e.id.clone() });
        }
    }
    bail_if_early!();

    let depends = edges.get(&RelationName::DependsOn).unwrap_or(&empty);
    let dependency_kind = |k: EntityKind| matches!(k, EntityKind::Project | EntityKind::Package);
    for (a, b) in depends {
        for id in [a, b] {
            if !dependency_kind(kind_of(id)) {
                out.push(Violation::KindMismatch {
                    id: id.clone(),
                    reason: format!("dependsOn endpoint must be a project or package, not a {}", kind_of(id)),
                });
            }
        }
    }
    bail_if_early!();
    for id in dependency_cycles(depends) {
        out.push(Violation::DependsOnCycle { id });
    }
    bail_if_early!();

    let mut order: Vec<usize> = by_id.values().copied().collect();
    order.sort_by(|&a, &b| entities[a].id.cmp(&entities[b].id));
    Some(Checked { order, edges })
}

fn check_entity(e: &Entity, out: &mut Vec<Violation>) {
    let mismatch = |reason: &str| Violation::KindMismatch {
        id: e.id.clone(),
        reason: reason.to_owned(),
    };
    if e.modifiers.is_abstract && e.modifiers.is_sealed {
        out.push(Violation::IllegalModifierCombination { id: e.id.clone() });
    }
    let is_type = e.kind == EntityKind::Type;
    if e.type_kind.is_some() != is_type {
        out.push(mismatch("typeKind must be present exactly on types"));
    }
    if e.method_kind.is_some() != (e.kind == EntityKind::Method) {
        out.push(mismatch("methodKind must be present exactly on methods"));
    }
    if e.is_record && !e.type_kind.is_some_and(|t| t.allows_record()) {
        out.push(mismatch("only classes and structs can be records"));
    }
    if e.accessibility.is_some() && !e.kind.is_type_or_member() {
        out.push(mismatch("accessibility applies only to types and members"));
    }
    if e.diagnostics.iter().any(|d| d.code.is_empty()) {
        out.push(Violation::EmptyDiagnosticCode { id: e.id.clone() });
    }
}

/// One representative (smallest id) per dependsOn cycle, via Tarjan's SCCs.
fn dependency_cycles(edges: &BTreeSet<(EntityId, EntityId)>) -> Vec<EntityId> {
    let mut adj: BTreeMap<&EntityId, Vec<&EntityId>> = BTreeMap::new();
    for (a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default();
    }
    let nodes: Vec<&EntityId> = adj.keys().copied().collect();
    let pos: HashMap<&EntityId, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let succ: Vec<Vec<usize>> = nodes
        .iter()
        .map(|n| adj[n].iter().map(|m| pos[m]).collect())
        .collect();

    let n = nodes.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut cycles = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (node, next successor offset)
        let mut work = vec![(root, 0usize)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut k)) = work.last_mut() {
            if *k < succ[v].len() {
                let w = succ[v][*k];
                *k += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(u, _)) = work.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut component = Vec::new();
                    loop {
                        let w = stack.pop().expect("scc stack");
                        on_stack[w] = false;
                        component.push(w);
                        if w == v {
                            break;
                        }
                    }
                    let cyclic = component.len() > 1 || succ[v].contains(&v);
                    if cyclic {
                        let smallest = component.iter().map(|&i| nodes[i]).min().expect("non-empty");
                        cycles.push(smallest.clone());
                    }
                }
            }
        }
    }
    cycles.sort();
    cycles
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Entity, EntityKind::*, Relation, RelationName::*, Severity};

    fn e(id: &str, kind: EntityKind) -> Entity {
        Entity::new(id, id, kind)
    }

    #[test]
    fn single_solution_is_valid() {
        let g = EntityGraph::build(vec![e("S", Solution)], vec![]).unwrap();
        assert_eq!(g.len(), 1);
        assert!(RelationName::ALL.iter().all(|&r| g.edges(r).is_empty()));
        assert!(g.validate().is_empty());
    }

    #[test]
    fn smallest_tree() {
        let g = EntityGraph::build(
            vec![e("S", Solution), e("P", Project)],
            vec![Relation::new(Declares, [("S", "P")])],
        )
        .unwrap();
        assert_eq!(g.children(g.index_of(&"S".into()).unwrap()).len(), 1);
        assert_eq!(g.roots().len(), 1);
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = EntityGraph::build(
            vec![e("A", Namespace), e("B", Namespace)],
            vec![Relation::new(Declares, [("A", "B"), ("B", "A")])],
        )
        .unwrap_err();
        assert_eq!(err, Violation::DeclaresCycle { id: "A".into() });
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let v = validate(
            &[e("S", Solution), e("N", Namespace)],
            &[Relation::new(Declares, [("N", "N")])],
        );
        assert!(v.contains(&Violation::DeclaresCycle { id: "N".into() }));
    }

    #[test]
    fn duplicate_and_dangling() {
        let err = EntityGraph::build(vec![e("S", Solution), e("S", Solution)], vec![]).unwrap_err();
        assert_eq!(err.name(), "DuplicateId");
        let err = EntityGraph::build(
            vec![e("S", Solution)],
            vec![Relation::new(Declares, [("S", "X")])],
        )
        .unwrap_err();
        assert_eq!(err.name(), "DanglingEdge");
    }

    #[test]
    fn multiple_parents() {
        let err = EntityGraph::build(
            vec![e("S", Solution), e("P", Project), e("Q", Project), e("N", Namespace)],
            vec![Relation::new(
                Declares,
                [("S", "P"), ("S", "Q"), ("P", "N"), ("Q", "N")],
            )],
        )
        .unwrap_err();
        assert_eq!(err.name(), "MultipleParents");
    }

    #[test]
    fn entity_field_rules() {
        let mut t = e("T", Type);
        t.modifiers.is_abstract = true;
        t.modifiers.is_sealed = true;
        assert_eq!(
            validate(&[t], &[]).first().map(Violation::name),
            Some("IllegalModifierCombination")
        );

        let mut n = e("N", Namespace);
        n.type_kind = Some(crate::model::TypeKind::Class);
        assert!(validate(&[n], &[]).iter().any(|v| v.name() == "KindMismatch"));

        let mut i = e("I", Type).with_type_kind(crate::model::TypeKind::Interface);
        i.is_record = true;
        assert!(validate(&[i], &[]).iter().any(|v| v.name() == "KindMismatch"));

        let d = e("S", Solution).with_diagnostic(Severity::Error, "", "boom");
        assert_eq!(validate(&[d], &[]).first().map(Violation::name), Some("EmptyDiagnosticCode"));
    }

    #[test]
    fn declares_kind_compatibility_and_roots() {
        let v = validate(
            &[e("S", Solution), e("M", Method)],
            &[Relation::new(Declares, [("S", "M")])],
        );
        assert_eq!(v.iter().map(Violation::name).collect::<Vec<_>>(), ["KindMismatch"]);
        let v = validate(&[e("S", Solution), e("P", Project)], &[]);
        assert_eq!(v, vec![Violation::MissingParent { id: "P".into() }]);
    }

    #[test]
    fn depends_on_rules() {
        let ents = [e("S", Solution), e("P1", Project), e("P2", Project), e("N", Namespace)];
        let declares = Relation::new(Declares, [("S", "P1"), ("S", "P2"), ("P1", "N")]);
        let v = validate(
            &ents,
            &[declares.clone(), Relation::new(DependsOn, [("P1", "P2"), ("P2", "P1")])],
        );
        assert_eq!(v, vec![Violation::DependsOnCycle { id: "P1".into() }]);
        let v = validate(&ents, &[declares, Relation::new(DependsOn, [("P1", "N")])]);
        assert_eq!(v.iter().map(Violation::name).collect::<Vec<_>>(), ["KindMismatch"]);
    }

    #[test]
    fn validate_reports_every_violation() {
        let mut t = e("T", Type);
        t.modifiers.is_abstract = true;
        t.modifiers.is_sealed = true;
        let v = validate(
            &[e("S", Solution), t, e("P", Project)],
            &[Relation::new(Declares, [("S", "T"), ("S", "X")])],
        );
        let names: Vec<_> = v.iter().map(Violation::name).collect();
        assert!(names.contains(&"DanglingEdge"));
        assert!(names.contains(&"IllegalModifierCombination"));
        assert!(names.contains(&"KindMismatch"));
        assert!(names.contains(&"MissingParent"));
    }

    fn chain() -> EntityGraph {
        EntityGraph::build(
            vec![
                e("S", Solution),
                e("P", Project),
                e("N", Namespace),
                e("T", Type),
                e("M", Method),
            ],
            vec![Relation::new(
                Declares,
                [("S", "P"), ("P", "N"), ("N", "T"), ("T", "M")],
            )],
        )
        .unwrap()
    }

    #[test]
    fn subtree_heights() {
        let g = chain();
        assert_eq!(g.subtree_height(&"M".into()), Ok(0));
        assert_eq!(g.subtree_height(&"S".into()), Ok(4));
        assert_eq!(g.subtree_height(&"P".into()), Ok(3));
        assert_eq!(
            g.subtree_height(&"nope".into()),
            Err(QueryError::UnknownId("nope".into()))
        );

        // solution with children of heights 0 and 2
        let g = EntityGraph::build(
            vec![
                e("S", Solution),
                e("K", Package),
                e("P", Project),
                e("N", Namespace),
                e("T", Type),
            ],
            vec![Relation::new(
                Declares,
                [("S", "K"), ("S", "P"), ("P", "N"), ("N", "T")],
            )],
        )
        .unwrap();
        assert_eq!(g.subtree_height(&"S".into()), Ok(3));
    }

    #[test]
    fn member_counts_partition() {
        let ents = vec![
            e("S", Solution),
            e("P", Project),
            e("T", Type),
            e("U", Type),
            e("f1", Field).statik(),
            e("f2", Field).statik(),
            e("f3", Field).statik(),
            e("m", Method),
            e("x", Parameter),
            e("Nested", Type),
        ];
        let g = EntityGraph::build(
            ents,
            vec![Relation::new(
                Declares,
                [
                    ("S", "P"),
                    ("P", "T"),
                    ("P", "U"),
                    ("T", "f1"),
                    ("T", "f2"),
                    ("T", "f3"),
                    ("T", "m"),
                    ("m", "x"),
                    ("U", "Nested"),
                ],
            )],
        )
        .unwrap();
        assert_eq!(
            g.member_counts(&"T".into()),
            Ok(MemberCounts { static_count: 3, instance_count: 1 })
        );
        assert_eq!(g.member_counts(&"U".into()), Ok(MemberCounts::default()));
        assert_eq!(g.member_counts(&"Nested".into()), Ok(MemberCounts::default()));
        assert_eq!(g.member_counts(&"P".into()), Err(QueryError::NotAType("P".into())));
        assert_eq!(g.member_counts(&"?".into()), Err(QueryError::UnknownId("?".into())));
    }

    #[test]
    fn rollup_is_strict_descendants() {
        let ents = vec![
            e("S", Solution),
            e("P", Project),
            e("T", Type),
            e("M", Method).with_diagnostic(Severity::Error, "CS0001", "bad"),
            e("F", Field).with_diagnostic(Severity::Warning, "CS0002", "meh"),
        ];
        let g = EntityGraph::build(
            ents,
            vec![Relation::new(
                Declares,
                [("S", "P"), ("P", "T"), ("T", "M"), ("T", "F")],
            )],
        )
        .unwrap();
        let r = |id: &str| g.diagnostic_rollup(&id.into()).unwrap();
        assert_eq!(r("M"), DiagnosticRollup::default());
        assert_eq!(
            r("S"),
            DiagnosticRollup { error_in_subtree: true, warning_in_subtree: true }
        );
        assert_eq!(r("T"), r("S"));
    }

    #[test]
    fn graph_error_in_grandchild() {
        let ents = vec![
            e("S", Solution),
            e("P", Project),
            e("T", Type),
            e("M", Method).with_diagnostic(Severity::Error, "CS0001", "bad"),
        ];
        let g = EntityGraph::build(
            ents,
            vec![Relation::new(Declares, [("S", "P"), ("P", "T"), ("T", "M")])],
        )
        .unwrap();
        assert_eq!(
            g.diagnostic_rollup(&"S".into()).unwrap(),
            DiagnosticRollup { error_in_subtree: true, warning_in_subtree: false }
        );
    }

    #[test]
    fn multiple_solutions_form_a_forest() {
        let g = EntityGraph::build(vec![e("S1", Solution), e("S2", Solution)], vec![]).unwrap();
        assert_eq!(g.roots(), &[0, 1]);
    }
}
