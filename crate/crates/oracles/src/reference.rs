//! Brute-force answers to every graph, glyph and filter question.

use std::collections::{BTreeMap, BTreeSet};

use helgraph_core::filter::{ClauseInput, QueryInput, SearchMode};
use helgraph_core::{Entity, EntityId, EntityKind, Relation, RelationName, Severity};
use serde_json::Value;

/// Graph parts indexed by id, nothing precomputed.
#[derive(Debug, Clone)]
pub struct Reference {
    pub entities: BTreeMap<EntityId, Entity>,
    pub parent: BTreeMap<EntityId, EntityId>,
    pub children: BTreeMap<EntityId, Vec<EntityId>>,
    pub edges: BTreeMap<RelationName, Vec<(EntityId, EntityId)>>,
}

impl Reference {
    pub fn new(entities: &[Entity], relations: &[Relation]) -> Self {
        let mut r = Reference {
            entities: entities.iter().map(|e| (e.id.clone(), e.clone())).collect(),
            parent: BTreeMap::new(),
            children: BTreeMap::new(),
            edges: BTreeMap::new(),
        };
        for rel in relations {
            r.edges.entry(rel.name).or_default().extend(rel.edges.iter().cloned());
            if rel.name == RelationName::Declares {
                for (p, c) in &rel.edges {
                    r.parent.insert(c.clone(), p.clone());
                    r.children.entry(p.clone()).or_default().push(c.clone());
                }
            }
        }
        r
    }

    pub fn ids(&self) -> impl Iterator<Item = &EntityId> {
        self.entities.keys()
    }

    pub fn entity(&self, id: &EntityId) -> &Entity {
        &self.entities[id]
    }

    pub fn kids(&self, id: &EntityId) -> &[EntityId] {
        self.children.get(id).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Nearest first.
    pub fn ancestors(&self, id: &EntityId) -> Vec<EntityId> {
        let mut out = Vec::new();
        let mut cur = id;
        while let Some(p) = self.parent.get(cur) {
            out.push(p.clone());
            cur = p;
        }
        out
    }

    /// Strict descendants, by recursive walk.
    pub fn descendants(&self, id: &EntityId) -> Vec<EntityId> {
        let mut out = Vec::new();
        for c in self.kids(id) {
            out.push(c.clone());
            out.extend(self.descendants(c));
        }
        out
    }

    pub fn height(&self, id: &EntityId) -> u32 {
        self.kids(id).iter().map(|c| 1 + self.height(c)).max().unwrap_or(0)
    }

    /// (static, instance) among direct member children.
    pub fn member_counts(&self, id: &EntityId) -> (u32, u32) {
        let mut counts = (0, 0);
        for c in self.kids(id) {
            let e = self.entity(c);
            if matches!(
                e.kind,
                EntityKind::Field | EntityKind::Method | EntityKind::Property | EntityKind::Event
            ) {
                if e.modifiers.is_static {
                    counts.0 += 1;
                } else {
                    counts.1 += 1;
                }
            }
        }
        counts
    }

    fn has(&self, id: &EntityId, severity: Severity) -> bool {
        self.entity(id).diagnostics.iter().any(|d| d.severity == severity)
    }

    /// (error, warning) among strict descendants.
    pub fn rollup(&self, id: &EntityId) -> (bool, bool) {
        let d = self.descendants(id);
        (
            d.iter().any(|x| self.has(x, Severity::Error)),
            d.iter().any(|x| self.has(x, Severity::Warning)),
        )
    }

    /// Radius with the default constants.
    pub fn radius(&self, id: &EntityId, mode: &str) -> f64 {
        let e = self.entity(id);
        let base = match e.kind {
            EntityKind::Solution => 14.0,
            EntityKind::Project => 12.0,
            EntityKind::Package | EntityKind::Namespace => 10.0,
            EntityKind::Type => 8.0,
            EntityKind::Parameter => 4.0,
            _ => 5.0,
        };
        let bonus = match e.kind {
            EntityKind::Solution | EntityKind::Project | EntityKind::Namespace => {
                2.0 * f64::from(self.height(id))
            }
            _ => 0.0,
        };
        let scale = if e.kind == EntityKind::Type {
            let (s, i) = self.member_counts(id);
            let x = f64::from(s + i);
            match mode {
                "linear" => 0.25 * x,
                "sqrt" => 1.5 * x.sqrt(),
                _ => 3.0 * (1.0 + x).ln(),
            }
        } else {
            0.0
        };
        base + bonus + scale
    }

    fn text_property(&self, id: &EntityId, property: &str) -> Option<String> {
        let e = self.entity(id);
        match property {
            "name" => Some(e.name.clone()),
            "commentText" => e.comment.as_ref().map(|c| {
                let mut s = c.summary.clone();
                if let Some(r) = &c.remarks {
                    s.push('\n');
                    s.push_str(r);
                }
                s
            }),
            "projectName" => {
                let mut chain = vec![id.clone()];
                chain.extend(self.ancestors(id));
                chain
                    .iter()
                    .find(|a| self.entity(a).kind == EntityKind::Project)
                    .map(|a| self.entity(a).name.clone())
            }
            "namespacePath" => {
                let mut chain = vec![id.clone()];
                chain.extend(self.ancestors(id));
                let names: Vec<String> = chain
                    .iter()
                    .rev()
                    .filter(|a| self.entity(a).kind == EntityKind::Namespace)
                    .map(|a| self.entity(a).name.clone())
                    .collect();
                (!names.is_empty()).then(|| names.join("."))
            }
            _ => unreachable!("not a text property: {property}"),
        }
    }

    fn enum_property(&self, id: &EntityId, property: &str) -> Option<String> {
        let e = self.entity(id);
        let v = match property {
            "kind" => serde_json::to_value(e.kind),
            "typeKind" => serde_json::to_value(e.type_kind?),
            "methodKind" => serde_json::to_value(e.method_kind?),
            "accessibility" => serde_json::to_value(e.accessibility?),
            _ => unreachable!("not an enumeration property: {property}"),
        };
        v.ok()?.as_str().map(str::to_owned)
    }

    fn bool_property(&self, id: &EntityId, property: &str) -> bool {
        let e = self.entity(id);
        match property {
            "isStatic" => e.modifiers.is_static,
            "isAbstract" => e.modifiers.is_abstract,
            "isSealed" => e.modifiers.is_sealed,
            "isRecord" => e.is_record,
            "hasOwnError" => self.has(id, Severity::Error),
            "hasOwnWarning" => self.has(id, Severity::Warning),
            "hasSubtreeError" => self.rollup(id).0,
            "hasSubtreeWarning" => self.rollup(id).1,
            _ => unreachable!("not a boolean property: {property}"),
        }
    }

    fn int_property(&self, id: &EntityId, property: &str) -> Option<i64> {
        match property {
            "memberCount" => (self.entity(id).kind == EntityKind::Type).then(|| {
                let (s, i) = self.member_counts(id);
                i64::from(s + i)
            }),
            "subtreeHeight" => Some(i64::from(self.height(id))),
            _ => unreachable!("not an integer property: {property}"),
        }
    }

    pub fn clause_matches(&self, id: &EntityId, c: &ClauseInput) -> bool {
        let p = c.property.as_str();
        match p {
            "name" | "commentText" | "projectName" | "namespacePath" => {
                let Some(s) = self.text_property(id, p) else { return false };
                let needle = c.value.as_str().expect("string value");
                match c.operator.as_str() {
                    "equals" => s == needle,
                    "contains" => s.contains(needle),
                    "startsWith" => s.starts_with(needle),
                    "matchesRegex" => regex::Regex::new(needle).expect("valid").is_match(&s),
                    op => panic!("bad string operator {op}"),
                }
            }
            "kind" | "typeKind" | "methodKind" | "accessibility" => {
                let Some(v) = self.enum_property(id, p) else { return false };
                match (&c.operator[..], &c.value) {
                    ("equals", Value::String(s)) => v == *s,
                    ("oneOf", Value::Array(items)) => items.iter().any(|i| i.as_str() == Some(&v)),
                    other => panic!("bad enumeration clause {other:?}"),
                }
            }
            "memberCount" | "subtreeHeight" => {
                let Some(v) = self.int_property(id, p) else { return false };
                let rhs = c.value.as_i64().expect("integer value");
                match c.operator.as_str() {
                    "eq" | "=" => v == rhs,
                    "ne" | "!=" | "≠" => v != rhs,
                    "lt" | "<" => v < rhs,
                    "le" | "<=" | "≤" => v <= rhs,
                    "gt" | ">" => v > rhs,
                    "ge" | ">=" | "≥" => v >= rhs,
                    op => panic!("bad integer operator {op}"),
                }
            }
            _ => self.bool_property(id, p) == c.value.as_bool().expect("boolean value"),
        }
    }

    pub fn query_matches(&self, id: &EntityId, q: &QueryInput) -> bool {
        let name = &self.entity(id).name;
        match q.mode {
            SearchMode::FullText => {
                let t = q.text.as_deref().unwrap_or_default();
                name.to_lowercase().contains(&t.to_lowercase())
            }
            SearchMode::Regex => regex::Regex::new(q.text.as_deref().unwrap_or_default())
                .expect("valid")
                .is_match(name),
            SearchMode::Builder => q.clauses.iter().all(|c| self.clause_matches(id, c)),
        }
    }

    /// Linear scan over `eligible`.
    pub fn evaluate<'a>(
        &self,
        eligible: impl IntoIterator<Item = &'a EntityId>,
        q: &QueryInput,
    ) -> BTreeSet<EntityId> {
        eligible
            .into_iter()
            .filter(|id| self.query_matches(id, q))
            .cloned()
            .collect()
    }
}
