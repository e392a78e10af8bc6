//! Seeded generator of codebase-shaped graphs for tests, benchmarks and demos.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EntityGraph, GraphMetadata, FORMAT_VERSION};
use crate::model::{
    Accessibility, Entity, EntityId, EntityKind, MethodKind, Relation, RelationName, Severity,
    TypeKind,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SyntheticParams {
    pub seed: u64,
    pub project_count: u32,
    pub namespace_depth: u32,
    pub types_per_namespace: u32,
    pub members_per_type: u32,
    pub diagnostic_rate: f64,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        Self {
            seed: 1,
            project_count: 8,
            namespace_depth: 2,
            types_per_namespace: 4,
            members_per_type: 5,
            diagnostic_rate: 0.02,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamsError {
    #[error("`{0}` must be at least 1")]
    ZeroCount(&'static str),
    #[error("diagnostic rate {0} is outside [0, 1]")]
    RateOutOfRange(f64),
}

impl SyntheticParams {
    pub fn check(&self) -> Result<(), ParamsError> {
        for (name, v) in [
            ("projectCount", self.project_count),
            ("namespaceDepth", self.namespace_depth),
            ("typesPerNamespace", self.types_per_namespace),
            ("membersPerType", self.members_per_type),
        ] {
            if v == 0 {
                return Err(ParamsError::ZeroCount(name));
            }
        }
        if !(0.0..=1.0).contains(&self.diagnostic_rate) {
            return Err(ParamsError::RateOutOfRange(self.diagnostic_rate));
        }
        Ok(())
    }
}

const WORDS: &[&str] = &[
    "Project", "Service", "Entity", "Graph", "Node", "Layout", "Filter", "Query", "Session",
    "Glyph", "Document", "Reader", "Writer", "Cache", "Store", "Handler", "Factory", "Builder",
    "Visitor", "Context", "Options", "Model", "View", "Token", "Symbol", "Analyzer", "Workspace",
    "Package", "Diagnostic", "Comment",
];

const NAMESPACE_WORDS: &[&str] = &[
    "Core", "Data", "Model", "Services", "Utilities", "Layout", "Visualization", "Collections",
    "IO", "Text", "Runtime", "Extensions",
];

const DIAGNOSTICS: &[(Severity, &str, &str)] = &[
    (Severity::Error, "CS0103", "The name does not exist in the current context"),
    (Severity::Error, "CS0246", "The type or namespace name could not be found"),
    (Severity::Warning, "CS0168", "The variable is declared but never used"),
    (Severity::Warning, "CS8618", "Non-nullable property must contain a non-null value"),
    (Severity::Info, "IDE0044", "Make field readonly"),
];

struct Builder {
    rng: ChaCha8Rng,
    params: SyntheticParams,
    next_id: u32,
    entities: Vec<Entity>,
    declares: Vec<(EntityId, EntityId)>,
    types: Vec<(EntityId, TypeKind)>,
    typed_members: Vec<EntityId>,
    methods: Vec<EntityId>,
}

impl Builder {
    fn id(&mut self, prefix: char) -> EntityId {
        self.next_id += 1;
        EntityId(format!("{prefix}{:06}", self.next_id))
    }

    fn add(&mut self, parent: Option<&EntityId>, entity: Entity) -> EntityId {
        let id = entity.id.clone();
        if let Some(p) = parent {
            self.declares.push((p.clone(), id.clone()));
        }
        self.entities.push(entity);
        id
    }

    fn word(&mut self) -> &'static str {
        WORDS.choose(&mut self.rng).expect("non-empty")
    }

    fn accessibility(&mut self) -> Accessibility {
        if self.rng.gen_bool(0.6) {
            Accessibility::Public
        } else {
            *Accessibility::ALL.choose(&mut self.rng).expect("non-empty")
        }
    }

    fn maybe_diagnose(&mut self, entity: &mut Entity) {
        if self.params.diagnostic_rate > 0.0 && self.rng.gen_bool(self.params.diagnostic_rate) {
            let (severity, code, message) = *DIAGNOSTICS.choose(&mut self.rng).expect("non-empty");
            entity.diagnostics.push(crate::model::Diagnostic {
                severity,
                code: code.to_owned(),
                message: message.to_owned(),
            });
        }
    }

    fn maybe_comment(&mut self, entity: &mut Entity) {
        if self.rng.gen_bool(0.5) {
            let summary = format!("Handles the {} of a {}.", self.word().to_lowercase(), self.word());
            let remarks = self
                .rng
                .gen_bool(0.3)
                .then(|| format!("See also {}{}.", self.word(), self.word()));
            entity.comment = Some(crate::model::DocComment { summary, remarks });
        }
    }

    fn namespace_tree(&mut self, parent: &EntityId, level: u32) {
        let count = if level == 1 { 1 } else { self.rng.gen_range(1..=2) };
        for i in 0..count {
            let word = NAMESPACE_WORDS.choose(&mut self.rng).expect("non-empty");
            let name = format!("{word}{i}");
            let id = self.id('N');
            let ns = self.add(Some(parent), Entity::new(id, name, EntityKind::Namespace));
            for _ in 0..self.params.types_per_namespace {
                self.type_entity(&ns);
            }
            if level < self.params.namespace_depth {
                self.namespace_tree(&ns, level + 1);
            }
        }
    }

    fn type_entity(&mut self, parent: &EntityId) {
        let kind = *[
            TypeKind::Class,
            TypeKind::Class,
            TypeKind::Class,
            TypeKind::Struct,
            TypeKind::Enum,
            TypeKind::Interface,
            TypeKind::Delegate,
        ]
        .choose(&mut self.rng)
        .expect("non-empty");
        let id = self.id('T');
        let name = format!("{}{}", self.word(), self.word());
        let mut e = Entity::new(id, name, EntityKind::Type)
            .with_type_kind(kind)
            .with_accessibility(self.accessibility());
        e.is_record = kind.allows_record() && self.rng.gen_bool(0.2);
        let is_static = kind == TypeKind::Class && self.rng.gen_bool(0.15);
        e.modifiers.is_static = is_static;
        if kind == TypeKind::Class && !is_static {
            match self.rng.gen_range(0..4) {
                0 => e.modifiers.is_abstract = true,
                1 => e.modifiers.is_sealed = true,
                _ => {}
            }
        }
        self.maybe_comment(&mut e);
        self.maybe_diagnose(&mut e);
        let ty = self.add(Some(parent), e);
        self.types.push((ty.clone(), kind));

        let max = self.params.members_per_type * 2;
        let count = match kind {
            TypeKind::Delegate => 0,
            _ => self.rng.gen_range(0..=max),
        };
        for _ in 0..count {
            self.member(&ty, is_static);
        }
        if kind == TypeKind::Class && self.rng.gen_bool(0.05) {
            self.type_entity(&ty);
        }
    }

    fn member(&mut self, parent: &EntityId, in_static_type: bool) {
        let kind = *[
            EntityKind::Field,
            EntityKind::Method,
            EntityKind::Method,
            EntityKind::Property,
            EntityKind::Event,
        ]
        .choose(&mut self.rng)
        .expect("non-empty");
        let prefix = match kind {
            EntityKind::Field => 'F',
            EntityKind::Method => 'M',
            EntityKind::Property => 'R',
            _ => 'E',
        };
        let id = self.id(prefix);
        let name = self.word().to_owned();
        let mut e = Entity::new(id, name, kind).with_accessibility(self.accessibility());
        e.modifiers.is_static = in_static_type || self.rng.gen_bool(0.25);
        if !e.modifiers.is_static && kind != EntityKind::Field {
            match self.rng.gen_range(0..8) {
                0 => e.modifiers.is_abstract = true,
                1 => e.modifiers.is_sealed = true,
                _ => {}
            }
        }
        if kind == EntityKind::Method {
            let mk = if self.rng.gen_bool(0.6) {
                MethodKind::Ordinary
            } else {
                *MethodKind::ALL.choose(&mut self.rng).expect("non-empty")
            };
            e.method_kind = Some(mk);
        }
        self.maybe_comment(&mut e);
        self.maybe_diagnose(&mut e);
        let member = self.add(Some(parent), e);
        match kind {
            EntityKind::Method => {
                self.methods.push(member.clone());
                for _ in 0..self.rng.gen_range(0..=2) {
                    let pid = self.id('A');
                    let pname = self.word().to_lowercase();
                    let mut p = Entity::new(pid, pname, EntityKind::Parameter);
                    self.maybe_diagnose(&mut p);
                    let p = self.add(Some(&member), p);
                    self.typed_members.push(p);
                }
            }
            _ => self.typed_members.push(member),
        }
    }
}

/// Deterministic in `params.seed`.
pub fn generate(params: &SyntheticParams) -> Result<EntityGraph, ParamsError> {
    params.check()?;
    let mut b = Builder {
        rng: ChaCha8Rng::seed_from_u64(params.seed),
        params: params.clone(),
        next_id: 0,
        entities: Vec::new(),
        declares: Vec::new(),
        types: Vec::new(),
        typed_members: Vec::new(),
        methods: Vec::new(),
    };

    let sid = b.id('S');
    let solution = b.add(None, Entity::new(sid, "Synthetic", EntityKind::Solution));

    let mut depends = Vec::new();
    let mut projects = Vec::new();
    for i in 0..params.project_count {
        let id = b.id('P');
        let name = format!("Synthetic.{}{i}", b.word());
        let project = b.add(Some(&solution), Entity::new(id, name, EntityKind::Project));
        b.namespace_tree(&project, 1);
        // Only earlier projects, so dependsOn stays acyclic.
        for earlier in &projects {
            if b.rng.gen_bool(0.3) {
                depends.push((project.clone(), EntityId::clone(earlier)));
            }
        }
        projects.push(project);
    }

    let mut inherits = Vec::new();
    let mut type_of = Vec::new();
    let mut returns = Vec::new();
    let mut references = Vec::new();
    let types = b.types.clone();
    if !types.is_empty() {
        for (i, (id, kind)) in types.iter().enumerate() {
            if matches!(kind, TypeKind::Class | TypeKind::Struct | TypeKind::Interface)
                && i > 0
                && b.rng.gen_bool(0.3)
            {
                let j = b.rng.gen_range(0..i);
                inherits.push((id.clone(), types[j].0.clone()));
            }
        }
        for member in b.typed_members.clone() {
            if b.rng.gen_bool(0.5) {
                let target = types.choose(&mut b.rng).expect("non-empty").0.clone();
                type_of.push((member, target));
            }
        }
        for method in b.methods.clone() {
            if b.rng.gen_bool(0.5) {
                let target = types.choose(&mut b.rng).expect("non-empty").0.clone();
                returns.push((method.clone(), target));
            }
            if b.rng.gen_bool(0.2) {
                let target = types.choose(&mut b.rng).expect("non-empty").0.clone();
                references.push((method, target));
            }
        }
    }

    let relations = vec![
        Relation { name: RelationName::Declares, edges: std::mem::take(&mut b.declares) },
        Relation { name: RelationName::DependsOn, edges: depends },
        Relation { name: RelationName::InheritsFrom, edges: inherits },
        Relation { name: RelationName::TypeOf, edges: type_of },
        Relation { name: RelationName::Returns, edges: returns },
        Relation { name: RelationName::References, edges: references },
    ];
    let metadata = GraphMetadata {
        label: format!("synthetic-{}", params.seed),
        format_version: FORMAT_VERSION.to_owned(),
    };
    Ok(EntityGraph::build_with_metadata(metadata, b.entities, relations)
        .expect("generator emits valid graphs"))
}
