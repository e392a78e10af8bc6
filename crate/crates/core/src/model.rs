//! Entity and relation vocabulary shared by every other module.
//!
//! An entity is one named element of a codebase. Entities are connected by
//! named relations; `declares` is the containment skeleton and the rest are
//! associations layered on top of it.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of an entity, unique within a graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityId(pub String);

impl EntityId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for EntityId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

impl From<String> for EntityId {
    fn from(s: String) -> Self {
        Self(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EntityKind {
    Solution,
    Project,
    Package,
    Namespace,
    Type,
    Field,
    Method,
    Property,
    Event,
    Parameter,
}

impl EntityKind {
    pub const ALL: [EntityKind; 10] = [
        EntityKind::Solution,
        EntityKind::Project,
        EntityKind::Package,
        EntityKind::Namespace,
        EntityKind::Type,
        EntityKind::Field,
        EntityKind::Method,
        EntityKind::Property,
        EntityKind::Event,
        EntityKind::Parameter,
    ];

    /// Fields, methods, properties and events. Nested types and parameters
    /// are not members.
    pub fn is_member(self) -> bool {
        matches!(
            self,
            EntityKind::Field | EntityKind::Method | EntityKind::Property | EntityKind::Event
        )
    }

    /// Kinds that carry accessibility and modifiers in source code.
    pub fn is_type_or_member(self) -> bool {
        self == EntityKind::Type || self.is_member()
    }

    /// Solution, project and namespace: the structural skeleton that gets a
    /// size bonus from its subtree height.
    pub fn is_structural(self) -> bool {
        matches!(
            self,
            EntityKind::Solution | EntityKind::Project | EntityKind::Namespace
        )
    }

    /// Whether `child` may appear as a `declares` child of `self`.
    pub fn may_declare(self, child: EntityKind) -> bool {
        use EntityKind::*;
        match self {
            Solution => matches!(child, Project | Package),
            Project => matches!(child, Namespace | Type),
            Namespace => matches!(child, Namespace | Type),
            Type => child == Type || child.is_member(),
            Method => child == Parameter,
            Package | Field | Property | Event | Parameter => false,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EntityKind::Solution => "solution",
            EntityKind::Project => "project",
            EntityKind::Package => "package",
            EntityKind::Namespace => "namespace",
            EntityKind::Type => "type",
            EntityKind::Field => "field",
            EntityKind::Method => "method",
            EntityKind::Property => "property",
            EntityKind::Event => "event",
            EntityKind::Parameter => "parameter",
        }
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TypeKind {
    Class,
    Struct,
    Enum,
    Interface,
    Delegate,
}

impl TypeKind {
    pub const ALL: [TypeKind; 5] = [
        TypeKind::Class,
        TypeKind::Struct,
        TypeKind::Enum,
        TypeKind::Interface,
        TypeKind::Delegate,
    ];

    /// Only classes and structs can be records.
    pub fn allows_record(self) -> bool {
        matches!(self, TypeKind::Class | TypeKind::Struct)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TypeKind::Class => "class",
            TypeKind::Struct => "struct",
            TypeKind::Enum => "enum",
            TypeKind::Interface => "interface",
            TypeKind::Delegate => "delegate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum MethodKind {
    Ordinary,
    Constructor,
    Getter,
    Setter,
    Operator,
}

impl MethodKind {
    pub const ALL: [MethodKind; 5] = [
        MethodKind::Ordinary,
        MethodKind::Constructor,
        MethodKind::Getter,
        MethodKind::Setter,
        MethodKind::Operator,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MethodKind::Ordinary => "ordinary",
            MethodKind::Constructor => "constructor",
            MethodKind::Getter => "getter",
            MethodKind::Setter => "setter",
            MethodKind::Operator => "operator",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Accessibility {
    Public,
    Internal,
    Protected,
    ProtectedInternal,
    PrivateProtected,
    Private,
}

impl Accessibility {
    pub const ALL: [Accessibility; 6] = [
        Accessibility::Public,
        Accessibility::Internal,
        Accessibility::Protected,
        Accessibility::ProtectedInternal,
        Accessibility::PrivateProtected,
        Accessibility::Private,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Accessibility::Public => "public",
            Accessibility::Internal => "internal",
            Accessibility::Protected => "protected",
            Accessibility::ProtectedInternal => "protectedInternal",
            Accessibility::PrivateProtected => "privateProtected",
            Accessibility::Private => "private",
        }
    }

    /// Source-code spelling.
    pub fn keyword(self) -> &'static str {
        match self {
            Accessibility::Public => "public",
            Accessibility::Internal => "internal",
            Accessibility::Protected => "protected",
            Accessibility::ProtectedInternal => "protected internal",
            Accessibility::PrivateProtected => "private protected",
            Accessibility::Private => "private",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Modifiers {
    #[serde(default, skip_serializing_if = "is_false")]
    pub is_static: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub is_abstract: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub is_sealed: bool,
}

impl Modifiers {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

/// Flattened documentation comment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocComment {
    pub summary: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub remarks: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Entity {
    pub id: EntityId,
    pub name: String,
    pub kind: EntityKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub type_kind: Option<TypeKind>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub is_record: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method_kind: Option<MethodKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accessibility: Option<Accessibility>,
    #[serde(default, skip_serializing_if = "Modifiers::is_empty")]
    pub modifiers: Modifiers,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<DocComment>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

impl Entity {
    /// Entity with no modifiers, comment or diagnostics. Type and method
    /// entities get `class` and `ordinary` so the result is well-formed;
    /// type and member kinds default to public.
    pub fn new(id: impl Into<EntityId>, name: impl Into<String>, kind: EntityKind) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            kind,
            type_kind: (kind == EntityKind::Type).then_some(TypeKind::Class),
            is_record: false,
            method_kind: (kind == EntityKind::Method).then_some(MethodKind::Ordinary),
            accessibility: kind.is_type_or_member().then_some(Accessibility::Public),
            modifiers: Modifiers::default(),
            comment: None,
            diagnostics: Vec::new(),
        }
    }

    pub fn with_type_kind(mut self, type_kind: TypeKind) -> Self {
        self.type_kind = Some(type_kind);
        self
    }

    pub fn with_method_kind(mut self, method_kind: MethodKind) -> Self {
        self.method_kind = Some(method_kind);
        self
    }

    pub fn with_accessibility(mut self, accessibility: Accessibility) -> Self {
        self.accessibility = Some(accessibility);
        self
    }

    pub fn record(mut self) -> Self {
        self.is_record = true;
        self
    }

    pub fn statik(mut self) -> Self {
        self.modifiers.is_static = true;
        self
    }

    pub fn abstrakt(mut self) -> Self {
        self.modifiers.is_abstract = true;
        self
    }

    pub fn sealed(mut self) -> Self {
        self.modifiers.is_sealed = true;
        self
    }

    pub fn with_comment(mut self, summary: impl Into<String>, remarks: Option<String>) -> Self {
        self.comment = Some(DocComment {
            summary: summary.into(),
            remarks,
        });
        self
    }

    pub fn with_diagnostic(mut self, severity: Severity, code: &str, message: &str) -> Self {
        self.diagnostics.push(Diagnostic {
            severity,
            code: code.to_owned(),
            message: message.to_owned(),
        });
        self
    }

    pub fn has_own(&self, severity: Severity) -> bool {
        self.diagnostics.iter().any(|d| d.severity == severity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RelationName {
    Declares,
    InheritsFrom,
    TypeOf,
    Returns,
    DependsOn,
    References,
}

impl RelationName {
    pub const ALL: [RelationName; 6] = [
        RelationName::Declares,
        RelationName::InheritsFrom,
        RelationName::TypeOf,
        RelationName::Returns,
        RelationName::DependsOn,
        RelationName::References,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationName::Declares => "declares",
            RelationName::InheritsFrom => "inheritsFrom",
            RelationName::TypeOf => "typeOf",
            RelationName::Returns => "returns",
            RelationName::DependsOn => "dependsOn",
            RelationName::References => "references",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.as_str() == s)
    }
}

impl fmt::Display for RelationName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A named set of directed edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub name: RelationName,
    pub edges: Vec<(EntityId, EntityId)>,
}

impl Relation {
    pub fn new<I, A, B>(name: RelationName, edges: I) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<EntityId>,
        B: Into<EntityId>,
    {
        Self {
            name,
            edges: edges
                .into_iter()
                .map(|(a, b)| (a.into(), b.into()))
                .collect(),
        }
    }
}
