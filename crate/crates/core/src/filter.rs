//! Search: full-text and regex over entity names, and builder queries over
//! typed node properties.
//!
//! A builder query is a conjunction of clauses `property operator value`.
//! Each property has a value type, and each value type admits a fixed set of
//! operators. A clause on a property the node does not have (say `typeKind`
//! on a method) never matches.

use std::collections::BTreeSet;
use std::fmt;

use regex::Regex;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::graph::EntityGraph;
use crate::model::{Accessibility, EntityId, EntityKind, MethodKind, Severity, TypeKind};
use crate::par::{self, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SearchMode {
    FullText,
    Regex,
    Builder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FilterMode {
    #[default]
    Highlight,
    Isolate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ValueType {
    String,
    Integer,
    Boolean,
    Enumeration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum PropertyId {
    Name,
    Kind,
    TypeKind,
    MethodKind,
    Accessibility,
    IsStatic,
    IsAbstract,
    IsSealed,
    IsRecord,
    MemberCount,
    SubtreeHeight,
    HasOwnError,
    HasOwnWarning,
    HasSubtreeError,
    HasSubtreeWarning,
    CommentText,
    ProjectName,
    NamespacePath,
}

impl PropertyId {
    pub const ALL: [PropertyId; 18] = [
        PropertyId::Name,
        PropertyId::Kind,
        PropertyId::TypeKind,
        PropertyId::MethodKind,
        PropertyId::Accessibility,
        PropertyId::IsStatic,
        PropertyId::IsAbstract,
        PropertyId::IsSealed,
        PropertyId::IsRecord,
        PropertyId::MemberCount,
        PropertyId::SubtreeHeight,
        PropertyId::HasOwnError,
        PropertyId::HasOwnWarning,
        PropertyId::HasSubtreeError,
        PropertyId::HasSubtreeWarning,
        PropertyId::CommentText,
        PropertyId::ProjectName,
        PropertyId::NamespacePath,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PropertyId::Name => "name",
            PropertyId::Kind => "kind",
            PropertyId::TypeKind => "typeKind",
            PropertyId::MethodKind => "methodKind",
            PropertyId::Accessibility => "accessibility",
            PropertyId::IsStatic => "isStatic",
            PropertyId::IsAbstract => "isAbstract",
            PropertyId::IsSealed => "isSealed",
            PropertyId::IsRecord => "isRecord",
            PropertyId::MemberCount => "memberCount",
            PropertyId::SubtreeHeight => "subtreeHeight",
            PropertyId::HasOwnError => "hasOwnError",
            PropertyId::HasOwnWarning => "hasOwnWarning",
            PropertyId::HasSubtreeError => "hasSubtreeError",
            PropertyId::HasSubtreeWarning => "hasSubtreeWarning",
            PropertyId::CommentText => "commentText",
            PropertyId::ProjectName => "projectName",
            PropertyId::NamespacePath => "namespacePath",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.as_str() == s)
    }

    pub fn value_type(self) -> ValueType {
        use PropertyId::*;
        match self {
            Name | CommentText | ProjectName | NamespacePath => ValueType::String,
            Kind | TypeKind | MethodKind | Accessibility => ValueType::Enumeration,
            MemberCount | SubtreeHeight => ValueType::Integer,
            IsStatic | IsAbstract | IsSealed | IsRecord | HasOwnError | HasOwnWarning
            | HasSubtreeError | HasSubtreeWarning => ValueType::Boolean,
        }
    }

    /// Allowed values of an enumeration property, for value completion.
    pub fn value_domain(self) -> Option<Vec<&'static str>> {
        match self {
            PropertyId::Kind => Some(EntityKind::ALL.iter().map(|k| k.as_str()).collect()),
            PropertyId::TypeKind => Some(TypeKind::ALL.iter().map(|k| k.as_str()).collect()),
            PropertyId::MethodKind => Some(MethodKind::ALL.iter().map(|k| k.as_str()).collect()),
            PropertyId::Accessibility => {
                Some(Accessibility::ALL.iter().map(|k| k.as_str()).collect())
            }
            _ => None,
        }
    }

    pub fn operators(self) -> &'static [Operator] {
        self.value_type().operators()
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Operator {
    Equals,
    Contains,
    StartsWith,
    MatchesRegex,
    #[serde(alias = "=")]
    Eq,
    #[serde(alias = "!=", alias = "≠")]
    Ne,
    #[serde(alias = "<")]
    Lt,
    #[serde(alias = "<=", alias = "≤")]
    Le,
    #[serde(alias = ">")]
    Gt,
    #[serde(alias = ">=", alias = "≥")]
    Ge,
    Is,
    OneOf,
}

impl Operator {
    pub fn as_str(self) -> &'static str {
        match self {
            Operator::Equals => "equals",
            Operator::Contains => "contains",
            Operator::StartsWith => "startsWith",
            Operator::MatchesRegex => "matchesRegex",
            Operator::Eq => "eq",
            Operator::Ne => "ne",
            Operator::Lt => "lt",
            Operator::Le => "le",
            Operator::Gt => "gt",
            Operator::Ge => "ge",
            Operator::Is => "is",
            Operator::OneOf => "oneOf",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        serde_json::from_value(Value::String(s.to_owned())).ok()
    }
}

impl std::fmt::Display for Operator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl ValueType {
    pub fn operators(self) -> &'static [Operator] {
        use Operator::*;
        match self {
            ValueType::String => &[Equals, Contains, StartsWith, MatchesRegex],
            ValueType::Integer => &[Eq, Ne, Lt, Le, Gt, Ge],
            ValueType::Boolean => &[Is],
            ValueType::Enumeration => &[Equals, OneOf],
        }
    }
}

/// Wire form of one builder clause.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseInput {
    pub property: String,
    pub operator: String,
    pub value: Value,
}

/// Wire form of a query, as received from and returned to clients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryInput {
    pub mode: SearchMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clauses: Vec<ClauseInput>,
}

impl QueryInput {
    pub fn full_text(text: impl Into<String>) -> Self {
        Self { mode: SearchMode::FullText, text: Some(text.into()), clauses: Vec::new() }
    }

    pub fn regex(text: impl Into<String>) -> Self {
        Self { mode: SearchMode::Regex, text: Some(text.into()), clauses: Vec::new() }
    }

    pub fn builder(clauses: impl IntoIterator<Item = (&'static str, &'static str, Value)>) -> Self {
        Self {
            mode: SearchMode::Builder,
            text: None,
            clauses: clauses
                .into_iter()
                .map(|(p, o, v)| ClauseInput { property: p.into(), operator: o.into(), value: v })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("invalid regular expression: {0}")]
    InvalidRegex(String),
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("operator `{operator}` does not apply to {property} ({value_type:?})")]
    OperatorTypeMismatch {
        property: PropertyId,
        operator: Operator,
        value_type: ValueType,
    },
    #[error("value for {property} must be {expected}")]
    ValueTypeMismatch {
        property: PropertyId,
        expected: &'static str,
    },
    #[error("`{value}` is not a valid {property}")]
    UnknownEnumValue { property: PropertyId, value: String },
    #[error("builder query needs at least one clause")]
    EmptyBuilderQuery,
    #[error("{0:?} search needs a text")]
    MissingText(SearchMode),
}

#[derive(Debug, Clone)]
enum Predicate {
    Text(Operator, String),
    Pattern(Regex),
    Integer(Operator, i64),
    Boolean(bool),
    OneOf(Vec<String>),
}

#[derive(Debug, Clone)]
pub struct Clause {
    pub property: PropertyId,
    pub operator: Operator,
    input: ClauseInput,
    predicate: Predicate,
}

#[derive(Debug, Clone)]
enum Compiled {
    FullText(String),
    Regex(Regex),
    Builder(Vec<Clause>),
}

/// A validated query, ready to evaluate.
#[derive(Debug, Clone)]
pub struct FilterQuery {
    input: QueryInput,
    compiled: Compiled,
}

impl PartialEq for FilterQuery {
    fn eq(&self, other: &Self) -> bool {
        self.input == other.input
    }
}

impl Serialize for FilterQuery {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.input.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FilterQuery {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let input = QueryInput::deserialize(d)?;
        parse_query(input).map_err(serde::de::Error::custom)
    }
}

fn compile_regex(pattern: &str) -> Result<Regex, FilterError> {
    Regex::new(pattern).map_err(|e| FilterError::InvalidRegex(e.to_string()))
}

fn parse_clause(c: ClauseInput) -> Result<Clause, FilterError> {
    let property =
        PropertyId::parse(&c.property).ok_or_else(|| FilterError::UnknownProperty(c.property.clone()))?;
    let operator =
        Operator::parse(&c.operator).ok_or_else(|| FilterError::UnknownOperator(c.operator.clone()))?;
    let value_type = property.value_type();
    if !value_type.operators().contains(&operator) {
        return Err(FilterError::OperatorTypeMismatch { property, operator, value_type });
    }
    let mismatch = |expected| FilterError::ValueTypeMismatch { property, expected };
    let enum_value = |v: &Value| -> Result<String, FilterError> {
        let s = v.as_str().ok_or(mismatch("a string"))?;
        let domain = property.value_domain().unwrap_or_default();
        if domain.contains(&s) {
            Ok(s.to_owned())
        } else {
            Err(FilterError::UnknownEnumValue { property, value: s.to_owned() })
        }
    };
    let predicate = match (value_type, operator) {
        (ValueType::String, Operator::MatchesRegex) => {
            Predicate::Pattern(compile_regex(c.value.as_str().ok_or(mismatch("a string"))?)?)
        }
        (ValueType::String, op) => {
            Predicate::Text(op, c.value.as_str().ok_or(mismatch("a string"))?.to_owned())
        }
        (ValueType::Integer, op) => Predicate::Integer(op, c.value.as_i64().ok_or(mismatch("an integer"))?),
        (ValueType::Boolean, _) => Predicate::Boolean(c.value.as_bool().ok_or(mismatch("a boolean"))?),
        (ValueType::Enumeration, Operator::OneOf) => {
            let items = c.value.as_array().ok_or(mismatch("a list of strings"))?;
            Predicate::OneOf(items.iter().map(enum_value).collect::<Result<_, _>>()?)
        }
        (ValueType::Enumeration, _) => Predicate::OneOf(vec![enum_value(&c.value)?]),
    };
    let input = ClauseInput {
        property: property.as_str().to_owned(),
        operator: operator.as_str().to_owned(),
        value: c.value,
    };
    Ok(Clause { property, operator, input, predicate })
}

/// Validates a query. Operator aliases are normalized in the stored form.
pub fn parse_query(input: QueryInput) -> Result<FilterQuery, FilterError> {
    let compiled = match input.mode {
        SearchMode::FullText => Compiled::FullText(
            input
                .text
                .as_deref()
                .ok_or(FilterError::MissingText(input.mode))?
                .to_lowercase(),
        ),
        SearchMode::Regex => Compiled::Regex(compile_regex(
            input.text.as_deref().ok_or(FilterError::MissingText(input.mode))?,
        )?),
        SearchMode::Builder => {
            if input.clauses.is_empty() {
                return Err(FilterError::EmptyBuilderQuery);
            }
            Compiled::Builder(
                input
                    .clauses
                    .iter()
                    .cloned()
                    .map(parse_clause)
                    .collect::<Result<_, _>>()?,
            )
        }
    };
    let input = match &compiled {
        Compiled::Builder(clauses) => QueryInput {
            clauses: clauses.iter().map(|c| c.input.clone()).collect(),
            ..input
        },
        _ => input,
    };
    Ok(FilterQuery { input, compiled })
}

impl FilterQuery {
    pub fn input(&self) -> &QueryInput {
        &self.input
    }

    pub fn mode(&self) -> SearchMode {
        self.input.mode
    }

    /// Builder query with one more clause.
    pub fn and(&self, clause: ClauseInput) -> Result<FilterQuery, FilterError> {
        let mut input = self.input.clone();
        input.clauses.push(clause);
        parse_query(input)
    }

    pub fn matches(&self, graph: &EntityGraph, ix: usize) -> bool {
        let entity = graph.entity_at(ix);
        match &self.compiled {
            Compiled::FullText(needle) => entity.name.to_lowercase().contains(needle.as_str()),
            Compiled::Regex(re) => re.is_match(&entity.name),
            Compiled::Builder(clauses) => clauses.iter().all(|c| c.matches(graph, ix)),
        }
    }
}

/// Value of a property at a node; `None` when the node lacks it.
#[derive(Debug, Clone, PartialEq)]
pub enum PropertyValue {
    Text(String),
    Integer(i64),
    Boolean(bool),
    Enumeration(&'static str),
}

pub fn property_value(graph: &EntityGraph, ix: usize, property: PropertyId) -> Option<PropertyValue> {
    use PropertyValue::*;
    let e = graph.entity_at(ix);
    let rollup = graph.rollup_at(ix);
    Some(match property {
        PropertyId::Name => Text(e.name.clone()),
        PropertyId::Kind => Enumeration(e.kind.as_str()),
        PropertyId::TypeKind => Enumeration(e.type_kind?.as_str()),
        PropertyId::MethodKind => Enumeration(e.method_kind?.as_str()),
        PropertyId::Accessibility => Enumeration(e.accessibility?.as_str()),
        PropertyId::IsStatic => Boolean(e.modifiers.is_static),
        PropertyId::IsAbstract => Boolean(e.modifiers.is_abstract),
        PropertyId::IsSealed => Boolean(e.modifiers.is_sealed),
        PropertyId::IsRecord => Boolean(e.is_record),
        PropertyId::MemberCount => {
            if e.kind != EntityKind::Type {
                return None;
            }
            Integer(i64::from(graph.member_counts_at(ix).total()))
        }
        PropertyId::SubtreeHeight => Integer(i64::from(graph.height_at(ix))),
        PropertyId::HasOwnError => Boolean(e.has_own(Severity::Error)),
        PropertyId::HasOwnWarning => Boolean(e.has_own(Severity::Warning)),
        PropertyId::HasSubtreeError => Boolean(rollup.error_in_subtree),
        PropertyId::HasSubtreeWarning => Boolean(rollup.warning_in_subtree),
        PropertyId::CommentText => {
            let c = e.comment.as_ref()?;
            Text(match &c.remarks {
                Some(r) => format!("{}\n{}", c.summary, r),
                None => c.summary.clone(),
            })
        }
        PropertyId::ProjectName => {
            let p = std::iter::once(ix)
                .chain(graph.ancestors(ix))
                .find(|&a| graph.entity_at(a).kind == EntityKind::Project)?;
            Text(graph.entity_at(p).name.clone())
        }
        PropertyId::NamespacePath => {
            let mut names: Vec<&str> = std::iter::once(ix)
                .chain(graph.ancestors(ix))
                .filter(|&a| graph.entity_at(a).kind == EntityKind::Namespace)
                .map(|a| graph.entity_at(a).name.as_str())
                .collect();
            if names.is_empty() {
                return None;
            }
            names.reverse();
            Text(names.join("."))
        }
    })
}

impl Clause {
    pub fn input(&self) -> &ClauseInput {
        &self.input
    }

    pub fn matches(&self, graph: &EntityGraph, ix: usize) -> bool {
        let Some(value) = property_value(graph, ix, self.property) else {
            return false;
        };
        match (&self.predicate, value) {
            (Predicate::Text(op, needle), PropertyValue::Text(s)) => match op {
                Operator::Equals => s == *needle,
                Operator::Contains => s.contains(needle.as_str()),
                Operator::StartsWith => s.starts_with(needle.as_str()),
                _ => false,
            },
            (Predicate::Pattern(re), PropertyValue::Text(s)) => re.is_match(&s),
            (Predicate::Integer(op, rhs), PropertyValue::Integer(lhs)) => match op {
                Operator::Eq => lhs == *rhs,
                Operator::Ne => lhs != *rhs,
                Operator::Lt => lhs < *rhs,
                Operator::Le => lhs <= *rhs,
                Operator::Gt => lhs > *rhs,
                Operator::Ge => lhs >= *rhs,
                _ => false,
            },
            (Predicate::Boolean(want), PropertyValue::Boolean(b)) => b == *want,
            (Predicate::OneOf(options), PropertyValue::Enumeration(v)) => {
                options.iter().any(|o| o == v)
            }
            _ => false,
        }
    }
}

/// Ids of the eligible nodes that satisfy the query.
pub fn evaluate_query(
    graph: &EntityGraph,
    eligible: &[usize],
    query: &FilterQuery,
    exec: Execution,
) -> BTreeSet<EntityId> {
    let hits = par::map_slice(exec, eligible, |&ix| query.matches(graph, ix));
    eligible
        .iter()
        .zip(hits)
        .filter(|(_, hit)| *hit)
        .map(|(&ix, _)| graph.id_at(ix).clone())
        .collect()
}
