//! Glyph rulebook: every visual attribute of a node, computed from the entity,
//! its graph and the view state.
//!
//! The engine only decides *what* a glyph shows. Drawing (icon artwork,
//! hatching, animated effects) belongs to the viewer.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::{EntityGraph, QueryError};
use crate::model::{Accessibility, Entity, EntityId, EntityKind, MethodKind, Severity, TypeKind};
use crate::par::{self, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ScalingMode {
    Linear,
    #[default]
    Sqrt,
    Log,
}

impl ScalingMode {
    pub const ALL: [ScalingMode; 3] = [ScalingMode::Linear, ScalingMode::Sqrt, ScalingMode::Log];
}

/// Size constants. Defaults keep an empty type visibly larger than any member
/// and a 100-member type under four times the type base in sqrt mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct GlyphConstants {
    pub solution_radius: f64,
    pub project_radius: f64,
    pub package_radius: f64,
    pub namespace_radius: f64,
    pub type_radius: f64,
    pub member_radius: f64,
    pub parameter_radius: f64,
    /// Extra radius per level of subtree height for structural nodes.
    pub height_bonus: f64,
    pub linear_coefficient: f64,
    pub sqrt_coefficient: f64,
    pub log_coefficient: f64,
    pub donut_base_width: f64,
    pub donut_width_per_member: f64,
    pub donut_max_width: f64,
    pub hatch_instance_sector: bool,
}

impl Default for GlyphConstants {
    fn default() -> Self {
        Self {
            solution_radius: 14.0,
            project_radius: 12.0,
            package_radius: 10.0,
            namespace_radius: 10.0,
            type_radius: 8.0,
            member_radius: 5.0,
            parameter_radius: 4.0,
            height_bonus: 2.0,
            linear_coefficient: 0.25,
            sqrt_coefficient: 1.5,
            log_coefficient: 3.0,
            donut_base_width: 2.0,
            donut_width_per_member: 0.25,
            donut_max_width: 12.0,
            hatch_instance_sector: true,
        }
    }
}

impl GlyphConstants {
    pub fn base_radius(&self, kind: EntityKind) -> f64 {
        match kind {
            EntityKind::Solution => self.solution_radius,
            EntityKind::Project => self.project_radius,
            EntityKind::Package => self.package_radius,
            EntityKind::Namespace => self.namespace_radius,
            EntityKind::Type => self.type_radius,
            EntityKind::Field | EntityKind::Method | EntityKind::Property | EntityKind::Event => {
                self.member_radius
            }
            EntityKind::Parameter => self.parameter_radius,
        }
    }

    /// Growth of a type's radius with its member count.
    pub fn member_scale(&self, mode: ScalingMode, members: u32) -> f64 {
        let x = f64::from(members);
        match mode {
            ScalingMode::Linear => self.linear_coefficient * x,
            ScalingMode::Sqrt => self.sqrt_coefficient * x.sqrt(),
            ScalingMode::Log => self.log_coefficient * x.ln_1p(),
        }
    }

    pub fn donut_width(&self, members: u32) -> f64 {
        (self.donut_base_width + self.donut_width_per_member * f64::from(members))
            .min(self.donut_max_width)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum IconId {
    Solution,
    Project,
    Package,
    Namespace,
    Class,
    RecordClass,
    Struct,
    RecordStruct,
    Enum,
    Interface,
    Delegate,
    Field,
    Method,
    Property,
    Event,
    Parameter,
}

impl IconId {
    pub const ALL: [IconId; 16] = [
        IconId::Solution,
        IconId::Project,
        IconId::Package,
        IconId::Namespace,
        IconId::Class,
        IconId::RecordClass,
        IconId::Struct,
        IconId::RecordStruct,
        IconId::Enum,
        IconId::Interface,
        IconId::Delegate,
        IconId::Field,
        IconId::Method,
        IconId::Property,
        IconId::Event,
        IconId::Parameter,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum IconStyle {
    Stroked,
    Filled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Contour {
    None,
    OctagonSolid,
    HexagonDashed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Donut {
    pub static_fraction: f64,
    pub instance_fraction: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Effect {
    None,
    Smoke,
    Fire,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Indicator {
    CollapsedShadow,
    SubtreeError,
    SubtreeWarning,
}

/// sRGB color, written as `#RRGGBB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Color(pub [u8; 3]);

impl Color {
    pub const fn rgb(r: u8, g: u8, b: u8) -> Self {
        Self([r, g, b])
    }

    pub fn gray(level: u8) -> Self {
        Self([level; 3])
    }

    pub fn is_gray(&self) -> bool {
        let [r, g, b] = self.0;
        r == g && g == b
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [r, g, b] = self.0;
        write!(f, "#{r:02X}{g:02X}{b:02X}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is not a #RRGGBB color")]
pub struct ColorParseError(String);

impl FromStr for Color {
    type Err = ColorParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ColorParseError(s.to_owned());
        let hex = s.strip_prefix('#').ok_or_else(err)?;
        if hex.len() != 6 || !hex.is_ascii() {
            return Err(err());
        }
        let channel = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| err());
        Ok(Color([channel(0)?, channel(2)?, channel(4)?]))
    }
}

impl Serialize for Color {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Color {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Palette key: the entity kind, refined by type kind for types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ColorKey {
    Solution,
    Project,
    Package,
    Namespace,
    Class,
    Struct,
    Enum,
    Interface,
    Delegate,
    Field,
    Method,
    Property,
    Event,
    Parameter,
}

impl ColorKey {
    pub const ALL: [ColorKey; 14] = [
        ColorKey::Solution,
        ColorKey::Project,
        ColorKey::Package,
        ColorKey::Namespace,
        ColorKey::Class,
        ColorKey::Struct,
        ColorKey::Enum,
        ColorKey::Interface,
        ColorKey::Delegate,
        ColorKey::Field,
        ColorKey::Method,
        ColorKey::Property,
        ColorKey::Event,
        ColorKey::Parameter,
    ];

    pub fn of(kind: EntityKind, type_kind: Option<TypeKind>) -> Self {
        match kind {
            EntityKind::Solution => ColorKey::Solution,
            EntityKind::Project => ColorKey::Project,
            EntityKind::Package => ColorKey::Package,
            EntityKind::Namespace => ColorKey::Namespace,
            EntityKind::Type => match type_kind.unwrap_or(TypeKind::Class) {
                TypeKind::Class => ColorKey::Class,
                TypeKind::Struct => ColorKey::Struct,
                TypeKind::Enum => ColorKey::Enum,
                TypeKind::Interface => ColorKey::Interface,
                TypeKind::Delegate => ColorKey::Delegate,
            },
            EntityKind::Field => ColorKey::Field,
            EntityKind::Method => ColorKey::Method,
            EntityKind::Property => ColorKey::Property,
            EntityKind::Event => ColorKey::Event,
            EntityKind::Parameter => ColorKey::Parameter,
        }
    }

    pub fn is_type(self) -> bool {
        matches!(
            self,
            ColorKey::Class | ColorKey::Struct | ColorKey::Enum | ColorKey::Interface | ColorKey::Delegate
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PresetName {
    #[serde(rename = "VS")]
    Vs,
    #[default]
    Universal,
    TypeFocus,
    #[serde(rename = "custom")]
    Custom,
}

/// Total mapping from palette key to color.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorPreset {
    pub name: PresetName,
    pub mapping: BTreeMap<ColorKey, Color>,
}

impl Default for ColorPreset {
    fn default() -> Self {
        Self::universal()
    }
}

fn palette(colors: [(u8, u8, u8); 14]) -> BTreeMap<ColorKey, Color> {
    ColorKey::ALL
        .into_iter()
        .zip(colors)
        .map(|(k, (r, g, b))| (k, Color::rgb(r, g, b)))
        .collect()
}

impl ColorPreset {
    pub fn named(name: PresetName) -> Self {
        match name {
            PresetName::Vs => Self::vs(),
            PresetName::Universal => Self::universal(),
            PresetName::TypeFocus => Self::type_focus(),
            PresetName::Custom => Self::custom(BTreeMap::new()),
        }
    }

    /// Colors in the spirit of the classic IDE icon set.
    pub fn vs() -> Self {
        Self {
            name: PresetName::Vs,
            mapping: palette([
                (0x68, 0x21, 0x7A),
                (0x00, 0x53, 0x9C),
                (0x00, 0x7A, 0xCC),
                (0x42, 0x42, 0x42),
                (0xC2, 0x7D, 0x1A),
                (0x00, 0x53, 0x9C),
                (0xC2, 0x7D, 0x1A),
                (0x00, 0x53, 0x9C),
                (0x68, 0x21, 0x7A),
                (0x00, 0x53, 0x9C),
                (0x68, 0x21, 0x7A),
                (0x42, 0x42, 0x42),
                (0xC2, 0x7D, 0x1A),
                (0x71, 0x71, 0x71),
            ]),
        }
    }

    /// One distinct hue per key, spread around the hue circle.
    pub fn universal() -> Self {
        Self {
            name: PresetName::Universal,
            mapping: palette([
                (0x8E, 0x3C, 0xB7),
                (0x3A, 0x6F, 0xD8),
                (0x8C, 0x6D, 0x31),
                (0x2E, 0x9E, 0x8F),
                (0xD9, 0x4A, 0x3A),
                (0xE0, 0x8E, 0x1B),
                (0xB5, 0xA8, 0x1F),
                (0x4C, 0xB0, 0x4C),
                (0xD1, 0x4F, 0x9A),
                (0x56, 0x9F, 0xD6),
                (0x9B, 0x59, 0x4D),
                (0x6B, 0x7F, 0x3A),
                (0xC4, 0x6B, 0xD6),
                (0x5A, 0x6B, 0xA8),
            ]),
        }
    }

    /// Distinct hues for the five type kinds, grays for everything else.
    pub fn type_focus() -> Self {
        Self {
            name: PresetName::TypeFocus,
            mapping: palette([
                (0x3C, 0x3C, 0x3C),
                (0x55, 0x55, 0x55),
                (0x6E, 0x6E, 0x6E),
                (0x87, 0x87, 0x87),
                (0xE4, 0x1A, 0x1C),
                (0x37, 0x7E, 0xB8),
                (0x4D, 0xAF, 0x4A),
                (0x98, 0x4E, 0xA3),
                (0xFF, 0x7F, 0x00),
                (0xA0, 0xA0, 0xA0),
                (0xA0, 0xA0, 0xA0),
                (0xA0, 0xA0, 0xA0),
                (0xA0, 0xA0, 0xA0),
                (0xB9, 0xB9, 0xB9),
            ]),
        }
    }

    /// User colors over the Universal palette, so the mapping stays total.
    pub fn custom(overrides: BTreeMap<ColorKey, Color>) -> Self {
        let mut mapping = Self::universal().mapping;
        mapping.extend(overrides);
        Self {
            name: PresetName::Custom,
            mapping,
        }
    }

    pub fn color(&self, key: ColorKey) -> Color {
        self.mapping
            .get(&key)
            .copied()
            .unwrap_or_else(|| Self::universal().mapping[&key])
    }
}

pub fn resolve_color(entity: &Entity, preset: &ColorPreset) -> Color {
    preset.color(ColorKey::of(entity.kind, entity.type_kind))
}

/// Kind icon plus, for non-ordinary methods, a method-kind badge.
pub fn resolve_icon(entity: &Entity) -> (IconId, Option<MethodKind>) {
    let icon = match entity.kind {
        EntityKind::Solution => IconId::Solution,
        EntityKind::Project => IconId::Project,
        EntityKind::Package => IconId::Package,
        EntityKind::Namespace => IconId::Namespace,
        EntityKind::Type => match (entity.type_kind.unwrap_or(TypeKind::Class), entity.is_record) {
            (TypeKind::Class, false) => IconId::Class,
            (TypeKind::Class, true) => IconId::RecordClass,
            (TypeKind::Struct, false) => IconId::Struct,
            (TypeKind::Struct, true) => IconId::RecordStruct,
            (TypeKind::Enum, _) => IconId::Enum,
            (TypeKind::Interface, _) => IconId::Interface,
            (TypeKind::Delegate, _) => IconId::Delegate,
        },
        EntityKind::Field => IconId::Field,
        EntityKind::Method => IconId::Method,
        EntityKind::Property => IconId::Property,
        EntityKind::Event => IconId::Event,
        EntityKind::Parameter => IconId::Parameter,
    };
    let badge = entity
        .method_kind
        .filter(|&k| entity.kind == EntityKind::Method && k != MethodKind::Ordinary);
    (icon, badge)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GlyphSpec {
    pub radius: f64,
    pub icon_id: IconId,
    pub icon_style: IconStyle,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method_badge: Option<MethodKind>,
    /// Absent for public entities and for kinds without accessibility.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accessibility_badge: Option<Accessibility>,
    pub contour: Contour,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub donut: Option<Donut>,
    pub hatch_instance_sector: bool,
    pub effect: Effect,
    pub indicators: Vec<Indicator>,
    pub fill_color: Color,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ViewState {
    pub is_collapsed: bool,
}

/// Everything that parameterizes glyph computation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct GlyphStyle {
    pub preset: ColorPreset,
    pub scaling: ScalingMode,
    pub constants: GlyphConstants,
}

impl GlyphStyle {
    pub fn radius_at(&self, graph: &EntityGraph, ix: usize) -> f64 {
        let c = &self.constants;
        let e = graph.entity_at(ix);
        let mut r = c.base_radius(e.kind);
        if e.kind.is_structural() {
            r += c.height_bonus * f64::from(graph.height_at(ix));
        }
        if e.kind == EntityKind::Type {
            r += c.member_scale(self.scaling, graph.member_counts_at(ix).total());
        }
        r
    }

    pub fn glyph_at(&self, graph: &EntityGraph, ix: usize, view: ViewState) -> GlyphSpec {
        let e = graph.entity_at(ix);
        let (icon_id, method_badge) = resolve_icon(e);

        let donut = (e.kind == EntityKind::Type)
            .then(|| graph.member_counts_at(ix))
            .filter(|m| m.total() > 0)
            .map(|m| {
                let total = f64::from(m.total());
                let static_fraction = f64::from(m.static_count) / total;
                Donut {
                    static_fraction,
                    instance_fraction: 1.0 - static_fraction,
                    width: self.constants.donut_width(m.total()),
                }
            });

        let contour = if e.modifiers.is_sealed {
            Contour::OctagonSolid
        } else if e.modifiers.is_abstract {
            Contour::HexagonDashed
        } else {
            Contour::None
        };

        let effect = if e.has_own(Severity::Error) {
            Effect::Fire
        } else if e.has_own(Severity::Warning) {
            Effect::Smoke
        } else {
            Effect::None
        };

        let mut indicators = Vec::new();
        if view.is_collapsed && !graph.children(ix).is_empty() {
            indicators.push(Indicator::CollapsedShadow);
        }
        let rollup = graph.rollup_at(ix);
        if rollup.error_in_subtree {
            indicators.push(Indicator::SubtreeError);
        }
        if rollup.warning_in_subtree {
            indicators.push(Indicator::SubtreeWarning);
        }

        GlyphSpec {
            radius: self.radius_at(graph, ix),
            icon_id,
            icon_style: if e.modifiers.is_static {
                IconStyle::Filled
            } else {
                IconStyle::Stroked
            },
            method_badge,
            accessibility_badge: e.accessibility.filter(|&a| a != Accessibility::Public),
            contour,
            donut,
            hatch_instance_sector: self.constants.hatch_instance_sector,
            effect,
            indicators,
            fill_color: resolve_color(e, &self.preset),
        }
    }

    pub fn compute_radius(&self, graph: &EntityGraph, id: &EntityId) -> Result<f64, QueryError> {
        graph.require(id).map(|ix| self.radius_at(graph, ix))
    }

    pub fn compute_glyph(
        &self,
        graph: &EntityGraph,
        id: &EntityId,
        view: ViewState,
    ) -> Result<GlyphSpec, QueryError> {
        graph.require(id).map(|ix| self.glyph_at(graph, ix, view))
    }

    /// Glyphs for many nodes, in input order.
    pub fn glyph_batch(
        &self,
        graph: &EntityGraph,
        nodes: &[(usize, ViewState)],
        exec: Execution,
    ) -> Vec<GlyphSpec> {
        par::map_slice(exec, nodes, |&(ix, view)| self.glyph_at(graph, ix, view))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Relation, RelationName::Declares};

    fn type_with_members(statics: usize, instances: usize) -> (EntityGraph, EntityId) {
        let mut ents = vec![
            Entity::new("S", "S", EntityKind::Solution),
            Entity::new("P", "P", EntityKind::Project),
            Entity::new("T", "T", EntityKind::Type),
        ];
        let mut edges = vec![("S".to_owned(), "P".to_owned()), ("P".into(), "T".into())];
        for i in 0..statics + instances {
            let id = format!("m{i:03}");
            let mut m = Entity::new(id.as_str(), "m", EntityKind::Field);
            m.modifiers.is_static = i < statics;
            ents.push(m);
            edges.push(("T".into(), id));
        }
        let g = EntityGraph::build(ents, vec![Relation::new(Declares, edges)]).unwrap();
        (g, "T".into())
    }

    #[test]
    fn radius_examples() {
        let style = GlyphStyle::default();
        for mode in ScalingMode::ALL {
            let style = GlyphStyle { scaling: mode, ..style.clone() };
            let (g, t) = type_with_members(0, 0);
            assert_eq!(style.compute_radius(&g, &t).unwrap(), 8.0);
        }
        let (g, t) = type_with_members(10, 6);
        assert_eq!(style.compute_radius(&g, &t).unwrap(), 14.0);
        let lin = GlyphStyle { scaling: ScalingMode::Linear, ..style.clone() };
        assert_eq!(lin.compute_radius(&g, &t).unwrap(), 12.0);
        let log = GlyphStyle { scaling: ScalingMode::Log, ..style.clone() };
        assert!((log.compute_radius(&g, &t).unwrap() - (8.0 + 3.0 * 17f64.ln())).abs() < 1e-12);
        assert!(matches!(
            style.compute_radius(&g, &"zz".into()),
            Err(QueryError::UnknownId(_))
        ));
    }

    #[test]
    fn namespace_height_bonus() {
        let g = EntityGraph::build(
            vec![
                Entity::new("S", "S", EntityKind::Solution),
                Entity::new("P", "P", EntityKind::Project),
                Entity::new("N", "N", EntityKind::Namespace),
                Entity::new("T", "T", EntityKind::Type),
                Entity::new("M", "M", EntityKind::Method),
                Entity::new("A", "A", EntityKind::Parameter),
            ],
            vec![Relation::new(
                Declares,
                [("S", "P"), ("P", "N"), ("N", "T"), ("T", "M"), ("M", "A")],
            )],
        )
        .unwrap();
        let style = GlyphStyle::default();
        assert_eq!(style.compute_radius(&g, &"N".into()).unwrap(), 16.0);
        assert_eq!(style.compute_radius(&g, &"M".into()).unwrap(), 5.0);
        assert_eq!(style.compute_radius(&g, &"A".into()).unwrap(), 4.0);
    }

    #[test]
    fn icons() {
        let rc = Entity::new("x", "x", EntityKind::Type).record();
        assert_eq!(resolve_icon(&rc), (IconId::RecordClass, None));
        let ctor = Entity::new("c", "c", EntityKind::Method).with_method_kind(MethodKind::Constructor);
        assert_eq!(resolve_icon(&ctor), (IconId::Method, Some(MethodKind::Constructor)));
        assert_eq!(resolve_icon(&Entity::new("f", "f", EntityKind::Field)), (IconId::Field, None));
        let rs = Entity::new("s", "s", EntityKind::Type).with_type_kind(TypeKind::Struct).record();
        assert_eq!(resolve_icon(&rs).0, IconId::RecordStruct);
    }

    #[test]
    fn palettes() {
        let tf = ColorPreset::type_focus();
        let ns = Entity::new("n", "n", EntityKind::Namespace);
        assert!(resolve_color(&ns, &tf).is_gray());
        for key in ColorKey::ALL {
            assert_eq!(tf.color(key).is_gray(), !key.is_type(), "{key:?}");
        }
        let type_colors: std::collections::HashSet<_> =
            ColorKey::ALL.iter().filter(|k| k.is_type()).map(|&k| tf.color(k)).collect();
        assert_eq!(type_colors.len(), 5);

        let u = ColorPreset::universal();
        let all: std::collections::HashSet<_> = ColorKey::ALL.iter().map(|&k| u.color(k)).collect();
        assert_eq!(all.len(), ColorKey::ALL.len());

        let custom = ColorPreset::custom([(ColorKey::Class, "#FF0000".parse().unwrap())].into());
        let class = Entity::new("c", "c", EntityKind::Type);
        assert_eq!(resolve_color(&class, &custom).to_string(), "#FF0000");
        assert_eq!(custom.mapping.len(), ColorKey::ALL.len());
    }

    #[test]
    fn color_parsing() {
        assert_eq!("#a0B1c2".parse::<Color>().unwrap(), Color::rgb(0xA0, 0xB1, 0xC2));
        assert!("a0b1c2".parse::<Color>().is_err());
        assert!("#a0b1".parse::<Color>().is_err());
        assert!("#gg0000".parse::<Color>().is_err());
        let json = serde_json::to_string(&Color::rgb(1, 2, 255)).unwrap();
        assert_eq!(json, "\"#0102FF\"");
    }

    #[test]
    fn sealed_class_with_mixed_members() {
        let (g, t) = type_with_members(2, 6);
        let (mut ents, rels) = g.to_parts();
        ents.iter_mut().find(|e| e.id == t).unwrap().modifiers.is_sealed = true;
        let g = EntityGraph::build(ents, rels).unwrap();
        let glyph = GlyphStyle::default().compute_glyph(&g, &t, ViewState::default()).unwrap();
        assert_eq!(glyph.icon_style, IconStyle::Stroked);
        assert_eq!(glyph.contour, Contour::OctagonSolid);
        assert_eq!(
            glyph.donut,
            Some(Donut { static_fraction: 0.25, instance_fraction: 0.75, width: 4.0 })
        );
    }

    #[test]
    fn plain_public_property() {
        let g = EntityGraph::build(
            vec![
                Entity::new("S", "S", EntityKind::Solution),
                Entity::new("P", "P", EntityKind::Project),
                Entity::new("T", "T", EntityKind::Type),
                Entity::new("R", "R", EntityKind::Property),
            ],
            vec![Relation::new(Declares, [("S", "P"), ("P", "T"), ("T", "R")])],
        )
        .unwrap();
        let glyph = GlyphStyle::default()
            .compute_glyph(&g, &"R".into(), ViewState { is_collapsed: true })
            .unwrap();
        assert_eq!(glyph.icon_id, IconId::Property);
        assert_eq!(glyph.icon_style, IconStyle::Stroked);
        assert_eq!(glyph.accessibility_badge, None);
        assert_eq!(glyph.donut, None);
        assert_eq!(glyph.effect, Effect::None);
        // collapsed but childless: no shadow
        assert!(glyph.indicators.is_empty());
    }

    #[test]
    fn donut_width_saturates() {
        let c = GlyphConstants::default();
        assert_eq!(c.donut_width(6), 3.5);
        assert_eq!(c.donut_width(40), 12.0);
        assert_eq!(c.donut_width(1000), 12.0);
    }

    #[test]
    fn batch_matches_single() {
        let (g, _) = type_with_members(3, 4);
        let style = GlyphStyle::default();
        let nodes: Vec<_> = (0..g.len()).map(|i| (i, ViewState { is_collapsed: i % 2 == 0 })).collect();
        let batch = style.glyph_batch(&g, &nodes, Execution::Parallel);
        for (&(ix, view), glyph) in nodes.iter().zip(&batch) {
            assert_eq!(&style.glyph_at(&g, ix, view), glyph);
        }
    }
}
