//! Rulebook check for one computed glyph.

use helgraph_core::glyph::{Contour, Effect, GlyphSpec, IconStyle, Indicator};
use helgraph_core::{Accessibility, EntityId, EntityKind, MethodKind, Severity, TypeKind};

use crate::reference::Reference;

fn expected_icon(r: &Reference, id: &EntityId) -> &'static str {
    let e = r.entity(id);
    match e.kind {
        EntityKind::Type => match (e.type_kind.expect("types carry a type kind"), e.is_record) {
            (TypeKind::Class, true) => "recordClass",
            (TypeKind::Struct, true) => "recordStruct",
            (TypeKind::Class, false) => "class",
            (TypeKind::Struct, false) => "struct",
            (TypeKind::Enum, _) => "enum",
            (TypeKind::Interface, _) => "interface",
            (TypeKind::Delegate, _) => "delegate",
        },
        k => k.as_str(),
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// Checks every glyph rule for `id` against brute-force expectations.
/// `mode` is the scaling mode's wire name.
// Negated float comparisons are deliberate: NaN must fail every check.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn check(r: &Reference, id: &EntityId, g: &GlyphSpec, collapsed: bool, mode: &str) -> Result<(), String> {
    let e = r.entity(id);

    let want = r.radius(id, mode);
    ensure!((g.radius - want).abs() <= 1e-9 * want.max(1.0), "{id}: radius {} != {want}", g.radius);

    let icon = serde_json::to_value(g.icon_id).expect("serializable");
    ensure!(icon == expected_icon(r, id), "{id}: icon {icon} != {}", expected_icon(r, id));
    let badge = e.method_kind.filter(|&k| e.kind == EntityKind::Method && k != MethodKind::Ordinary);
    ensure!(g.method_badge == badge, "{id}: method badge {:?} != {badge:?}", g.method_badge);

    ensure!(
        (g.icon_style == IconStyle::Filled) == e.modifiers.is_static,
        "{id}: icon style {:?} with isStatic={}",
        g.icon_style,
        e.modifiers.is_static
    );

    let badge = e.accessibility.filter(|&a| a != Accessibility::Public);
    ensure!(g.accessibility_badge == badge, "{id}: accessibility badge {:?}", g.accessibility_badge);

    ensure!(
        (g.contour == Contour::OctagonSolid) == e.modifiers.is_sealed
            && (g.contour == Contour::HexagonDashed) == e.modifiers.is_abstract,
        "{id}: contour {:?}",
        g.contour
    );

    let (s, i) = r.member_counts(id);
    let total = s + i;
    match (&g.donut, e.kind == EntityKind::Type && total > 0) {
        (None, false) => {}
        (Some(d), true) => {
            let sf = f64::from(s) / f64::from(total);
            ensure!((d.static_fraction - sf).abs() < 1e-12, "{id}: static fraction {}", d.static_fraction);
            ensure!(
                (d.static_fraction + d.instance_fraction - 1.0).abs() < 1e-12,
                "{id}: fractions do not sum to 1"
            );
            let w = (2.0 + 0.25 * f64::from(total)).min(12.0);
            ensure!((d.width - w).abs() < 1e-12, "{id}: donut width {} != {w}", d.width);
        }
        (d, _) => return Err(format!("{id}: donut {d:?} for kind {:?} with {total} members", e.kind)),
    }

    let has = |sev| e.diagnostics.iter().any(|d| d.severity == sev);
    let effect = if has(Severity::Error) {
        Effect::Fire
    } else if has(Severity::Warning) {
        Effect::Smoke
    } else {
        Effect::None
    };
    ensure!(g.effect == effect, "{id}: effect {:?} != {effect:?}", g.effect);

    let (err, warn) = r.rollup(id);
    let shadow = collapsed && !r.kids(id).is_empty();
    for (ind, want) in [
        (Indicator::CollapsedShadow, shadow),
        (Indicator::SubtreeError, err),
        (Indicator::SubtreeWarning, warn),
    ] {
        ensure!(g.indicators.contains(&ind) == want, "{id}: indicator {ind:?} should be {want}");
    }
    ensure!(g.hatch_instance_sector, "{id}: hatch flag defaults to true");
    Ok(())
}
