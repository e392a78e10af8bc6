//! Geometric checks for radial tidy trees.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use helgraph_core::layout::RadialTree;
use helgraph_core::{EntityGraph, EntityId};

use crate::reference::Reference;

const EPS: f64 = 1e-9;

/// Checks ring radii, span nesting, sibling disjointness and proportional
/// spans for a tidy tree over the whole of `r`.
pub fn check_tidy(r: &Reference, graph: &EntityGraph, tree: &RadialTree, ring_gap: f64) -> Result<(), String> {
    let by_id: BTreeMap<EntityId, _> = tree.nodes.iter().map(|n| (graph.id_at(n.node).clone(), n)).collect();
    if by_id.len() != r.entities.len() {
        return Err(format!("{} of {} nodes laid out", by_id.len(), r.entities.len()));
    }
    // Visible leaves below each node, by recursion over the reference.
    fn leaves(r: &Reference, id: &EntityId) -> u32 {
        let kids = r.kids(id);
        if kids.is_empty() {
            1
        } else {
            kids.iter().map(|k| leaves(r, k)).sum()
        }
    }
    for (id, n) in &by_id {
        let depth = r.ancestors(id).len() as f64;
        let radius = n.position.distance(n.center);
        if (radius - ring_gap * depth).abs() > EPS * ring_gap.max(1.0) * (1.0 + depth) {
            return Err(format!("{id}: radius {radius} at depth {depth}"));
        }
        let (a, b) = n.span;
        if !(a <= b + EPS && b - a <= TAU + EPS) {
            return Err(format!("{id}: bad span {:?}", n.span));
        }
        if depth > 0.0 {
            let mid = 0.5 * (a + b);
            let d = n.position - n.center;
            let angle = d.y.atan2(d.x).rem_euclid(TAU);
            let diff = (angle - mid.rem_euclid(TAU)).abs();
            if diff.min(TAU - diff) > 1e-6 {
                return Err(format!("{id}: angle {angle} outside its span middle {mid}"));
            }
        } else if n.span != (0.0, TAU) {
            return Err(format!("{id}: root span {:?}", n.span));
        }
        let kids = r.kids(id);
        let mut spans: Vec<(f64, f64)> = kids.iter().map(|k| by_id[k].span).collect();
        let total: u32 = kids.iter().map(|k| leaves(r, k)).sum();
        for (k, s) in kids.iter().zip(&spans) {
            if s.0 < a - EPS || s.1 > b + EPS {
                return Err(format!("{k}: span {s:?} escapes parent {id} {:?}", n.span));
            }
            let share = f64::from(leaves(r, k)) / f64::from(total);
            if ((s.1 - s.0) - share * (b - a)).abs() > 1e-9 {
                return Err(format!("{k}: span width not proportional to leaves"));
            }
        }
        spans.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in spans.windows(2) {
            if w[1].0 < w[0].1 - EPS {
                return Err(format!("children of {id}: spans {:?} and {:?} overlap", w[0], w[1]));
            }
        }
    }
    Ok(())
}
