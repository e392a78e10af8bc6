//! Radial tidy tree (circular dendrogram) over the visible `declares` slice.
//!
//! Each root sits at the center of its own disc. A node at depth `d` lies on
//! the ring of radius `ring_gap * d`, at the middle of the angular span it
//! owns. A parent's span is split among its children in proportion to their
//! visible leaf counts, in child order, so sibling spans never overlap.
//! Several roots are placed side by side along the x axis.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{LayoutError, Point};
use crate::graph::EntityGraph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct TidyConfig {
    pub ring_gap: f64,
}

impl Default for TidyConfig {
    fn default() -> Self {
        Self { ring_gap: 120.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialNode {
    pub node: usize,
    pub parent: Option<usize>,
    /// Depth below this node's root.
    pub depth: u32,
    /// Half-open angular span `[start, end)` in radians.
    pub span: (f64, f64),
    pub leaves: u32,
    pub position: Point,
    /// Center of the disc this node's tree is drawn around.
    pub center: Point,
}

/// Layout result in pre-order (parents before children, siblings in id order).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RadialTree {
    pub nodes: Vec<RadialNode>,
}

impl RadialTree {
    pub fn positions(&self) -> impl Iterator<Item = (usize, Point)> + '_ {
        self.nodes.iter().map(|n| (n.node, n.position))
    }
}

/// Lays out the visible slice of `declares`.
///
/// `visible` holds node indices of `graph`; every visible node must be a
/// `declares` root or have a visible parent.
pub fn tidy_tree_layout(
    graph: &EntityGraph,
    visible: &[usize],
    config: &TidyConfig,
) -> Result<RadialTree, LayoutError> {
    let n = graph.len();
    let mut shown = vec![false; n];
    for &ix in visible {
        shown[ix] = true;
    }
    let mut roots = Vec::new();
    for &ix in visible {
        match graph.parent(ix) {
            None => roots.push(ix),
            Some(p) if shown[p] => {}
            Some(_) => return Err(LayoutError::NotATreeSlice(graph.id_at(ix).clone())),
        }
    }
    roots.sort_unstable();
    roots.dedup();

    let visible_children = |ix: usize| graph.children(ix).iter().copied().filter(|&c| shown[c]);

    // Leaf counts and tree heights, children before parents.
    let mut leaves = vec![0u32; n];
    let mut height = vec![0u32; n];
    let mut order = Vec::with_capacity(visible.len());
    let mut stack: Vec<usize> = roots.iter().rev().copied().collect();
    while let Some(ix) = stack.pop() {
        order.push(ix);
        let before = stack.len();
        stack.extend(visible_children(ix));
        stack[before..].reverse();
    }
    for &ix in order.iter().rev() {
        let mut count = 0;
        for c in visible_children(ix) {
            count += leaves[c];
            height[ix] = height[ix].max(height[c] + 1);
        }
        leaves[ix] = count.max(1);
    }

    let mut tree = RadialTree { nodes: Vec::with_capacity(order.len()) };
    let mut cursor_x = 0.0;
    for (k, &root) in roots.iter().enumerate() {
        let extent = config.ring_gap * f64::from(height[root]);
        if k > 0 {
            cursor_x += extent + config.ring_gap;
        }
        let center = Point::new(cursor_x, 0.0);
        cursor_x += extent;

        // (node, parent, depth, span)
        let mut stack = vec![(root, None, 0u32, (0.0, TAU))];
        while let Some((ix, parent, depth, (start, end))) = stack.pop() {
            let mid = 0.5 * (start + end);
            let position = if depth == 0 {
                center
            } else {
                center + Point::polar(config.ring_gap * f64::from(depth), mid)
            };
            tree.nodes.push(RadialNode {
                node: ix,
                parent,
                depth,
                span: (start, end),
                leaves: leaves[ix],
                position,
                center,
            });
            let width = end - start;
            let total = f64::from(leaves[ix]);
            let mut child_spans = Vec::new();
            let mut offset = start;
            for c in visible_children(ix) {
                let w = width * f64::from(leaves[c]) / total;
                child_spans.push((c, Some(ix), depth + 1, (offset, offset + w)));
                offset += w;
            }
            stack.extend(child_spans.into_iter().rev());
        }
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Entity, EntityKind, Relation, RelationName::Declares};

    fn graph(edges: &[(&str, &str)], kinds: &[(&str, EntityKind)]) -> EntityGraph {
        EntityGraph::build(
            kinds.iter().map(|(id, k)| Entity::new(*id, *id, *k)).collect(),
            vec![Relation::new(Declares, edges.iter().copied())],
        )
        .unwrap()
    }

    fn all(g: &EntityGraph) -> Vec<usize> {
        (0..g.len()).collect()
    }

    #[test]
    fn single_root_at_origin() {
        let g = graph(&[], &[("S", EntityKind::Solution)]);
        let t = tidy_tree_layout(&g, &all(&g), &TidyConfig::default()).unwrap();
        assert_eq!(t.nodes[0].position, Point::ORIGIN);
    }

    #[test]
    fn two_leaves_opposite() {
        use EntityKind::*;
        let g = graph(&[("S", "A"), ("S", "B")], &[("S", Solution), ("A", Project), ("B", Project)]);
        let t = tidy_tree_layout(&g, &all(&g), &TidyConfig { ring_gap: 100.0 }).unwrap();
        let a = t.nodes.iter().find(|n| g.id_at(n.node).as_str() == "A").unwrap();
        let b = t.nodes.iter().find(|n| g.id_at(n.node).as_str() == "B").unwrap();
        assert!((a.position.norm() - 100.0).abs() < 1e-9);
        assert!((b.position.norm() - 100.0).abs() < 1e-9);
        let angle = |p: Point| p.y.atan2(p.x);
        let diff = (angle(a.position) - angle(b.position)).abs();
        assert!((diff - std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn spans_follow_leaf_counts() {
        use EntityKind::*;
        let g = graph(
            &[("S", "P"), ("S", "Q"), ("Q", "N1"), ("Q", "N2"), ("Q", "N3")],
            &[
                ("S", Solution),
                ("P", Project),
                ("Q", Project),
                ("N1", Namespace),
                ("N2", Namespace),
                ("N3", Namespace),
            ],
        );
        let t = tidy_tree_layout(&g, &all(&g), &TidyConfig::default()).unwrap();
        let span = |id: &str| {
            let n = t.nodes.iter().find(|n| g.id_at(n.node).as_str() == id).unwrap();
            (n.span.1 - n.span.0).to_degrees()
        };
        assert!((span("P") - 90.0).abs() < 1e-9);
        assert!((span("Q") - 270.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_orphaned_slice() {
        use EntityKind::*;
        let g = graph(&[("S", "P"), ("P", "N")], &[("S", Solution), ("P", Project), ("N", Namespace)]);
        let n = g.index_of(&"N".into()).unwrap();
        let s = g.index_of(&"S".into()).unwrap();
        assert_eq!(
            tidy_tree_layout(&g, &[s, n], &TidyConfig::default()),
            Err(LayoutError::NotATreeSlice("N".into()))
        );
    }

    #[test]
    fn forest_roots_do_not_share_a_center() {
        let g = graph(&[], &[("S1", EntityKind::Solution), ("S2", EntityKind::Solution)]);
        let t = tidy_tree_layout(&g, &all(&g), &TidyConfig::default()).unwrap();
        assert_ne!(t.nodes[0].position, t.nodes[1].position);
    }
}
