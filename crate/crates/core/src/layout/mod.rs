//! Node placement: a radial tidy-tree seeding pass over `declares`, refined
//! by an iterative force simulation that stops on its own once the layout
//! settles.

mod force;
mod quadtree;
mod tidy;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::EntityId;

pub use force::{force_step, mean_traction, run_auto_layout, run_auto_layout_observed, ForceConfig};
pub use quadtree::QuadTree;
pub use tidy::{tidy_tree_layout, RadialNode, RadialTree, TidyConfig};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn polar(radius: f64, angle: f64) -> Self {
        Self::new(radius * angle.cos(), radius * angle.sin())
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("`{0}` is visible but its declares parent is not")]
    NotATreeSlice(EntityId),
    #[error("`{0}` is not part of the layout")]
    UnknownId(EntityId),
}

/// Positions and simulation bookkeeping for the visible node set.
///
/// Nodes are kept in ascending id order; every per-node vector is indexed by
/// that order.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutState {
    ids: Vec<EntityId>,
    index: HashMap<EntityId, usize>,
    positions: Vec<Point>,
    previous_forces: Vec<Point>,
    pinned: Vec<bool>,
    pub converged: bool,
    pub iteration: u64,
    /// Global speed of the adaptive step.
    pub speed: f64,
    pub speed_efficiency: f64,
}

impl Default for LayoutState {
    fn default() -> Self {
        Self::new(std::iter::empty())
    }
}

impl LayoutState {
    pub fn new(positions: impl IntoIterator<Item = (EntityId, Point)>) -> Self {
        let sorted: BTreeMap<EntityId, Point> = positions.into_iter().collect();
        let n = sorted.len();
        let (ids, positions): (Vec<_>, Vec<_>) = sorted.into_iter().unzip();
        let index = ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        Self {
            ids,
            index,
            positions,
            previous_forces: vec![Point::ORIGIN; n],
            pinned: vec![false; n],
            converged: false,
            iteration: 0,
            speed: 1.0,
            speed_efficiency: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[EntityId] {
        &self.ids
    }

    pub fn slot(&self, id: &EntityId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn contains(&self, id: &EntityId) -> bool {
        self.index.contains_key(id)
    }

    pub fn position(&self, id: &EntityId) -> Option<Point> {
        self.slot(id).map(|i| self.positions[i])
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn previous_forces(&self) -> &[Point] {
        &self.previous_forces
    }

    pub fn is_pinned(&self, id: &EntityId) -> bool {
        self.slot(id).is_some_and(|i| self.pinned[i])
    }

    pub fn pinned_slots(&self) -> &[bool] {
        &self.pinned
    }

    pub fn pinned_ids(&self) -> impl Iterator<Item = &EntityId> {
        self.ids
            .iter()
            .zip(&self.pinned)
            .filter_map(|(id, &p)| p.then_some(id))
    }

    /// Moves a node; with `pin` it stays put in later steps until released
    /// by a move with `pin = false`.
    pub fn apply_user_move(
        &mut self,
        id: &EntityId,
        position: Point,
        pin: bool,
    ) -> Result<(), LayoutError> {
        let i = self
            .slot(id)
            .ok_or_else(|| LayoutError::UnknownId(id.clone()))?;
        self.positions[i] = position;
        self.pinned[i] = pin;
        self.previous_forces[i] = Point::ORIGIN;
        self.converged = false;
        Ok(())
    }

    /// New state over `positions`, carrying over pins and previous forces of
    /// nodes present in both.
    pub fn rebuild(&self, positions: impl IntoIterator<Item = (EntityId, Point)>) -> Self {
        let mut next = Self::new(positions);
        for (i, id) in next.ids.iter().enumerate() {
            if let Some(j) = self.slot(id) {
                next.pinned[i] = self.pinned[j];
                next.previous_forces[i] = self.previous_forces[j];
            }
        }
        next
    }

    pub(crate) fn positions_mut(&mut self) -> &mut [Point] {
        &mut self.positions
    }

    pub(crate) fn set_previous_forces(&mut self, forces: Vec<Point>) {
        self.previous_forces = forces;
    }

    pub fn snapshot(&self) -> LayoutSnapshot {
        LayoutSnapshot {
            positions: self
                .ids
                .iter()
                .zip(&self.positions)
                .map(|(id, p)| (id.clone(), [p.x, p.y]))
                .collect(),
            converged: self.converged,
            iteration: self.iteration,
        }
    }
}

/// Immutable copy of positions for publishing to viewers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutSnapshot {
    pub positions: BTreeMap<EntityId, [f64; 2]>,
    pub converged: bool,
    pub iteration: u64,
}

/// Edges resolved to layout slots, with per-slot degree.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LayoutEdges {
    pub pairs: Vec<(usize, usize)>,
    pub degree: Vec<u32>,
}

impl LayoutEdges {
    /// Keeps edges whose endpoints are both in the layout; drops self-loops.
    pub fn resolve<'a>(
        state: &LayoutState,
        edges: impl IntoIterator<Item = (&'a EntityId, &'a EntityId)>,
    ) -> Self {
        let mut degree = vec![0; state.len()];
        let pairs = edges
            .into_iter()
            .filter_map(|(a, b)| Some((state.slot(a)?, state.slot(b)?)))
            .filter(|(a, b)| a != b)
            .inspect(|&(a, b)| {
                degree[a] += 1;
                degree[b] += 1;
            })
            .collect();
        Self { pairs, degree }
    }

    pub fn from_slots(n: usize, pairs: Vec<(usize, usize)>) -> Self {
        let mut degree = vec![0; n];
        for &(a, b) in &pairs {
            degree[a] += 1;
            degree[b] += 1;
        }
        Self { pairs, degree }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_is_sorted_and_moves_pin() {
        let mut s = LayoutState::new([("b".into(), Point::new(1.0, 0.0)), ("a".into(), Point::ORIGIN)]);
        assert_eq!(s.ids(), &["a".into(), "b".into()] as &[EntityId]);
        s.apply_user_move(&"b".into(), Point::new(5.0, 5.0), true).unwrap();
        assert!(s.is_pinned(&"b".into()));
        assert_eq!(s.position(&"b".into()), Some(Point::new(5.0, 5.0)));
        assert_eq!(
            s.apply_user_move(&"zz".into(), Point::ORIGIN, false),
            Err(LayoutError::UnknownId("zz".into()))
        );
        let r = s.rebuild([("b".into(), Point::ORIGIN), ("c".into(), Point::ORIGIN)]);
        assert!(r.is_pinned(&"b".into()));
        assert!(!r.is_pinned(&"c".into()));
    }

    #[test]
    fn edges_resolve_to_slots() {
        let s = LayoutState::new([
            ("a".into(), Point::ORIGIN),
            ("b".into(), Point::ORIGIN),
            ("c".into(), Point::ORIGIN),
        ]);
        let (a, b, c, x): (EntityId, EntityId, EntityId, EntityId) =
            ("a".into(), "b".into(), "c".into(), "x".into());
        let e = LayoutEdges::resolve(&s, [(&a, &b), (&b, &c), (&a, &x), (&c, &c)]);
        assert_eq!(e.pairs, vec![(0, 1), (1, 2)]);
        assert_eq!(e.degree, vec![1, 2, 1]);
    }
}
