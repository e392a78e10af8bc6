//! ForceAtlas2-style refinement.
//!
//! Per step, with node mass `m = degree + 1`:
//!
//! * attraction along each edge, `F_a = d`;
//! * repulsion between every pair, `F_r = k_r · m · m' / d`, exact up to the
//!   Barnes-Hut cutover and approximated by a quadtree beyond it;
//! * gravity toward the origin with magnitude `k_g · m`.
//!
//! Nodes move by `F · s / (1 + √(s · swing))`, where `swing = |F_t − F_{t−1}|`
//! and the global speed `s` adapts to the ratio of total swinging to total
//! traction (`|F_t + F_{t−1}| / 2`), as in Gephi's reference implementation.
//! Auto-layout stops once the mean traction over movable nodes drops below
//! the configured threshold.
//!
//! Per-node forces are reduced in a fixed order, so results are bitwise
//! reproducible whether or not the pool runs them in parallel.

use serde::{Deserialize, Serialize};

use super::quadtree::QuadTree;
use super::{LayoutEdges, LayoutState, Point};
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct ForceConfig {
    pub repulsion_scale: f64,
    pub gravity: f64,
    pub edge_weight_influence: f64,
    pub traction_threshold: f64,
    pub max_iterations: u32,
    pub barnes_hut_theta: f64,
    /// Largest node count that still gets exact pairwise repulsion.
    pub barnes_hut_cutover: usize,
    pub jitter_tolerance: f64,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for ForceConfig {
    fn default() -> Self {
        Self {
            repulsion_scale: 10.0,
            gravity: 1.0,
            edge_weight_influence: 0.0,
            traction_threshold: 1.0,
            max_iterations: 1000,
            barnes_hut_theta: 1.2,
            barnes_hut_cutover: 2000,
            jitter_tolerance: 1.0,
            seed: 0,
            execution: Execution::Parallel,
        }
    }
}

/// Mean traction over movable nodes for the given forces; zero when every
/// node is pinned.
pub fn mean_traction(state: &LayoutState, forces: &[Point]) -> f64 {
    let prev = state.previous_forces();
    let pinned = state.pinned_slots();
    let (mut sum, mut count) = (0.0, 0usize);
    for i in 0..forces.len() {
        if !pinned[i] {
            sum += 0.5 * (forces[i] + prev[i]).norm();
            count += 1;
        }
    }
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

fn forces(state: &LayoutState, edges: &LayoutEdges, config: &ForceConfig) -> Vec<Point> {
    let points = state.positions();
    let n = points.len();
    let masses: Vec<f64> = edges.degree.iter().map(|&d| f64::from(d) + 1.0).collect();
    let kr = config.repulsion_scale;
    let kg = config.gravity;

    let tree = (n > config.barnes_hut_cutover).then(|| QuadTree::build(points, &masses));
    let mut forces = par::map_indices(config.execution, n, |i| {
        let p = points[i];
        let mut f = match &tree {
            Some(tree) => tree.repulsion(i, points, &masses, kr, config.barnes_hut_theta),
            None => {
                let (mut fx, mut fy) = (0.0, 0.0);
                for (j, q) in points.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    let dx = p.x - q.x;
                    let dy = p.y - q.y;
                    let d2 = dx * dx + dy * dy;
                    if d2 > 0.0 {
                        let k = kr * masses[i] * masses[j] / d2;
                        fx += dx * k;
                        fy += dy * k;
                    }
                }
                Point::new(fx, fy)
            }
        };
        let dist = p.norm();
        if dist > 0.0 && kg > 0.0 {
            let k = kg * masses[i] / dist;
            f = f - Point::new(p.x * k, p.y * k);
        }
        f
    });

    // Every edge has weight 1, so the weight influence exponent has no effect
    // until weighted relations exist.
    let weight = 1f64.powf(config.edge_weight_influence);
    for &(a, b) in &edges.pairs {
        let d = points[a] - points[b];
        let pull = Point::new(d.x * weight, d.y * weight);
        forces[a] = forces[a] - pull;
        forces[b] = forces[b] + pull;
    }
    forces
}

/// Advances the simulation by one iteration and returns the mean traction.
pub fn force_step(state: &mut LayoutState, edges: &LayoutEdges, config: &ForceConfig) -> f64 {
    let n = state.len();
    debug_assert_eq!(edges.degree.len(), n);
    let forces = forces(state, edges, config);
    let traction = mean_traction(state, &forces);

    let prev = state.previous_forces();
    let pinned = state.pinned_slots();
    let masses = edges.degree.iter().map(|&d| f64::from(d) + 1.0);
    let mut swings = vec![0.0; n];
    let (mut total_swinging, mut total_traction) = (0.0, 0.0);
    for (i, m) in masses.enumerate() {
        if pinned[i] {
            continue;
        }
        swings[i] = (forces[i] - prev[i]).norm();
        total_swinging += m * swings[i];
        total_traction += m * 0.5 * (forces[i] + prev[i]).norm();
    }

    if total_swinging > 0.0 {
        let nf = n as f64;
        let estimated = 0.05 * nf.sqrt();
        let min_jt = estimated.sqrt();
        let max_jt: f64 = 10.0;
        let mut jt = config.jitter_tolerance
            * min_jt.max(max_jt.min(estimated * total_traction / (nf * nf)));
        let min_efficiency = 0.05;
        if total_traction > 0.0 && total_swinging / total_traction > 2.0 {
            if state.speed_efficiency > min_efficiency {
                state.speed_efficiency *= 0.5;
            }
            jt = jt.max(config.jitter_tolerance);
        }
        let target = jt * state.speed_efficiency * total_traction / total_swinging;
        if total_swinging > jt * total_traction {
            if state.speed_efficiency > min_efficiency {
                state.speed_efficiency *= 0.7;
            }
        } else if state.speed < 1000.0 {
            state.speed_efficiency *= 1.3;
        }
        let max_rise = 0.5;
        state.speed += (target - state.speed).min(max_rise * state.speed);
    }

    let speed = state.speed;
    let pinned = state.pinned_slots().to_vec();
    for (i, p) in state.positions_mut().iter_mut().enumerate() {
        if pinned[i] {
            continue;
        }
        let factor = speed / (1.0 + (speed * swings[i]).sqrt());
        p.x += forces[i].x * factor;
        p.y += forces[i].y * factor;
    }
    state.set_previous_forces(forces);
    state.iteration += 1;
    traction
}

/// Iterates until mean traction falls below the threshold or the iteration
/// budget runs out; `converged` records which happened.
pub fn run_auto_layout(state: &mut LayoutState, edges: &LayoutEdges, config: &ForceConfig) -> u32 {
    run_auto_layout_observed(state, edges, config, |_| {})
}

/// [`run_auto_layout`] with a callback after every iteration.
pub fn run_auto_layout_observed(
    state: &mut LayoutState,
    edges: &LayoutEdges,
    config: &ForceConfig,
    mut observe: impl FnMut(&LayoutState),
) -> u32 {
    state.converged = false;
    let mut steps = 0;
    while steps < config.max_iterations {
        let traction = force_step(state, edges, config);
        steps += 1;
        if traction < config.traction_threshold {
            state.converged = true;
        }
        observe(state);
        if state.converged {
            break;
        }
    }
    steps
}
