//! Barnes-Hut quadtree for approximate repulsion.

use super::Point;

const MAX_DEPTH: u32 = 24;

#[derive(Debug, Clone)]
struct Cell {
    center: Point,
    half: f64,
    mass: f64,
    mass_center: Point,
    /// Index of the first of four consecutive child cells, or 0 for leaves.
    first_child: u32,
    /// Bodies of a leaf, as a range into `QuadTree::bodies`.
    bodies: (u32, u32),
}

/// Static quadtree over weighted points. Construction order only depends on
/// the input order, so traversals are reproducible.
#[derive(Debug, Clone)]
pub struct QuadTree {
    cells: Vec<Cell>,
    bodies: Vec<u32>,
}

impl QuadTree {
    pub fn build(points: &[Point], masses: &[f64]) -> Self {
        let mut tree = QuadTree {
            cells: Vec::with_capacity(points.len() * 2),
            bodies: Vec::with_capacity(points.len()),
        };
        if points.is_empty() {
            return tree;
        }
        let (mut lo, mut hi) = (points[0], points[0]);
        for p in points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let half = 0.5 * (hi.x - lo.x).max(hi.y - lo.y).max(1e-9) * 1.0001;
        let center = Point::new(0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y));
        let all: Vec<u32> = (0..points.len() as u32).collect();
        tree.cells.push(Cell {
            center,
            half,
            mass: 0.0,
            mass_center: Point::ORIGIN,
            first_child: 0,
            bodies: (0, 0),
        });
        tree.fill(0, all, points, masses, 0);
        tree
    }

    fn fill(&mut self, cell: usize, members: Vec<u32>, points: &[Point], masses: &[f64], depth: u32) {
        let (mut mass, mut mx, mut my) = (0.0, 0.0, 0.0);
        for &b in &members {
            let m = masses[b as usize];
            let p = points[b as usize];
            mass += m;
            mx += m * p.x;
            my += m * p.y;
        }
        self.cells[cell].mass = mass;
        self.cells[cell].mass_center = if mass > 0.0 {
            Point::new(mx / mass, my / mass)
        } else {
            self.cells[cell].center
        };

        if members.len() <= 1 || depth >= MAX_DEPTH {
            let start = self.bodies.len() as u32;
            self.bodies.extend_from_slice(&members);
            self.cells[cell].bodies = (start, self.bodies.len() as u32);
            return;
        }

        let Cell { center, half, .. } = self.cells[cell];
        let mut quadrants: [Vec<u32>; 4] = Default::default();
        for &b in &members {
            let p = points[b as usize];
            let q = usize::from(p.x >= center.x) | (usize::from(p.y >= center.y) << 1);
            quadrants[q].push(b);
        }
        let first = self.cells.len();
        self.cells[cell].first_child = first as u32;
        let h = 0.5 * half;
        for q in 0..4 {
            let dx = if q & 1 == 1 { h } else { -h };
            let dy = if q & 2 == 2 { h } else { -h };
            self.cells.push(Cell {
                center: Point::new(center.x + dx, center.y + dy),
                half: h,
                mass: 0.0,
                mass_center: Point::ORIGIN,
                first_child: 0,
                bodies: (0, 0),
            });
        }
        for (q, group) in quadrants.into_iter().enumerate() {
            if !group.is_empty() {
                self.fill(first + q, group, points, masses, depth + 1);
            }
        }
    }

    /// Repulsion on body `i`: `Σ scale · m_i · m_j / d² · (p_i − p_j)` with
    /// far cells (cell width / distance < `theta`) collapsed into their
    /// center of mass.
    pub fn repulsion(&self, i: usize, points: &[Point], masses: &[f64], scale: f64, theta: f64) -> Point {
        let mut force = Point::ORIGIN;
        if self.cells.is_empty() {
            return force;
        }
        let p = points[i];
        let mi = masses[i];
        let mut stack = vec![0usize];
        while let Some(c) = stack.pop() {
            let cell = &self.cells[c];
            if cell.mass == 0.0 {
                continue;
            }
            if cell.first_child == 0 {
                for &b in &self.bodies[cell.bodies.0 as usize..cell.bodies.1 as usize] {
                    let b = b as usize;
                    if b == i {
                        continue;
                    }
                    let d = p - points[b];
                    let d2 = d.x * d.x + d.y * d.y;
                    if d2 > 0.0 {
                        let f = scale * mi * masses[b] / d2;
                        force = force + Point::new(d.x * f, d.y * f);
                    }
                }
                continue;
            }
            let d = p - cell.mass_center;
            let dist = d.norm();
            if dist > 0.0 && 2.0 * cell.half / dist < theta {
                let f = scale * mi * cell.mass / (dist * dist);
                force = force + Point::new(d.x * f, d.y * f);
            } else {
                let first = cell.first_child as usize;
                stack.extend((first..first + 4).rev());
            }
        }
        force
    }
}
