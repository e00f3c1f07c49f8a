//! Solving by enumerating simple paths, efficient when few edges lie
//! outside a spanning forest.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::{Instance, Solution, Variant};
use crate::transforms::cycle_via_path;

/// Size of a minimum feedback edge set: `m - n + #components`.
pub fn feedback_edge_number(g: &Graph) -> usize {
    g.m() + g.components().len() - g.n()
}

/// Backtracking DFS over simple paths. Every simple path with at least two
/// vertices is yielded once, starting at its smaller endpoint.
pub struct SimplePaths {
    adj: Vec<Vec<usize>>,
    start: usize,
    path: Vec<usize>,
    cursor: Vec<usize>,
    on_path: FixedBitSet,
}

pub fn enumerate_simple_paths(g: &Graph) -> SimplePaths {
    SimplePaths {
        adj: (0..g.n()).map(|v| g.neighbors(v).collect()).collect(),
        start: 0,
        path: Vec::new(),
        cursor: Vec::new(),
        on_path: FixedBitSet::with_capacity(g.n()),
    }
}

impl Iterator for SimplePaths {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            if self.path.is_empty() {
                if self.start >= self.adj.len() {
                    return None;
                }
                self.path.push(self.start);
                self.cursor.push(0);
                self.on_path.insert(self.start);
                self.start += 1;
            }
            let top = *self.path.last().unwrap();
            let at = self.cursor.last_mut().unwrap();
            let next = self.adj[top][*at..].iter().position(|&u| !self.on_path.contains(u));
            match next {
                Some(offset) => {
                    let u = self.adj[top][*at + offset];
                    *at += offset + 1;
                    self.path.push(u);
                    self.cursor.push(0);
                    self.on_path.insert(u);
                    if u > self.path[0] {
                        return Some(self.path.clone());
                    }
                }
                None => {
                    self.on_path.set(top, false);
                    self.path.pop();
                    self.cursor.pop();
                }
            }
        }
    }
}

fn solve_fes_path(inst: &Instance) -> Result<Option<Solution>> {
    let n = inst.n();
    if n == 0 {
        return Err(Error::Unsupported("empty graph".into()));
    }
    if n == 1 {
        return Ok(Some(Solution { order: vec![0], cost: 0 }));
    }
    let mut best: Option<Solution> = None;
    for path in enumerate_simple_paths(&inst.graph).filter(|p| p.len() == n) {
        let mut reversed = path.clone();
        reversed.reverse();
        for order in [path, reversed] {
            if !inst.poset.respects(&order) {
                continue;
            }
            let cost = inst.order_cost(&order);
            let better = match &best {
                None => true,
                Some(b) => (cost, &order) < (b.cost, &b.order),
            };
            if better {
                best = Some(Solution { order, cost });
            }
        }
    }
    Ok(best)
}

/// Among optimal solutions the lexicographically smallest order is returned.
pub fn solve_fes(inst: &Instance) -> Result<Option<Solution>> {
    match inst.variant {
        Variant::Path => solve_fes_path(inst),
        Variant::Cycle => cycle_via_path(inst, solve_fes_path),
    }
}
