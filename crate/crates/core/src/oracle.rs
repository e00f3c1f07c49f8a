//! Exact exponential solvers used as ground truth.

use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::instance::{Instance, Objective, Solution, Variant};

/// Largest instance the subset DP accepts (visited sets are `u64` masks).
pub const EXACT_MAX_N: usize = 64;
pub const BRUTEFORCE_MAX_N: usize = 10;

struct Tables {
    n: usize,
    adj: Vec<u64>,
    preds: Vec<u64>,
    cost: Vec<u64>,
    weighted: bool,
    cycle: bool,
}

impl Tables {
    fn new(inst: &Instance) -> Tables {
        let n = inst.n();
        let g = &inst.graph;
        let mut adj = vec![0u64; n];
        let mut preds = vec![0u64; n];
        let mut cost = vec![0u64; n * n];
        for v in 0..n {
            for u in g.neighbors(v) {
                adj[v] |= 1 << u;
                cost[v * n + u] = g.cost(u, v);
            }
            for u in inst.poset.predecessors(v) {
                preds[v] |= 1 << u;
            }
        }
        Tables {
            n,
            adj,
            preds,
            cost,
            weighted: inst.objective == Objective::Min,
            cycle: inst.variant == Variant::Cycle,
        }
    }

    fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    fn step(&self, a: usize, b: usize) -> u64 {
        if self.weighted {
            self.cost[a * self.n + b]
        } else {
            0
        }
    }
}

/// Minimum completion cost from `(visited, last)` when the walk started at
/// `first`; `None` means no completion exists.
struct Completion<'a> {
    t: &'a Tables,
    first: usize,
    memo: HashMap<(u64, u8), Option<u64>>,
}

impl Completion<'_> {
    fn best(&mut self, visited: u64, last: usize) -> Option<u64> {
        let t = self.t;
        if visited == t.full() {
            return if !t.cycle || t.n == 1 {
                Some(0)
            } else if t.adj[last] >> self.first & 1 == 1 {
                Some(t.step(last, self.first))
            } else {
                None
            };
        }
        if let Some(&hit) = self.memo.get(&(visited, last as u8)) {
            return hit;
        }
        let mut best: Option<u64> = None;
        let mut cand = t.adj[last] & !visited;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if t.preds[v] & !visited != 0 {
                continue;
            }
            if let Some(rest) = self.best(visited | 1 << v, v) {
                let total = rest + t.step(last, v);
                if best.is_none_or(|b| total < b) {
                    best = Some(total);
                    if !t.weighted {
                        break;
                    }
                }
            }
        }
        self.memo.insert((visited, last as u8), best);
        best
    }

    /// Lexicographically smallest continuation achieving `target`.
    fn rebuild(&mut self, first: usize, target: u64) -> Vec<usize> {
        let t = self.t;
        let mut order = vec![first];
        let (mut visited, mut last, mut left) = (1u64 << first, first, target);
        while visited != t.full() {
            let mut cand = t.adj[last] & !visited;
            let mut moved = false;
            while cand != 0 {
                let v = cand.trailing_zeros() as usize;
                cand &= cand - 1;
                if t.preds[v] & !visited != 0 {
                    continue;
                }
                let step = t.step(last, v);
                if step > left {
                    continue;
                }
                if self.best(visited | 1 << v, v) == Some(left - step) {
                    order.push(v);
                    visited |= 1 << v;
                    last = v;
                    left -= step;
                    moved = true;
                    break;
                }
            }
            assert!(moved, "reconstruction follows an optimal state");
        }
        order
    }
}

/// Subset DP over `(visited, last)`. Among optimal solutions the
/// lexicographically smallest vertex sequence is returned.
pub fn solve_exact(inst: &Instance) -> Result<Option<Solution>> {
    let n = inst.n();
    if n == 0 {
        return Err(Error::Unsupported("empty graph".into()));
    }
    if n > EXACT_MAX_N {
        return Err(Error::TooLarge(format!("exact solver handles n <= {EXACT_MAX_N}, got {n}")));
    }
    let t = Tables::new(inst);
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut shared = Completion { t: &t, first: 0, memo: HashMap::new() };
    for first in 0..n {
        if t.preds[first] != 0 {
            continue;
        }
        // Path completions do not depend on the start, so one memo serves all.
        if t.cycle {
            shared = Completion { t: &t, first, memo: HashMap::new() };
        }
        let Some(cost) = shared.best(1 << first, first) else {
            continue;
        };
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            let order = shared.rebuild(first, cost);
            best = Some((cost, order));
            if !t.weighted {
                break;
            }
        }
    }
    Ok(best.map(|(cost, order)| Solution { order, cost }))
}

/// Enumerates all permutations in lexicographic order.
pub fn solve_bruteforce(inst: &Instance) -> Result<Option<Solution>> {
    let n = inst.n();
    if n == 0 {
        return Err(Error::Unsupported("empty graph".into()));
    }
    if n > BRUTEFORCE_MAX_N {
        return Err(Error::TooLarge(format!(
            "brute force handles n <= {BRUTEFORCE_MAX_N}, got {n}"
        )));
    }
    let g = &inst.graph;
    let mut best: Option<Solution> = None;
    for order in (0..n).permutations(n) {
        if !order.windows(2).all(|w| g.has_edge(w[0], w[1])) {
            continue;
        }
        if inst.variant == Variant::Cycle && n > 1 && !g.has_edge(order[n - 1], order[0]) {
            continue;
        }
        if !inst.poset.respects(&order) {
            continue;
        }
        let cost = inst.order_cost(&order);
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            best = Some(Solution { order, cost });
        }
    }
    Ok(best)
}
