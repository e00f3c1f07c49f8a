//! Path/cycle reductions, endpoint fixing and traceability size bounds.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::{Instance, Objective, Solution, Variant};
use crate::poset::Poset;

/// Adds a universal vertex `n` that every original vertex must precede.
/// The new edges weigh 0, so costs carry over unchanged.
pub fn path_to_cycle(inst: &Instance) -> Result<Instance> {
    if inst.variant != Variant::Path {
        return Err(Error::Unsupported("path_to_cycle expects a path instance".into()));
    }
    let n = inst.n();
    let mut g = Graph::new(n + 1);
    if inst.graph.is_weighted() {
        g.set_weighted(true);
    }
    for (u, v) in inst.graph.edges() {
        match inst.graph.weight(u, v) {
            Some(w) => g.add_weighted_edge(u, v, w)?,
            None => g.add_edge(u, v)?,
        }
    }
    for v in 0..n {
        if g.is_weighted() {
            g.add_weighted_edge(v, n, 0)?;
        } else {
            g.add_edge(v, n)?;
        }
    }
    let mut pairs = inst.constraints.clone();
    pairs.extend((0..n).map(|v| (v, n)));
    let mut out = Instance::new(g, &pairs)?;
    out.variant = Variant::Cycle;
    out.objective = inst.objective;
    Ok(out)
}

/// Forces `s` to be first and `t` last; `None` if the order forbids it.
pub fn fix_endpoints(p: &Poset, s: usize, t: usize) -> Option<Poset> {
    let n = p.n();
    if s == t || s >= n || t >= n {
        return None;
    }
    if p.predecessors(s).next().is_some() || p.successors(t).next().is_some() {
        return None;
    }
    let mut extra = Vec::with_capacity(2 * n);
    for v in 0..n {
        if v != s {
            extra.push((s, v));
        }
        if v != t {
            extra.push((v, t));
        }
    }
    p.with_pairs(&extra).ok()
}

/// Solves a cycle instance by trying every ordered adjacent pair `(s, t)`
/// as path endpoints and closing with the edge `ts`.
pub fn cycle_via_path<F>(inst: &Instance, mut path_solver: F) -> Result<Option<Solution>>
where
    F: FnMut(&Instance) -> Result<Option<Solution>>,
{
    let n = inst.n();
    let mut as_path = inst.clone();
    as_path.variant = Variant::Path;
    if n <= 1 {
        return path_solver(&as_path);
    }
    let g = &inst.graph;
    let mut best: Option<Solution> = None;
    for s in 0..n {
        for t in g.neighbors(s) {
            let Some(fixed) = fix_endpoints(&inst.poset, s, t) else {
                continue;
            };
            let sub = as_path.with_poset(fixed);
            let Some(sol) = path_solver(&sub)? else {
                continue;
            };
            let cost = inst.order_cost(&sol.order);
            if best.as_ref().is_none_or(|b| cost < b.cost) {
                best = Some(Solution { order: sol.order, cost });
                if inst.objective == Objective::Decision {
                    return Ok(best);
                }
            }
        }
    }
    Ok(best)
}

pub const TREEDEPTH_MAX_N: usize = 15;

/// Exact treedepth by recursion over vertex subsets.
pub fn compute_treedepth_exact(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > TREEDEPTH_MAX_N {
        return Err(Error::TooLarge(format!(
            "treedepth handles n <= {TREEDEPTH_MAX_N}, got {n}"
        )));
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).fold(0u32, |m, u| m | 1 << u))
        .collect();
    let mut memo = HashMap::new();
    Ok(treedepth(&adj, (1u32 << n) - 1, &mut memo))
}

fn component_of(adj: &[u32], within: u32, start: usize) -> u32 {
    let mut comp = 1u32 << start;
    let mut frontier = comp;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = adj[v] & within & !comp;
        comp |= fresh;
        frontier |= fresh;
    }
    comp
}

fn treedepth(adj: &[u32], set: u32, memo: &mut HashMap<u32, usize>) -> usize {
    if set == 0 {
        return 0;
    }
    if let Some(&d) = memo.get(&set) {
        return d;
    }
    let comp = component_of(adj, set, set.trailing_zeros() as usize);
    let d = if comp != set {
        treedepth(adj, comp, memo).max(treedepth(adj, set & !comp, memo))
    } else {
        let mut best = usize::MAX;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            best = best.min(1 + treedepth(adj, set & !(1 << v), memo));
        }
        best
    };
    memo.insert(set, d);
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    VertexCover,
    Treedepth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Infeasible,
    Unknown,
}

/// Quick reject: a traceable graph with vertex cover `k` has at most
/// `2k + 1` vertices, and one with treedepth `k` fewer than `2^k`.
pub fn check_traceable_bounds(g: &Graph, kind: BoundKind, k: usize) -> Verdict {
    let n = g.n();
    let too_many = match kind {
        BoundKind::VertexCover => n > 2 * k + 1,
        BoundKind::Treedepth => k < 64 && n as u128 >= 1u128 << k,
    };
    if too_many {
        Verdict::Infeasible
    } else {
        Verdict::Unknown
    }
}
