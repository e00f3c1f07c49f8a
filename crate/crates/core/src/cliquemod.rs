//! Solver for graphs that are a clique module plus a few extra vertices.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::{validate_solution, Instance, Solution, Variant};
use crate::poset::Poset;
use crate::transforms::cycle_via_path;

/// The largest class of vertices with identical closed neighbourhoods
/// (ties go to the lexicographically smallest class) and its complement.
/// Returns `(w, c)`.
pub fn find_clique_module_set(g: &Graph) -> (Vec<usize>, Vec<usize>) {
    let mut classes: HashMap<FixedBitSet, Vec<usize>> = HashMap::new();
    for v in 0..g.n() {
        let mut closed = g.adjacency(v).clone();
        closed.insert(v);
        classes.entry(closed).or_default().push(v);
    }
    let best = classes
        .into_values()
        .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)))
        .unwrap_or_default();
    let w = (0..g.n()).filter(|v| !best.contains(v)).collect();
    (w, best)
}

/// `ℓ(x)` and `r(x)` of one clique vertex against the ordering `sigma` of
/// the remaining deletion vertices (1-based; 0 and `len + 1` when unbounded).
pub fn lr_bounds(order: &Poset, sigma: &[usize], x: usize) -> (usize, usize) {
    let left = (1..=sigma.len()).rev().find(|&i| order.precedes(sigma[i - 1], x)).unwrap_or(0);
    let right = (1..=sigma.len())
        .find(|&i| order.precedes(x, sigma[i - 1]))
        .unwrap_or(sigma.len() + 1);
    (left, right)
}

struct Setup<'a> {
    inst: &'a Instance,
    in_c: FixedBitSet,
    clique: Vec<usize>,
    rank: Vec<usize>,
    /// Order restricted to the clique, per clique vertex (reflexive).
    c_up: Vec<FixedBitSet>,
    c_down: Vec<FixedBitSet>,
    secluded: FixedBitSet,
}

/// Where a deletion vertex sits relative to the non-secluded ones.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Place {
    Kept(usize),
    Inside,
    Ends,
    Clique,
}

impl<'a> Setup<'a> {
    fn new(inst: &'a Instance, w: &[usize]) -> Result<Setup<'a>> {
        let g = &inst.graph;
        let n = g.n();
        let mut in_c = FixedBitSet::with_capacity(n);
        in_c.insert_range(..);
        for &v in w {
            if v >= n {
                return Err(Error::InvalidCertificate(format!("deletion vertex {v} out of range")));
            }
            in_c.set(v, false);
        }
        let clique: Vec<usize> = in_c.ones().collect();
        let mut secluded = FixedBitSet::with_capacity(n);
        for &v in w {
            let mut touch = g.adjacency(v).clone();
            touch.intersect_with(&in_c);
            match touch.count_ones(..) {
                0 => secluded.insert(v),
                c if c == clique.len() => {}
                _ => {
                    return Err(Error::InvalidCertificate(format!(
                        "vertex {v} sees only part of the clique module"
                    )))
                }
            }
        }
        if !g.is_clique(&clique) {
            return Err(Error::InvalidCertificate("remaining vertices are not a clique".into()));
        }
        let p = &inst.poset;
        let mut rank = vec![usize::MAX; n];
        for (i, v) in p.topological_order(&clique).into_iter().enumerate() {
            rank[v] = i;
        }
        let mut c_up = vec![FixedBitSet::new(); n];
        let mut c_down = vec![FixedBitSet::new(); n];
        for &x in &clique {
            c_up[x] = p.up_set(x).clone();
            c_up[x].intersect_with(&in_c);
            c_down[x] = p.down_set(x).clone();
            c_down[x].intersect_with(&in_c);
        }
        Ok(Setup { inst, in_c, clique, rank, c_up, c_down, secluded })
    }

    fn linked(&self, run: &[usize]) -> bool {
        run.windows(2).all(|p| self.inst.graph.has_edge(p[0], p[1]))
    }

    /// Builds the path for one ordering `rho` of the deletion vertices.
    fn attempt(&self, rho: &[usize]) -> Result<Option<Vec<usize>>> {
        let g = &self.inst.graph;
        let p = &self.inst.poset;
        let n = g.n();
        let kept: Vec<usize> = (0..rho.len()).filter(|&i| !self.secluded.contains(rho[i])).collect();
        let (Some(&first), Some(&last)) = (kept.first(), kept.last()) else {
            if rho.is_empty() {
                return Ok(Some(p.topological_order(&self.clique)));
            }
            let ok = self.clique.is_empty() && self.linked(rho);
            return Ok(ok.then(|| rho.to_vec()));
        };
        let leading = first > 0;
        let trailing = last + 1 < rho.len();
        if !self.linked(&rho[..=first]) || !self.linked(&rho[last..]) {
            return Ok(None);
        }
        let mut place = vec![Place::Ends; n];
        for &x in &self.clique {
            place[x] = Place::Clique;
        }
        let sigma: Vec<usize> = kept.iter().map(|&i| rho[i]).collect();
        for (a, &w) in sigma.iter().enumerate() {
            place[w] = Place::Kept(a);
        }
        let mut contracted = vec![false; sigma.len()];
        for (a, pair) in kept.windows(2).enumerate() {
            let (i, j) = (pair[0], pair[1]);
            if j > i + 1 {
                if !self.linked(&rho[i..=j]) {
                    return Ok(None);
                }
                contracted[a] = true;
                for &v in &rho[i + 1..j] {
                    place[v] = Place::Inside;
                }
            }
        }
        let touches_clique = |row: &FixedBitSet| row.ones().any(|u| self.in_c.contains(u));
        if rho[..first].iter().any(|&v| touches_clique(p.down_set(v)))
            || rho[last + 1..].iter().any(|&v| touches_clique(p.up_set(v)))
        {
            return Ok(None);
        }

        // Direct constraints of the contracted order touching kept vertices.
        let k = sigma.len();
        let mut up = vec![FixedBitSet::with_capacity(n); k];
        let mut down = vec![FixedBitSet::with_capacity(n); k];
        // Chains of kept vertices joined by contracted runs act as single units.
        let mut chain_of: Vec<Option<usize>> = vec![None; n];
        let mut chain_ends: Vec<(usize, usize)> = Vec::new();
        let mut a = 0;
        while a < k {
            let mut b = a;
            while b < k - 1 && contracted[b] {
                b += 1;
            }
            if b > a {
                let id = chain_ends.len();
                chain_ends.push((sigma[a], sigma[b]));
                for &v in &rho[kept[a]..=kept[b]] {
                    chain_of[v] = Some(id);
                }
            }
            a = b + 1;
        }
        let source = |v: usize| match (place[v], chain_of[v]) {
            (Place::Ends, _) => None,
            (_, Some(id)) => Some(chain_ends[id].1),
            _ => Some(v),
        };
        let target = |v: usize| match (place[v], chain_of[v]) {
            (Place::Ends, _) => None,
            (_, Some(id)) => Some(chain_ends[id].0),
            _ => Some(v),
        };
        let add = |s: usize, t: usize, up: &mut [FixedBitSet], down: &mut [FixedBitSet]| {
            if s == t {
                return;
            }
            if let Place::Kept(a) = place[s] {
                up[a].insert(t);
            }
            if let Place::Kept(b) = place[t] {
                down[b].insert(s);
            }
        };
        for &w in rho {
            if place[w] == Place::Ends {
                continue;
            }
            for b in p.successors(w) {
                if chain_of[w].is_some() && chain_of[w] == chain_of[b] {
                    continue;
                }
                if let (Some(s), Some(t)) = (source(w), target(b)) {
                    add(s, t, &mut up, &mut down);
                }
            }
            if let Some(t) = target(w) {
                for x in p.down_set(w).ones().filter(|&x| self.in_c.contains(x)) {
                    add(x, t, &mut up, &mut down);
                }
            }
        }
        if leading {
            let end = source(sigma[0]).unwrap_or(sigma[0]);
            let Place::Kept(a) = place[end] else { unreachable!() };
            up[a].union_with(&self.in_c);
        }
        if trailing {
            let start = target(sigma[k - 1]).unwrap_or(sigma[k - 1]);
            let Place::Kept(b) = place[start] else { unreachable!() };
            down[b].union_with(&self.in_c);
        }

        // Close through the clique order, then among the kept vertices.
        let close = |rows: &[FixedBitSet], c_rows: &[FixedBitSet]| -> Vec<FixedBitSet> {
            rows.iter()
                .map(|row| {
                    let mut out = row.clone();
                    for x in row.ones().filter(|&x| self.in_c.contains(x)) {
                        out.union_with(&c_rows[x]);
                    }
                    out
                })
                .collect()
        };
        let up_c = close(&up, &self.c_up);
        let down_c = close(&down, &self.c_down);
        let mut reach = vec![vec![false; k]; k];
        for a in 0..k {
            for b in 0..k {
                let via_clique = up_c[a].intersection(&down_c[b]).any(|x| self.in_c.contains(x));
                reach[a][b] = up_c[a].contains(sigma[b]) || down_c[b].contains(sigma[a]) || via_clique;
            }
        }
        for m in 0..k {
            for a in 0..k {
                if reach[a][m] {
                    for b in 0..k {
                        reach[a][b] |= reach[m][b];
                    }
                }
            }
        }
        if (0..k).any(|a| (0..=a).any(|b| reach[a][b])) {
            return Ok(None);
        }

        let mut left = vec![0usize; n];
        let mut right = vec![k + 1; n];
        for a in (0..k).rev() {
            let mut above = up_c[a].clone();
            for b in (a + 1..k).filter(|&b| reach[a][b]) {
                above.union_with(&up_c[b]);
            }
            for x in above.ones() {
                if self.in_c.contains(x) && left[x] == 0 {
                    left[x] = a + 1;
                }
            }
        }
        for b in 0..k {
            let mut below = down_c[b].clone();
            for a in (0..b).filter(|&a| reach[a][b]) {
                below.union_with(&down_c[a]);
            }
            for x in below.ones() {
                if self.in_c.contains(x) && right[x] == k + 1 {
                    right[x] = b + 1;
                }
            }
        }
        if let Some(&x) = self.clique.iter().find(|&&x| left[x] >= right[x]) {
            return Err(Error::Internal(format!(
                "clique vertex {x} has bounds ({}, {})",
                left[x], right[x]
            )));
        }

        // Buckets keyed by (ℓ, r), each in clique order.
        let width = k + 2;
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); width * width];
        let mut by_rank = self.clique.clone();
        by_rank.sort_unstable_by_key(|&x| self.rank[x]);
        for &x in &by_rank {
            buckets[left[x] * width + right[x]].push(x);
        }
        let mut cursor = vec![0usize; width * width];
        let mut seen = FixedBitSet::with_capacity(n);
        let mut tau = Vec::with_capacity(n);
        for i in 1..=k {
            let mut forced: Vec<usize> = (0..i)
                .flat_map(|a| buckets[a * width + i].iter().copied())
                .filter(|&x| !seen.contains(x))
                .collect();
            forced.sort_unstable_by_key(|&x| self.rank[x]);
            if forced.is_empty() && i > 1 && !contracted[i - 2] && !g.has_edge(sigma[i - 2], sigma[i - 1]) {
                let mut pick = None;
                'search: for b in i + 1..=k + 1 {
                    for a in 0..i {
                        let slot = a * width + b;
                        while let Some(&x) = buckets[slot].get(cursor[slot]) {
                            if !seen.contains(x) {
                                pick = Some(x);
                                break 'search;
                            }
                            cursor[slot] += 1;
                        }
                    }
                }
                let Some(x) = pick else { return Ok(None) };
                forced.push(x);
            }
            for x in forced {
                seen.insert(x);
                tau.push(x);
            }
            tau.push(sigma[i - 1]);
        }
        tau.extend(by_rank.iter().copied().filter(|&x| !seen.contains(x)));

        let mut order = rho[..first].to_vec();
        for (step, &v) in tau.iter().enumerate() {
            order.push(v);
            if let Place::Kept(a) = place[v] {
                if a + 1 < k && contracted[a] {
                    debug_assert_eq!(tau.get(step + 1), Some(&sigma[a + 1]));
                    let (i, j) = (kept[a], kept[a + 1]);
                    order.extend_from_slice(&rho[i + 1..j]);
                }
            }
        }
        order.extend_from_slice(&rho[last + 1..]);
        Ok(Some(order))
    }
}

/// Decision solver given deletion vertices `w` whose complement is a
/// clique module. Each π-consistent ordering of `w` is tried in
/// lexicographic order.
pub fn solve_clique_module(inst: &Instance, w: &[usize]) -> Result<Option<Solution>> {
    if inst.n() == 0 {
        return Err(Error::Unsupported("empty graph".into()));
    }
    if inst.variant == Variant::Cycle {
        return cycle_via_path(inst, |sub| solve_clique_module(sub, w));
    }
    let mut w = w.to_vec();
    w.sort_unstable();
    if w.windows(2).any(|p| p[0] == p[1]) {
        return Err(Error::InvalidCertificate("deletion set repeats a vertex".into()));
    }
    let setup = Setup::new(inst, &w)?;
    let orders: Vec<Vec<usize>> = w
        .iter()
        .copied()
        .permutations(w.len())
        .filter(|rho| inst.poset.respects(rho))
        .collect();
    let found = orders
        .par_iter()
        .find_map_first(|rho| setup.attempt(rho).transpose())
        .transpose()?;
    let Some(order) = found else { return Ok(None) };
    if !validate_solution(inst, &order).is_valid() {
        return Err(Error::Internal(format!("clique-module sweep built an invalid order {order:?}")));
    }
    Ok(Some(Solution { cost: inst.order_cost(&order), order }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::build_poset;

    fn triangle_with_pendant() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn module_classes() {
        assert_eq!(find_clique_module_set(&Graph::complete(4)), (vec![], vec![0, 1, 2, 3]));
        assert_eq!(find_clique_module_set(&triangle_with_pendant()), (vec![0, 3], vec![1, 2]));
        assert_eq!(find_clique_module_set(&Graph::path(3)), (vec![1, 2], vec![0]));
    }

    #[test]
    fn bare_clique_total_order() {
        let inst = Instance::new(Graph::complete(4), &[(3, 2), (2, 1), (1, 0)]).unwrap();
        let sol = solve_clique_module(&inst, &[]).unwrap().unwrap();
        assert_eq!(sol.order, vec![3, 2, 1, 0]);
    }

    #[test]
    fn pendant_starts_the_path() {
        let inst = Instance::new(triangle_with_pendant(), &[]).unwrap();
        let sol = solve_clique_module(&inst, &[0, 3]).unwrap().unwrap();
        assert!(validate_solution(&inst, &sol.order).is_valid());
        assert!(sol.order[0] == 3 || sol.order[3] == 3);
    }

    #[test]
    fn bounds_from_definitions() {
        let p = build_poset(3, &[(0, 2), (2, 1)]).unwrap();
        assert_eq!(lr_bounds(&p, &[0, 1], 2), (1, 2));
    }

    #[test]
    fn partial_attachment_rejected() {
        let inst = Instance::new(Graph::path(3), &[]).unwrap();
        assert!(matches!(solve_clique_module(&inst, &[0]), Err(Error::InvalidCertificate(_))));
    }
}
