//! Partial orders stored as an eager reflexive-transitive closure.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// `below[b]` holds every `a` with `a ⪯ b`; `above[a]` the transpose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    above: Vec<FixedBitSet>,
    below: Vec<FixedBitSet>,
}

pub fn build_poset(n: usize, constraints: &[(usize, usize)]) -> Result<Poset> {
    let mut above = vec![FixedBitSet::with_capacity(n); n];
    for (v, row) in above.iter_mut().enumerate() {
        row.insert(v);
    }
    for &(a, b) in constraints {
        if a >= n || b >= n {
            return Err(Error::Range(format!("constraint ({a},{b}) with n={n}")));
        }
        above[a].insert(b);
    }
    close(n, above)
}

fn close(n: usize, mut above: Vec<FixedBitSet>) -> Result<Poset> {
    // Warshall over bit rows.
    for k in 0..n {
        let via = above[k].clone();
        for row in above.iter_mut() {
            if row.contains(k) {
                row.union_with(&via);
            }
        }
    }
    let mut below = vec![FixedBitSet::with_capacity(n); n];
    for a in 0..n {
        for b in above[a].ones() {
            if a != b && above[b].contains(a) {
                return Err(Error::CycleInConstraints(a.min(b), a.max(b)));
            }
            below[b].insert(a);
        }
    }
    Ok(Poset { n, above, below })
}

impl Poset {
    pub fn empty(n: usize) -> Self {
        build_poset(n, &[]).expect("identity is a partial order")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `a ⪯ b` in the closure.
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.above[a].contains(b)
    }

    /// Strict precedence `a ≺ b`.
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        a != b && self.above[a].contains(b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    /// Row of everything `⪰ a` (includes `a`).
    pub fn up_set(&self, a: usize) -> &FixedBitSet {
        &self.above[a]
    }

    /// Row of everything `⪯ b` (includes `b`).
    pub fn down_set(&self, b: usize) -> &FixedBitSet {
        &self.below[b]
    }

    pub fn predecessors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.below[v].ones().filter(move |&u| u != v)
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.above[v].ones().filter(move |&u| u != v)
    }

    /// Every strict predecessor of `v` lies in `visited`.
    pub fn is_available(&self, v: usize, visited: &FixedBitSet) -> bool {
        self.below[v].ones().all(|u| u == v || visited.contains(u))
    }

    /// No element of `within` other than `v` is strictly below `v`.
    pub fn is_minimal_within(&self, v: usize, within: &FixedBitSet) -> bool {
        self.below[v].ones().all(|u| u == v || !within.contains(u))
    }

    /// Whether `order` lists vertices consistently with the order (no later
    /// element strictly precedes an earlier one).
    pub fn respects(&self, order: &[usize]) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.n);
        for &v in order {
            if self.above[v].ones().any(|u| u != v && seen.contains(u)) {
                return false;
            }
            seen.insert(v);
        }
        true
    }

    /// All strict pairs of the closure, sorted.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            out.extend(self.successors(a).map(|b| (a, b)));
        }
        out
    }

    /// Closure of this order plus `extra` pairs.
    pub fn with_pairs(&self, extra: &[(usize, usize)]) -> Result<Poset> {
        let mut above = self.above.clone();
        for &(a, b) in extra {
            if a >= self.n || b >= self.n {
                return Err(Error::Range(format!("constraint ({a},{b}) with n={}", self.n)));
            }
            above[a].insert(b);
        }
        close(self.n, above)
    }

    /// Order restricted to `keep`; element `i` of the result is `keep[i]`.
    pub fn restrict(&self, keep: &[usize]) -> Poset {
        let k = keep.len();
        let mut above = vec![FixedBitSet::with_capacity(k); k];
        let mut below = vec![FixedBitSet::with_capacity(k); k];
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                if self.le(a, b) {
                    above[i].insert(j);
                    below[j].insert(i);
                }
            }
        }
        Poset { n: k, above, below }
    }

    /// Deterministic linear extension of the elements in `items`: Kahn's
    /// algorithm taking the smallest available id first.
    pub fn topological_order(&self, items: &[usize]) -> Vec<usize> {
        let mut pool = FixedBitSet::with_capacity(self.n);
        for &v in items {
            pool.insert(v);
        }
        let mut indeg: Vec<usize> = vec![0; self.n];
        for v in pool.ones() {
            indeg[v] = self.predecessors(v).filter(|&u| pool.contains(u)).count();
        }
        let mut ready: std::collections::BTreeSet<usize> =
            pool.ones().filter(|&v| indeg[v] == 0).collect();
        let mut out = Vec::with_capacity(items.len());
        while let Some(v) = ready.pop_first() {
            out.push(v);
            for u in self.successors(v) {
                if pool.contains(u) {
                    indeg[u] -= 1;
                    if indeg[u] == 0 {
                        ready.insert(u);
                    }
                }
            }
        }
        out
    }
}
