//! Undirected simple graphs over dense integer ids.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Edge key with the smaller endpoint first.
pub fn edge_key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<FixedBitSet>,
    weights: Option<BTreeMap<(usize, usize), u64>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![FixedBitSet::with_capacity(n); n],
            weights: None,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn from_weighted_edges(n: usize, edges: &[(usize, usize, u64)]) -> Result<Self> {
        let mut g = Graph::new(n);
        g.weights = Some(BTreeMap::new());
        for &(u, v, w) in edges {
            g.add_weighted_edge(u, v, w)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.connect(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.connect(v - 1, v);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.connect(n - 1, 0);
        }
        g
    }

    fn connect(&mut self, u: usize, v: usize) {
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::Range(format!("edge ({u},{v}) with n={}", self.n)));
        }
        if u == v {
            return Err(Error::Unsupported(format!("self-loop at {u}")));
        }
        Ok(())
    }

    /// Adds an unweighted edge; adding an existing edge is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_pair(u, v)?;
        if let Some(w) = self.weights.as_mut() {
            w.entry(edge_key(u, v)).or_insert(0);
        }
        self.connect(u, v);
        Ok(())
    }

    pub fn add_weighted_edge(&mut self, u: usize, v: usize, w: u64) -> Result<()> {
        self.check_pair(u, v)?;
        if self.weights.is_none() {
            let zeros = self.edges().into_iter().map(|e| (e, 0)).collect();
            self.weights = Some(zeros);
        }
        self.weights.as_mut().unwrap().insert(edge_key(u, v), w);
        self.connect(u, v);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u < self.n && v < self.n {
            self.adj[u].set(v, false);
            self.adj[v].set(u, false);
            if let Some(w) = self.weights.as_mut() {
                w.remove(&edge_key(u, v));
            }
        }
    }

    /// Drops all weights, or installs weight 0 on every edge.
    pub fn set_weighted(&mut self, weighted: bool) {
        if weighted {
            if self.weights.is_none() {
                self.weights = Some(self.edges().into_iter().map(|e| (e, 0)).collect());
            }
        } else {
            self.weights = None;
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].ones()
    }

    pub fn adjacency(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<u64> {
        self.weights.as_ref()?.get(&edge_key(u, v)).copied()
    }

    /// Weight of an edge, 0 when the graph is unweighted.
    pub fn cost(&self, u: usize, v: usize) -> u64 {
        self.weight(u, v).unwrap_or(0)
    }

    /// Edges as sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.adj[u].ones().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    /// Subgraph induced by `keep` (in the given order); vertex `i` of the
    /// result is `keep[i]`.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::new(keep.len());
        if self.weights.is_some() {
            g.weights = Some(BTreeMap::new());
        }
        for (i, &v) in keep.iter().enumerate() {
            for u in self.adj[v].ones() {
                let j = index[u];
                if j != usize::MAX && i < j {
                    g.connect(i, j);
                    if let Some(w) = g.weights.as_mut() {
                        w.insert((i, j), self.cost(u, v));
                    }
                }
            }
        }
        g
    }

    /// Same vertex ids, all edges touching `gone` removed.
    pub fn without_vertices(&self, gone: &[usize]) -> Graph {
        let mut g = self.clone();
        for &v in gone {
            let nbrs: Vec<usize> = g.neighbors(v).collect();
            for u in nbrs {
                g.remove_edge(u, v);
            }
        }
        g
    }

    pub fn without_edges(&self, gone: &[(usize, usize)]) -> Graph {
        let mut g = self.clone();
        for &(u, v) in gone {
            g.remove_edge(u, v);
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = FixedBitSet::with_capacity(self.n);
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen.contains(s) {
                continue;
            }
            seen.insert(s);
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for u in self.adj[v].ones() {
                    if !seen.contains(u) {
                        seen.insert(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Components of the subgraph induced by `within`.
    pub fn components_within(&self, within: &FixedBitSet) -> Vec<Vec<usize>> {
        let mut seen = FixedBitSet::with_capacity(self.n);
        let mut comps = Vec::new();
        for s in within.ones() {
            if seen.contains(s) {
                continue;
            }
            seen.insert(s);
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for u in self.adj[v].ones() {
                    if within.contains(u) && !seen.contains(u) {
                        seen.insert(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Sum of edge costs along a vertex sequence (missing edges count 0).
    pub fn walk_cost(&self, order: &[usize]) -> u64 {
        order.windows(2).map(|w| self.cost(w[0], w[1])).sum()
    }
}
