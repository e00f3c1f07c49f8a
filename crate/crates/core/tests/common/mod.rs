//! Random instance families shared by the integration suites.
#![allow(dead_code)]

pub mod plane;

use pohpath::oracle::solve_exact;
use pohpath::{build_poset, Graph, Instance, Objective};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Relabels `edges` on `n` vertices by a random permutation.
pub fn shuffle_ids(r: &mut ChaCha8Rng, n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect()
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    let mut g = Graph::new(n);
    for &(u, v) in edges {
        g.add_edge(u, v).unwrap();
    }
    g
}

/// Block graph edges on vertices `0..n`: cliques glued at vertices. With
/// `chain` set, each new clique hangs off the newest one, which keeps the
/// block-cut tree path-like.
pub fn block_graph_edges(r: &mut ChaCha8Rng, n: usize, chain: bool) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let first = r.gen_range(1..=n.min(4));
    let mut last_block: Vec<usize> = (0..first).collect();
    for u in 0..first {
        for v in u + 1..first {
            edges.push((u, v));
        }
    }
    let mut next = first;
    while next < n {
        let size = r.gen_range(1..=3.min(n - next));
        let anchor = if chain {
            *last_block.choose(r).unwrap()
        } else {
            r.gen_range(0..next)
        };
        let mut block = vec![anchor];
        block.extend(next..next + size);
        next += size;
        for (i, &u) in block.iter().enumerate() {
            for &v in &block[i + 1..] {
                edges.push((u, v));
            }
        }
        last_block = block;
    }
    edges
}

/// Random precedence pairs. Half the time they are drawn from a hidden
/// solution so feasible instances stay common.
pub fn random_constraints(r: &mut ChaCha8Rng, g: &Graph, max_pairs: usize) -> Vec<(usize, usize)> {
    let n = g.n();
    let count = r.gen_range(0..=max_pairs);
    let hidden = if r.gen_bool(0.5) && n <= 12 {
        solve_exact(&Instance::new(g.clone(), &[]).unwrap()).unwrap().map(|s| s.order)
    } else {
        None
    };
    let mut pairs = Vec::new();
    for _ in 0..count * 3 {
        if pairs.len() >= count || n < 2 {
            break;
        }
        let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
        if i == j {
            continue;
        }
        let pair = match &hidden {
            Some(order) => (order[i.min(j)], order[i.max(j)]),
            None => (i, j),
        };
        let mut trial = pairs.clone();
        trial.push(pair);
        if build_poset(n, &trial).is_ok() {
            pairs = trial;
        }
    }
    pairs
}

/// Uniform random graph with edge probability `p`.
pub fn gnp(r: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

pub fn with_random_weights(r: &mut ChaCha8Rng, g: &Graph) -> Graph {
    let mut out = Graph::new(g.n());
    out.set_weighted(true);
    for (u, v) in g.edges() {
        out.add_weighted_edge(u, v, r.gen_range(0..10)).unwrap();
    }
    out
}

pub fn instance(g: Graph, pairs: &[(usize, usize)]) -> Instance {
    Instance::new(g, pairs).unwrap()
}

pub fn min_instance(g: Graph, pairs: &[(usize, usize)]) -> Instance {
    Instance::new(g, pairs).unwrap().with_objective(Objective::Min)
}

/// Block graph on `n - w` vertices plus `w` extra vertices with random
/// attachments; returns the graph and the extra vertices.
pub fn block_plus_vertices(r: &mut ChaCha8Rng, n: usize, w: usize) -> (Graph, Vec<usize>) {
    let base = n - w;
    let chain = r.gen_bool(0.7);
    let mut edges = block_graph_edges(r, base, chain);
    for x in base..n {
        for v in 0..x {
            if r.gen_bool(0.4) {
                edges.push((v, x));
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    let edges: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
    let mut extra: Vec<usize> = (base..n).map(|x| perm[x]).collect();
    extra.sort_unstable();
    (graph(n, &edges), extra)
}

/// Block graph plus up to `k` extra edges; returns the graph and the extra edges.
pub fn block_plus_edges(r: &mut ChaCha8Rng, n: usize, k: usize) -> (Graph, Vec<(usize, usize)>) {
    let chain = r.gen_bool(0.7);
    let base = block_graph_edges(r, n, chain);
    let edges = shuffle_ids(r, n, &base);
    let mut g = graph(n, &edges);
    let mut extra = Vec::new();
    for _ in 0..k * 4 {
        if extra.len() == k {
            break;
        }
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        if u != v && !g.has_edge(u, v) {
            g.add_edge(u, v).unwrap();
            extra.push((u.min(v), u.max(v)));
        }
    }
    (g, extra)
}

/// Clique of size `c` plus `w` vertices that see all of it or none of it,
/// with random edges among themselves.
pub fn clique_plus(r: &mut ChaCha8Rng, c: usize, w: usize) -> (Graph, Vec<usize>) {
    let n = c + w;
    let mut g = Graph::complete(n);
    for x in c..n {
        if r.gen_bool(0.3) {
            for v in 0..c {
                g.remove_edge(v, x);
            }
        }
        for y in x + 1..n {
            if r.gen_bool(0.5) {
                g.remove_edge(x, y);
            }
        }
    }
    (g, (c..n).collect())
}

/// Random spanning tree (forest when `forest` is set) plus up to `k`
/// extra edges, so the feedback edge number is at most `k`.
pub fn tree_plus_edges(r: &mut ChaCha8Rng, n: usize, k: usize, forest: bool) -> Graph {
    let mut g = Graph::new(n);
    for v in 1..n {
        if !forest || r.gen_bool(0.9) {
            let u = r.gen_range(0..v);
            g.add_edge(u, v).unwrap();
        }
    }
    let mut added = 0;
    for _ in 0..k * 4 {
        if added == k {
            break;
        }
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        if u != v && !g.has_edge(u, v) {
            g.add_edge(u, v).unwrap();
            added += 1;
        }
    }
    let edges = shuffle_ids(r, n, &g.edges());
    graph(n, &edges)
}
