//! Instance generators from Multicolored Clique and Alternating Linear
//! Extension seeds, with brute-force solvers for the seeds.
//!
//! Generated vertex ids follow a fixed order: selection gadgets, then
//! verification gadgets, then connector vertices, then the final `z`
//! vertices. Within a verification path the edge vertices are sorted by
//! their endpoint indices.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::Instance;
use crate::poset::{build_poset, Poset};

/// Largest number of candidate cliques the brute-force MCP solver tries.
pub const MCP_MAX_CANDIDATES: u128 = 1_000_000;
pub const ALEP_MAX_N: usize = 8;

/// Graph with `k` colour classes of `q` vertices each; vertex `p` of class
/// `i` is `(i, p)`. Edges are `(i, p, j, r)` with `i < j`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McpInstance {
    pub k: usize,
    pub q: usize,
    pub edges: Vec<(usize, usize, usize, usize)>,
}

impl McpInstance {
    pub fn new(k: usize, q: usize, edges: &[(usize, usize, usize, usize)]) -> Result<McpInstance> {
        let mut out = Vec::with_capacity(edges.len());
        for &(i, p, j, r) in edges {
            if i >= k || j >= k || p >= q || r >= q {
                return Err(Error::Range(format!("edge ({i},{p})-({j},{r}) with k={k}, q={q}")));
            }
            if i == j {
                return Err(Error::Unsupported(format!("edge inside colour class {i}")));
            }
            out.push(if i < j { (i, p, j, r) } else { (j, r, i, p) });
        }
        out.sort_unstable();
        out.dedup();
        Ok(McpInstance { k, q, edges: out })
    }

    /// Each cross-class pair becomes an edge with probability `density`;
    /// with `plant` set a random multicolored clique is added.
    pub fn random(k: usize, q: usize, density: f64, plant: bool, seed: u64) -> McpInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                for p in 0..q {
                    for r in 0..q {
                        if rng.gen_bool(density.clamp(0.0, 1.0)) {
                            edges.push((i, p, j, r));
                        }
                    }
                }
            }
        }
        if plant && q > 0 {
            let pick: Vec<usize> = (0..k).map(|_| rng.gen_range(0..q)).collect();
            for i in 0..k {
                for j in i + 1..k {
                    edges.push((i, pick[i], j, pick[j]));
                }
            }
        }
        McpInstance::new(k, q, &edges).expect("generated edges are in range")
    }

    fn has_edge(&self, i: usize, p: usize, j: usize, r: usize) -> bool {
        self.edges.binary_search(&(i, p, j, r)).is_ok()
    }

    /// Edges between classes `i < j`, sorted by `(p, r)`.
    fn between(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        self.edges.iter().filter(|e| e.0 == i && e.2 == j).map(|e| (e.1, e.3)).collect()
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.k).flat_map(|i| (i + 1..self.k).map(move |j| (i, j))).collect()
    }

    fn describe(&self) -> serde_json::Value {
        json!({ "k": self.k, "q": self.q, "edges": self.edges })
    }
}

/// Sets `A = 0..n` and `B = n..2n` with constraints `a_i ≺ b_j` stored as
/// `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlepInstance {
    pub n: usize,
    pub constraints: Vec<(usize, usize)>,
}

impl AlepInstance {
    pub fn new(n: usize, constraints: &[(usize, usize)]) -> Result<AlepInstance> {
        if n == 0 {
            return Err(Error::Unsupported("the two sets must be non-empty".into()));
        }
        if let Some(&(i, j)) = constraints.iter().find(|&&(i, j)| i >= n || j >= n) {
            return Err(Error::Range(format!("constraint a{i} < b{j} with n={n}")));
        }
        let mut constraints = constraints.to_vec();
        constraints.sort_unstable();
        constraints.dedup();
        Ok(AlepInstance { n, constraints })
    }

    pub fn random(n: usize, density: f64, seed: u64) -> AlepInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if rng.gen_bool(density.clamp(0.0, 1.0)) {
                    pairs.push((i, j));
                }
            }
        }
        AlepInstance::new(n.max(1), &pairs).expect("generated pairs are in range")
    }

    /// The order on `A ∪ B` with `a_i = i` and `b_j = n + j`.
    pub fn poset(&self) -> Poset {
        let pairs: Vec<(usize, usize)> =
            self.constraints.iter().map(|&(i, j)| (i, self.n + j)).collect();
        build_poset(2 * self.n, &pairs).expect("constraints run from A to B")
    }
}

/// One vertex per colour class forming a clique (the chosen index per
/// class), searching in lexicographic order.
pub fn solve_mcp_bruteforce(m: &McpInstance) -> Result<Option<Vec<usize>>> {
    let candidates = (m.q as u128).checked_pow(m.k as u32).unwrap_or(u128::MAX);
    if candidates > MCP_MAX_CANDIDATES {
        return Err(Error::TooLarge(format!("{candidates} candidate cliques")));
    }
    fn extend(m: &McpInstance, pick: &mut Vec<usize>) -> bool {
        let i = pick.len();
        if i == m.k {
            return true;
        }
        for p in 0..m.q {
            if pick.iter().enumerate().all(|(j, &r)| m.has_edge(j, r, i, p)) {
                pick.push(p);
                if extend(m, pick) {
                    return true;
                }
                pick.pop();
            }
        }
        false
    }
    let mut pick = Vec::with_capacity(m.k);
    Ok(extend(m, &mut pick).then_some(pick))
}

/// Alternating linear extension `(a, b, a, b, ...)` as element ids
/// (`a_i = i`, `b_j = n + j`), found by backtracking in index order.
pub fn solve_alep_bruteforce(a: &AlepInstance) -> Result<Option<Vec<usize>>> {
    if a.n > ALEP_MAX_N {
        return Err(Error::TooLarge(format!("alternating search handles n <= {ALEP_MAX_N}")));
    }
    let n = a.n;
    let mut needs = vec![0u32; n];
    for &(i, j) in &a.constraints {
        needs[j] |= 1 << i;
    }
    fn extend(n: usize, needs: &[u32], used_a: u32, used_b: u32, seq: &mut Vec<usize>) -> bool {
        if seq.len() == 2 * n {
            return true;
        }
        if seq.len() % 2 == 0 {
            for i in (0..n).filter(|&i| used_a >> i & 1 == 0) {
                seq.push(i);
                if extend(n, needs, used_a | 1 << i, used_b, seq) {
                    return true;
                }
                seq.pop();
            }
        } else {
            for j in (0..n).filter(|&j| used_b >> j & 1 == 0 && needs[j] & !used_a == 0) {
                seq.push(n + j);
                if extend(n, needs, used_a, used_b | 1 << j, seq) {
                    return true;
                }
                seq.pop();
            }
        }
        false
    }
    let mut seq = Vec::with_capacity(2 * n);
    Ok(extend(n, &needs, 0, 0, &mut seq).then_some(seq))
}

/// Accumulates vertices with names, edges and constraint pairs.
struct Builder {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
    pairs: Vec<(usize, usize)>,
}

impl Builder {
    fn new() -> Self {
        Builder { names: Vec::new(), edges: Vec::new(), pairs: Vec::new() }
    }

    fn vertex(&mut self, name: String) -> usize {
        self.names.push(name);
        self.names.len() - 1
    }

    fn join(&mut self, v: usize, group: &[usize]) {
        self.edges.extend(group.iter().map(|&u| (v, u)));
    }

    fn chain(&mut self, path: &[usize]) {
        self.edges.extend(path.windows(2).map(|w| (w[0], w[1])));
    }

    fn clique(&mut self, group: &[usize]) {
        for (i, &u) in group.iter().enumerate() {
            for &v in &group[i + 1..] {
                self.edges.push((u, v));
            }
        }
    }

    fn finish(self, deletion: Vec<usize>, meta: serde_json::Value) -> Instance {
        let n = self.names.len();
        let mut g = Graph::new(n);
        for (u, v) in self.edges {
            if u != v && !g.has_edge(u, v) {
                g.add_edge(u, v).expect("generated edge is in range");
            }
        }
        let mut inst = Instance::new(g, &self.pairs).expect("generated constraints are acyclic");
        let mut deletion = deletion;
        deletion.sort_unstable();
        inst.certificates.deletion_vertices = Some(deletion);
        inst.names = self.names.into_iter().enumerate().collect::<BTreeMap<_, _>>();
        inst.meta = Some(meta);
        inst
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathVariant {
    /// The gadget paths are linked into one long path.
    Path,
    /// The gadget paths stay separate components.
    Modules,
}

/// Selection paths with visited representatives. The deletion certificate
/// holds every vertex off the long path.
pub fn gen_w1_d2p(m: &McpInstance, variant: PathVariant) -> Instance {
    let (k, q) = (m.k, m.q);
    let mut b = Builder::new();
    let mut x = vec![Vec::new(); k];
    let mut xhat = vec![Vec::new(); k];
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut that = Vec::new();
    for i in 0..k {
        let mut path = Vec::with_capacity(2 * q);
        for p in 0..q {
            x[i].push(b.vertex(format!("x^{}_{}", i + 1, p + 1)));
            xhat[i].push(b.vertex(format!("xhat^{}_{}", i + 1, p + 1)));
            path.push(x[i][p]);
            path.push(xhat[i][p]);
        }
        that.push(b.vertex(format!("that^{}", i + 1)));
        paths.push(path);
    }
    let pairs = m.pairs();
    let mut w: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    let mut dhat = Vec::new();
    for &(i, j) in &pairs {
        let verts = m
            .between(i, j)
            .into_iter()
            .map(|(p, r)| (p, r, b.vertex(format!("w^{},{}_{},{}", i + 1, j + 1, p + 1, r + 1))))
            .collect::<Vec<_>>();
        paths.push(verts.iter().map(|t| t.2).collect());
        w.push(verts);
        dhat.push(b.vertex(format!("dhat^{},{}", i + 1, j + 1)));
    }
    let mut s = Vec::new();
    let mut shat = Vec::new();
    for i in 0..k {
        s.push(b.vertex(format!("s^{}", i + 1)));
        shat.push(b.vertex(format!("shat^{}", i + 1)));
    }
    let mut c = Vec::new();
    let mut chat = Vec::new();
    for &(i, j) in &pairs {
        c.push(b.vertex(format!("c^{},{}", i + 1, j + 1)));
        chat.push(b.vertex(format!("chat^{},{}", i + 1, j + 1)));
    }
    let z = b.vertex("z".into());

    for path in &paths {
        b.chain(path);
    }
    if variant == PathVariant::Path {
        let ends: Vec<&Vec<usize>> = paths.iter().filter(|p| !p.is_empty()).collect();
        for pair in ends.windows(2) {
            b.edges.push((*pair[0].last().unwrap(), pair[1][0]));
        }
    }
    for i in 0..k {
        b.join(that[i], &paths[i]);
        b.join(s[i], &paths[i]);
        b.join(shat[i], &paths[i]);
        if i > 0 {
            b.join(s[i], &paths[i - 1]);
            b.join(shat[i], &paths[i - 1]);
        }
    }
    for (e, _) in pairs.iter().enumerate() {
        let own = &paths[k + e];
        let before = paths[k + e - 1].clone();
        b.join(dhat[e], own);
        for v in [c[e], chat[e]] {
            b.join(v, own);
            b.join(v, &before);
        }
    }
    if let Some(last) = paths.last().filter(|_| !pairs.is_empty()) {
        let last = last.clone();
        b.join(z, &last);
    }
    b.edges.push((z, shat[0]));

    let n = b.names.len();
    let mut hatted: Vec<usize> = shat.clone();
    hatted.extend(&that[..k.saturating_sub(1)]);
    hatted.extend(&chat);
    hatted.extend(&dhat);
    hatted.extend(xhat.iter().flatten());
    b.pairs.extend((0..n).filter(|&v| v != s[0]).map(|v| (s[0], v)));
    b.pairs.extend(hatted.iter().map(|&y| (z, y)));
    for (e, &(i, j)) in pairs.iter().enumerate() {
        for &(p, r, v) in &w[e] {
            b.pairs.push((x[i][p], v));
            b.pairs.push((x[j][r], v));
        }
    }
    let on_path: Vec<bool> = {
        let mut on = vec![false; n];
        for &v in paths.iter().flatten() {
            on[v] = true;
        }
        on
    };
    let deletion = (0..n).filter(|&v| !on_path[v]).collect();
    let variant_name = match variant {
        PathVariant::Path => "path",
        PathVariant::Modules => "modules",
    };
    b.finish(deletion, json!({ "generator": "w1-d2p", "variant": variant_name, "seed": m.describe() }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CliqueVariant {
    /// All gadget cliques merged into one clique.
    Clique,
    /// Gadget cliques stay separate components.
    ClusterModules,
}

/// Selection cliques with skipped representatives. The deletion certificate
/// holds every vertex outside the gadget cliques.
pub fn gen_w1_d2c(m: &McpInstance, variant: CliqueVariant) -> Instance {
    let (k, q) = (m.k, m.q);
    let mut b = Builder::new();
    let mut x = vec![Vec::new(); k];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut that = Vec::new();
    for i in 0..k {
        for p in 0..q {
            x[i].push(b.vertex(format!("x^{}_{}", i + 1, p + 1)));
        }
        groups.push(x[i].clone());
        if i + 1 < k {
            that.push(b.vertex(format!("that^{}", i + 1)));
        }
    }
    let pairs = m.pairs();
    let mut w: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    for &(i, j) in &pairs {
        let verts = m
            .between(i, j)
            .into_iter()
            .map(|(p, r)| (p, r, b.vertex(format!("w^{},{}_{},{}", i + 1, j + 1, p + 1, r + 1))))
            .collect::<Vec<_>>();
        groups.push(verts.iter().map(|t| t.2).collect());
        w.push(verts);
    }
    let mut s = Vec::new();
    let mut shat = Vec::new();
    for i in 0..k {
        s.push(b.vertex(format!("s^{}", i + 1)));
        shat.push(b.vertex(format!("shat^{}", i + 1)));
    }
    let mut c = Vec::new();
    let mut chat = Vec::new();
    for &(i, j) in &pairs {
        c.push(b.vertex(format!("c^{},{}", i + 1, j + 1)));
        chat.push(b.vertex(format!("chat^{},{}", i + 1, j + 1)));
    }
    let z = b.vertex("z".into());
    let zhat = b.vertex("zhat".into());

    match variant {
        CliqueVariant::Clique => {
            let all: Vec<usize> = groups.iter().flatten().copied().collect();
            b.clique(&all);
        }
        CliqueVariant::ClusterModules => {
            for group in &groups {
                b.clique(group);
            }
        }
    }
    for i in 0..k {
        b.join(s[i], &groups[i]);
        b.join(shat[i], &groups[i]);
        if i > 0 {
            b.join(s[i], &groups[i - 1]);
            b.edges.push((shat[i], that[i - 1]));
        }
        if let Some(&t) = that.get(i) {
            b.join(t, &groups[i]);
        }
    }
    for e in 0..pairs.len() {
        let own = groups[k + e].clone();
        let before = groups[k + e - 1].clone();
        for v in [c[e], chat[e]] {
            b.join(v, &own);
            b.join(v, &before);
        }
    }
    if !pairs.is_empty() {
        let last = groups.last().unwrap().clone();
        b.join(z, &last);
        b.join(zhat, &last);
    }
    b.edges.push((z, shat[0]));

    let n = b.names.len();
    b.pairs.extend((0..n).filter(|&v| v != s[0]).map(|v| (s[0], v)));
    b.pairs.extend((0..n).filter(|&v| v != zhat).map(|v| (v, zhat)));
    b.pairs.extend(s.windows(2).map(|p| (p[0], p[1])));
    let mut hat_chain = vec![z];
    for i in 0..k {
        hat_chain.push(shat[i]);
        if let Some(&t) = that.get(i) {
            hat_chain.push(t);
        }
    }
    b.pairs.extend(hat_chain.windows(2).map(|p| (p[0], p[1])));
    b.pairs.extend(c.windows(2).map(|p| (p[0], p[1])));
    if let Some(&last) = c.last() {
        b.pairs.push((last, z));
    }
    for (e, &(i, j)) in pairs.iter().enumerate() {
        for &(p, r, v) in &w[e] {
            b.pairs.push((c[e], v));
            b.pairs.extend((0..q).filter(|&a| a != p).map(|a| (x[i][a], v)));
            b.pairs.extend((0..q).filter(|&a| a != r).map(|a| (x[j][a], v)));
        }
    }
    let in_gadget: Vec<bool> = {
        let mut on = vec![false; n];
        for &v in groups.iter().flatten() {
            on[v] = true;
        }
        on
    };
    let deletion = (0..n).filter(|&v| !in_gadget[v]).collect();
    let variant_name = match variant {
        CliqueVariant::Clique => "clique",
        CliqueVariant::ClusterModules => "cluster-modules",
    };
    b.finish(deletion, json!({ "generator": "w1-d2c", "variant": variant_name, "seed": m.describe() }))
}

/// The three cliques covering every edge of a [`gen_ecc`] instance with
/// `n` vertices per set.
pub fn ecc_cliques(n: usize) -> [Vec<usize>; 3] {
    let set = |s: usize| (s * n..(s + 1) * n).collect::<Vec<_>>();
    let (a, bs, x, y, z) = (set(0), set(1), set(2), set(3), set(4));
    [[&a[..], &x, &z].concat(), [&a[..], &bs, &z].concat(), [&bs[..], &y, &z].concat()]
}

/// Graph of edge clique cover number three built from an alternating
/// linear extension seed. Ids: `A`, `B`, `X`, `Y`, `Z` in blocks of `n`.
/// The clique cover certificate lists two cliques covering all vertices.
pub fn gen_ecc(a: &AlepInstance) -> Instance {
    let n = a.n;
    let mut b = Builder::new();
    for set in ["a", "b", "x", "y", "z"] {
        for i in 0..n {
            b.vertex(format!("{set}{}", i + 1));
        }
    }
    let [c1, c2, c3] = ecc_cliques(n);
    for clique in [&c1, &c2, &c3] {
        b.clique(clique);
    }
    let (xs, ys, zs) = (2 * n, 3 * n, 4 * n);
    b.pairs.extend((0..5 * n).filter(|&v| v != xs).map(|v| (xs, v)));
    let chain: Vec<usize> = (0..n).flat_map(|i| [xs + i, ys + i, zs + i]).collect();
    b.pairs.extend(chain.windows(2).map(|p| (p[0], p[1])));
    b.pairs.extend(a.constraints.iter().map(|&(i, j)| (i, n + j)));
    let meta = json!({
        "generator": "ecc",
        "seed": { "n": n, "constraints": a.constraints },
        "edge_clique_cover": [c1, c2, c3],
    });
    let mut inst = b.finish(Vec::new(), meta);
    inst.certificates.deletion_vertices = None;
    inst.certificates.clique_cover = Some(vec![c1, c3]);
    inst
}

/// Uniform random graph `G(n, p)` with `d` random precedence constraints
/// drawn consistently with a hidden random order. With `max_weight` set,
/// edges get uniform weights in `0..=max_weight`.
pub fn gen_gnp(n: usize, p: f64, d: usize, max_weight: Option<u64>, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    g.set_weighted(max_weight.is_some());
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                match max_weight {
                    Some(top) => g.add_weighted_edge(u, v, rng.gen_range(0..=top)),
                    None => g.add_edge(u, v),
                }
                .expect("vertices are in range");
            }
        }
    }
    let mut hidden: Vec<usize> = (0..n).collect();
    hidden.shuffle(&mut rng);
    let total = n * n.saturating_sub(1) / 2;
    let mut pairs = Vec::with_capacity(d.min(total));
    while pairs.len() < d.min(total) {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let pair = (hidden[i.min(j)], hidden[i.max(j)]);
        if i != j && !pairs.contains(&pair) {
            pairs.push(pair);
        }
    }
    let mut inst = Instance::new(g, &pairs).expect("pairs follow the hidden order");
    inst.meta = Some(json!({ "generator": "gnp", "n": n, "p": p, "d": d, "seed": seed }));
    inst
}
