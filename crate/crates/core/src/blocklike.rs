//! Block-cut trees and solvers for graphs that are block graphs up to a few
//! deleted edges or vertices.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{edge_key, Graph};
use crate::instance::{validate_solution, Instance, Solution, Variant};
use crate::poset::{build_poset, Poset};
use crate::transforms::{cycle_via_path, fix_endpoints};

/// Blocks are sorted vertex lists ordered by their smallest vertex (then
/// lexicographically). Isolated vertices form singleton blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCutTree {
    pub blocks: Vec<Vec<usize>>,
    pub cut_vertices: Vec<usize>,
    /// Indices of the blocks containing each vertex.
    pub blocks_of: Vec<Vec<usize>>,
}

impl BlockCutTree {
    pub fn is_cut(&self, v: usize) -> bool {
        self.blocks_of[v].len() >= 2
    }

    /// Cut vertices of each block: the block side of the tree incidence.
    pub fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| b.iter().copied().filter(|&v| self.is_cut(v)).collect())
            .collect()
    }
}

pub fn block_cut_tree(g: &Graph) -> BlockCutTree {
    let n = g.n();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut clock = 0;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut vstack: Vec<usize> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        if adj[root].is_empty() {
            disc[root] = clock;
            clock += 1;
            blocks.push(vec![root]);
            continue;
        }
        disc[root] = clock;
        low[root] = clock;
        clock += 1;
        vstack.push(root);
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&mut (v, ref mut at)) = frames.last_mut() {
            if *at < adj[v].len() {
                let u = adj[v][*at];
                *at += 1;
                if disc[u] == usize::MAX {
                    disc[u] = clock;
                    low[u] = clock;
                    clock += 1;
                    vstack.push(u);
                    frames.push((u, 0));
                } else {
                    low[v] = low[v].min(disc[u]);
                }
                continue;
            }
            frames.pop();
            let Some(&(parent, _)) = frames.last() else {
                break;
            };
            low[parent] = low[parent].min(low[v]);
            if low[v] >= disc[parent] {
                let mut block = vec![parent];
                while let Some(x) = vstack.pop() {
                    block.push(x);
                    if x == v {
                        break;
                    }
                }
                block.sort_unstable();
                blocks.push(block);
            }
        }
        vstack.clear();
    }
    blocks.sort();
    let mut blocks_of = vec![Vec::new(); n];
    for (i, b) in blocks.iter().enumerate() {
        for &v in b {
            blocks_of[v].push(i);
        }
    }
    let cut_vertices = (0..n).filter(|&v| blocks_of[v].len() >= 2).collect();
    BlockCutTree { blocks, cut_vertices, blocks_of }
}

/// Every block is a clique.
pub fn is_block_graph(g: &Graph) -> bool {
    block_cut_tree(g).blocks.iter().all(|b| g.is_clique(b))
}

fn require_block_graph(g: &Graph, what: &str) -> Result<BlockCutTree> {
    let bct = block_cut_tree(g);
    match bct.blocks.iter().find(|b| !g.is_clique(b)) {
        Some(b) => Err(Error::NotBlockGraph(format!("{what}: block {b:?} is not a clique"))),
        None => Ok(bct),
    }
}

/// Blocks in path order with the cut vertices joining them, or `None`
/// when the tree is not a path.
pub(crate) fn block_sequence(bct: &BlockCutTree) -> Option<(Vec<usize>, Vec<usize>)> {
    if bct.cut_vertices.iter().any(|&c| bct.blocks_of[c].len() != 2) {
        return None;
    }
    let cuts_in = bct.tree_adjacency();
    if cuts_in.iter().any(|c| c.len() > 2) {
        return None;
    }
    if bct.blocks.len() == 1 {
        return Some((vec![0], vec![]));
    }
    let first = (0..bct.blocks.len()).find(|&b| cuts_in[b].len() == 1)?;
    let (mut blocks, mut cuts) = (vec![first], vec![]);
    let mut came_through = usize::MAX;
    let mut cur = first;
    loop {
        let Some(&c) = cuts_in[cur].iter().find(|&&c| c != came_through) else {
            break;
        };
        let next = *bct.blocks_of[c].iter().find(|&&b| b != cur)?;
        cuts.push(c);
        blocks.push(next);
        came_through = c;
        cur = next;
    }
    (blocks.len() == bct.blocks.len()).then_some((blocks, cuts))
}

/// Greedy sweep through a block path: in each block take the smallest
/// available vertex until only the exit cut vertex is left.
fn sweep_blocks(
    bct: &BlockCutTree,
    poset: &Poset,
    blocks: &[usize],
    cuts: &[usize],
) -> Option<Vec<usize>> {
    let n = poset.n();
    let mut visited = FixedBitSet::with_capacity(n);
    let mut order = Vec::with_capacity(n);
    for (t, &b) in blocks.iter().enumerate() {
        let exit = cuts.get(t).copied();
        loop {
            let pick = bct.blocks[b].iter().copied().find(|&v| {
                !visited.contains(v) && Some(v) != exit && poset.is_available(v, &visited)
            });
            let Some(v) = pick else { break };
            visited.insert(v);
            order.push(v);
        }
        if bct.blocks[b].iter().any(|&v| !visited.contains(v) && Some(v) != exit) {
            return None;
        }
        if let Some(c) = exit {
            if !poset.is_available(c, &visited) {
                return None;
            }
            visited.insert(c);
            order.push(c);
        }
    }
    Some(order)
}

/// Path search on a block graph under `poset`, trying both directions of
/// the block path.
fn block_graph_path(g: &Graph, bct: &BlockCutTree, poset: &Poset) -> Option<Vec<usize>> {
    if g.n() == 1 {
        return Some(vec![0]);
    }
    if !g.is_connected() {
        return None;
    }
    let (blocks, cuts) = block_sequence(bct)?;
    let mut directions = vec![(blocks.clone(), cuts.clone())];
    if blocks.len() > 1 {
        let (mut rb, mut rc) = (blocks, cuts);
        rb.reverse();
        rc.reverse();
        let key = |seq: &Vec<usize>| (bct.blocks[seq[0]][0], seq[0]);
        if key(&rb) < key(&directions[0].0) {
            directions.insert(0, (rb, rc));
        } else {
            directions.push((rb, rc));
        }
    }
    directions.iter().find_map(|(b, c)| sweep_blocks(bct, poset, b, c))
}

/// Decision solver for block graphs. Weights are ignored for the search;
/// the reported cost is that of the returned order.
pub fn solve_block_graph(inst: &Instance) -> Result<Option<Solution>> {
    let g = &inst.graph;
    if g.n() == 0 {
        return Err(Error::Unsupported("empty graph".into()));
    }
    let bct = require_block_graph(g, "graph")?;
    let order = match inst.variant {
        Variant::Path => block_graph_path(g, &bct, &inst.poset),
        Variant::Cycle => {
            let all: Vec<usize> = (0..g.n()).collect();
            (bct.blocks.len() == 1 && g.is_clique(&all)).then(|| inst.poset.topological_order(&all))
        }
    };
    Ok(order.map(|order| Solution { cost: inst.order_cost(&order), order }))
}

/// Start vertex plus the deleted edges the path uses, in traversal order
/// and direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeChoice {
    pub start: usize,
    pub ordered_edges: Vec<(usize, usize)>,
}

/// Where a run of deletion vertices attaches on one side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Attach {
    First,
    Last,
    At(usize),
}

/// Order of the deletion vertices along the path with their attachments.
/// `pred[i]` is `None` when `order[i]` directly follows `order[i - 1]`;
/// likewise `succ[i]` for `order[i + 1]`. `start` is the first vertex when
/// no run is marked `First`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexChoice {
    pub order: Vec<usize>,
    pub pred: Vec<Option<Attach>>,
    pub succ: Vec<Option<Attach>>,
    pub start: Option<usize>,
}

/// Maximal stretch of the path leaving the block-graph part.
#[derive(Clone, Debug)]
struct Jump {
    from: usize,
    to: usize,
    interior: Vec<usize>,
}

/// A guess normalised to the fixed skeleton of the path.
#[derive(Clone, Debug)]
struct Plan {
    prefix: Vec<usize>,
    start: usize,
    jumps: Vec<Jump>,
    end: Option<usize>,
    tail: Vec<usize>,
}

impl Plan {
    fn push_jump(&mut self, from: usize, interior: &[usize], to: usize) {
        match self.jumps.last_mut() {
            Some(last) if last.to == from => {
                last.interior.push(from);
                last.interior.extend_from_slice(interior);
                last.to = to;
            }
            _ => self.jumps.push(Jump { from, to, interior: interior.to_vec() }),
        }
    }

    fn skeleton(&self) -> Vec<usize> {
        let mut seq = self.prefix.clone();
        seq.push(self.start);
        for j in &self.jumps {
            if seq.last() != Some(&j.from) {
                seq.push(j.from);
            }
            seq.extend_from_slice(&j.interior);
            seq.push(j.to);
        }
        if let Some(e) = self.end {
            if seq.last() != Some(&e) {
                seq.push(e);
            }
        }
        seq.extend_from_slice(&self.tail);
        seq
    }
}

/// Route of a segment through the block-cut tree.
struct Route {
    blocks: Vec<usize>,
    exits: Vec<usize>,
    cuts: Vec<usize>,
}

/// Rooted block-cut forest: nodes `0..blocks` are blocks, the rest cut
/// vertices.
struct TreeIndex {
    nblocks: usize,
    node_vertex: Vec<usize>,
    home: Vec<usize>,
    parent: Vec<usize>,
    depth: Vec<usize>,
    root: Vec<usize>,
}

impl TreeIndex {
    fn new(bct: &BlockCutTree) -> TreeIndex {
        let nb = bct.blocks.len();
        let n = bct.blocks_of.len();
        let mut home = vec![usize::MAX; n];
        let mut node_vertex = vec![usize::MAX; nb];
        for v in 0..n {
            home[v] = if bct.is_cut(v) {
                node_vertex.push(v);
                node_vertex.len() - 1
            } else {
                bct.blocks_of[v][0]
            };
        }
        let total = node_vertex.len();
        let mut nbrs = vec![Vec::new(); total];
        for (b, cuts) in bct.tree_adjacency().into_iter().enumerate() {
            for c in cuts {
                nbrs[b].push(home[c]);
                nbrs[home[c]].push(b);
            }
        }
        let (mut parent, mut depth, mut root) =
            (vec![usize::MAX; total], vec![0; total], vec![usize::MAX; total]);
        for r in 0..total {
            if root[r] != usize::MAX {
                continue;
            }
            root[r] = r;
            let mut stack = vec![r];
            while let Some(x) = stack.pop() {
                for &y in &nbrs[x] {
                    if root[y] == usize::MAX {
                        root[y] = r;
                        parent[y] = x;
                        depth[y] = depth[x] + 1;
                        stack.push(y);
                    }
                }
            }
        }
        TreeIndex { nblocks: nb, node_vertex, home, parent, depth, root }
    }

    fn node_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        if self.root[a] != self.root[b] {
            return None;
        }
        let (mut x, mut y) = (a, b);
        let (mut left, mut right) = (vec![], vec![]);
        while self.depth[x] > self.depth[y] {
            left.push(x);
            x = self.parent[x];
        }
        while self.depth[y] > self.depth[x] {
            right.push(y);
            y = self.parent[y];
        }
        while x != y {
            left.push(x);
            right.push(y);
            x = self.parent[x];
            y = self.parent[y];
        }
        left.push(x);
        left.extend(right.into_iter().rev());
        Some(left)
    }

    fn route(&self, x: usize, y: usize) -> Option<Route> {
        let nodes = self.node_path(self.home[x], self.home[y])?;
        let last = nodes.len() - 1;
        let mut route = Route { blocks: vec![], exits: vec![], cuts: vec![] };
        for (i, &node) in nodes.iter().enumerate() {
            if node < self.nblocks {
                route.blocks.push(node);
            } else if i != 0 && i != last {
                route.cuts.push(self.node_vertex[node]);
            }
        }
        route.exits = route.cuts.clone();
        route.exits.push(y);
        Some(route)
    }
}

const NO_LABEL: usize = usize::MAX;

/// Shared data for checking guesses against one instance.
struct Frame<'a> {
    inst: &'a Instance,
    rest: Graph,
    bct: BlockCutTree,
    tree: TreeIndex,
}

impl<'a> Frame<'a> {
    fn new(inst: &'a Instance, rest: Graph) -> Result<Frame<'a>> {
        let bct = require_block_graph(&rest, "graph after deletion")?;
        let tree = TreeIndex::new(&bct);
        Ok(Frame { inst, rest, bct, tree })
    }

    fn bits(&self, items: &[usize]) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.inst.n());
        for &v in items {
            b.insert(v);
        }
        b
    }

    fn check(&self, plan: &Plan) -> Option<Vec<usize>> {
        let n = self.inst.n();
        let p = &self.inst.poset;
        let seq = plan.skeleton();
        let mut reserved = FixedBitSet::with_capacity(n);
        for &v in &seq {
            if v >= n || reserved.put(v) {
                return None;
            }
        }
        if !p.respects(&seq) {
            return None;
        }
        let in_prefix = self.bits(&plan.prefix);
        let in_tail = self.bits(&plan.tail);
        let heads = plan.prefix.iter().chain([&plan.start]);
        if heads.into_iter().any(|&v| p.predecessors(v).any(|u| !in_prefix.contains(u))) {
            return None;
        }
        let ends = plan.tail.iter().chain(plan.end.iter());
        if ends.into_iter().any(|&v| p.successors(v).any(|u| !in_tail.contains(u))) {
            return None;
        }

        // Constraints on jump interiors move to the jump's endpoints.
        let mut chain = vec![usize::MAX; n];
        let mut inside = vec![usize::MAX; n];
        for (c, j) in plan.jumps.iter().enumerate() {
            chain[j.from] = c;
            chain[j.to] = c;
            for &x in &j.interior {
                chain[x] = c;
                inside[x] = c;
            }
        }
        let fixed_end = |v: usize| in_prefix.contains(v) || in_tail.contains(v);
        let mut pairs = Vec::new();
        for (a, b) in p.relations() {
            if fixed_end(a) || fixed_end(b) || (chain[a] != usize::MAX && chain[a] == chain[b]) {
                continue;
            }
            let a2 = if inside[a] != usize::MAX { plan.jumps[inside[a]].to } else { a };
            let b2 = if inside[b] != usize::MAX { plan.jumps[inside[b]].from } else { b };
            pairs.push((a2, b2));
        }
        let rel = build_poset(n, &pairs).ok()?;

        let mut label = vec![NO_LABEL; n];
        let mut routes = Vec::with_capacity(plan.jumps.len());
        let mut cur = plan.start;
        for (i, j) in plan.jumps.iter().enumerate() {
            if cur == j.from {
                routes.push(None);
            } else {
                let r = self.tree.route(cur, j.from)?;
                for &c in &r.cuts {
                    if reserved.contains(c) || label[c] != NO_LABEL {
                        return None;
                    }
                    label[c] = i;
                }
                routes.push(Some(r));
            }
            cur = j.to;
        }

        // The free end of the last segment decides which cut vertices it
        // must keep; enumerate the distinct possibilities.
        let ends: Vec<usize> = match plan.end {
            Some(e) => vec![e],
            None => std::iter::once(cur).chain((0..n).filter(|&v| !reserved.contains(v))).collect(),
        };
        let mut tried = BTreeSet::new();
        let last = plan.jumps.len();
        for e in ends {
            let cuts = if e == cur { vec![] } else {
                match self.tree.route(cur, e) {
                    Some(r) => r.cuts,
                    None => continue,
                }
            };
            if cuts.iter().any(|&c| reserved.contains(c) || label[c] != NO_LABEL) {
                continue;
            }
            if !tried.insert(cuts.clone()) {
                continue;
            }
            let mut labels = label.clone();
            for &c in &cuts {
                labels[c] = last;
            }
            if let Some(order) = self.sweep(plan, &rel, &labels, &routes, &reserved, cur) {
                return Some(order);
            }
        }
        None
    }

    fn sweep(
        &self,
        plan: &Plan,
        rel: &Poset,
        label: &[usize],
        routes: &[Option<Route>],
        reserved: &FixedBitSet,
        last_start: usize,
    ) -> Option<Vec<usize>> {
        let n = self.inst.n();
        let mut visited = self.bits(&plan.prefix);
        let mut order = plan.prefix.clone();
        let mut visit = |v: usize, visited: &mut FixedBitSet| {
            visited.insert(v);
            order.push(v);
        };
        if !rel.is_available(plan.start, &visited) {
            return None;
        }
        visit(plan.start, &mut visited);
        for (i, jump) in plan.jumps.iter().enumerate() {
            if let Some(route) = &routes[i] {
                for (&b, &exit) in route.blocks.iter().zip(&route.exits) {
                    loop {
                        let pick = self.bct.blocks[b].iter().copied().find(|&v| {
                            !visited.contains(v)
                                && v != exit
                                && !reserved.contains(v)
                                && (label[v] == NO_LABEL || label[v] == i)
                                && rel.is_available(v, &visited)
                        });
                        let Some(v) = pick else { break };
                        visit(v, &mut visited);
                    }
                    if visited.contains(exit) || !rel.is_available(exit, &visited) {
                        return None;
                    }
                    visit(exit, &mut visited);
                }
            }
            for &x in &jump.interior {
                visit(x, &mut visited);
            }
            if !rel.is_available(jump.to, &visited) {
                return None;
            }
            visit(jump.to, &mut visited);
        }

        let in_tail = self.bits(&plan.tail);
        let mut keep = vec![last_start];
        keep.extend((0..n).filter(|&v| !visited.contains(v) && !in_tail.contains(v)));
        if keep.len() == 1 {
            if plan.end.is_some_and(|e| e != last_start) {
                return None;
            }
        } else {
            let sub = self.rest.induced(&keep);
            let sub_rel = rel.restrict(&keep);
            let sub_rel = match plan.end {
                Some(e) => {
                    let at = keep.iter().position(|&v| v == e)?;
                    fix_endpoints(&sub_rel, 0, at)?
                }
                None => {
                    let first: Vec<(usize, usize)> = (1..keep.len()).map(|i| (0, i)).collect();
                    sub_rel.with_pairs(&first).ok()?
                }
            };
            let sub_bct = block_cut_tree(&sub);
            let path = block_graph_path(&sub, &sub_bct, &sub_rel)?;
            order.extend(path.into_iter().skip(1).map(|i| keep[i]));
        }
        order.extend_from_slice(&plan.tail);
        Some(order)
    }

    fn finish(&self, order: Option<Vec<usize>>) -> Result<Option<Solution>> {
        let Some(order) = order else { return Ok(None) };
        let mut as_path = self.inst.clone();
        as_path.variant = Variant::Path;
        if !validate_solution(&as_path, &order).is_valid() {
            return Err(Error::Internal(format!("guess produced an invalid order {order:?}")));
        }
        Ok(Some(Solution { cost: self.inst.order_cost(&order), order }))
    }
}

fn plan_from_edges(choice: &EdgeChoice) -> Plan {
    let mut plan =
        Plan { prefix: vec![], start: choice.start, jumps: vec![], end: None, tail: vec![] };
    for &(a, b) in &choice.ordered_edges {
        plan.push_jump(a, &[], b);
    }
    plan
}

fn canonical_edges(inst: &Instance, f: &[(usize, usize)]) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::with_capacity(f.len());
    for &(u, v) in f {
        if !inst.graph.has_edge(u, v) {
            return Err(Error::InvalidCertificate(format!("({u},{v}) is not an edge")));
        }
        out.push(edge_key(u, v));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Every edge choice: start vertex, then ordered subsets of `f` with both
/// orientations per edge.
pub fn edge_choices(n: usize, f: &[(usize, usize)]) -> Vec<EdgeChoice> {
    let mut out = Vec::new();
    for start in 0..n {
        for len in 0..=f.len() {
            for picked in (0..f.len()).permutations(len) {
                for flips in 0..1usize << len {
                    let ordered_edges = picked
                        .iter()
                        .enumerate()
                        .map(|(i, &e)| {
                            let (u, v) = f[e];
                            if flips >> i & 1 == 1 { (v, u) } else { (u, v) }
                        })
                        .collect();
                    out.push(EdgeChoice { start, ordered_edges });
                }
            }
        }
    }
    out
}

/// Checks one edge choice, returning the solution it leads to if any.
pub fn validate_edge_choice(
    inst: &Instance,
    f: &[(usize, usize)],
    choice: &EdgeChoice,
) -> Result<Option<Solution>> {
    let f = canonical_edges(inst, f)?;
    if choice.start >= inst.n() {
        return Err(Error::Range(format!("start vertex {}", choice.start)));
    }
    if let Some(&(u, v)) = choice.ordered_edges.iter().find(|e| f.binary_search(&edge_key(e.0, e.1)).is_err()) {
        return Err(Error::InvalidCertificate(format!("({u},{v}) is not a deleted edge")));
    }
    let frame = Frame::new(inst, inst.graph.without_edges(&f))?;
    frame.finish(frame.check(&plan_from_edges(choice)))
}

/// Solver for graphs that become block graphs after deleting the edges `f`.
pub fn solve_edge_distance_block(inst: &Instance, f: &[(usize, usize)]) -> Result<Option<Solution>> {
    if inst.n() == 0 {
        return Err(Error::Unsupported("empty graph".into()));
    }
    if inst.variant == Variant::Cycle {
        return cycle_via_path(inst, |sub| solve_edge_distance_block(sub, f));
    }
    let f = canonical_edges(inst, f)?;
    let frame = Frame::new(inst, inst.graph.without_edges(&f))?;
    let choices = edge_choices(inst.n(), &f);
    let found = choices
        .par_iter()
        .find_map_first(|c| frame.check(&plan_from_edges(c)));
    frame.finish(found)
}

/// Every vertex choice for the deletion set `w`.
pub fn vertex_choices(inst: &Instance, w: &[usize]) -> Vec<VertexChoice> {
    let g = &inst.graph;
    let n = g.n();
    let mut in_w = FixedBitSet::with_capacity(n);
    for &v in w {
        in_w.insert(v);
    }
    let outside = |v: usize| -> Vec<Attach> {
        g.neighbors(v).filter(|&u| !in_w.contains(u)).map(Attach::At).collect()
    };
    let starts: Vec<usize> = (0..n).filter(|&v| !in_w.contains(v)).collect();
    let mut sorted = w.to_vec();
    sorted.sort_unstable();
    let k = sorted.len();
    let mut out = Vec::new();
    for order in sorted.iter().copied().permutations(k) {
        if !inst.poset.respects(&order) {
            continue;
        }
        for links in 0..1usize << k.saturating_sub(1) {
            let linked = |i: usize| links >> i & 1 == 1;
            if (0..k.saturating_sub(1)).any(|i| linked(i) && !g.has_edge(order[i], order[i + 1])) {
                continue;
            }
            let mut runs: Vec<(usize, usize)> = Vec::new();
            for i in 0..k {
                if i > 0 && linked(i - 1) {
                    runs.last_mut().unwrap().1 = i;
                } else {
                    runs.push((i, i));
                }
            }
            let last_run = runs.len() - 1;
            let sides: Vec<Vec<Attach>> = runs
                .iter()
                .enumerate()
                .flat_map(|(r, &(a, b))| {
                    let mut before = outside(order[a]);
                    let mut after = outside(order[b]);
                    if r == 0 {
                        before.insert(0, Attach::First);
                    }
                    if r == last_run {
                        after.push(Attach::Last);
                    }
                    [before, after]
                })
                .collect();
            for picks in sides.iter().map(|s| s.iter().copied()).multi_cartesian_product() {
                if picks[0] == Attach::First && picks[1] == Attach::Last {
                    continue;
                }
                let mut pred = vec![None; k];
                let mut succ = vec![None; k];
                for (r, &(a, b)) in runs.iter().enumerate() {
                    pred[a] = Some(picks[2 * r]);
                    succ[b] = Some(picks[2 * r + 1]);
                }
                let base = VertexChoice { order: order.clone(), pred, succ, start: None };
                if picks[0] == Attach::First {
                    out.push(base);
                } else {
                    for &s in &starts {
                        out.push(VertexChoice { start: Some(s), ..base.clone() });
                    }
                }
            }
        }
    }
    out
}

fn plan_from_vertices(choice: &VertexChoice) -> Option<Plan> {
    let k = choice.order.len();
    let mut runs: Vec<(Vec<usize>, Attach, Attach)> = Vec::new();
    for i in 0..k {
        match choice.pred[i] {
            Some(p) => runs.push((vec![choice.order[i]], p, Attach::Last)),
            None => runs.last_mut()?.0.push(choice.order[i]),
        }
        if let Some(s) = choice.succ[i] {
            runs.last_mut()?.2 = s;
        }
    }
    let mut plan = Plan { prefix: vec![], start: 0, jumps: vec![], end: None, tail: vec![] };
    let last = runs.len().checked_sub(1)?;
    for (r, (verts, pred, succ)) in runs.iter().enumerate() {
        match (pred, succ) {
            (Attach::First, Attach::At(t)) if r == 0 => {
                plan.prefix = verts.clone();
                plan.start = *t;
            }
            (Attach::At(s), Attach::Last) if r == last => {
                plan.tail = verts.clone();
                plan.end = Some(*s);
            }
            (Attach::At(a), Attach::At(b)) => plan.push_jump(*a, verts, *b),
            _ => return None,
        }
    }
    if plan.prefix.is_empty() {
        plan.start = choice.start?;
    }
    Some(plan)
}

fn check_deletion_set(n: usize, w: &[usize]) -> Result<Vec<usize>> {
    let mut sorted = w.to_vec();
    sorted.sort_unstable();
    if let Some(&v) = sorted.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidCertificate(format!("deletion vertex {v} out of range")));
    }
    if sorted.windows(2).any(|p| p[0] == p[1]) {
        return Err(Error::InvalidCertificate("deletion set repeats a vertex".into()));
    }
    Ok(sorted)
}

/// Solver for graphs that become block graphs after deleting the vertices `w`.
pub fn solve_distance_block(inst: &Instance, w: &[usize]) -> Result<Option<Solution>> {
    let n = inst.n();
    if n == 0 {
        return Err(Error::Unsupported("empty graph".into()));
    }
    let w = check_deletion_set(n, w)?;
    if w.is_empty() {
        return solve_block_graph(inst);
    }
    if inst.variant == Variant::Cycle {
        return cycle_via_path(inst, |sub| solve_distance_block(sub, &w));
    }
    let frame = Frame::new(inst, inst.graph.without_vertices(&w))?;
    if w.len() == n {
        let g = &inst.graph;
        let order = w.iter().copied().permutations(n).find(|o| {
            o.windows(2).all(|p| g.has_edge(p[0], p[1])) && inst.poset.respects(o)
        });
        return frame.finish(order);
    }
    let choices = vertex_choices(inst, &w);
    let found = choices
        .par_iter()
        .find_map_first(|c| plan_from_vertices(c).and_then(|plan| frame.check(&plan)));
    frame.finish(found)
}

/// Lexicographically smallest smallest-size `W` with `|W| <= k` whose
/// deletion leaves a block graph.
pub fn find_block_deletion_set(g: &Graph, k: usize) -> Option<Vec<usize>> {
    (0..=k.min(g.n())).find_map(|size| {
        (0..g.n())
            .combinations(size)
            .find(|w| is_block_graph(&g.without_vertices(w)))
    })
}
