//! Plane embeddings, face tracing and the dynamic programs over intervals
//! of the outer face.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use itertools::Itertools;

use crate::blocklike::{block_cut_tree, block_sequence};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::{Embedding, Instance, Objective, Solution, Variant};
use crate::poset::Poset;
use crate::transforms::cycle_via_path;

/// Largest number of vertices off the outer face (or deleted) the DPs accept.
pub const MAX_K: usize = 30;
/// Largest deletion set the outerplanar brute-force search tries.
pub const OUTERPLANAR_SEARCH_MAX_K: usize = 3;

/// Rotation lookups: `slot[v][u]` is the index of `u` in `rotation[v]`.
struct Rotation<'a> {
    rotation: &'a [Vec<usize>],
    slot: Vec<HashMap<usize, usize>>,
}

impl<'a> Rotation<'a> {
    fn new(emb: &'a Embedding, g: &Graph) -> Result<Rotation<'a>> {
        let n = g.n();
        if emb.rotation.len() != n {
            return Err(Error::InvalidEmbedding(format!(
                "rotation lists {} vertices, graph has {n}",
                emb.rotation.len()
            )));
        }
        let mut slot = Vec::with_capacity(n);
        for (v, rot) in emb.rotation.iter().enumerate() {
            let sorted: Vec<usize> = rot.iter().copied().sorted_unstable().collect();
            if !sorted.iter().copied().eq(g.neighbors(v)) {
                return Err(Error::InvalidEmbedding(format!(
                    "rotation at {v} is not a permutation of its neighbours"
                )));
            }
            slot.push(rot.iter().enumerate().map(|(i, &u)| (u, i)).collect());
        }
        Ok(Rotation { rotation: &emb.rotation, slot })
    }

    /// The dart following `u -> v` along its face.
    fn next(&self, u: usize, v: usize) -> usize {
        let rot = &self.rotation[v];
        rot[(self.slot[v][&u] + 1) % rot.len()]
    }

    /// Tail vertices of the face walk through the dart `u -> v`.
    fn face_from(&self, u: usize, v: usize) -> Vec<usize> {
        let mut walk = vec![u];
        let (mut a, mut b) = (v, self.next(u, v));
        while (a, b) != (u, v) {
            walk.push(a);
            (a, b) = (b, self.next(a, b));
        }
        walk
    }
}

/// Every face of the rotation system as a closed walk of vertices. Faces of
/// different components are traced separately, so each component with an
/// edge contributes its own outer face.
pub fn trace_faces(emb: &Embedding, g: &Graph) -> Result<Vec<Vec<usize>>> {
    let rot = Rotation::new(emb, g)?;
    let mut seen: Vec<FixedBitSet> =
        emb.rotation.iter().map(|r| FixedBitSet::with_capacity(r.len())).collect();
    let mut faces = Vec::new();
    for v in 0..g.n() {
        for i in 0..emb.rotation[v].len() {
            if seen[v].contains(i) {
                continue;
            }
            let face = rot.face_from(v, emb.rotation[v][i]);
            for (j, &a) in face.iter().enumerate() {
                let b = face[(j + 1) % face.len()];
                seen[a].insert(rot.slot[a][&b]);
            }
            faces.push(face);
        }
    }
    let comps = g.components();
    let isolated = comps.iter().filter(|c| c.len() == 1).count();
    let with_edges = comps.len() - isolated;
    if g.n() + faces.len() != g.m() + 2 * with_edges + isolated {
        return Err(Error::InvalidEmbedding(format!(
            "Euler check failed: n={} m={} faces={} components={}",
            g.n(),
            g.m(),
            faces.len(),
            comps.len()
        )));
    }
    Ok(faces)
}

/// Number of maximal runs of marked positions on a closed walk; a vertex
/// counts as marked at every position it occupies.
pub fn prefix_interval_count(face: &[usize], prefix: &[usize]) -> usize {
    let marked: Vec<bool> = face.iter().map(|v| prefix.contains(v)).collect();
    cyclic_runs(&marked)
}

fn cyclic_runs(marked: &[bool]) -> usize {
    let len = marked.len();
    let starts = (0..len).filter(|&i| marked[i] && !marked[(i + len - 1) % len]).count();
    if starts == 0 && marked.iter().any(|&m| m) {
        1
    } else {
        starts
    }
}

fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (0..a.len().max(1)).any(|s| a.iter().cycle().skip(s).take(a.len()).eq(b))
}

/// The traced face equal to `walk` up to rotation and reversal.
fn match_face<'f>(faces: &'f [Vec<usize>], walk: &[usize]) -> Option<&'f Vec<usize>> {
    let reversed: Vec<usize> = walk.iter().rev().copied().collect();
    faces.iter().find(|f| same_cycle(f, walk) || same_cycle(f, &reversed))
}

/// Splits the outer walk into one closed walk per component and matches
/// each against the traced faces. Isolated vertices may appear alone.
fn outer_pieces(g: &Graph, emb: &Embedding, faces: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let mut comp_of = vec![0; g.n()];
    for (i, c) in g.components().iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let mut used = FixedBitSet::with_capacity(g.n());
    let mut pieces = Vec::new();
    for (comp, piece) in &emb.outer_face.iter().chunk_by(|&&v| comp_of[v]) {
        let piece: Vec<usize> = piece.copied().collect();
        if used.put(comp) {
            return Err(Error::InvalidEmbedding(format!(
                "outer walk visits the component of {} twice",
                piece[0]
            )));
        }
        if piece.len() == 1 && g.degree(piece[0]) == 0 {
            pieces.push(piece);
            continue;
        }
        match match_face(faces, &piece) {
            Some(f) => pieces.push(f.clone()),
            None => {
                return Err(Error::InvalidEmbedding(format!("{piece:?} is not a face")));
            }
        }
    }
    Ok(pieces)
}

/// Outcome of one of the dynamic programs with the number of tuples it
/// stored and the bound that count must respect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpReport {
    pub solution: Option<Solution>,
    pub tuples: usize,
    pub bound: u128,
}

/// Forces `first` to the front and `last` to the back, if possible.
fn pin(p: &Poset, first: Option<usize>, last: Option<usize>) -> Option<Poset> {
    let mut extra = Vec::new();
    for v in 0..p.n() {
        if let Some(s) = first.filter(|&s| s != v) {
            extra.push((s, v));
        }
        if let Some(t) = last.filter(|&t| t != v) {
            extra.push((v, t));
        }
    }
    p.with_pairs(&extra).ok()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct IntervalKey {
    start: u32,
    len: u32,
    inner: u32,
    end: u32,
}

struct Node<K> {
    key: K,
    cost: u64,
    parent: u32,
}

/// One DP layer: nodes in insertion order plus an index by key.
struct Layer<K> {
    nodes: Vec<Node<K>>,
    index: HashMap<K, u32>,
}

impl<K: Clone + Eq + std::hash::Hash> Layer<K> {
    fn new() -> Self {
        Layer { nodes: Vec::new(), index: HashMap::new() }
    }

    fn offer(&mut self, key: K, cost: u64, parent: u32) {
        match self.index.get(&key) {
            Some(&i) => {
                let node = &mut self.nodes[i as usize];
                if cost < node.cost {
                    node.cost = cost;
                    node.parent = parent;
                }
            }
            None => {
                self.index.insert(key.clone(), self.nodes.len() as u32);
                self.nodes.push(Node { key, cost, parent });
            }
        }
    }
}

/// Walks parent links back from the cheapest node of the last layer.
fn rebuild<K>(layers: &[Layer<K>], end_of: impl Fn(&K) -> usize) -> Option<(Vec<usize>, u64)> {
    let last = layers.last()?;
    let (mut at, best) = last.nodes.iter().enumerate().min_by_key(|(_, nd)| nd.cost)?;
    let cost = best.cost;
    let mut order = Vec::with_capacity(layers.len());
    for layer in layers.iter().rev() {
        let node = &layer.nodes[at];
        order.push(end_of(&node.key));
        at = node.parent as usize;
    }
    order.reverse();
    Some((order, cost))
}

/// Interval DP on a path instance whose outer face is the simple cycle
/// `cycle`. Visited sets are an interval of the cycle plus a subset of the
/// inner vertices.
fn interval_dp(inst: &Instance, cycle: &[usize]) -> Result<DpReport> {
    let g = &inst.graph;
    let p = &inst.poset;
    let n = g.n();
    let len_c = cycle.len();
    let mut pos = vec![u32::MAX; n];
    for (i, &v) in cycle.iter().enumerate() {
        pos[v] = i as u32;
    }
    let inner: Vec<usize> = (0..n).filter(|&v| pos[v] == u32::MAX).collect();
    let k = inner.len();
    if k > MAX_K {
        return Err(Error::TooLarge(format!("{k} inner vertices, at most {MAX_K} supported")));
    }
    let mut bit = vec![0u32; n];
    for (i, &v) in inner.iter().enumerate() {
        bit[v] = 1 << i;
    }
    let inner_preds: Vec<u32> =
        (0..n).map(|v| p.predecessors(v).fold(0, |m, u| m | bit[u])).collect();
    let cycle_preds: Vec<Vec<u32>> = (0..n)
        .map(|v| p.predecessors(v).filter(|&u| pos[u] != u32::MAX).map(|u| pos[u]).collect())
        .collect();
    let inner_nbrs: Vec<u32> = inner.iter().map(|&v| g.neighbors(v).fold(0, |m, u| m | bit[u])).collect();
    let cycle_nbrs: Vec<Vec<u32>> = inner
        .iter()
        .map(|&v| g.neighbors(v).filter(|&u| pos[u] != u32::MAX).map(|u| pos[u]).collect())
        .collect();
    let lc = len_c as u32;
    let covers = |start: u32, len: u32, at: u32| (at + lc - start) % lc < len;
    let weighted = inst.objective == Objective::Min;

    let mut layer = Layer::new();
    for v in (0..n).filter(|&v| p.predecessors(v).next().is_none()) {
        let key = if pos[v] == u32::MAX {
            IntervalKey { start: 0, len: 0, inner: bit[v], end: v as u32 }
        } else {
            IntervalKey { start: pos[v], len: 1, inner: 0, end: v as u32 }
        };
        layer.offer(key, 0, 0);
    }
    let mut layers = vec![layer];
    for size in 1..n {
        let mut next = Layer::new();
        for (idx, node) in layers[size - 1].nodes.iter().enumerate() {
            let IntervalKey { start, len, inner: x, end } = node.key;
            let t = end as usize;
            for u in g.neighbors(t) {
                let key = if pos[u] == u32::MAX {
                    if x & bit[u] != 0 {
                        continue;
                    }
                    IntervalKey { start, len, inner: x | bit[u], end: u as u32 }
                } else {
                    let at = pos[u];
                    if len > 0 && covers(start, len, at) {
                        continue;
                    }
                    let (s2, l2) = if len == 0 {
                        (at, 1)
                    } else if at == (start + lc - 1) % lc {
                        (at, len + 1)
                    } else if at == (start + len) % lc {
                        (start, len + 1)
                    } else {
                        continue;
                    };
                    let s2 = if l2 == lc { 0 } else { s2 };
                    IntervalKey { start: s2, len: l2, inner: x, end: u as u32 }
                };
                if inner_preds[u] & !key.inner != 0
                    || !cycle_preds[u].iter().all(|&q| covers(key.start, key.len, q))
                {
                    continue;
                }
                // An inner vertex whose neighbours are all visited can only come last.
                if n - size - 1 >= 2 {
                    let stranded = (0..k).any(|j| {
                        key.inner >> j & 1 == 0
                            && inner_nbrs[j] & !key.inner == 0
                            && cycle_nbrs[j].iter().all(|&q| covers(key.start, key.len, q))
                    });
                    if stranded {
                        continue;
                    }
                }
                let step = if weighted { g.cost(t, u) } else { 0 };
                next.offer(key, node.cost + step, idx as u32);
            }
        }
        layers.push(next);
    }
    let tuples: usize = layers.iter().map(|l| l.nodes.len()).sum();
    let bound = (1u128 << k) * (k as u128 + 2) * (n as u128).pow(2);
    assert!(
        tuples as u128 <= bound,
        "interval DP stored {tuples} tuples, above the bound {bound}"
    );
    let solution = rebuild(&layers, |key: &IntervalKey| key.end as usize)
        .map(|(order, cost)| Solution { order, cost });
    Ok(DpReport { solution, tuples, bound })
}

/// Inner-vertex DP with full statistics. Graphs that are not 2-connected
/// are split into their block path; each block is solved on its largest
/// face with the shared cut vertices pinned.
pub fn inner_vertex_dp(inst: &Instance, emb: &Embedding) -> Result<DpReport> {
    let g = &inst.graph;
    let n = g.n();
    if n == 0 {
        return Err(Error::Unsupported("empty graph".into()));
    }
    if inst.variant != Variant::Path {
        return Err(Error::Unsupported("inner_vertex_dp expects a path instance".into()));
    }
    let inconsistent = |e: Error| Error::NotPlanarConsistent(e.to_string());
    let faces = trace_faces(emb, g).map_err(inconsistent)?;
    let pieces = outer_pieces(g, emb, &faces).map_err(inconsistent)?;
    let none = DpReport { solution: None, tuples: 0, bound: 0 };
    if n == 1 {
        let solution = Some(Solution { order: vec![0], cost: 0 });
        return Ok(DpReport { solution, tuples: 1, bound: 2 });
    }
    if pieces.len() != 1 {
        return Err(Error::NotPlanarConsistent("outer face must be a single walk".into()));
    }
    if !g.is_connected() {
        return Ok(none);
    }
    let bct = block_cut_tree(g);
    if bct.blocks.len() == 1 {
        return interval_dp(inst, &pieces[0]);
    }
    let Some((seq, cuts)) = block_sequence(&bct) else {
        return Ok(none);
    };
    let mut best: Option<DpReport> = None;
    let mut total = DpReport { solution: None, tuples: 0, bound: 0 };
    for reversed in [false, true] {
        let (mut seq, mut cuts) = (seq.clone(), cuts.clone());
        if reversed {
            seq.reverse();
            cuts.reverse();
        }
        let report = block_path(inst, emb, &bct.blocks, &seq, &cuts)?;
        total.tuples += report.tuples;
        total.bound += report.bound;
        if let Some(sol) = report.solution {
            if best.as_ref().and_then(|b| b.solution.as_ref()).is_none_or(|b| sol.cost < b.cost) {
                best = Some(DpReport { solution: Some(sol), ..none.clone() });
            }
        }
    }
    total.solution = best.and_then(|b| b.solution);
    Ok(total)
}

fn block_path(
    inst: &Instance,
    emb: &Embedding,
    blocks: &[Vec<usize>],
    seq: &[usize],
    cuts: &[usize],
) -> Result<DpReport> {
    let n = inst.n();
    let mut rank = vec![0usize; n];
    for (i, &b) in seq.iter().enumerate() {
        for &v in &blocks[b] {
            rank[v] = 2 * i;
        }
    }
    for (i, &c) in cuts.iter().enumerate() {
        rank[c] = 2 * i + 1;
    }
    let mut report = DpReport { solution: None, tuples: 0, bound: 0 };
    if inst.constraints.iter().any(|&(a, b)| rank[a] > rank[b]) {
        return Ok(report);
    }
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for (i, &b) in seq.iter().enumerate() {
        let members = &blocks[b];
        let local = |v: usize| members.binary_search(&v).ok();
        let entry = (i > 0).then(|| local(cuts[i - 1]).unwrap());
        let exit = (i < cuts.len()).then(|| local(cuts[i]).unwrap());
        let Some(poset) = pin(&inst.poset.restrict(members), entry, exit) else {
            return Ok(report);
        };
        let graph = inst.graph.induced(members);
        let sub = Instance::new(graph, &[])?.with_objective(inst.objective).with_poset(poset);
        let rotation: Vec<Vec<usize>> = members
            .iter()
            .map(|&v| emb.rotation[v].iter().filter_map(|&u| local(u)).collect())
            .collect();
        let sub_emb = Embedding { rotation, outer_face: Vec::new() };
        let faces = trace_faces(&sub_emb, &sub.graph)?;
        let face = faces.iter().max_by_key(|f| f.len()).unwrap();
        let part = interval_dp(&sub, face)?;
        report.tuples += part.tuples;
        report.bound += part.bound;
        let Some(sol) = part.solution else {
            return Ok(report);
        };
        let skip = usize::from(i > 0);
        order.extend(sol.order[skip..].iter().map(|&j| members[j]));
    }
    let cost = inst.order_cost(&order);
    report.solution = Some(Solution { order, cost });
    Ok(report)
}

/// Exact (weighted) solver for plane graphs, polynomial for a fixed number
/// of vertices off the outer face.
pub fn solve_inner_vertices(inst: &Instance, emb: &Embedding) -> Result<Option<Solution>> {
    match inst.variant {
        Variant::Path => Ok(inner_vertex_dp(inst, emb)?.solution),
        Variant::Cycle => cycle_via_path(inst, |sub| Ok(inner_vertex_dp(sub, emb)?.solution)),
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct SegmentKey {
    /// `(first position, length)` of each run of visited walk positions.
    segments: Vec<(u32, u32)>,
    deleted: u32,
    end: u32,
}

/// Closed walks of the outer face laid end to end.
struct OuterWalk {
    walk: Vec<usize>,
    /// `(offset, length)` of each closed walk.
    pieces: Vec<(usize, usize)>,
    positions: Vec<Vec<usize>>,
}

impl OuterWalk {
    fn new(n: usize, pieces: &[Vec<usize>]) -> OuterWalk {
        let mut walk = Vec::new();
        let mut spans = Vec::new();
        for piece in pieces {
            spans.push((walk.len(), piece.len()));
            walk.extend_from_slice(piece);
        }
        let mut positions = vec![Vec::new(); n];
        for (i, &v) in walk.iter().enumerate() {
            positions[v].push(i);
        }
        OuterWalk { walk, pieces: spans, positions }
    }

    fn segments(&self, visited: &FixedBitSet) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for &(off, len) in &self.pieces {
            let marked = |i: usize| visited.contains(self.walk[off + i]);
            if (0..len).all(marked) {
                out.push((off as u32, len as u32));
                continue;
            }
            for i in (0..len).filter(|&i| marked(i) && !marked((i + len - 1) % len)) {
                let run = (0..len).take_while(|&d| marked((i + d) % len)).count();
                out.push(((off + i) as u32, run as u32));
            }
        }
        out.sort_unstable();
        out
    }

    fn visited(&self, n: usize, segments: &[(u32, u32)]) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(n);
        for &(first, run) in segments {
            let first = first as usize;
            let &(off, len) = self.pieces.iter().find(|&&(o, l)| o <= first && first < o + l).unwrap();
            for d in 0..run as usize {
                set.insert(self.walk[off + (first - off + d) % len]);
            }
        }
        set
    }
}

fn deletion_set(n: usize, w: &[usize]) -> Result<Vec<usize>> {
    let mut w = w.to_vec();
    w.sort_unstable();
    if let Some(&v) = w.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidCertificate(format!("deletion vertex {v} out of range")));
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return Err(Error::InvalidCertificate("deletion set repeats a vertex".into()));
    }
    if w.len() > MAX_K {
        return Err(Error::TooLarge(format!("{} deletion vertices, at most {MAX_K}", w.len())));
    }
    Ok(w)
}

/// Segment DP with statistics. `emb` embeds `G - W` on the original ids
/// (deleted vertices have empty rotations) with every remaining vertex on
/// the outer walk.
pub fn outerplanar_dp(inst: &Instance, w: &[usize], emb: &Embedding) -> Result<DpReport> {
    let g = &inst.graph;
    let p = &inst.poset;
    let n = g.n();
    if n == 0 {
        return Err(Error::Unsupported("empty graph".into()));
    }
    if inst.variant != Variant::Path {
        return Err(Error::Unsupported("outerplanar_dp expects a path instance".into()));
    }
    let w = deletion_set(n, w)?;
    let k = w.len();
    let rest = g.without_vertices(&w);
    let faces = trace_faces(emb, &rest)?;
    let mut is_deleted = FixedBitSet::with_capacity(n);
    for &v in &w {
        is_deleted.insert(v);
    }
    let pieces: Vec<Vec<usize>> = outer_pieces(&rest, emb, &faces)?
        .into_iter()
        .filter(|piece| !(piece.len() == 1 && is_deleted.contains(piece[0])))
        .collect();
    let outer = OuterWalk::new(n, &pieces);
    if let Some(v) = (0..n).find(|&v| !is_deleted.contains(v) && outer.positions[v].is_empty()) {
        return Err(Error::InvalidEmbedding(format!("vertex {v} is not on the outer walk")));
    }
    let mut bit = vec![0u32; n];
    for (i, &v) in w.iter().enumerate() {
        bit[v] = 1 << i;
    }
    let weighted = inst.objective == Objective::Min;
    let limit = k + 1;

    let mut layer = Layer::new();
    for v in (0..n).filter(|&v| p.predecessors(v).next().is_none()) {
        let mut visited = FixedBitSet::with_capacity(n);
        let key = if is_deleted.contains(v) {
            SegmentKey { segments: Vec::new(), deleted: bit[v], end: v as u32 }
        } else {
            visited.insert(v);
            SegmentKey { segments: outer.segments(&visited), deleted: 0, end: v as u32 }
        };
        if key.segments.len() <= limit {
            layer.offer(key, 0, 0);
        }
    }
    let mut layers = vec![layer];
    for size in 1..n {
        let mut next = Layer::new();
        for (idx, node) in layers[size - 1].nodes.iter().enumerate() {
            let t = node.key.end as usize;
            let mut visited = outer.visited(n, &node.key.segments);
            for (i, &d) in w.iter().enumerate() {
                if node.key.deleted >> i & 1 == 1 {
                    visited.insert(d);
                }
            }
            for u in g.neighbors(t) {
                if visited.contains(u) || !p.is_available(u, &visited) {
                    continue;
                }
                let key = if is_deleted.contains(u) {
                    SegmentKey {
                        segments: node.key.segments.clone(),
                        deleted: node.key.deleted | bit[u],
                        end: u as u32,
                    }
                } else {
                    visited.insert(u);
                    let segments = outer.segments(&visited);
                    visited.set(u, false);
                    if segments.len() > limit {
                        continue;
                    }
                    SegmentKey { segments, deleted: node.key.deleted, end: u as u32 }
                };
                let step = if weighted { g.cost(t, u) } else { 0 };
                next.offer(key, node.cost + step, idx as u32);
            }
        }
        layers.push(next);
    }
    let tuples: usize = layers.iter().map(|l| l.nodes.len()).sum();
    let nn = n as u128;
    let bound = (1u128 << k).saturating_mul(nn.saturating_pow(2 * (k as u32 + 1) + 1));
    let solution = rebuild(&layers, |key: &SegmentKey| key.end as usize)
        .map(|(order, cost)| Solution { order, cost });
    Ok(DpReport { solution, tuples, bound })
}

/// Exact (weighted) solver for graphs that become outerplanar after
/// deleting `w`, polynomial for fixed `|w|`.
pub fn solve_distance_outerplanar(
    inst: &Instance,
    w: &[usize],
    emb: &Embedding,
) -> Result<Option<Solution>> {
    match inst.variant {
        Variant::Path => Ok(outerplanar_dp(inst, w, emb)?.solution),
        Variant::Cycle => cycle_via_path(inst, |sub| Ok(outerplanar_dp(sub, w, emb)?.solution)),
    }
}

/// Hamiltonian cycle of a 2-connected outerplanar block by repeatedly
/// removing a degree-2 vertex and joining its neighbours.
fn outer_cycle(g: &Graph, block: &[usize]) -> Option<Vec<usize>> {
    if block.len() == 2 {
        return Some(block.to_vec());
    }
    let mut member = FixedBitSet::with_capacity(g.n());
    for &v in block {
        member.insert(v);
    }
    let mut adj: HashMap<usize, FixedBitSet> = block
        .iter()
        .map(|&v| {
            let mut row = g.adjacency(v).clone();
            row.intersect_with(&member);
            (v, row)
        })
        .collect();
    let edges = adj.values().map(|r| r.count_ones(..)).sum::<usize>() / 2;
    if edges > 2 * block.len() - 3 {
        return None;
    }
    let mut removed = Vec::new();
    let mut alive = member.clone();
    while alive.count_ones(..) > 3 {
        let v = alive.ones().find(|&v| adj[&v].count_ones(..) == 2)?;
        let (x, y) = adj[&v].ones().collect_tuple()?;
        alive.set(v, false);
        for u in [x, y] {
            adj.get_mut(&u).unwrap().set(v, false);
        }
        adj.get_mut(&x).unwrap().insert(y);
        adj.get_mut(&y).unwrap().insert(x);
        removed.push((v, x, y));
    }
    let mut cycle: Vec<usize> = alive.ones().collect();
    if cycle.len() != 3 || !cycle.iter().tuple_combinations().all(|(&a, &b)| adj[&a].contains(b)) {
        return None;
    }
    for (v, x, y) in removed.into_iter().rev() {
        let len = cycle.len();
        let i = cycle.iter().position(|&u| u == x)?;
        if cycle[(i + 1) % len] == y {
            cycle.insert(i + 1, v);
        } else if cycle[(i + len - 1) % len] == y {
            cycle.insert(i, v);
        } else {
            return None;
        }
    }
    Some(cycle)
}

/// An embedding with every vertex on the outer walk, or `None` when the
/// graph is not outerplanar. For disconnected graphs the outer walk lists
/// one closed walk per component, in component order.
pub fn recognize_outerplanar(g: &Graph) -> Option<Embedding> {
    let n = g.n();
    let mut rotation = vec![Vec::new(); n];
    for block in block_cut_tree(g).blocks.iter().filter(|b| b.len() >= 2) {
        let cycle = outer_cycle(g, block)?;
        let len = cycle.len();
        let mut pos = HashMap::new();
        for (i, &v) in cycle.iter().enumerate() {
            pos.insert(v, i);
        }
        for (i, &v) in cycle.iter().enumerate() {
            let around = g
                .neighbors(v)
                .filter(|u| pos.contains_key(u))
                .sorted_by_key(|u| (pos[u] + len - i) % len);
            rotation[v].extend(around);
        }
    }
    let mut emb = Embedding { rotation, outer_face: Vec::new() };
    let faces = trace_faces(&emb, g).ok()?;
    for comp in g.components() {
        if comp.len() == 1 {
            emb.outer_face.push(comp[0]);
            continue;
        }
        let face = faces.iter().find(|f| {
            comp.contains(&f[0]) && comp.iter().all(|v| f.contains(v))
        })?;
        emb.outer_face.extend_from_slice(face);
    }
    Some(emb)
}

/// Smallest (then lexicographically first) vertex set of size at most `k`
/// whose removal leaves an outerplanar graph.
pub fn find_outerplanar_deletion_set(g: &Graph, k: usize) -> Result<Option<Vec<usize>>> {
    if k > OUTERPLANAR_SEARCH_MAX_K {
        return Err(Error::TooLarge(format!(
            "deletion set search handles k <= {OUTERPLANAR_SEARCH_MAX_K}, got {k}"
        )));
    }
    for size in 0..=k.min(g.n()) {
        for w in (0..g.n()).combinations(size) {
            if recognize_outerplanar(&g.without_vertices(&w)).is_some() {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}
