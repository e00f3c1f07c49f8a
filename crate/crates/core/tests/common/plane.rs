//! Random plane and outerplanar graphs with their rotation systems.

use pohpath::planar::trace_faces;
use pohpath::{Embedding, Graph};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Non-crossing chords of a random triangulation of the polygon `0..len`,
/// each kept with probability `keep`.
pub fn polygon_chords(r: &mut ChaCha8Rng, len: usize, keep: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut stack = vec![(0..len).collect::<Vec<_>>()];
    while let Some(poly) = stack.pop() {
        let m = poly.len();
        if m < 4 {
            continue;
        }
        let (i, j) = loop {
            let (a, b) = (r.gen_range(0..m), r.gen_range(0..m));
            let (i, j) = (a.min(b), a.max(b));
            if j - i >= 2 && !(i == 0 && j == m - 1) {
                break (i, j);
            }
        };
        if r.gen_bool(keep) {
            out.push((poly[i], poly[j]));
        }
        stack.push(poly[i..=j].to_vec());
        stack.push(poly[j..].iter().chain(&poly[..=i]).copied().collect());
    }
    out
}

/// Polygon plus chords drawn inside a circle: rotation at each vertex in
/// circular order starting from its successor on the cycle.
fn polygon(r: &mut ChaCha8Rng, len: usize, keep: f64) -> (Graph, Embedding) {
    let mut g = Graph::new(len);
    if len == 2 {
        g.add_edge(0, 1).unwrap();
        let emb = Embedding { rotation: vec![vec![1], vec![0]], outer_face: vec![0, 1] };
        return (g, emb);
    }
    for v in 0..len {
        g.add_edge(v, (v + 1) % len).unwrap();
    }
    for (u, v) in polygon_chords(r, len, keep) {
        g.add_edge(u, v).unwrap();
    }
    let rotation = (0..len)
        .map(|v| {
            let mut around: Vec<usize> = g.neighbors(v).collect();
            around.sort_by_key(|&u| (u + len - v) % len);
            around
        })
        .collect();
    (g, Embedding { rotation, outer_face: (0..len).collect() })
}

fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (0..a.len()).any(|s| a.iter().cycle().skip(s).take(a.len()).eq(b))
}

/// Adds a vertex inside a random inner face, joined to `min_deg` or more
/// of its corners. With `across = (a, b)` the face is the one on the inner
/// side of the edge `ab` and both ends are joined.
fn add_inner_vertex(
    r: &mut ChaCha8Rng,
    g: &mut Graph,
    emb: &mut Embedding,
    min_deg: usize,
    across: Option<(usize, usize)>,
) {
    let faces = trace_faces(emb, g).unwrap();
    let inner: Vec<&Vec<usize>> = faces.iter().filter(|f| !same_cycle(f, &emb.outer_face)).collect();
    let mut corners: Vec<usize> = Vec::new();
    let face = match across {
        None => (*inner.choose(r).unwrap()).clone(),
        Some((a, b)) => {
            let face = inner
                .iter()
                .find(|f| (0..f.len()).any(|i| f[i] == a && f[(i + 1) % f.len()] == b))
                .unwrap();
            corners.extend((0..face.len()).filter(|&i| face[i] == a || face[i] == b));
            (*face).clone()
        }
    };
    let m = face.len();
    for i in 0..m {
        if r.gen_bool(0.6) && !corners.iter().any(|&c| face[c] == face[i]) {
            corners.push(i);
        }
    }
    let mut i = 0;
    while corners.len() < min_deg.min(m) {
        if !corners.iter().any(|&c| face[c] == face[i]) {
            corners.push(i);
        }
        i += 1;
    }
    corners.sort_unstable();
    let x = g.n();
    let mut grown = Graph::new(x + 1);
    for (u, v) in g.edges() {
        grown.add_edge(u, v).unwrap();
    }
    let mut rotation = emb.rotation.clone();
    for &c in &corners {
        let (prev, v) = (face[(c + m - 1) % m], face[c]);
        let at = rotation[v].iter().position(|&u| u == prev).unwrap();
        rotation[v].insert(at + 1, x);
        grown.add_edge(v, x).unwrap();
    }
    let around: Vec<usize> = corners.iter().map(|&c| face[c]).collect();
    for candidate in [around.clone(), around.iter().rev().copied().collect()] {
        let mut rot = rotation.clone();
        rot.push(candidate);
        let trial = Embedding { rotation: rot, outer_face: emb.outer_face.clone() };
        if trace_faces(&trial, &grown).is_ok() {
            *g = grown;
            *emb = trial;
            return;
        }
    }
    panic!("no planar rotation for the new vertex");
}

/// Applies the permutation `perm` (old id to new id) to graph and embedding.
pub fn relabel(g: &Graph, emb: &Embedding, perm: &[usize]) -> (Graph, Embedding) {
    let mut out = Graph::new(g.n());
    for (u, v) in g.edges() {
        out.add_edge(perm[u], perm[v]).unwrap();
    }
    let mut rotation = vec![Vec::new(); g.n()];
    for (v, rot) in emb.rotation.iter().enumerate() {
        rotation[perm[v]] = rot.iter().map(|&u| perm[u]).collect();
    }
    let outer_face = emb.outer_face.iter().map(|&v| perm[v]).collect();
    (out, Embedding { rotation, outer_face })
}

/// 2-connected plane graph: an outer cycle of `outer` vertices with chords
/// and `inner` vertices inside, ids shuffled.
pub fn plane_graph(r: &mut ChaCha8Rng, outer: usize, inner: usize) -> (Graph, Embedding) {
    let (mut g, mut emb) = polygon(r, outer, 0.5);
    for _ in 0..inner {
        add_inner_vertex(r, &mut g, &mut emb, 2, None);
    }
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(r);
    relabel(&g, &emb, &perm)
}

/// Like [`plane_graph`] but traceable: every inner vertex sits on its own
/// outer edge, so the outer cycle can detour through it.
pub fn traceable_plane_graph(r: &mut ChaCha8Rng, outer: usize, inner: usize) -> (Graph, Embedding) {
    assert!(inner < outer);
    let (mut g, mut emb) = polygon(r, outer, 0.5);
    let mut sides: Vec<usize> = (0..outer - 1).collect();
    sides.shuffle(r);
    for &i in &sides[..inner] {
        add_inner_vertex(r, &mut g, &mut emb, 2, Some((i + 1, i)));
    }
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(r);
    relabel(&g, &emb, &perm)
}

/// Rotates `rot` so it runs from `next` around to `prev`.
fn open_at(rot: &[usize], next: usize) -> Vec<usize> {
    let i = rot.iter().position(|&u| u == next).unwrap();
    rot[i..].iter().chain(&rot[..i]).copied().collect()
}

/// Joins `piece` to `base` by identifying `piece`'s vertex `at_piece` with
/// `base`'s vertex `at_base`; both must lie on the outer walks.
fn glue(
    base: (&Graph, &Embedding),
    piece: (&Graph, &Embedding),
    at_base: usize,
    at_piece: usize,
) -> (Graph, Embedding) {
    let (bg, be) = base;
    let (pg, pe) = piece;
    let offset = bg.n();
    let id = |v: usize| match v.cmp(&at_piece) {
        std::cmp::Ordering::Equal => at_base,
        std::cmp::Ordering::Less => offset + v,
        std::cmp::Ordering::Greater => offset + v - 1,
    };
    let n = offset + pg.n() - 1;
    let mut g = Graph::new(n);
    for (u, v) in bg.edges() {
        g.add_edge(u, v).unwrap();
    }
    for (u, v) in pg.edges() {
        g.add_edge(id(u), id(v)).unwrap();
    }
    let corner = |walk: &[usize], v: usize| {
        let i = walk.iter().position(|&u| u == v).unwrap();
        walk[(i + 1) % walk.len()]
    };
    let mut rotation = be.rotation.clone();
    rotation.resize(n, Vec::new());
    for v in (0..pg.n()).filter(|&v| v != at_piece) {
        rotation[id(v)] = pe.rotation[v].iter().map(|&u| id(u)).collect();
    }
    let mut joined = if be.rotation[at_base].is_empty() {
        Vec::new()
    } else {
        open_at(&be.rotation[at_base], corner(&be.outer_face, at_base))
    };
    let from_piece = open_at(&pe.rotation[at_piece], corner(&pe.outer_face, at_piece));
    joined.extend(from_piece.into_iter().map(id));
    rotation[at_base] = joined;
    let mut emb = Embedding { rotation, outer_face: Vec::new() };
    let faces = trace_faces(&emb, &g).unwrap();
    let mut must: Vec<usize> = be.outer_face.clone();
    must.extend(pe.outer_face.iter().map(|&v| id(v)));
    emb.outer_face = faces.into_iter().find(|f| must.iter().all(|v| f.contains(v))).unwrap();
    (g, emb)
}

/// Plane graph whose blocks are `pieces` plane pieces glued along a path
/// (or, with `branching`, at arbitrary outer vertices), ids shuffled.
pub fn plane_block_chain(
    r: &mut ChaCha8Rng,
    pieces: usize,
    max_outer: usize,
    inner: usize,
    branching: bool,
) -> (Graph, Embedding) {
    let make = |r: &mut ChaCha8Rng| {
        let len = r.gen_range(2..=max_outer);
        let (mut g, mut emb) = polygon(r, len, 0.5);
        if len >= 3 {
            for _ in 0..inner {
                if r.gen_bool(0.5) {
                    add_inner_vertex(r, &mut g, &mut emb, 2, None);
                }
            }
        }
        (g, emb)
    };
    let (mut g, mut emb) = make(r);
    let mut last: Vec<usize> = emb.outer_face.clone();
    let mut prev_cut = usize::MAX;
    for _ in 1..pieces {
        let (pg, pe) = make(r);
        let choices: Vec<usize> = if branching {
            emb.outer_face.clone()
        } else {
            last.iter().copied().filter(|&v| v != prev_cut).collect()
        };
        let at_base = *choices.choose(r).unwrap();
        let at_piece = *pe.outer_face.choose(r).unwrap();
        let offset = g.n();
        let (ng, ne) = glue((&g, &emb), (&pg, &pe), at_base, at_piece);
        last = pe
            .outer_face
            .iter()
            .map(|&v| match v.cmp(&at_piece) {
                std::cmp::Ordering::Equal => at_base,
                std::cmp::Ordering::Less => offset + v,
                std::cmp::Ordering::Greater => offset + v - 1,
            })
            .collect();
        prev_cut = at_base;
        g = ng;
        emb = ne;
    }
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(r);
    relabel(&g, &emb, &perm)
}

/// Random outerplanar graph on `n` vertices: polygons with chords hung on
/// one another, sometimes starting a new component. Ids are shuffled.
pub fn outerplanar_graph(r: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut edges = Vec::new();
    let mut placed = 0;
    while placed < n {
        let size = r.gen_range(1..=(n - placed).min(5));
        let attach = placed > 0 && r.gen_bool(0.8);
        let anchor = if attach { Some(r.gen_range(0..placed)) } else { None };
        let fresh: Vec<usize> = (placed..placed + size).collect();
        placed += size;
        let mut ring: Vec<usize> = anchor.into_iter().chain(fresh).collect();
        ring.shuffle(r);
        match ring.len() {
            1 => {}
            2 => edges.push((ring[0], ring[1])),
            len => {
                for i in 0..len {
                    edges.push((ring[i], ring[(i + 1) % len]));
                }
                for (a, b) in polygon_chords(r, len, 0.5) {
                    edges.push((ring[a], ring[b]));
                }
            }
        }
    }
    let edges = super::shuffle_ids(r, n, &edges);
    super::graph(n, &edges)
}

/// Outerplanar graph on `n - w` vertices plus `w` vertices with random
/// edges; returns the graph and the added vertices (sorted).
pub fn outerplanar_plus(r: &mut ChaCha8Rng, n: usize, w: usize) -> (Graph, Vec<usize>) {
    let base = outerplanar_graph(r, n - w);
    let mut edges = base.edges();
    for x in n - w..n {
        for v in 0..x {
            if r.gen_bool(0.45) {
                edges.push((v, x));
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    let edges: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
    let mut extra: Vec<usize> = (n - w..n).map(|x| perm[x]).collect();
    extra.sort_unstable();
    (super::graph(n, &edges), extra)
}
