//! Problem instances, solutions, validation and the JSON instance format.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::{edge_key, Graph};
use crate::poset::{build_poset, Poset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Path,
    Cycle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    #[default]
    Decision,
    Min,
}

/// Rotation system plus a designated outer face walk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub rotation: Vec<Vec<usize>>,
    pub outer_face: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deletion_vertices: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deletion_edges: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Embedding>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clique_cover: Option<Vec<Vec<usize>>>,
}

impl Certificates {
    pub fn is_empty(&self) -> bool {
        self.deletion_vertices.is_none()
            && self.deletion_edges.is_none()
            && self.embedding.is_none()
            && self.clique_cover.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub poset: Poset,
    /// The constraint pairs as given (sorted, deduplicated); `poset` is their closure.
    pub constraints: Vec<(usize, usize)>,
    pub variant: Variant,
    pub objective: Objective,
    pub certificates: Certificates,
    pub names: BTreeMap<usize, String>,
    pub meta: Option<Value>,
}

impl Instance {
    pub fn new(graph: Graph, constraints: &[(usize, usize)]) -> Result<Instance> {
        let mut pairs = constraints.to_vec();
        pairs.sort_unstable();
        pairs.dedup();
        let poset = build_poset(graph.n(), &pairs)?;
        Ok(Instance {
            graph,
            poset,
            constraints: pairs,
            variant: Variant::Path,
            objective: Objective::Decision,
            certificates: Certificates::default(),
            names: BTreeMap::new(),
            meta: None,
        })
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Copy of the instance with a different order (constraints replaced by
    /// the closure's strict pairs).
    pub fn with_poset(&self, poset: Poset) -> Instance {
        let mut out = self.clone();
        out.constraints = poset.relations();
        out.poset = poset;
        out
    }

    /// Cost of traversing `order` under the objective (0 for decision).
    pub fn order_cost(&self, order: &[usize]) -> u64 {
        if self.objective == Objective::Decision {
            return 0;
        }
        let mut cost = self.graph.walk_cost(order);
        if self.variant == Variant::Cycle && order.len() >= 2 {
            cost += self.graph.cost(order[order.len() - 1], order[0]);
        }
        cost
    }

    /// Checks the structural invariants shared by every instance.
    pub fn check(&self) -> Result<()> {
        let n = self.n();
        if self.poset.n() != n {
            return Err(Error::Range(format!(
                "poset has {} elements, graph has {n}",
                self.poset.n()
            )));
        }
        if self.objective == Objective::Min && !self.graph.is_weighted() && self.graph.m() > 0 {
            return Err(Error::parse("objective", "min objective requires edge weights"));
        }
        let c = &self.certificates;
        if let Some(w) = &c.deletion_vertices {
            if let Some(&v) = w.iter().find(|&&v| v >= n) {
                return Err(Error::Range(format!("deletion vertex {v}")));
            }
        }
        if let Some(f) = &c.deletion_edges {
            for &(u, v) in f {
                if u >= n || v >= n {
                    return Err(Error::Range(format!("deletion edge ({u},{v})")));
                }
                if !self.graph.has_edge(u, v) {
                    return Err(Error::InvalidCertificate(format!(
                        "deletion edge ({u},{v}) is not an edge"
                    )));
                }
            }
        }
        if let Some(e) = &c.embedding {
            if e.rotation.len() != n {
                return Err(Error::Range(format!(
                    "rotation lists {} vertices, graph has {n}",
                    e.rotation.len()
                )));
            }
            let bad = e.rotation.iter().flatten().chain(e.outer_face.iter()).find(|&&v| v >= n);
            if let Some(v) = bad {
                return Err(Error::Range(format!("embedding vertex {v}")));
            }
        }
        if let Some(cover) = &c.clique_cover {
            if let Some(&v) = cover.iter().flatten().find(|&&v| v >= n) {
                return Err(Error::Range(format!("clique cover vertex {v}")));
            }
        }
        if let Some((&v, _)) = self.names.range(n..).next() {
            return Err(Error::Range(format!("name for vertex {v}")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub order: Vec<usize>,
    pub cost: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub is_permutation: bool,
    pub edges_present: bool,
    /// Always true for the path variant.
    pub cycle_closed: bool,
    pub extends_poset: bool,
    pub cost: u64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.is_permutation && self.edges_present && self.cycle_closed && self.extends_poset
    }
}

pub fn validate_solution(inst: &Instance, order: &[usize]) -> ValidationReport {
    let n = inst.n();
    let g = &inst.graph;
    let mut seen = FixedBitSet::with_capacity(n);
    let mut is_permutation = order.len() == n;
    for &v in order {
        if v >= n || seen.contains(v) {
            is_permutation = false;
            break;
        }
        seen.insert(v);
    }
    let edges_present = order.windows(2).all(|w| g.has_edge(w[0], w[1]));
    let cycle_closed = match inst.variant {
        Variant::Path => true,
        Variant::Cycle => match order {
            [] => false,
            [_] => true,
            [first, .., last] => g.has_edge(*first, *last),
        },
    };
    let extends_poset = is_permutation && inst.poset.respects(order);
    let mut cost: u64 = order
        .windows(2)
        .filter(|w| w[0] < n && w[1] < n)
        .map(|w| g.cost(w[0], w[1]))
        .sum();
    if inst.variant == Variant::Cycle && order.len() >= 2 {
        let (a, b) = (order[order.len() - 1], order[0]);
        if a < n && b < n {
            cost += g.cost(a, b);
        }
    }
    ValidationReport {
        is_permutation,
        edges_present,
        cycle_closed,
        extends_poset,
        cost,
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(default)]
    variant: Variant,
    #[serde(default)]
    objective: Objective,
    n: usize,
    #[serde(default)]
    edges: Vec<Vec<u64>>,
    #[serde(default)]
    constraints: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Certificates::is_empty")]
    certificates: Certificates,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    names: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<Value>,
}

pub fn read_instance(bytes: &[u8]) -> Result<Instance> {
    let doc: Document = serde_json::from_slice(bytes).map_err(|e| {
        Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
    })?;
    let n = doc.n;
    let weighted = doc.edges.iter().any(|e| e.len() == 3);
    let mut graph = Graph::new(n);
    if weighted || (doc.objective == Objective::Min && doc.edges.is_empty()) {
        graph.set_weighted(true);
    }
    for (i, e) in doc.edges.iter().enumerate() {
        let loc = || format!("edges[{i}]");
        let (u, v) = match e.as_slice() {
            [u, v] if !weighted => (*u as usize, *v as usize),
            [_, _] => {
                return Err(Error::parse(loc(), "every edge needs a weight once one edge has one"))
            }
            [u, v, _] => (*u as usize, *v as usize),
            _ => return Err(Error::parse(loc(), "edge must be [u,v] or [u,v,w]")),
        };
        if u == v {
            return Err(Error::parse(loc(), format!("self-loop at vertex {u}")));
        }
        if u >= n || v >= n {
            return Err(Error::Range(format!("{}: ({u},{v}) with n={n}", loc())));
        }
        if graph.has_edge(u, v) {
            return Err(Error::parse(loc(), format!("duplicate edge ({u},{v})")));
        }
        match e.get(2) {
            Some(&w) => graph.add_weighted_edge(u, v, w)?,
            None => graph.add_edge(u, v)?,
        }
    }
    if let Some(&(a, b)) = doc.constraints.iter().find(|&&(a, b)| a >= n || b >= n) {
        return Err(Error::Range(format!("constraint ({a},{b}) with n={n}")));
    }
    let mut names = BTreeMap::new();
    for (k, name) in doc.names {
        let id: usize = k
            .parse()
            .map_err(|_| Error::parse(format!("names.{k}"), "key must be a vertex id"))?;
        names.insert(id, name);
    }
    let mut certificates = doc.certificates;
    if let Some(f) = certificates.deletion_edges.as_mut() {
        for e in f.iter_mut() {
            *e = edge_key(e.0, e.1);
        }
        f.sort_unstable();
        f.dedup();
    }
    if let Some(w) = certificates.deletion_vertices.as_mut() {
        w.sort_unstable();
        w.dedup();
    }
    let mut inst = Instance::new(graph, &doc.constraints)?;
    inst.variant = doc.variant;
    inst.objective = doc.objective;
    inst.certificates = certificates;
    inst.names = names;
    inst.meta = doc.meta;
    inst.check()?;
    Ok(inst)
}

pub fn write_instance(inst: &Instance) -> Vec<u8> {
    let g = &inst.graph;
    let edges = g
        .edges()
        .into_iter()
        .map(|(u, v)| match g.weight(u, v) {
            Some(w) => vec![u as u64, v as u64, w],
            None => vec![u as u64, v as u64],
        })
        .collect();
    let doc = Document {
        variant: inst.variant,
        objective: inst.objective,
        n: inst.n(),
        edges,
        constraints: inst.constraints.clone(),
        certificates: inst.certificates.clone(),
        names: inst.names.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        meta: inst.meta.clone(),
    };
    let mut out = serde_json::to_vec(&doc).expect("instance serializes");
    out.push(b'\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3_two_before_zero() -> Instance {
        Instance::new(Graph::path(3), &[(2, 0)]).unwrap()
    }

    #[test]
    fn k3_path_all_flags() {
        let g = Graph::from_weighted_edges(3, &[(0, 1, 2), (1, 2, 5), (0, 2, 9)]).unwrap();
        let inst = Instance::new(g, &[]).unwrap();
        let r = validate_solution(&inst, &[0, 1, 2]);
        assert!(r.is_valid());
        assert_eq!(r.cost, 7);
    }

    #[test]
    fn p3_wrong_direction() {
        let r = validate_solution(&p3_two_before_zero(), &[0, 1, 2]);
        assert!(!r.extends_poset);
        assert!(r.edges_present);
    }

    #[test]
    fn p3_reverse_direction() {
        assert!(validate_solution(&p3_two_before_zero(), &[2, 1, 0]).is_valid());
    }

    #[test]
    fn minimal_document() {
        let inst =
            read_instance(br#"{"n":1,"edges":[],"constraints":[],"variant":"path"}"#).unwrap();
        assert_eq!(inst.n(), 1);
        assert_eq!(inst.variant, Variant::Path);
        assert_eq!(inst.objective, Objective::Decision);
    }

    #[test]
    fn self_loop_is_parse_error() {
        let err = read_instance(br#"{"n":1,"edges":[[0,0]],"variant":"path"}"#).unwrap_err();
        assert!(matches!(err, Error::Parse { ref location, .. } if location == "edges[0]"));
    }

    #[test]
    fn out_of_range_is_range_error() {
        let err = read_instance(br#"{"n":2,"edges":[[0,2]]}"#).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
        let err = read_instance(br#"{"n":2,"constraints":[[0,5]]}"#).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
    }

    #[test]
    fn syntax_error_has_location() {
        let err = read_instance(b"{\"n\":\n 2,,}").unwrap_err();
        assert!(matches!(err, Error::Parse { ref location, .. } if location.starts_with("line 2")));
    }

    #[test]
    fn min_requires_weights() {
        let err = read_instance(br#"{"n":2,"edges":[[0,1]],"objective":"min"}"#).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn canonical_edges() {
        let inst = read_instance(br#"{"n":3,"edges":[[2,1,4],[1,0,3]]}"#).unwrap();
        let text = String::from_utf8(write_instance(&inst)).unwrap();
        assert!(text.contains(r#""edges":[[0,1,3],[1,2,4]]"#), "{text}");
    }
}
