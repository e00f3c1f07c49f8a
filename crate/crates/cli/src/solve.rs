//! Algorithm selection and dispatch.

use std::time::Instant;

use clap::ValueEnum;
use pohpath::blocklike::{
    find_block_deletion_set, is_block_graph, solve_block_graph, solve_distance_block, solve_edge_distance_block,
};
use pohpath::cliquemod::{find_clique_module_set, solve_clique_module};
use pohpath::oracle::{solve_exact, EXACT_MAX_N};
use pohpath::planar::{
    find_outerplanar_deletion_set, recognize_outerplanar, solve_distance_outerplanar, solve_inner_vertices,
};
use pohpath::sparse::{feedback_edge_number, solve_fes};
use pohpath::{Error, Instance, Objective, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Auto,
    Oracle,
    Fes,
    Block,
    EdgeBlock,
    DistBlock,
    CliqueModule,
    PlanarInner,
    DistOuterplanar,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Auto => "auto",
            Algo::Oracle => "oracle",
            Algo::Fes => "fes",
            Algo::Block => "block",
            Algo::EdgeBlock => "edge-block",
            Algo::DistBlock => "dist-block",
            Algo::CliqueModule => "clique-module",
            Algo::PlanarInner => "planar-inner",
            Algo::DistOuterplanar => "dist-outerplanar",
        }
    }

    fn decision_only(self) -> bool {
        matches!(self, Algo::Block | Algo::EdgeBlock | Algo::DistBlock | Algo::CliqueModule)
    }
}

#[derive(Clone, Debug)]
pub struct Limits {
    pub max_n: usize,
    pub fes_max_k: usize,
    /// Under `auto`, deletion-set certificates larger than this defer to
    /// the oracle when it can run.
    pub max_k: usize,
    pub find_certificate: bool,
}

/// Deletion sets tried when searching for a certificate stay this small.
const SEARCH_MAX_K: usize = 2;

/// Outcome of one solver run.
pub struct Run {
    pub algo: Algo,
    pub solution: Option<Solution>,
    pub elapsed_ms: f64,
}

fn missing(what: &str, algo: Algo) -> Error {
    Error::InvalidCertificate(format!("--algo {} needs a {what} certificate", algo.name()))
}

/// Picks a concrete solver for `auto`, possibly filling in a certificate
/// found by search.
fn choose(inst: &mut Instance, limits: &Limits) -> Result<Algo, Error> {
    let c = &inst.certificates;
    let oracle_fits = inst.n() <= limits.max_n.min(EXACT_MAX_N);
    let small = |k: usize| k <= limits.max_k || !oracle_fits;
    match (&c.embedding, &c.deletion_vertices, &c.deletion_edges) {
        (Some(_), Some(_), _) => return Ok(Algo::DistOuterplanar),
        (Some(_), None, _) => return Ok(Algo::PlanarInner),
        (None, _, Some(f)) if small(f.len()) => return Ok(Algo::EdgeBlock),
        (None, Some(w), None) if small(w.len()) => {
            let rest = inst.graph.without_vertices(w);
            return Ok(if is_block_graph(&rest) { Algo::DistBlock } else { Algo::CliqueModule });
        }
        _ => {}
    }
    if limits.find_certificate {
        if let Some(algo) = find_certificate(inst, limits)? {
            return Ok(algo);
        }
    }
    if oracle_fits {
        return Ok(Algo::Oracle);
    }
    Err(Error::TooLarge(format!(
        "no certificate and n = {} exceeds --max-n {}",
        inst.n(),
        limits.max_n
    )))
}

fn find_certificate(inst: &mut Instance, limits: &Limits) -> Result<Option<Algo>, Error> {
    let g = inst.graph.clone();
    let min = inst.objective == Objective::Min;
    if !min && is_block_graph(&g) {
        return Ok(Some(Algo::Block));
    }
    if feedback_edge_number(&g) <= limits.fes_max_k.min(12) {
        return Ok(Some(Algo::Fes));
    }
    if let Some(emb) = recognize_outerplanar(&g) {
        inst.certificates.deletion_vertices = Some(Vec::new());
        inst.certificates.embedding = Some(emb);
        return Ok(Some(Algo::DistOuterplanar));
    }
    if !min {
        let (w, _) = find_clique_module_set(&g);
        if w.len() <= limits.max_k {
            inst.certificates.deletion_vertices = Some(w);
            return Ok(Some(Algo::CliqueModule));
        }
        if let Some(w) = find_block_deletion_set(&g, SEARCH_MAX_K.min(limits.max_k)) {
            inst.certificates.deletion_vertices = Some(w);
            return Ok(Some(Algo::DistBlock));
        }
    }
    if let Some(w) = find_outerplanar_deletion_set(&g, SEARCH_MAX_K.min(limits.max_k))? {
        let emb = recognize_outerplanar(&g.without_vertices(&w))
            .ok_or_else(|| Error::Internal("deletion set does not leave an outerplanar graph".into()))?;
        inst.certificates.deletion_vertices = Some(w);
        inst.certificates.embedding = Some(emb);
        return Ok(Some(Algo::DistOuterplanar));
    }
    Ok(None)
}

pub fn run(inst: &Instance, requested: Algo, limits: &Limits) -> Result<Run, Error> {
    let mut inst = inst.clone();
    let algo = match requested {
        Algo::Auto => choose(&mut inst, limits)?,
        other => other,
    };
    if algo.decision_only() && inst.objective == Objective::Min {
        return Err(Error::Unsupported(format!("--algo {} ignores weights; use a min-cost solver", algo.name())));
    }
    let c = &inst.certificates;
    let start = Instant::now();
    let solution = match algo {
        Algo::Auto => unreachable!("auto resolves to a concrete solver"),
        Algo::Oracle => {
            if inst.n() > limits.max_n.min(EXACT_MAX_N) {
                return Err(Error::TooLarge(format!("n = {} exceeds --max-n {}", inst.n(), limits.max_n)));
            }
            solve_exact(&inst)?
        }
        Algo::Fes => {
            let k = feedback_edge_number(&inst.graph);
            if k > limits.fes_max_k {
                return Err(Error::TooLarge(format!(
                    "feedback edge number {k} exceeds --fes-max-k {}",
                    limits.fes_max_k
                )));
            }
            solve_fes(&inst)?
        }
        Algo::Block => solve_block_graph(&inst)?,
        Algo::EdgeBlock => {
            let f = c.deletion_edges.as_ref().ok_or_else(|| missing("deletion_edges", algo))?;
            solve_edge_distance_block(&inst, f)?
        }
        Algo::DistBlock => {
            let w = c.deletion_vertices.as_ref().ok_or_else(|| missing("deletion_vertices", algo))?;
            solve_distance_block(&inst, w)?
        }
        Algo::CliqueModule => match &c.deletion_vertices {
            Some(w) => solve_clique_module(&inst, w)?,
            None => solve_clique_module(&inst, &find_clique_module_set(&inst.graph).0)?,
        },
        Algo::PlanarInner => {
            let emb = c.embedding.as_ref().ok_or_else(|| missing("embedding", algo))?;
            solve_inner_vertices(&inst, emb)?
        }
        Algo::DistOuterplanar => {
            let w = c.deletion_vertices.as_deref().unwrap_or(&[]);
            let found;
            let emb = match &c.embedding {
                Some(emb) => emb,
                None => {
                    found = recognize_outerplanar(&inst.graph.without_vertices(w))
                        .ok_or_else(|| missing("embedding", algo))?;
                    &found
                }
            };
            solve_distance_outerplanar(&inst, w, emb)?
        }
    };
    Ok(Run { algo, solution, elapsed_ms: start.elapsed().as_secs_f64() * 1e3 })
}

/// Whether `run` agrees with the oracle: same feasibility, and the same
/// cost under the min objective. `None` when the instance is too large.
pub fn matches_oracle(inst: &Instance, found: &Option<Solution>, max_n: usize) -> Result<Option<bool>, Error> {
    if inst.n() > max_n.min(EXACT_MAX_N) {
        return Ok(None);
    }
    let truth = solve_exact(inst)?;
    Ok(Some(match (found, &truth) {
        (None, None) => true,
        (Some(a), Some(b)) => {
            pohpath::validate_solution(inst, &a.order).is_valid()
                && (inst.objective == Objective::Decision || a.cost == b.cost)
        }
        _ => false,
    }))
}
