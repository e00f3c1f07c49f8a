//! Solver matrix over a corpus, written as CSV.

use std::path::{Path, PathBuf};

use pohpath::Instance;
use rayon::prelude::*;

use super::{emit, load, thread_pool, BenchArgs, Failure, EXIT_PRECONDITION};
use crate::solve::{self, Algo, Limits};

struct Row {
    instance: String,
    algo: Algo,
    feasible: String,
    cost: String,
    elapsed_ms: String,
    verdict: String,
}

/// Files named on the command line, plus every `*.json` directly inside
/// named directories, in sorted order.
fn corpus(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let entries = std::fs::read_dir(input).map_err(|e| super::io_failure(input, e))?;
            let mut found: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(input.clone());
        }
    }
    if files.is_empty() {
        return Err(Failure { code: EXIT_PRECONDITION, message: "no instances found".into() });
    }
    Ok(files)
}

fn measure(name: &str, inst: &Result<Instance, String>, algo: Algo, limits: &Limits, check: bool) -> Row {
    let mut row = Row {
        instance: name.to_string(),
        algo,
        feasible: "error".into(),
        cost: String::new(),
        elapsed_ms: String::new(),
        verdict: String::new(),
    };
    let inst = match inst {
        Ok(inst) => inst,
        Err(message) => {
            eprintln!("pohp: {name}: {message}");
            return row;
        }
    };
    match solve::run(inst, algo, limits) {
        Ok(run) => {
            row.feasible = run.solution.is_some().to_string();
            row.cost = run.solution.as_ref().map(|s| s.cost.to_string()).unwrap_or_default();
            row.elapsed_ms = format!("{:.3}", run.elapsed_ms);
            if check {
                match solve::matches_oracle(inst, &run.solution, limits.max_n) {
                    Ok(Some(v)) => row.verdict = v.to_string(),
                    Ok(None) => {}
                    Err(e) => eprintln!("pohp: {name}: oracle: {e}"),
                }
            }
        }
        Err(e) => eprintln!("pohp: {name} with {}: {e}", algo.name()),
    }
    row
}

pub(crate) fn cmd_bench(args: BenchArgs) -> Result<u8, Failure> {
    let files = corpus(&args.inputs)?;
    let limits = args.flags.limits();
    let pool = thread_pool(args.flags.jobs)?;
    let mut algos = args.algos.clone();
    algos.dedup();
    let rows: Vec<Row> = pool.install(|| {
        files
            .par_iter()
            .flat_map_iter(|path| {
                let name = path.display().to_string();
                let inst = load(path).map_err(|f| f.message);
                algos
                    .iter()
                    .map(|&algo| measure(&name, &inst, algo, &limits, args.verify_with_oracle))
                    .collect::<Vec<_>>()
            })
            .collect()
    });

    let mut out = csv::Writer::from_writer(Vec::new());
    let header = ["instance", "algo", "feasible", "cost", "elapsed_ms", "verdict_matches_oracle"];
    let write_err = |e: csv::Error| Failure { code: EXIT_PRECONDITION, message: format!("csv: {e}") };
    out.write_record(header).map_err(write_err)?;
    for r in &rows {
        out.write_record([&r.instance, r.algo.name(), &r.feasible, &r.cost, &r.elapsed_ms, &r.verdict])
            .map_err(write_err)?;
    }
    let bytes = out.into_inner().map_err(|e| Failure { code: EXIT_PRECONDITION, message: format!("csv: {e}") })?;
    emit(args.output.as_deref().map(Path::new), &bytes)?;
    Ok(0)
}
