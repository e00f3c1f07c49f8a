//! `pohp`: solve, generate, verify and benchmark ordered Hamiltonian path
//! instances.

mod bench;
mod solve;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pohpath::gadgets::{
    gen_ecc, gen_gnp, gen_w1_d2c, gen_w1_d2p, AlepInstance, CliqueVariant, McpInstance, PathVariant,
};
use pohpath::{read_instance, validate_solution, write_instance, Error, Instance};
use serde_json::{json, Value};

use solve::{Algo, Limits};

const EXIT_MISMATCH: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_ORACLE_DISAGREES: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "pohp", version, about = "Ordered Hamiltonian path and cycle solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print the result as JSON.
    Solve(SolveArgs),
    /// Write a generated instance.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Check an ordering against an instance.
    Verify(VerifyArgs),
    /// Run a set of solvers over a corpus and emit CSV.
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
struct SolverFlags {
    /// Largest n handed to the exact oracle.
    #[arg(long, default_value_t = 24)]
    max_n: usize,
    /// Refuse the feedback-edge solver above this feedback edge number.
    #[arg(long, default_value_t = 20)]
    fes_max_k: usize,
    /// Under `--algo auto`, deletion-set certificates above this size
    /// defer to the oracle whenever it can run.
    #[arg(long, default_value_t = 3)]
    max_k: usize,
    /// Under `--algo auto`, search for a structural certificate when the
    /// instance carries none.
    #[arg(long)]
    find_certificate: bool,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

impl SolverFlags {
    fn limits(&self) -> Limits {
        Limits {
            max_n: self.max_n,
            fes_max_k: self.fes_max_k,
            max_k: self.max_k,
            find_certificate: self.find_certificate,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Expect {
    Yes,
    No,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file, or `-` for stdin.
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    algo: Algo,
    /// Exit 1 unless feasibility matches.
    #[arg(long, value_enum)]
    expect: Option<Expect>,
    /// Re-solve with the oracle and exit 3 on disagreement.
    #[arg(long)]
    verify_with_oracle: bool,
    /// Report `elapsed_ms` as null so output bytes are reproducible.
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    flags: SolverFlags,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathShape {
    Path,
    Modules,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliqueShape {
    Clique,
    ClusterModules,
}

#[derive(Args)]
struct McpArgs {
    /// Number of colour classes.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
    k: u64,
    /// Vertices per colour class.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
    q: u64,
    /// Probability of each cross-class edge.
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Add a random multicolored clique.
    #[arg(long)]
    plant: bool,
}

impl McpArgs {
    fn seed_instance(&self) -> McpInstance {
        McpInstance::random(self.k as usize, self.q as usize, self.density, self.plant, self.seed)
    }
}

#[derive(Subcommand)]
enum GenKind {
    /// Gadget with small distance to a path or to path modules.
    McpD2p {
        #[command(flatten)]
        seed: McpArgs,
        #[arg(long, value_enum, default_value_t = PathShape::Path)]
        variant: PathShape,
        #[command(flatten)]
        out: OutArg,
    },
    /// Gadget with small distance to a clique or to cluster modules.
    McpD2c {
        #[command(flatten)]
        seed: McpArgs,
        #[arg(long, value_enum, default_value_t = CliqueShape::Clique)]
        variant: CliqueShape,
        #[command(flatten)]
        out: OutArg,
    },
    /// Gadget whose edges are covered by three cliques.
    Ecc {
        /// Size of each side of the alternating sequence.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=4096))]
        n: u64,
        /// JSON list of `[i, j]` pairs meaning a_i before b_j.
        #[arg(long, conflicts_with_all = ["density", "seed"])]
        constraints_file: Option<PathBuf>,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Uniform random graph with random precedence constraints.
    Gnp {
        #[arg(long)]
        n: usize,
        /// Edge probability.
        #[arg(long)]
        p: f64,
        /// Number of precedence constraints.
        #[arg(long, default_value_t = 0)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Weight edges uniformly in `0..=max_weight` and ask for a minimum.
        #[arg(long)]
        max_weight: Option<u64>,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args)]
struct OutArg {
    /// Output file (default stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    instance: PathBuf,
    /// Comma-separated vertex ids.
    #[arg(long, value_delimiter = ',', required_unless_present = "solution", conflicts_with = "solution")]
    order: Option<Vec<usize>>,
    /// JSON document with an `order` field, such as `solve` output.
    #[arg(long)]
    solution: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance files or directories of `*.json` files.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Solvers to run on every instance.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "auto")]
    algos: Vec<Algo>,
    /// CSV destination (default stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Fill `verdict_matches_oracle` where the oracle can run.
    #[arg(long)]
    verify_with_oracle: bool,
    #[command(flatten)]
    flags: SolverFlags,
}

/// A failure carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: EXIT_PRECONDITION, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_PRECONDITION, message: format!("{}: {e}", path.display()) }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map_err(|e| io_failure(path, e))?;
        return Ok(buf);
    }
    std::fs::read(path).map_err(|e| io_failure(path, e))
}

fn load(path: &Path) -> Result<Instance, Failure> {
    read_instance(&read_bytes(path)?).map_err(|e| Failure {
        code: EXIT_PRECONDITION,
        message: format!("{}: {e}", path.display()),
    })
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, bytes).map_err(|e| io_failure(path, e)),
        None => std::io::stdout().write_all(bytes).map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

fn json_line(value: &Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec(value).expect("JSON values always serialize");
    bytes.push(b'\n');
    bytes
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| Failure {
        code: EXIT_PRECONDITION,
        message: format!("thread pool: {e}"),
    })
}

fn cmd_solve(args: SolveArgs) -> Result<u8, Failure> {
    let inst = load(&args.instance)?;
    let limits = args.flags.limits();
    let pool = thread_pool(args.flags.jobs)?;
    let run = pool.install(|| solve::run(&inst, args.algo, &limits))?;
    let sol = run.solution.as_ref();
    let mut doc = json!({
        "feasible": sol.is_some(),
        "order": sol.map(|s| s.order.clone()),
        "cost": sol.map(|s| s.cost),
        "algo": run.algo.name(),
        "elapsed_ms": if args.no_timing { None } else { Some(run.elapsed_ms) },
    });
    let mut code = 0;
    if args.verify_with_oracle {
        let verdict = solve::matches_oracle(&inst, &run.solution, args.flags.max_n)?;
        doc["verdict_matches_oracle"] = json!(verdict);
        if verdict == Some(false) {
            code = EXIT_ORACLE_DISAGREES;
        }
    }
    emit(None, &json_line(&doc))?;
    if code == 0 {
        let wanted = args.expect.map(|e| matches!(e, Expect::Yes));
        if wanted.is_some_and(|w| w != sol.is_some()) {
            code = EXIT_MISMATCH;
        }
    }
    Ok(code)
}

fn read_alep_pairs(path: &Path) -> Result<Vec<(usize, usize)>, Failure> {
    serde_json::from_slice(&read_bytes(path)?).map_err(|e| Failure {
        code: EXIT_PRECONDITION,
        message: format!("{}: expected a list of [i, j] pairs: {e}", path.display()),
    })
}

fn cmd_gen(kind: GenKind) -> Result<u8, Failure> {
    let (inst, out) = match kind {
        GenKind::McpD2p { seed, variant, out } => {
            let shape = match variant {
                PathShape::Path => PathVariant::Path,
                PathShape::Modules => PathVariant::Modules,
            };
            (gen_w1_d2p(&seed.seed_instance(), shape), out)
        }
        GenKind::McpD2c { seed, variant, out } => {
            let shape = match variant {
                CliqueShape::Clique => CliqueVariant::Clique,
                CliqueShape::ClusterModules => CliqueVariant::ClusterModules,
            };
            (gen_w1_d2c(&seed.seed_instance(), shape), out)
        }
        GenKind::Ecc { n, constraints_file, density, seed, out } => {
            let n = n as usize;
            let alep = match constraints_file {
                Some(path) => AlepInstance::new(n, &read_alep_pairs(&path)?)?,
                None => AlepInstance::random(n, density, seed),
            };
            (gen_ecc(&alep), out)
        }
        GenKind::Gnp { n, p, d, seed, max_weight, out } => (gen_gnp(n, p, d, max_weight, seed), out),
    };
    emit(out.output.as_deref(), &write_instance(&inst))?;
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let inst = load(&args.instance)?;
    let order = match (args.order, args.solution) {
        (Some(order), _) => order,
        (None, Some(path)) => {
            let doc: Value = serde_json::from_slice(&read_bytes(&path)?)
                .map_err(|e| Failure { code: EXIT_PRECONDITION, message: format!("{}: {e}", path.display()) })?;
            serde_json::from_value(doc["order"].clone()).map_err(|_| Failure {
                code: EXIT_PRECONDITION,
                message: format!("{}: no order array", path.display()),
            })?
        }
        (None, None) => unreachable!("clap requires one of --order and --solution"),
    };
    let report = validate_solution(&inst, &order);
    let valid = report.is_valid();
    let mut doc = serde_json::to_value(&report).expect("reports serialize");
    doc["valid"] = json!(valid);
    emit(None, &json_line(&doc))?;
    Ok(if valid { 0 } else { EXIT_MISMATCH })
}

fn run() -> Result<u8, Failure> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return Ok(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Gen { kind } => cmd_gen(kind),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => bench::cmd_bench(args),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("pohp: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
