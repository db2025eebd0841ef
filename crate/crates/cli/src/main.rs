//! Command-line front end: parse graphs and instances, solve, compare with
//! the brute-force oracle, emit diagnostics reports, generate seeded test
//! inputs, and dump trackers.
//!
//! Exit codes: 0 solved; 1 I/O or invalid input; 2 parse or precondition
//! failure; 3 success in heuristic mode (overridden m/c); 4 budget
//! exceeded.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use linkage::diagnostics::linkage_report;
use linkage::oracle::{oracle_key_qualities_with_evidence, OracleBudget};
use linkage::random::{
    random_distinct_vertices, random_dominant_digraph, random_tournament, SplitMix64,
};
use linkage::solver::{self, SolverParams};
use linkage::tracker::build_tracker;
use linkage::{Digraph, Error, InstanceSpec, ProblemInstance};

#[derive(Parser)]
#[command(
    name = "linkage",
    version,
    about = "Vertex-disjoint directed path routing on dense digraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Graph file: first line the vertex count, then one 'u v' edge per line.
    #[arg(long)]
    graph: PathBuf,
    /// Instance file: 'k d', then k lines 's t', optional 'bounds x..'.
    #[arg(long)]
    instance: PathBuf,
}

#[derive(Args)]
struct ParamArgs {
    /// Window override: rail members get at most 2m vertices.
    #[arg(long)]
    m: Option<usize>,
    /// Confusion bound override.
    #[arg(long)]
    c: Option<usize>,
    /// Wall-clock cap in seconds for the solve.
    #[arg(long = "budget-seconds")]
    budget_seconds: Option<u64>,
}

impl ParamArgs {
    fn solver_params(&self, witness: bool) -> SolverParams {
        SolverParams {
            m: self.m,
            c: self.c,
            emit_witness: witness,
            waive_dominance_check: false,
            time_limit: self.budget_seconds.map(Duration::from_secs),
        }
    }
}

#[derive(Args)]
struct BudgetArgs {
    /// Vertex-count cap for oracle searches.
    #[arg(long = "budget-vertices", default_value_t = 10)]
    budget_vertices: usize,
    /// Wall-clock cap in seconds for oracle searches.
    #[arg(long = "budget-seconds")]
    budget_seconds: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> OracleBudget {
        OracleBudget {
            max_vertices: self.budget_vertices,
            time_limit: self.budget_seconds.map(Duration::from_secs),
            ..OracleBudget::default()
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum GenMode {
    /// Orient every pair by a fair coin; always semicomplete.
    Tournament,
    /// Rejection-sample random digraphs until one is d-path-dominant.
    Digraph,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the key qualities of an instance.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        params: ParamArgs,
        /// Also print one witness linkage per key quality.
        #[arg(long)]
        witness: bool,
        /// Write the result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether any linkage for the instance exists.
    Decide {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide existence under per-member size bounds.
    Bounded {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated bounds x_1,..,x_k; defaults to the instance
        /// file's bounds line.
        #[arg(long, value_delimiter = ',')]
        bounds: Option<Vec<u32>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve by exhaustive linkage enumeration (ground truth, exponential).
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Also print the evidence linkage per key quality.
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Acceptability reports for the oracle's evidence linkages.
    Diagnose {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a seeded random graph and instance.
    Gen {
        /// Seed for the SplitMix64 generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Vertex count.
        #[arg(long)]
        n: usize,
        /// Terminal pair count.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Domination parameter written into the instance.
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, value_enum, default_value_t = GenMode::Tournament)]
        mode: GenMode,
        /// Write '<out>.graph' and '<out>.inst' instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the instance's tracker: rails, splits and weighted edges.
    DumpTracker {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Lib(Error),
    File(PathBuf, Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::File(path, e) => write!(f, "{}: {e}", path.display()),
            Failure::Io(path, e) => write!(f, "{}: {e}", path.display()),
            Failure::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) | Failure::File(_, e) => match e {
                Error::Parse { .. } | Error::Precondition(_) => 2,
                Error::BudgetExceeded(_) => 4,
                _ => 1,
            },
            Failure::Io(..) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Lib(e)
    }
}

fn read_to_string(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load_inputs(input: &InputArgs) -> Result<(ProblemInstance, InstanceSpec), Failure> {
    let graph_text = read_to_string(&input.graph)?;
    let graph =
        Digraph::parse(&graph_text).map_err(|e| Failure::File(input.graph.clone(), e))?;
    let spec_text = read_to_string(&input.instance)?;
    let spec = InstanceSpec::parse(&spec_text)
        .map_err(|e| Failure::File(input.instance.clone(), e))?;
    let inst = ProblemInstance::from_spec(graph, &spec)
        .map_err(|e| Failure::File(input.instance.clone(), e))?;
    Ok((inst, spec))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Io(path.clone(), e))?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn log_stats(inst: &ProblemInstance, out: &solver::SolveOutput) {
    eprintln!(
        "# n={} k={} d={} m={} c={} rails={} tracker_edges={} exponent={}",
        inst.graph().vertex_count(),
        inst.k(),
        inst.d(),
        out.stats.m,
        out.stats.c,
        out.stats.rail_count,
        out.stats.tracker_edges,
        out.stats.runtime_exponent
    );
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Solve {
            input,
            params,
            witness,
            out,
        } => {
            let (inst, _) = load_inputs(&input)?;
            let solved = solver::key_qualities(&inst, &params.solver_params(witness))?;
            log_stats(&inst, &solved);
            emit(&out, &solver::format_solution(&solved))?;
            Ok(if solved.heuristic { 3 } else { 0 })
        }
        Command::Decide { input, params, out } => {
            let (inst, _) = load_inputs(&input)?;
            let solved = solver::key_qualities(&inst, &params.solver_params(false))?;
            log_stats(&inst, &solved);
            let mut text = String::new();
            if solved.heuristic {
                text.push_str(&format!(
                    "# heuristic m={} c={}\n",
                    solved.stats.m, solved.stats.c
                ));
            }
            text.push_str(if solved.key_qualities.is_empty() { "no\n" } else { "yes\n" });
            emit(&out, &text)?;
            Ok(if solved.heuristic { 3 } else { 0 })
        }
        Command::Bounded {
            input,
            params,
            bounds,
            out,
        } => {
            let (inst, spec) = load_inputs(&input)?;
            let bounds = bounds
                .or(spec.bounds)
                .ok_or_else(|| {
                    Failure::Usage(
                        "bounded needs --bounds or a bounds line in the instance file".into(),
                    )
                })?;
            if bounds.len() != inst.k() || bounds.contains(&0) {
                return Err(Failure::Usage(format!(
                    "expected {} positive bounds",
                    inst.k()
                )));
            }
            let solved = solver::key_qualities(&inst, &params.solver_params(false))?;
            log_stats(&inst, &solved);
            let target = linkage::QualityVector::new(bounds);
            let hit = solved
                .key_qualities
                .iter()
                .any(|q| linkage::pareto::dominated(q, &target).expect("arity checked"));
            let mut text = String::new();
            if solved.heuristic {
                text.push_str(&format!(
                    "# heuristic m={} c={}\n",
                    solved.stats.m, solved.stats.c
                ));
            }
            text.push_str(if hit { "yes\n" } else { "no\n" });
            emit(&out, &text)?;
            Ok(if solved.heuristic { 3 } else { 0 })
        }
        Command::Oracle {
            input,
            budget,
            witness,
            out,
        } => {
            let (inst, _) = load_inputs(&input)?;
            let solve = oracle_key_qualities_with_evidence(&inst, &budget.budget())?;
            let mut text = String::new();
            for q in solve.qualities.iter() {
                text.push_str(&format!("{q}\n"));
            }
            if witness {
                for (q, linkage) in &solve.evidence {
                    text.push_str(&format!("witness {q}\n"));
                    for member in linkage.members() {
                        text.push_str(&format!("path {member}\n"));
                    }
                }
            }
            emit(&out, &text)?;
            Ok(0)
        }
        Command::Diagnose { input, budget, out } => {
            let (inst, _) = load_inputs(&input)?;
            let budget = budget.budget();
            let solve = oracle_key_qualities_with_evidence(&inst, &budget)?;
            let mut text = format!("key qualities: {}\n", solve.qualities.len());
            for linkage in solve.evidence.values() {
                text.push('\n');
                text.push_str(&linkage_report(&inst, linkage, &budget)?);
            }
            emit(&out, &text)?;
            Ok(0)
        }
        Command::Gen {
            seed,
            n,
            k,
            d,
            mode,
            out,
        } => {
            let mut rng = SplitMix64::new(seed);
            let graph = match mode {
                GenMode::Tournament => random_tournament(n, &mut rng)?,
                GenMode::Digraph => random_dominant_digraph(n, d, 10_000, &mut rng)?,
            };
            let picks = random_distinct_vertices(n, 2 * k, &mut rng)?;
            let spec = InstanceSpec {
                d,
                terminals: (0..k).map(|i| (picks[2 * i], picks[2 * i + 1])).collect(),
                bounds: None,
            };
            // Fails fast if the drawn terminals are somehow unusable.
            ProblemInstance::from_spec(graph.clone(), &spec)?;
            match out {
                Some(prefix) => {
                    let graph_path = prefix.with_extension("graph");
                    let inst_path = prefix.with_extension("inst");
                    std::fs::write(&graph_path, graph.to_text())
                        .map_err(|e| Failure::Io(graph_path.clone(), e))?;
                    std::fs::write(&inst_path, spec.to_text())
                        .map_err(|e| Failure::Io(inst_path.clone(), e))?;
                }
                None => {
                    print!("# graph\n{}# instance\n{}", graph.to_text(), spec.to_text());
                }
            }
            Ok(0)
        }
        Command::DumpTracker { input, params, out } => {
            let (inst, _) = load_inputs(&input)?;
            let (m, c) = params.solver_params(false).effective(inst.k(), inst.d());
            let tracker = build_tracker(&inst, m, c)?;
            emit(&out, &tracker.dump())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
