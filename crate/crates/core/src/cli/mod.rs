//! The `rcmix` command line.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for bad
//! input, 3 when a size guard refuses the graph.

mod commands;
mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::chains::ChainKind;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::guards::Guards;
use crate::measures::Params;
use crate::rational::parse_rational;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "rcmix",
    version,
    about = "Exact checks and samplers for the Ising, random-cluster and worm models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run every applicable exact check on one graph
    Verify(VerifyArgs),
    /// Exact partition functions and measures
    Exact(ExactArgs),
    /// Run a chain and print its final state, trace or histogram
    Sample(SampleArgs),
    /// Exact mixing times against the upper bounds
    Mix(MixArgs),
    /// Congestion of the lifted flow, or the worm path certificates
    Congestion(CongestionArgs),
    /// Autocorrelation of the single-bond and Swendsen-Wang chains
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Rc,
    Worm,
}

/// Exactly one of `--beta` and `--p`.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct ParamArgs {
    /// Ising inverse-temperature parameter β > 1
    #[arg(long)]
    pub beta: Option<String>,
    /// Random-cluster edge probability p_rc in (0, 1]
    #[arg(long)]
    pub p: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct RunSpec {
    /// Graph file: a header `n m` then one `u v` line per edge
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    pub param: ParamArgs,
    /// Cluster weight
    #[arg(long, default_value = "2")]
    pub q: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest edge count allowed for enumeration
    #[arg(long = "guard-m")]
    pub guard_m: Option<usize>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub spec: RunSpec,
    /// Mixing-time tolerance; repeat for several
    #[arg(long, default_value = "1/4")]
    pub eps: Vec<String>,
}

#[derive(Args, Debug)]
pub struct ExactArgs {
    #[command(flatten)]
    pub spec: RunSpec,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub spec: RunSpec,
    #[arg(long, value_enum, default_value_t = ChainKind::Rc)]
    pub chain: ChainKind,
    /// Transitions to run (the burn-in when --samples is given)
    #[arg(long, default_value_t = 0)]
    pub steps: u64,
    /// Collect this many states into a histogram
    #[arg(long)]
    pub samples: Option<u64>,
    /// Transitions between recorded samples
    #[arg(long, default_value_t = 1)]
    pub thinning: u64,
    /// Emit one record per transition
    #[arg(long)]
    pub trace: bool,
    /// Lift worm states to random-cluster states before recording them
    #[arg(long)]
    pub lift: bool,
}

#[derive(Args, Debug)]
pub struct MixArgs {
    #[command(flatten)]
    pub spec: RunSpec,
    #[arg(long, value_enum, default_value_t = ChainKind::Rc)]
    pub chain: ChainKind,
    /// Mixing-time tolerance; repeat for several
    #[arg(long, default_value = "1/4")]
    pub eps: Vec<String>,
}

#[derive(Args, Debug)]
pub struct CongestionArgs {
    #[command(flatten)]
    pub spec: RunSpec,
    #[arg(long, value_enum, default_value_t = Family::Rc)]
    pub family: Family,
    /// Also write every transition to this CSV file
    #[arg(long)]
    pub transitions_csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub spec: RunSpec,
    #[arg(long, default_value_t = 20_000)]
    pub steps: u64,
    #[arg(long, default_value_t = 50)]
    pub max_lag: usize,
}

/// A finished command: its report text and whether every check passed.
pub struct Output {
    pub text: String,
    pub pass: bool,
}

/// Everything a command needs about its input.
pub struct Loaded {
    pub name: String,
    pub graph: Graph,
    pub params: Params,
    pub guards: Guards,
}

impl RunSpec {
    pub fn load(&self) -> Result<Loaded> {
        let text = std::fs::read_to_string(&self.graph)?;
        let graph = Graph::parse(&text)?;
        let n = graph.vertex_count();
        let params = match (&self.param.beta, &self.param.p) {
            (Some(b), None) => Params::from_beta(parse_rational(b)?, n)?,
            (None, Some(p)) => Params::from_p_rc(parse_rational(p)?, n)?,
            _ => unreachable!("clap enforces exactly one of --beta and --p"),
        };
        let params = params.with_q(parse_rational(&self.q)?)?;
        let mut guards = Guards::default();
        if let Some(m) = self.guard_m {
            guards = guards.with_max_edges(m);
        }
        guards.check_enumeration(&graph)?;
        let name = self
            .graph
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "graph".into());
        Ok(Loaded {
            name,
            graph,
            params,
            guards,
        })
    }
}

fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Verify(a) => verify::cmd_verify(a),
        Command::Exact(a) => commands::cmd_exact(a),
        Command::Sample(a) => commands::cmd_sample(a),
        Command::Mix(a) => commands::cmd_mix(a),
        Command::Congestion(a) => commands::cmd_congestion(a),
        Command::Bench(a) => commands::cmd_bench(a),
    }
}

fn spec_of(cli: &Cli) -> &RunSpec {
    match &cli.command {
        Command::Verify(a) => &a.spec,
        Command::Exact(a) => &a.spec,
        Command::Sample(a) => &a.spec,
        Command::Mix(a) => &a.spec,
        Command::Congestion(a) => &a.spec,
        Command::Bench(a) => &a.spec,
    }
}

fn exit_code(err: &Error) -> i32 {
    if err.is_guard() {
        EXIT_GUARD
    } else {
        EXIT_INPUT
    }
}

/// Parse arguments, run, write the report, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
        }
    };
    let output = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &spec_of(&cli).out {
        Some(path) => std::fs::write(path, &output.text),
        None => std::io::stdout().lock().write_all(output.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    if output.pass {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    }
}
