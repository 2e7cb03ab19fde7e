//! The `symlab` command line: argument definitions, dispatch, reports.

mod commands;
mod experiment;
mod report;
pub mod spec;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::boolfn::BoolFnError;
use crate::oracles::OracleError;
use crate::perm::PermError;
use crate::shuffle::SimError;
use crate::transforms::TransformError;

pub use experiment::{ExperimentSpec, ExperimentStep};
pub use report::{input_digest, Report};
pub use spec::{parse_fn, parse_group, FnSpec, SpecContext};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{name}: {message}")]
    Domain { name: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain { .. } => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Domain { name, .. } => name,
        }
    }
}

macro_rules! domain_error {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain { name: e.name(), message: e.to_string() }
            }
        })*
    };
}

domain_error!(PermError, BoolFnError, TransformError, SimError, OracleError);

#[derive(Parser, Debug, Clone)]
#[command(name = "symlab", version, about = "Group actions, shuffle simulation and query-complexity oracles")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// RNG seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Solve every LP in exact rational arithmetic.
    #[arg(long, global = true, conflicts_with = "float")]
    pub exact: bool,
    /// Solve LPs in floating point first (certificates are still exact).
    #[arg(long, global = true)]
    pub float: bool,
    /// Enumeration cap for closures, domains and monomial bases.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Build and inspect permutation group actions.
    Group {
        #[command(subcommand)]
        op: GroupOp,
    },
    /// Zoo functions: tabulate, evaluate, check symmetry.
    #[command(name = "fn")]
    Func {
        #[command(subcommand)]
        op: FnOp,
    },
    /// Run the shuffle simulation on sampled promise inputs.
    Simulate(SimulateArgs),
    /// Run a reduction between distinguishers and count queries.
    Reduce {
        #[command(subcommand)]
        op: ReduceOp,
    },
    /// Approximate degree by LP, with an exact certificate.
    Degree(DegreeArgs),
    /// Deterministic and distributional decision-tree complexity.
    Dtree(DtreeArgs),
    /// Lower-bound proxy for the cost of distinguishing G from small-range maps.
    Costproxy(CostArgs),
    /// Hard input distributions from LP duality or the tree DP.
    Harddist(HardArgs),
    /// Run a scripted list of steps.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GroupArg {
    #[arg(long)]
    pub group: String,
}

#[derive(Subcommand, Debug, Clone)]
pub enum GroupOp {
    Build(GroupArg),
    Inspect(GroupArg),
    Order(GroupArg),
    Orbits(GroupArg),
    Transitivity {
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: usize,
    },
    /// Pr[π(from) = to] for π uniform in G, against the symmetric group.
    Tupleprob {
        #[arg(long)]
        group: String,
        /// 1-indexed points, `.`-separated.
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum FnOp {
    Zoo {
        #[arg(long = "fn")]
        func: String,
    },
    Eval {
        #[arg(long = "fn")]
        func: String,
        #[arg(long)]
        input: String,
    },
    Symcheck {
        #[arg(long = "fn")]
        func: String,
        /// Defaults to the position group the zoo claims for the function.
        #[arg(long)]
        group: Option<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimMode {
    UniformBalanced,
    LpDual,
    Bijection,
}

#[derive(Args, Debug, Clone)]
pub struct SimulateArgs {
    #[arg(long = "fn")]
    pub func: String,
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long = "range")]
    pub range: usize,
    #[arg(long, value_enum, default_value_t = SimMode::UniformBalanced)]
    pub mode: SimMode,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Fixed input; otherwise each trial draws a uniform promise input.
    #[arg(long)]
    pub input: Option<String>,
    /// Degree of the LP whose dual feeds `lp-dual` mode.
    #[arg(long, default_value_t = 1)]
    pub budget: usize,
    /// Write the last trial's query transcript (JSON lines).
    #[arg(long)]
    pub transcript: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ReduceCommon {
    /// Queries made by the scripted inner distinguisher.
    #[arg(long, default_value_t = 2)]
    pub queries: usize,
    /// Outer input word; defaults to a random member of the group.
    #[arg(long)]
    pub input: Option<String>,
    /// Also run the reduction of a membership tester over members of G.
    #[arg(long)]
    pub check_membership: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideArg {
    First,
    Second,
}

#[derive(Subcommand, Debug, Clone)]
pub enum ReduceOp {
    Power {
        #[arg(long)]
        group: String,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        common: ReduceCommon,
    },
    Quotient {
        #[arg(long)]
        group: String,
        /// `1.2|3.4`, or `pairs` / `sets` for tuple encodings.
        #[arg(long)]
        blocks: String,
        #[command(flatten)]
        common: ReduceCommon,
    },
    Restrict {
        #[arg(long)]
        group: String,
        #[arg(long)]
        set: String,
        #[command(flatten)]
        common: ReduceCommon,
    },
    Product {
        #[arg(long)]
        group: String,
        #[arg(long)]
        other: String,
        #[arg(long, value_enum, default_value_t = SideArg::First)]
        side: SideArg,
        /// Fixed word for the other factor; defaults to a random member.
        #[arg(long)]
        fixed: Option<String>,
        #[command(flatten)]
        common: ReduceCommon,
    },
    Merge {
        #[arg(long)]
        group: String,
        #[arg(long)]
        with: String,
        #[command(flatten)]
        common: ReduceCommon,
    },
}

#[derive(Args, Debug, Clone)]
pub struct DegreeArgs {
    #[arg(long = "fn")]
    pub func: String,
    #[arg(long, default_value = "1/3")]
    pub eps: String,
    /// Constrain the polynomial on promise inputs only.
    #[arg(long)]
    pub promise_only: bool,
    /// Solve the full LP without symmetry reduction.
    #[arg(long)]
    pub no_sym: bool,
    /// Report the optimal error at this degree instead of searching.
    #[arg(long)]
    pub at: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct DtreeArgs {
    #[arg(long = "fn")]
    pub func: String,
    /// Error target for distributional complexity.
    #[arg(long)]
    pub eps: Option<String>,
    /// Report the least error of depth-k trees.
    #[arg(long)]
    pub depth: Option<usize>,
    /// `uniform` (over the promise) or `file:PATH` with `[["input","weight"],…]`.
    #[arg(long, default_value = "uniform")]
    pub dist: String,
}

#[derive(Args, Debug, Clone)]
pub struct CostArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub r: usize,
    /// Sweep r up to this value (inclusive).
    #[arg(long)]
    pub r_max: Option<usize>,
    #[arg(long, default_value = "1/3")]
    pub eps: String,
    #[arg(long)]
    pub promise_only: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum HardKind {
    Poly,
    Dp,
}

#[derive(Args, Debug, Clone)]
pub struct HardArgs {
    #[arg(long = "fn")]
    pub func: String,
    #[arg(long)]
    pub budget: usize,
    #[arg(long, value_enum, default_value_t = HardKind::Poly)]
    pub kind: HardKind,
    #[arg(long, default_value_t = 200)]
    pub iterations: usize,
    #[arg(long)]
    pub promise_only: bool,
    #[arg(long)]
    pub no_sym: bool,
}

#[derive(Args, Debug, Clone)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Run steps on separate threads; reports keep step order.
    #[arg(long)]
    pub parallel: bool,
}

/// Parses `argv` (program name first) and produces the report, without
/// writing it anywhere.
pub fn report_for<I, S>(argv: I) -> Result<Report, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&argv).map_err(|e| CliError::Usage(e.to_string()))?;
    build_report(&cli, &argv[1..])
}

fn build_report(cli: &Cli, args: &[String]) -> Result<Report, CliError> {
    let mut ctx = SpecContext::new(cli.global.cap.unwrap_or(crate::transforms::DEFAULT_DOMAIN_CAP));
    let (command, result, failure) = commands::execute(cli, &mut ctx)?;
    Ok(Report {
        command,
        args: args.to_vec(),
        global: cli.global.clone(),
        digest: input_digest(args, &ctx.files),
        result,
        failure,
    })
}

fn emit(report: &Report, global: &GlobalOpts) -> Result<(), CliError> {
    let text = report.render(global.format)?;
    // an experiment file may name its own report path
    let spec_out = report.result.get("out").and_then(|v| v.as_str()).map(PathBuf::from);
    let out = global.out.clone().or(spec_out.filter(|_| report.command == "experiment"));
    match &out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
            }
            fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Entry point for the binary.
pub fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = build_report(&cli, &argv[1..]).and_then(|report| {
        emit(&report, &cli.global)?;
        Ok(report.failure)
    });
    match outcome {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(e)) | Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
