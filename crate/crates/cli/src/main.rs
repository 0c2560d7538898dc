//! `tpplab`: group-theoretic matrix multiplication from the command line.
//!
//! Every command prints a plain-text report, or with `--json` an envelope
//! `{tool_version, command, params, results}`. Exit status is 0 on success,
//! 1 when a checked property fails, 2 on invalid input and 3 when a resource
//! cap is exceeded. `TPPLAB_THREADS` sets the worker pool size.

mod commands;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tpplab::group::DEFAULT_ENUMERATION_CAP;

use crate::commands::Output;
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "tpplab", version, about = "Triple product property toolkit for fast matrix multiplication")]
struct Cli {
    #[command(flatten)]
    settings: Settings,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgPath {
    /// Direct convolution in the group algebra.
    Naive,
    /// Character transform of an abelian group.
    Dft,
}

impl AlgPath {
    pub fn as_str(self) -> &'static str {
        match self {
            AlgPath::Naive => "naive",
            AlgPath::Dft => "dft",
        }
    }
}

#[derive(Debug, Args)]
pub struct Settings {
    /// Scalar arithmetic: exact integers or complex floating point.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,

    /// Largest accepted error in float mode.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,

    /// Largest group order that may be enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Print the JSON envelope instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

impl Settings {
    fn validate(&self) -> CliResult<()> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(CliError::Input(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.cap == 0 {
            return Err(CliError::Input("cap must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inspect a group.
    #[command(subcommand)]
    Group(GroupCmd),

    /// Check triple product properties of a triple or family file.
    #[command(subcommand)]
    Tpp(TppCmd),

    /// Build standard triples and families.
    #[command(subcommand)]
    Triple(TripleCmd),

    /// Multiply matrices through the group algebra and verify against schoolbook.
    Matmul(MatmulArgs),

    /// Exponent bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),

    /// Search a group for a large TPP triple.
    Search(SearchArgs),

    /// Reproduce the reference computations with a PASS/FAIL summary.
    #[command(subcommand)]
    Reproduce(ReproduceCmd),
}

#[derive(Debug, Subcommand)]
enum GroupCmd {
    /// Order, family and character degrees.
    Info { spec: String },
}

#[derive(Debug, Subcommand)]
enum TppCmd {
    /// TPP of a triple, or of every member of a family.
    Check {
        file: PathBuf,
        /// Overrides the group stored in the file.
        #[arg(long)]
        group: Option<String>,
    },
    /// Simultaneous TPP of a family.
    Stpp {
        file: PathBuf,
        #[arg(long)]
        group: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum TripleCmd {
    /// Axis family of two simultaneous triples in cyc(n)^3.
    Axis {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Subgroup triple in tri(n).
    Triangle {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Axis family of cyc(n)^3 lifted to cyc(n)^3 wr sym(top).
    Wreath {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        top: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct MatmulArgs {
    /// Triple or family file; a family multiplies one pair per member.
    #[arg(long)]
    triple: PathBuf,
    /// Left operand, CSV or JSON; repeat for families.
    #[arg(long = "a", required = true)]
    a: Vec<PathBuf>,
    /// Right operand, CSV or JSON; repeat for families.
    #[arg(long = "b", required = true)]
    b: Vec<PathBuf>,
    /// Product output files, format chosen by extension.
    #[arg(long)]
    out: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = AlgPath::Naive)]
    path: AlgPath,
}

#[derive(Debug, Subcommand)]
enum BoundsCmd {
    /// Triangle alpha values, or the k2 minima with --k2.
    Table {
        /// Inclusive range of n, `a..b`.
        #[arg(long)]
        triangle_alpha: Option<String>,
        /// Also report the exact ratio.
        #[arg(long)]
        exact: bool,
        /// Minima of the wreath bound for k = 1..=K2.
        #[arg(long, conflicts_with = "triangle_alpha")]
        k2: Option<u64>,
    },
    /// Minimize a closed-form bound over n.
    Minimize {
        /// One of cyc3-r1, cyc3-r2, wreath2, family, pow2-conditional.
        #[arg(long)]
        formula: String,
        /// Inclusive range of n, `a..b`.
        #[arg(long)]
        range: String,
        /// Number of permuted triples for wreath2.
        #[arg(long)]
        k: Option<u64>,
        /// Product depth for family.
        #[arg(long, conflicts_with = "k")]
        m: Option<u64>,
    },
    /// Headline bounds; --all adds the conditional and tabulated rows.
    Chapter6 {
        #[arg(long)]
        all: bool,
    },
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    group: String,
    /// Number of TPP checks allowed.
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum ReproduceCmd {
    Chapter6,
}

fn init_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("TPPLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("TPPLAB_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(format!("thread pool: {e}")))
}

fn dispatch(cli: &Cli) -> CliResult<(&'static str, Output)> {
    let s = &cli.settings;
    Ok(match &cli.command {
        Command::Group(GroupCmd::Info { spec }) => ("group info", commands::group_info(spec)?),
        Command::Tpp(TppCmd::Check { file, group }) => ("tpp check", commands::tpp_check(file, group.as_deref())?),
        Command::Tpp(TppCmd::Stpp { file, group }) => ("tpp stpp", commands::tpp_stpp(file, group.as_deref())?),
        Command::Triple(TripleCmd::Axis { n, out }) => ("triple axis", commands::triple_axis(*n, out.as_deref())?),
        Command::Triple(TripleCmd::Triangle { n, out }) => {
            ("triple triangle", commands::triple_triangle(*n, s.cap, out.as_deref())?)
        }
        Command::Triple(TripleCmd::Wreath { n, top, out }) => {
            ("triple wreath", commands::triple_wreath(*n, *top, out.as_deref())?)
        }
        Command::Matmul(m) => ("matmul", commands::matmul(s, &m.triple, &m.a, &m.b, &m.out, m.path)?),
        Command::Bounds(BoundsCmd::Table { triangle_alpha, exact, k2 }) => {
            ("bounds table", commands::bounds_table(triangle_alpha.as_deref(), *k2, *exact)?)
        }
        Command::Bounds(BoundsCmd::Minimize { formula, range, k, m }) => {
            ("bounds minimize", commands::bounds_minimize(formula, range, *k, *m)?)
        }
        Command::Bounds(BoundsCmd::Chapter6 { all }) => ("bounds chapter6", commands::bounds_chapter6(*all)?),
        Command::Search(a) => ("search", commands::search(&a.group, a.budget, s.seed, a.out.as_deref())?),
        Command::Reproduce(ReproduceCmd::Chapter6) => ("reproduce chapter6", commands::reproduce_chapter6()?),
    })
}

fn run(cli: &Cli) -> CliResult<bool> {
    cli.settings.validate()?;
    init_threads()?;
    let (command, out) = dispatch(cli)?;
    if cli.settings.json {
        let mut params = out.params;
        if let Some(obj) = params.as_object_mut() {
            obj.insert("seed".into(), cli.settings.seed.into());
            obj.insert("cap".into(), cli.settings.cap.into());
            obj.insert("mode".into(), cli.settings.mode.as_str().into());
            obj.insert("tolerance".into(), cli.settings.tolerance.into());
        }
        let env = io::Envelope {
            tool_version: io::TOOL_VERSION.to_string(),
            command: command.to_string(),
            params,
            results: out.results,
        };
        println!("{}", serde_json::to_string_pretty(&env).expect("serializable"));
    } else {
        for line in &out.lines {
            println!("{line}");
        }
    }
    Ok(out.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
