use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ringseq::primitivity::DEFAULT_BUDGET;
use ringseq::SearchConstraint;

mod commands;
mod examples;
mod output;

use output::Output;

#[derive(Parser, Debug)]
#[command(name = "ringseq", version, about = "Trace sequences over Galois rings and their compressing maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify polynomials: primitive, strongly primitive, delta_bar^2 outside F_p.
    #[command(subcommand)]
    Primitive(PrimitiveCmd),
    /// Trace sequences s_alpha(t) = tr(alpha eta^t).
    #[command(subcommand)]
    Seq(SeqCmd),
    /// Compressing maps R -> {0, ..., k-1}.
    #[command(subcommand)]
    Map(MapCmd),
    /// Equivalence closure of the pair relation of s_alpha and s_beta.
    Partition,
    /// Recompute a worked example and compare against its known values.
    Examples {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
    },
}

#[derive(Subcommand, Debug)]
enum PrimitiveCmd {
    /// Analyze --poly over Z/p^e.
    Check,
    /// First degree-n polynomial meeting --constraint.
    Search,
    /// Enumerate all monic degree-n polynomials and compare with the closed forms.
    Count,
}

#[derive(Subcommand, Debug)]
enum SeqCmd {
    /// One period of s_alpha.
    Gen,
    /// The set of values taken by s_alpha.
    Values,
    /// The common period of the sequence family.
    Period,
}

#[derive(Subcommand, Debug)]
enum MapCmd {
    /// Parse --map and print its table (`--map random` draws one from --seed).
    Build,
    /// Decide whether the compression by --map is injective.
    Check,
    /// Which failure statements hold for a non-injective map.
    Classify,
    /// Count injective maps onto an alphabet of size --alphabet.
    Census,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Odd prime p.
    #[arg(short = 'p', global = true)]
    pub p: Option<u64>,
    /// Exponent e >= 2 of R = Z/p^e.
    #[arg(short = 'e', global = true)]
    pub e: Option<u32>,
    /// Polynomial degree.
    #[arg(short = 'n', global = true)]
    pub n: Option<u32>,
    /// Monic polynomial, coefficients highest degree first, e.g. 1,1,-1.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// Element of O, coefficients of eta highest power first, e.g. 3,13.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// `t:v0,v1,...`, `mod:M`, a polynomial in x0..x{e-1}, or `random`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub map: Option<String>,
    #[arg(long, global = true)]
    pub alphabet: Option<u32>,
    #[arg(long, global = true)]
    pub level: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// primitive | strongly-primitive | delta-sq-outside
    #[arg(long, global = true, default_value = "primitive")]
    pub constraint: SearchConstraint,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] ringseq::Error),
    #[error("missing required option {0}")]
    Missing(&'static str),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Lib(ringseq::Error::BudgetExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let o = &cli.opts;
    match &cli.command {
        Command::Primitive(PrimitiveCmd::Check) => commands::primitive_check(o),
        Command::Primitive(PrimitiveCmd::Search) => commands::primitive_search(o),
        Command::Primitive(PrimitiveCmd::Count) => commands::primitive_count(o),
        Command::Seq(SeqCmd::Gen) => commands::seq_gen(o),
        Command::Seq(SeqCmd::Values) => commands::seq_values(o),
        Command::Seq(SeqCmd::Period) => commands::seq_period(o),
        Command::Map(MapCmd::Build) => commands::map_build(o),
        Command::Map(MapCmd::Check) => commands::map_check(o),
        Command::Map(MapCmd::Classify) => commands::map_classify(o),
        Command::Map(MapCmd::Census) => commands::map_census(o),
        Command::Partition => commands::partition(o),
        Command::Examples { which } => examples::run(*which),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.opts.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(CliError::from)
            .and_then(|pool| pool.install(|| run(&cli))),
        None => run(&cli),
    };
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.render(cli.opts.format).as_bytes());
            ExitCode::from(out.exit_code())
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
