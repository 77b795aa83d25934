mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use jpa_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "jpa",
    version,
    about = "Exact Jacobi-Perron expansions, unit families and root analytics"
)]
pub struct Cli {
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Add wall_ms to records (makes output files non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    /// Print machine-readable JSON instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand a vector of field elements.
    Expand(ExpandArgs),
    /// Unit families built from linear recurrences.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Resumable JSONL scans.
    #[command(subcommand)]
    Scan(ScanCommand),
    /// Root-location report for a monic integer polynomial.
    Analyze(AnalyzeArgs),
    /// Predicted unit of a family, checked against the expansion.
    Unit(UnitArgs),
}

#[derive(Args, Debug)]
struct ExpandArgs {
    /// Defining polynomial, coefficients c0,c1,...,cn (ascending, monic).
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// Elements separated by ';', each as coefficients in powers of the root.
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    /// Append the record to this JSONL file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    t: u64,
    /// c0,...,c_{n-1}.
    #[arg(long, value_delimiter = ',')]
    c: Vec<u64>,
}

#[derive(Subcommand, Debug)]
enum FamilyCommand {
    /// Expand one family member and check every prediction.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
    },
    /// Verify a parameter grid; exit 0 iff every case passes.
    Grid(GridArgs),
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 5)]
    n_max: usize,
    #[arg(long, default_value_t = 5)]
    m_span: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2,7")]
    t: Vec<u64>,
    #[arg(long, default_value_t = 3)]
    c_max: u64,
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    /// Write one JSONL record per case.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ScanCommand {
    /// Expansions of (m^(1/n), ..., m^((n-1)/n)) for m in from..=to.
    Nthroot {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[command(flatten)]
        sink: SinkArgs,
    },
    /// Cube roots of m = x^3 - x for x in x_from..=x_to.
    Conjecture {
        #[arg(long)]
        x_from: u64,
        #[arg(long)]
        x_to: u64,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[command(flatten)]
        sink: SinkArgs,
    },
}

#[derive(Args, Debug)]
struct SinkArgs {
    /// JSONL output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Skip cases already recorded in --out.
    #[arg(long, requires = "out")]
    resume: bool,
    /// Digit vectors kept per record.
    #[arg(long, default_value_t = jpa_core::record::DEFAULT_DIGIT_LIMIT)]
    digit_limit: usize,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Coefficients c0,c1,...,cn (ascending, monic).
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
}

#[derive(Args, Debug)]
struct UnitArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = 1000)]
    budget: usize,
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok = 0,
    Failed = 1,
    Invalid = 2,
    ResourceLimit = 3,
}

fn exit_for(e: &Error) -> Outcome {
    match e {
        Error::ResourceLimit { .. } => Outcome::ResourceLimit,
        Error::Io(_) | Error::NotPeriodic | Error::ZeroDivisor { .. } => Outcome::Failed,
        _ => Outcome::Invalid,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(Outcome::Invalid as u8);
        }
    }
    let ctx = commands::Ctx {
        timing: cli.timing,
        json: cli.json,
    };
    let res = match cli.command {
        Command::Expand(a) => commands::expand(&ctx, &a.poly, &a.alpha, a.budget, a.out.as_deref()),
        Command::Family(FamilyCommand::Verify { family, budget }) => {
            commands::family_verify(&ctx, &family.params(), budget)
        }
        Command::Family(FamilyCommand::Grid(g)) => {
            let spec = jpa_core::families::GridSpec {
                n_min: g.n_min,
                n_max: g.n_max,
                m_span: g.m_span,
                t_values: g.t,
                c_max: g.c_max,
            };
            commands::family_grid(&ctx, &spec, g.budget, g.out.as_deref())
        }
        Command::Scan(ScanCommand::Nthroot {
            n,
            from,
            to,
            budget,
            sink,
        }) => commands::scan(&ctx, commands::ScanKind::Nthroot { n, from, to }, budget, &sink.into()),
        Command::Scan(ScanCommand::Conjecture {
            x_from,
            x_to,
            budget,
            sink,
        }) => commands::scan(
            &ctx,
            commands::ScanKind::Conjecture { from: x_from, to: x_to },
            budget,
            &sink.into(),
        ),
        Command::Analyze(a) => commands::analyze(&ctx, &a.poly),
        Command::Unit(u) => commands::unit(&ctx, &u.family.params(), u.budget),
    };
    let code = match res {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    };
    ExitCode::from(code as u8)
}

impl FamilyArgs {
    fn params(&self) -> jpa_core::families::FamilyParams {
        jpa_core::families::FamilyParams::new(self.n, self.m, self.t, &self.c)
    }
}

impl From<SinkArgs> for commands::Sink {
    fn from(s: SinkArgs) -> Self {
        commands::Sink {
            out: s.out,
            resume: s.resume,
            digit_limit: s.digit_limit,
        }
    }
}
