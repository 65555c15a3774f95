use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use equicat::api::{self, ApiError, Output};
use equicat::checks::{SizeCaps, CHECK_IDS};
use equicat::constructions::QfMode;
use equicat::simplicial::Verdict;

/// Connectivity estimates and finite categorical models for equivariant
/// cubical diagrams. Inputs and outputs are JSON.
#[derive(Parser)]
#[command(name = "equicat", version)]
struct Cli {
    #[command(subcommand)]
    noun: Noun,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Size caps as `group=24,index=8,vertex=4,j=6`; overrides EQUICAT_SIZE_CAPS.
    #[arg(long, global = true)]
    caps: Option<String>,
}

#[derive(Args)]
struct InputArg {
    /// JSON input file, or `-` for stdin.
    #[arg(long, short, default_value = "-")]
    input: String,
}

#[derive(Subcommand)]
enum Noun {
    /// Connectivity estimates: bm, dual-bm, suspension, submanifold,
    /// configuration, holim, restriction, mapspace.
    Bounds {
        verb: String,
        #[command(flatten)]
        input: InputArg,
    },
    /// Categorical models: grothendieck, fixed-grothendieck, hom, matching.
    Build {
        verb: String,
        #[command(flatten)]
        input: InputArg,
        /// Subgroup `H` for fixed-grothendieck (default: the whole group).
        #[arg(long)]
        subgroup: Option<String>,
        /// Comma-separated index objects `U` for matching.
        #[arg(long, value_delimiter = ',')]
        units: Vec<String>,
    },
    /// Randomized checks.
    Check {
        #[command(subcommand)]
        verb: CheckVerb,
    },
    /// Equivariant Reedy quasi-fibrancy.
    Qf {
        #[command(subcommand)]
        verb: QfVerb,
    },
    /// Total-fibre models of a cube.
    Totalfiber {
        #[command(subcommand)]
        verb: TotalFiberVerb,
    },
    /// Nerve homology: nerve, equivalence.
    Homology {
        verb: String,
        #[command(flatten)]
        input: InputArg,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
    },
}

#[derive(Subcommand)]
enum CheckVerb {
    /// Run one check on `size` instances drawn from `seed`.
    Run {
        id: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        size: usize,
    },
    /// List the check ids.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Plain,
    Equivariant,
}

#[derive(Subcommand)]
enum QfVerb {
    Run {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long, value_enum, default_value_t = Mode::Equivariant)]
        mode: Mode,
    },
}

#[derive(Subcommand)]
enum TotalFiberVerb {
    Run {
        #[command(flatten)]
        input: InputArg,
        /// Index of the transformation `Φ`; all of them (up to a limit) when omitted.
        #[arg(long)]
        phi: Option<usize>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Api(#[from] ApiError),
    #[error("cannot read {0}: {1}")]
    Read(String, std::io::Error),
    #[error("cannot write {0}: {1}")]
    Write(String, std::io::Error),
    #[error(transparent)]
    Caps(#[from] equicat::checks::CheckError),
}

fn read_input(arg: &InputArg) -> Result<String, CliError> {
    if arg.input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Read("stdin".into(), e))?;
        Ok(s)
    } else {
        std::fs::read_to_string(&arg.input).map_err(|e| CliError::Read(arg.input.clone(), e))
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let caps = match &cli.caps {
        Some(s) => SizeCaps::parse(s)?,
        None => SizeCaps::from_env()?,
    };
    let out = match &cli.noun {
        Noun::Bounds { verb, input } => api::bounds(verb, &read_input(input)?, &caps)?,
        Noun::Build {
            verb,
            input,
            subgroup,
            units,
        } => api::build(verb, &read_input(input)?, subgroup.as_deref(), units, &caps)?,
        Noun::Check {
            verb: CheckVerb::Run { id, seed, size },
        } => api::check(id, *seed, *size, &caps)?,
        Noun::Check {
            verb: CheckVerb::List,
        } => Output {
            value: serde_json::json!(CHECK_IDS),
            verdict: None,
        },
        Noun::Qf {
            verb:
                QfVerb::Run {
                    input,
                    max_dim,
                    mode,
                },
        } => {
            let mode = match mode {
                Mode::Plain => QfMode::Plain,
                Mode::Equivariant => QfMode::Equivariant,
            };
            api::quasi_fibrant(&read_input(input)?, *max_dim, mode, &caps)?
        }
        Noun::Totalfiber {
            verb: TotalFiberVerb::Run { input, phi },
        } => api::total_fiber(&read_input(input)?, *phi, &caps)?,
        Noun::Homology {
            verb,
            input,
            max_dim,
        } => api::homology_cmd(verb, &read_input(input)?, *max_dim)?,
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli).and_then(|out| {
        let text = serde_json::to_string_pretty(&out.value).expect("JSON values serialize") + "\n";
        match &cli.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CliError::Write(path.display().to_string(), e))?,
            None => print!("{text}"),
        }
        Ok(out.verdict)
    });
    eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    match result {
        Ok(None | Some(Verdict::Pass)) => ExitCode::SUCCESS,
        Ok(Some(v)) => {
            eprintln!("verdict: {v:?}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
