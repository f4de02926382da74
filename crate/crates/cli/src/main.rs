use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::{CliError, Settings};

/// Divides, their link diagrams and link invariants.
#[derive(Debug, Parser)]
#[command(name = "divide", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Perturbation size for non-generic input, e.g. 1/4096 or 0.001.
    #[arg(long, global = true, default_value = "1/4096", value_parser = positive_rational)]
    epsilon: divide_core::Rational,
    /// Distance between the disk and the mirror line.
    #[arg(long, global = true, default_value = "1/2", value_parser = positive_rational)]
    mirror_gap: divide_core::Rational,
    #[arg(long, global = true, default_value_t = divide_core::invariants::DEFAULT_JONES_CAP,
          value_parser = positive_count)]
    jones_cap: usize,
    #[arg(long, global = true, default_value_t = divide_core::invariants::DEFAULT_CONWAY_CAP,
          value_parser = positive_count)]
    conway_cap: usize,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
}

fn positive_rational(s: &str) -> Result<divide_core::Rational, String> {
    let v = divide_core::dsl::parse_rational(s).map_err(|e| e.to_string())?;
    if v > divide_core::geometry::zero() {
        Ok(v)
    } else {
        Err("must be positive".into())
    }
}

fn positive_count(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a file is a valid divide and report genericity.
    Validate { file: PathBuf },
    /// Describe branches, double points and vertical tangencies.
    Info { file: PathBuf },
    /// Jitter vertices until the divide is generic.
    Perturb {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the link diagram.
    Diagram {
        file: PathBuf,
        #[arg(long)]
        pd: bool,
        #[arg(long)]
        gauss: bool,
        /// Write the diagram as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the divide itself as SVG.
        #[arg(long)]
        divide_svg: Option<PathBuf>,
        /// Label crossings and critical points in SVG output.
        #[arg(long)]
        labels: bool,
        #[arg(long, default_value_t = 480)]
        canvas: u32,
    },
    /// Compute link invariants; all of them when no flag is given.
    Invariants {
        file: PathBuf,
        #[arg(long)]
        alexander: bool,
        #[arg(long)]
        conway: bool,
        #[arg(long)]
        jones: bool,
        #[arg(long)]
        linking: bool,
        #[arg(long)]
        all: bool,
    },
    /// Generate a divide.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Check the crossing convention and the reflection symmetry.
    Selftest {
        #[arg(long, hide = true)]
        invert_convention: bool,
    },
}

#[derive(Debug, Subcommand)]
enum GenKind {
    /// Chebyshev divide of x^p - y^q.
    Torus {
        p: u32,
        q: u32,
        #[arg(long)]
        samples: Option<u32>,
    },
    /// A divide from the built-in corpus.
    Example { name: String },
    /// Random generic divide with the given number of open branches.
    Random {
        branches: usize,
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let settings = Settings {
        seed: g.seed,
        epsilon: g.epsilon.clone(),
        mirror_gap: g.mirror_gap.clone(),
        jones_cap: g.jones_cap,
        conway_cap: g.conway_cap,
    };
    let result = match cli.command {
        Command::Validate { file } => commands::validate(&file),
        Command::Info { file } => commands::info(&file),
        Command::Perturb { file, output } => commands::perturb(&settings, &file, output.as_deref()),
        Command::Diagram { file, pd, gauss, svg, divide_svg, labels, canvas } => {
            let out = commands::DiagramOutputs { pd, gauss, svg, divide_svg, labels, canvas };
            commands::diagram(&settings, &file, &out)
        }
        Command::Invariants { file, alexander, conway, jones, linking, all } => {
            let none = !(alexander || conway || jones || linking);
            let which = commands::Which {
                alexander: alexander || all || none,
                conway: conway || all || none,
                jones: jones || all || none,
                linking: linking || all || none,
                strict: !(all || none),
            };
            commands::invariants(&settings, &file, &which)
        }
        Command::Gen { kind, output } => {
            let kind = match kind {
                GenKind::Torus { p, q, samples } => commands::Gen::Torus { p, q, samples },
                GenKind::Example { name } => commands::Gen::Example(name),
                GenKind::Random { branches, max_vertices } => commands::Gen::Random { branches, max_vertices },
            };
            commands::generate(&settings, &kind, output.as_deref())
        }
        Command::Selftest { invert_convention } => commands::selftest(invert_convention),
    };
    match result {
        Ok(report) => {
            report.print(g.json);
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if g.json {
                println!("{}", serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } }));
            }
            ExitCode::from(e.exit_code())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Read(..) | CliError::Parse(_) => 2,
            CliError::ResourceLimit(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}
