use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use reldual_cli::commands::{self, Format, Outcome};
use reldual_cli::error::InputError;
use reldual_cli::workspace::{parse_str, Config, Workspace};

#[derive(Parser)]
#[command(name = "reldual", version, about = "Finite relational duality toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    caps: Caps,
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: FormatArg,
    /// Include wall-clock milliseconds in reports.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Args)]
struct Caps {
    #[arg(long, global = true)]
    cap_sets: Option<usize>,
    #[arg(long, global = true)]
    cap_posets: Option<usize>,
    #[arg(long, global = true)]
    cap_pairs: Option<usize>,
    #[arg(long, global = true)]
    cap_tensor: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

impl Caps {
    fn apply(&self, mut c: Config) -> Config {
        if let Some(v) = self.cap_sets {
            c.cap_sets = v;
        }
        if let Some(v) = self.cap_posets {
            c.cap_posets = v;
        }
        if let Some(v) = self.cap_pairs {
            c.cap_pairs = v;
        }
        if let Some(v) = self.cap_tensor {
            c.cap_tensor = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if self.jobs.is_some() {
            c.jobs = self.jobs;
        }
        c
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a workspace and print it in canonical form.
    Validate { file: String },
    /// Dual of a relation through a package, or relation of a hemimorphism.
    Dualize {
        file: String,
        name: String,
        #[arg(long, default_value = "specrel_dlat")]
        package: String,
    },
    /// Points of a lattice, or the spectral relation of a map.
    Spectrum { file: String, name: String },
    /// Relational composite `r ; s`.
    Compose { file: String, r: String, s: String },
    /// Product of two spaces, or pairing/copairing of two relations.
    Product { file: String, a: String, b: String },
    /// Tensor of spaces, relations or lattices.
    Tensor { file: String, a: String, b: String },
    /// Factor a bimorphism through the tensor.
    Factor { file: String, name: String },
    /// Relational properties of a relation, optionally jointly with another.
    Props {
        file: String,
        r: String,
        s: Option<String>,
    },
    /// Translate between coalgebras and operator algebras.
    Coalg { file: String, name: String },
    /// Run a check suite: monad-laws, duality, monoidal, dictionary or all.
    Check {
        suite: String,
        /// Workspace whose config supplies the caps.
        #[arg(long)]
        config: Option<String>,
    },
    /// Render a binding.
    Render { file: String, name: String },
    /// List sets, posets or lattices up to a size.
    Enumerate { kind: String, n: usize },
}

fn read(path: &str) -> Result<String, InputError> {
    let mut s = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| InputError::Usage(format!("{path}: {e}")))?;
    Ok(s)
}

fn load(path: &str) -> Result<Workspace, InputError> {
    parse_str(&read(path)?)
}

fn run(cli: &Cli) -> Result<Outcome, InputError> {
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Dot => Format::Dot,
    };
    if matches!(format, Format::Dot) && !matches!(cli.command, Command::Render { .. }) {
        return Err(InputError::Usage("--format dot only applies to render".into()));
    }
    match &cli.command {
        Command::Validate { file } => Ok(commands::validate(&load(file)?)),
        Command::Dualize { file, name, package } => commands::dualize(&load(file)?, name, package),
        Command::Spectrum { file, name } => commands::spectrum_of(&load(file)?, name),
        Command::Compose { file, r, s } => commands::compose(&load(file)?, r, s),
        Command::Product { file, a, b } => commands::product(&load(file)?, a, b),
        Command::Tensor { file, a, b } => commands::tensor(&load(file)?, a, b),
        Command::Factor { file, name } => commands::factor(&load(file)?, name),
        Command::Props { file, r, s } => commands::props(&load(file)?, r, s.as_deref()),
        Command::Coalg { file, name } => commands::coalg(&load(file)?, name),
        Command::Check { suite, config } => {
            let base = match config {
                Some(f) => load(f)?.config,
                None => Config::default(),
            };
            commands::check(suite, &cli.caps.apply(base), cli.timings)
        }
        Command::Render { file, name } => commands::render_binding(&load(file)?, name, format),
        Command::Enumerate { kind, n } => commands::enumerate(kind, *n),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
