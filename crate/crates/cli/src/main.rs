use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fusion_classes::Tolerances;
use fusion_classes_cli::{commands, corpus, display, Format, Outcome, RunConfig, EXIT_INPUT};

#[derive(Parser, Debug)]
#[command(
    name = "fusion-classes",
    version,
    about = "Probability groups, characters and class algebras of fusion rings"
)]
struct Cli {
    /// Tolerance for comparing computed scalars.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_eq: f64,
    /// Tolerance for rounding to integers.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol_int: f64,
    /// Seed for the random combination used to diagonalize.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Lattice basis for integrality verdicts, e.g. "1,(1+sqrt(5))/2".
    #[arg(long, global = true)]
    lattice: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the axioms of any input file.
    Validate { path: PathBuf },
    /// Character table, codegrees, idempotents and dual constants.
    Characters { path: PathBuf },
    /// Class algebra, structure constants and integrality verdicts.
    Burnside { path: PathBuf },
    /// Subhypergroups and their quotients.
    Quotient {
        path: PathBuf,
        /// Basis indices of the subhypergroup, e.g. "0,1".
        #[arg(long, value_delimiter = ',')]
        subgroup: Option<Vec<usize>>,
    },
    /// Self-duality of a ring with modular data: RING MODULAR, or MODULAR alone
    /// when it names its ring.
    Selfdual {
        #[arg(num_args = 1..=2, required = true)]
        paths: Vec<PathBuf>,
    },
    /// Check a center pair.
    Center { path: PathBuf },
    /// Write the Drinfeld double of a group as ring, modular and center-pair files.
    Double {
        path: PathBuf,
        /// Directory for the generated files.
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
    /// Run every input file in a directory.
    Corpus {
        dir: PathBuf,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
}

fn run(cli: &Cli, cfg: &RunConfig) -> Outcome {
    let wrap = |name: &str, path: &Path, r| Outcome::from_result(name, &display(path), cfg, r);
    match &cli.command {
        Command::Validate { path } => wrap("validate", path, commands::validate(cfg, path)),
        Command::Characters { path } => wrap("characters", path, commands::characters(cfg, path)),
        Command::Burnside { path } => wrap("burnside", path, commands::burnside(cfg, path)),
        Command::Quotient { path, subgroup } => {
            wrap("quotient", path, commands::quotient(cfg, path, subgroup.as_deref()))
        }
        Command::Selfdual { paths } => {
            let refs: Vec<&Path> = paths.iter().map(PathBuf::as_path).collect();
            let last = refs.last().copied().unwrap_or(Path::new(""));
            wrap("selfdual", last, commands::selfdual(cfg, &refs))
        }
        Command::Center { path } => wrap("center", path, commands::center(cfg, path)),
        Command::Double { path, dir } => wrap("double", path, commands::double(cfg, path, dir)),
        Command::Corpus { dir, workers } => match corpus::run_corpus(cfg, dir, *workers) {
            Ok((_, outcome)) => outcome,
            Err(e) => Outcome::from_result("corpus", &display(dir), cfg, Err(e)),
        },
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let tolerances = match Tolerances::new(cli.tol_eq, cli.tol_int) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let cfg = RunConfig {
        tolerances,
        seed: cli.seed,
        lattice: cli.lattice.clone(),
        format: match cli.format {
            OutputFormat::Text => Format::Text,
            OutputFormat::Structured => Format::Structured,
        },
        out: cli.out.clone(),
    };
    let outcome = run(&cli, &cfg);
    let text = outcome.render(cfg.format);
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(outcome.code as u8)
}
