use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use parstruct_cli::catalog;
use parstruct_cli::evaluate::{evaluate, Quantity};
use parstruct_cli::{run_suites, SpecConfig, Suite};

/// Numerical verifier for parallelism structures.
#[derive(Parser)]
#[command(name = "parstruct", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run identity suites on a configuration and report residuals.
    Verify {
        /// Config file, or the name of a catalog fixture.
        config: String,
        /// Comma-separated suite names, or `all`.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Tolerance override, e.g. `cartan1=1e-8`. Repeatable.
        #[arg(long = "tol", value_name = "SUITE=VAL")]
        tol: Vec<String>,
    },
    /// Print one quantity at a point, in coordinate components.
    Evaluate {
        config: String,
        #[arg(long)]
        quantity: String,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Field arguments: e_NAME, dNAME, b_K, beta_K, v:EXPR;EXPR, w:EXPR;EXPR.
        #[arg(long, num_args = 1..)]
        args: Vec<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// List or print the bundled fixtures.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { name: String },
}

const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn input_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_INPUT)
}

fn apply_overrides(
    cfg: &mut SpecConfig,
    suite: Option<String>,
    samples: Option<usize>,
    seed: Option<u64>,
    tol: &[String],
) -> Result<(), String> {
    if let Some(list) = suite {
        let mut suites = Vec::new();
        for name in list.split(',').map(str::trim) {
            if name == "all" {
                suites = Suite::ALL.to_vec();
                break;
            }
            let s = Suite::from_name(name).ok_or_else(|| format!("unknown suite '{name}'"))?;
            if !suites.contains(&s) {
                suites.push(s);
            }
        }
        cfg.suites = suites;
    }
    if let Some(n) = samples {
        if n == 0 {
            return Err("--samples must be at least 1".into());
        }
        cfg.samples = n;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    for item in tol.iter().flat_map(|t| t.split(',')) {
        let (name, val) = item
            .split_once('=')
            .ok_or_else(|| format!("--tol expects SUITE=VAL, got '{item}'"))?;
        let s = Suite::from_name(name.trim()).ok_or_else(|| format!("unknown suite '{}'", name.trim()))?;
        let v: f64 = val
            .trim()
            .parse()
            .map_err(|_| format!("bad tolerance '{}'", val.trim()))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(format!("tolerance for {name} must be positive"));
        }
        cfg.tolerances.insert(s, v);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            config,
            suite,
            samples,
            seed,
            format,
            tol,
        } => {
            let mut cfg = match catalog::open(&config) {
                Ok(c) => c,
                Err(e) => return input_error(e),
            };
            if let Err(e) = apply_overrides(&mut cfg, suite, samples, seed, &tol) {
                return input_error(e);
            }
            let report = run_suites(&cfg);
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VIOLATION)
            }
        }
        Command::Evaluate {
            config,
            quantity,
            point,
            args,
            format,
        } => {
            let cfg = match catalog::open(&config) {
                Ok(c) => c,
                Err(e) => return input_error(e),
            };
            let q: Quantity = match quantity.parse() {
                Ok(q) => q,
                Err(e) => return input_error(e),
            };
            let p = match cfg.point(&point) {
                Ok(p) => p,
                Err(e) => return input_error(e),
            };
            match evaluate(&cfg, q, &args, &p) {
                Ok(v) => {
                    match format {
                        Format::Text => println!("{}", v.display(cfg.chart.names())),
                        Format::Json => println!("{}", serde_json::to_string(&v).expect("value serializes")),
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => input_error(e),
            }
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => {
                for f in &catalog::FIXTURES {
                    println!("{:<22} {}", f.name, f.summary);
                }
                ExitCode::SUCCESS
            }
            CatalogAction::Show { name } => match catalog::find(&name) {
                Some(f) => {
                    print!("{}", f.source);
                    ExitCode::SUCCESS
                }
                None => input_error(format!("no fixture named '{name}' (try `parstruct catalog list`)")),
            },
        },
    }
}
