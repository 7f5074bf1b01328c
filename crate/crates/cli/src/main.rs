use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use murmur_cli::catalog::{EXPERIMENTS, FIGURES};
use murmur_cli::ingest::{ingest_report, InputKind};
use murmur_cli::run::{execute, RunOptions};
use murmur_cli::tables::{parse_limit, sieve, SieveAction};
use murmur_cli::{render, svg, CliError};

#[derive(Parser)]
#[command(name = "murmur", version, about = "Murmuration experiments from trace formulas and class numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Build and cache factor and Hurwitz tables up to a limit.
    Sieve {
        /// Table limit, e.g. 10000000, 10^7 or 1e7.
        #[arg(long)]
        limit: String,
        #[arg(long, default_value = "cache")]
        cache_dir: PathBuf,
    },
    /// Run a named experiment and write CSV plus a JSON manifest.
    Run {
        name: String,
        #[command(flatten)]
        options: RunOptions,
    },
    /// Render an emitted CSV as an SVG scatter plot.
    Plot {
        csv: PathBuf,
        svg: PathBuf,
        /// Title drawn above the plot; defaults to the CSV file name.
        #[arg(long)]
        title: Option<String>,
    },
    /// Parse and validate a newform or curve table.
    Ingest {
        path: PathBuf,
        #[arg(long, value_enum)]
        kind: InputKind,
    },
    /// List experiment names and the invocation behind each figure.
    Catalog,
}

fn describe(action: &SieveAction) -> String {
    match action {
        SieveAction::Reused => "valid cache, kept".into(),
        SieveAction::Built => "built".into(),
        SieveAction::Rebuilt(why) => format!("rebuilt ({why})"),
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sieve { limit, cache_dir } => {
            let limit = parse_limit(&limit)?;
            let report = sieve(limit, &cache_dir)?;
            for (path, action) in [&report.factor, &report.hurwitz] {
                if let SieveAction::Rebuilt(why) = action {
                    eprintln!("warning: {} was unreadable ({why}); rebuilt", path.display());
                }
                println!("{}: {}", path.display(), describe(action));
            }
        }
        Command::Run { name, options } => {
            let report = execute(&name, options)?;
            for w in &report.manifest.warnings {
                eprintln!("warning: {w}");
            }
            for path in &report.manifest.outputs {
                println!("wrote {}", path.display());
            }
            println!("wrote {}", report.manifest_path.display());
        }
        Command::Plot { csv, svg: out, title } => {
            let text = std::fs::read_to_string(&csv).map_err(|e| CliError::io(&csv, e))?;
            let rows = render::parse_csv(&text, &csv.display().to_string())?;
            if rows.is_empty() {
                eprintln!("warning: {} has no rows; drawing axes only", csv.display());
            }
            let title = title.unwrap_or_else(|| csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
            std::fs::write(&out, svg::render_svg(&rows, &title)).map_err(|e| CliError::io(&out, e))?;
            println!("wrote {}", out.display());
        }
        Command::Ingest { path, kind } => print!("{}", ingest_report(&path, kind)?),
        Command::Catalog => {
            println!("experiments:");
            for e in EXPERIMENTS {
                println!("  {:<14} {}", e.name, e.summary);
            }
            println!("figures:");
            for (i, f) in FIGURES.iter().enumerate() {
                println!("  {:>2}. {}\n      {}", i + 1, f.caption, f.invocation);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
