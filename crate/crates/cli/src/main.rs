use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tfhom_cli::{catalog, scenario, CliError};

const THREADS_ENV: &str = "TFHOM_THREADS";

#[derive(Parser)]
#[command(name = "tfhom", version, about = "Time-frequency Hong-Ou-Mandel scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its CSV and JSON outputs.
    Run {
        file: PathBuf,
        /// Worker threads; falls back to TFHOM_THREADS, then all cores.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also write a gnuplot script per data file.
        #[arg(long)]
        gnuplot: bool,
    },
    /// Check a scenario file without computing anything.
    Validate { file: PathBuf },
    /// The bundled example scenarios.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Subcommand)]
enum ExamplesAction {
    List,
    /// Write a bundled scenario to `<out>/<name>.json`.
    Copy {
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn threads(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::schema(THREADS_ENV, format!("expected a thread count, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn load(file: &Path) -> Result<scenario::Parsed, CliError> {
    let parsed = scenario::load(file)?;
    for field in &parsed.unknown_fields {
        eprintln!("warning: {}: unknown field `{field}` ignored", file.display());
    }
    Ok(parsed)
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run {
            file,
            threads: flag,
            out,
            gnuplot,
        } => {
            let n = threads(flag)?;
            let parsed = load(&file)?;
            for path in tfhom_cli::run(&parsed.scenario, &out, n, gnuplot)? {
                println!("{}", path.display());
            }
        }
        Command::Validate { file } => {
            let parsed = load(&file)?;
            tfhom_cli::validate(&parsed)?;
        }
        Command::Examples { action: ExamplesAction::List } => {
            for e in catalog::CATALOG {
                let s = scenario::parse(e.text, e.name)?.scenario;
                println!("{}\t{}\t{}", e.name, s.kind.as_str(), s.description);
            }
        }
        Command::Examples {
            action: ExamplesAction::Copy { name, out },
        } => {
            let entry = catalog::find(&name)
                .ok_or_else(|| CliError::schema("examples copy", format!("no bundled scenario named `{name}`")))?;
            std::fs::create_dir_all(&out).map_err(|e| CliError::io(&out, e))?;
            let path = out.join(format!("{name}.json"));
            std::fs::write(&path, entry.text).map_err(|e| CliError::io(&path, e))?;
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
