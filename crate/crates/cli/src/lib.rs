//! Scenario runner behind the `tfhom` binary.

pub mod catalog;
pub mod error;
pub mod exec;
pub mod model;
pub mod output;
pub mod scenario;

use std::path::{Path, PathBuf};

use serde::Serialize;

pub use error::CliError;
pub use scenario::{Kind, Parsed, Scenario};

#[derive(Serialize)]
struct Sidecar<'a> {
    tool: &'static str,
    version: &'static str,
    library_version: &'static str,
    scenario: &'a Scenario,
    outputs: Vec<&'a str>,
    derived: &'a std::collections::BTreeMap<String, serde_json::Value>,
}

/// Evaluates the scenario on a pool of `threads` workers (rayon's default
/// when `None`) and returns every output file, sidecar last.
pub fn render(scenario: &Scenario, threads: Option<usize>, gnuplot: bool) -> Result<Vec<exec::Artifact>, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::schema("--threads", e.to_string()))?;
    let report = pool.install(|| exec::execute(scenario, gnuplot))?;
    let sidecar = Sidecar {
        tool: "tfhom",
        version: env!("CARGO_PKG_VERSION"),
        library_version: tfhom::VERSION,
        scenario,
        outputs: report.artifacts.iter().map(|a| a.file.as_str()).collect(),
        derived: &report.derived,
    };
    let mut json = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
    json.push('\n');
    let mut artifacts = report.artifacts;
    artifacts.push(exec::Artifact {
        file: format!("{}.json", scenario.name),
        contents: json,
    });
    Ok(artifacts)
}

/// Runs the scenario and writes its outputs into `out_dir`. Nothing is
/// written unless the whole computation succeeds.
pub fn run(scenario: &Scenario, out_dir: &Path, threads: Option<usize>, gnuplot: bool) -> Result<Vec<PathBuf>, CliError> {
    let artifacts = render(scenario, threads, gnuplot)?;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let mut written = Vec::with_capacity(artifacts.len());
    for a in &artifacts {
        output::write(out_dir, &a.file, &a.contents)?;
        written.push(out_dir.join(&a.file));
    }
    Ok(written)
}

/// Schema and grid checks only; never computes or writes anything.
pub fn validate(parsed: &Parsed) -> Result<(), CliError> {
    exec::grids(&parsed.scenario)
}
