//! Plot-ready text formats. Floats carry 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use tfhom::hom::PhaseSpaceMap;

use crate::error::CliError;

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Column table with a header row.
pub fn table(header: &[&str], columns: &[&[f64]]) -> String {
    let rows = columns.first().map_or(0, |c| c.len());
    debug_assert!(columns.iter().all(|c| c.len() == rows));
    let mut out = header.join(",");
    out.push('\n');
    for r in 0..rows {
        let line: Vec<String> = columns.iter().map(|c| float(c[r])).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Rows are `tau` ascending, columns `mu` ascending; the first row holds the
/// `mu` values and the first column the `tau` values.
pub fn matrix<M: PhaseSpaceMap<f64>>(map: &M) -> String {
    let mu = map.mu_grid().samples();
    let tau = map.tau_grid().samples();
    let mut out = String::from("tau\\mu");
    for m in &mu {
        out.push(',');
        out.push_str(&float(*m));
    }
    out.push('\n');
    for (j, t) in tau.iter().enumerate() {
        out.push_str(&float(*t));
        for i in 0..mu.len() {
            out.push(',');
            out.push_str(&float(map.at(i, j)));
        }
        out.push('\n');
    }
    out
}

pub enum Plot<'a> {
    Lines { x: &'a str, columns: &'a [&'a str] },
    Matrix { title: &'a str },
}

pub fn gnuplot(data_file: &str, plot: Plot<'_>) -> String {
    let mut s = String::new();
    writeln!(s, "set datafile separator ','").unwrap();
    match plot {
        Plot::Lines { x, columns } => {
            writeln!(s, "set key autotitle columnhead").unwrap();
            writeln!(s, "set xlabel '{x}'").unwrap();
            let parts: Vec<String> = (0..columns.len())
                .map(|k| format!("'{data_file}' using 1:{} with lines", k + 2))
                .collect();
            writeln!(s, "plot {}", parts.join(", ")).unwrap();
        }
        Plot::Matrix { title } => {
            writeln!(s, "set xlabel 'mu'").unwrap();
            writeln!(s, "set ylabel 'tau'").unwrap();
            writeln!(s, "set title '{title}'").unwrap();
            writeln!(s, "set view map").unwrap();
            writeln!(s, "plot '{data_file}' matrix rowheaders columnheaders with image notitle").unwrap();
        }
    }
    s
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::io(path, e))
}
