//! Deterministic text output: every float is printed with 17 significant
//! digits and `\n` line endings so identical runs produce byte-identical
//! files.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

/// 17 significant digits in exponent form; round-trips any f64 exactly.
pub fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writer that targets a file when a path is given and stdout otherwise.
pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Write a CSV with a header row and one row of floats per record.
pub fn write_csv(
    out: &mut dyn Write,
    header: &str,
    rows: impl Iterator<Item = Vec<String>>,
) -> io::Result<()> {
    writeln!(out, "{header}")?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Write `x,<name>` pairs for a sampled profile.
pub fn write_profile_csv(
    out: &mut dyn Write,
    value_name: &str,
    nodes: &[f64],
    values: &[f64],
) -> io::Result<()> {
    writeln!(out, "x,{value_name}")?;
    for (x, v) in nodes.iter().zip(values) {
        writeln!(out, "{},{}", g17(*x), g17(*v))?;
    }
    Ok(())
}

/// One-line JSON object with snake_case keys; values are pre-rendered.
pub fn json_object(fields: &[(&str, String)]) -> String {
    let body = fields
        .iter()
        .map(|(k, v)| format!("\"{k}\": {v}"))
        .collect::<Vec<_>>()
        .join(", ");
    format!("{{{body}}}")
}
