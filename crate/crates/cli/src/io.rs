//! Atomic file output and the particle / trace CSV formats.

use std::io::Write;
use std::path::{Path, PathBuf};

use interaction_minimiser::minimise::TraceRow;
use interaction_minimiser::ParticleConfiguration;
use serde::Serialize;
use tempfile::NamedTempFile;

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), String> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| format!("creating {}: {e}", dir.display()))?;
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| format!("temp file in {}: {e}", dir.display()))?;
    tmp.write_all(bytes).map_err(|e| format!("writing {}: {e}", path.display()))?;
    tmp.persist(path).map_err(|e| format!("renaming onto {}: {e}", path.display()))?;
    Ok(())
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, String> {
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    text.push('\n');
    write_atomic(&path, text.as_bytes())?;
    Ok(path)
}

/// `Debug` formatting of `f64` is the shortest string that parses back to
/// the same bits.
fn num(v: f64) -> String {
    format!("{v:?}")
}

fn csv_bytes(header: Vec<String>, rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>, String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(&header).map_err(|e| e.to_string())?;
    for row in rows {
        w.write_record(&row).map_err(|e| e.to_string())?;
    }
    w.into_inner().map_err(|e| e.to_string())
}

pub fn particles_csv(config: &ParticleConfiguration) -> Result<Vec<u8>, String> {
    let d = config.dim();
    let mut header: Vec<String> = (1..=d).map(|k| format!("x{k}")).collect();
    header.push("w".into());
    let rows = config
        .points()
        .zip(config.weights())
        .map(|(x, w)| x.iter().copied().chain([*w]).map(num).collect());
    csv_bytes(header, rows)
}

pub fn trace_csv(trace: &[TraceRow]) -> Result<Vec<u8>, String> {
    let header = ["iter", "energy", "grad_norm", "dt"].map(String::from).to_vec();
    let rows = trace
        .iter()
        .map(|r| vec![r.iter.to_string(), num(r.energy), num(r.grad_norm), num(r.dt)]);
    csv_bytes(header, rows)
}

pub fn table_csv(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>, String> {
    csv_bytes(header.iter().map(|s| s.to_string()).collect(), rows)
}

pub fn format_num(v: f64) -> String {
    num(v)
}

/// Reads a particle CSV with header `x1,...,xd,w`.
pub fn read_particles(path: &Path) -> Result<ParticleConfiguration, String> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| format!("reading {}: {e}", path.display()))?;
    let header = r.headers().map_err(|e| format!("{}: {e}", path.display()))?.clone();
    let cols: Vec<&str> = header.iter().collect();
    let d = cols.len().checked_sub(1).filter(|d| *d >= 1).ok_or("particle CSV needs x1..xd,w columns")?;
    let expected: Vec<String> = (1..=d).map(|k| format!("x{k}")).chain(["w".to_string()]).collect();
    if cols != expected.iter().map(String::as_str).collect::<Vec<_>>() {
        return Err(format!("{}: header must be {}", path.display(), expected.join(",")));
    }
    let mut positions = Vec::new();
    let mut weights = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| format!("{}: {e}", path.display()))?;
        let values: Vec<f64> = rec
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("{} row {}: {e}", path.display(), line + 2))?;
        positions.extend_from_slice(&values[..d]);
        weights.push(values[d]);
    }
    ParticleConfiguration::new(d, positions, weights).map_err(|e| format!("{}: {e}", path.display()))
}
