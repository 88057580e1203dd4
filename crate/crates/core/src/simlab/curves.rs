use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::grid::GridResult;
use crate::error::{Error, Result};
use crate::io::atomic_write;

/// Header of the long-format frequency CSV.
pub const CURVE_HEADER: &str = "n,m,theta,regime,method,frequency,replications,failures";

/// One row of the frequency CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub n: usize,
    pub m: usize,
    pub theta: f64,
    pub regime: String,
    pub method: String,
    pub frequency: f64,
    pub replications: usize,
    pub failures: usize,
}

/// Path of the JSON configuration echo written next to `csv_path`.
pub fn config_echo_path(csv_path: &Path) -> PathBuf {
    let stem = csv_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "frequencies".into());
    csv_path.with_file_name(format!("{stem}.config.json"))
}

/// Writes one CSV row per `(n, m, θ, regime, method)` plus the grid
/// configuration as JSON alongside.
pub fn emit_frequency_curves(result: &GridResult, path: &Path) -> Result<PathBuf> {
    if result.results.is_empty() {
        return Err(Error::InvalidConfig(
            "nothing to emit: empty grid result".into(),
        ));
    }
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(CURVE_HEADER.split(','))
        .map_err(|e| Error::csv(path, e))?;
    for r in &result.results {
        w.write_record([
            r.cell.n.to_string(),
            r.cell.m.to_string(),
            r.cell.theta.to_string(),
            r.cell.regime.to_string(),
            r.method.to_string(),
            r.frequency.to_string(),
            r.replications.to_string(),
            r.failures.to_string(),
        ])
        .map_err(|e| Error::csv(path, e))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::io(path, std::io::Error::other(e.to_string())))?;
    atomic_write(path, &bytes)?;

    let echo = config_echo_path(path);
    let mut json = serde_json::to_vec_pretty(&result.spec)?;
    json.push(b'\n');
    atomic_write(&echo, &json)?;
    Ok(echo)
}

/// Parses a frequency CSV written by [`emit_frequency_curves`].
pub fn read_frequency_curves(path: &Path) -> Result<Vec<CurveRow>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::csv(path, e))?
        .iter()
        .map(str::to_owned)
        .collect();
    if header.join(",") != CURVE_HEADER {
        return Err(Error::Parse {
            row: 0,
            column: header.join(","),
            message: format!("expected header `{CURVE_HEADER}`"),
        });
    }
    rdr.deserialize()
        .collect::<std::result::Result<Vec<CurveRow>, _>>()
        .map_err(|e| Error::csv(path, e))
}
