use std::path::PathBuf;

use chrono::NaiveDate;
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::factor::{center_columns, PanelData};

/// Tokens read as a missing value.
const MISSING: [&str; 7] = ["", "na", "nan", "null", ".", "#n/a", "n/a"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResponseColumns {
    /// Every column except the `U` and date columns.
    AllOthers,
    Named(Vec<String>),
}

/// How to turn a CSV file into a [`PanelData`].
#[derive(Debug, Clone, PartialEq)]
pub struct IngestSpec {
    pub path: PathBuf,
    pub u_column: String,
    pub response_columns: ResponseColumns,
    /// Replace `U` by `ln U`.
    pub log_u: bool,
    /// Drop rows with a missing value in any selected column; otherwise a
    /// missing value is an error.
    pub drop_incomplete: bool,
    /// ISO-8601 date column used for sorting and period filtering.
    pub date_column: Option<String>,
    pub date_start: Option<NaiveDate>,
    pub date_end: Option<NaiveDate>,
}

impl IngestSpec {
    pub fn new(path: impl Into<PathBuf>, u_column: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            u_column: u_column.into(),
            response_columns: ResponseColumns::AllOthers,
            log_u: false,
            drop_incomplete: true,
            date_column: None,
            date_start: None,
            date_end: None,
        }
    }
}

/// An ingested, filtered and centered panel with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct IngestedPanel {
    pub panel: PanelData,
    pub u_column: String,
    pub response_names: Vec<String>,
    /// Dates of the retained rows, in panel order.
    pub dates: Option<Vec<NaiveDate>>,
    pub rows_read: usize,
    pub dropped_incomplete: usize,
}

impl IngestedPanel {
    pub fn date_range(&self) -> Option<(NaiveDate, NaiveDate)> {
        let d = self.dates.as_ref()?;
        Some((*d.first()?, *d.last()?))
    }
}

struct RawRow {
    line: usize,
    date: Option<NaiveDate>,
    u: Option<f64>,
    y: Vec<Option<f64>>,
}

fn parse_value(field: &str, line: usize, column: &str) -> Result<Option<f64>> {
    let t = field.trim();
    if MISSING.contains(&t.to_ascii_lowercase().as_str()) {
        return Ok(None);
    }
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        Ok(v) => Err(Error::Parse {
            row: line,
            column: column.to_owned(),
            message: format!("non-finite value {v}"),
        }),
        Err(e) => Err(Error::Parse {
            row: line,
            column: column.to_owned(),
            message: format!("`{t}`: {e}"),
        }),
    }
}

fn parse_date(field: &str, line: usize, column: &str) -> Result<Option<NaiveDate>> {
    let t = field.trim();
    if t.is_empty() {
        return Ok(None);
    }
    NaiveDate::parse_from_str(t, "%Y-%m-%d")
        .map(Some)
        .map_err(|e| Error::Parse {
            row: line,
            column: column.to_owned(),
            message: format!("`{t}` is not an ISO-8601 date: {e}"),
        })
}

/// Reads a CSV panel: resolves columns, sorts and filters by date, drops
/// incomplete rows, log-transforms `U` when asked, then centers the
/// responses.
///
/// Reported row numbers are 1-based file lines (the header is line 1).
pub fn ingest_csv(spec: &IngestSpec) -> Result<IngestedPanel> {
    let path = &spec.path;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::csv(path, e))?;
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::csv(path, e))?
        .iter()
        .map(str::to_owned)
        .collect();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_owned()))
    };
    let u_idx = find(&spec.u_column)?;
    let date_idx = spec.date_column.as_deref().map(find).transpose()?;
    if date_idx.is_none() && (spec.date_start.is_some() || spec.date_end.is_some()) {
        return Err(Error::InvalidConfig(
            "date filtering needs a date column".into(),
        ));
    }
    let response_idx: Vec<usize> = match &spec.response_columns {
        ResponseColumns::AllOthers => (0..headers.len())
            .filter(|&i| i != u_idx && Some(i) != date_idx)
            .collect(),
        ResponseColumns::Named(names) => {
            if names.contains(&spec.u_column) {
                return Err(Error::InvalidConfig(format!(
                    "U column `{}` is also listed as a response",
                    spec.u_column
                )));
            }
            names.iter().map(|n| find(n)).collect::<Result<_>>()?
        }
    };
    if response_idx.len() < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 response columns, found {}",
            response_idx.len()
        )));
    }

    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::csv(path, e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| record.get(i).unwrap_or("");
        rows.push(RawRow {
            line,
            date: match date_idx {
                Some(i) => parse_date(field(i), line, &headers[i])?,
                None => None,
            },
            u: parse_value(field(u_idx), line, &headers[u_idx])?,
            y: response_idx
                .iter()
                .map(|&i| parse_value(field(i), line, &headers[i]))
                .collect::<Result<_>>()?,
        });
    }
    let rows_read = rows.len();

    if date_idx.is_some() {
        // stable: rows sharing a date keep file order
        rows.sort_by_key(|r| (r.date.is_none(), r.date));
        rows.retain(|r| match r.date {
            Some(d) => {
                spec.date_start.is_none_or(|s| d >= s) && spec.date_end.is_none_or(|e| d <= e)
            }
            None => spec.date_start.is_none() && spec.date_end.is_none(),
        });
    }

    let before = rows.len();
    let complete = |r: &RawRow| {
        r.u.is_some() && r.y.iter().all(Option::is_some) && (date_idx.is_none() || r.date.is_some())
    };
    if spec.drop_incomplete {
        rows.retain(complete);
    } else if let Some(bad) = rows.iter().find(|r| !complete(r)) {
        let col = if bad.u.is_none() {
            headers[u_idx].clone()
        } else if let Some(k) = bad.y.iter().position(Option::is_none) {
            headers[response_idx[k]].clone()
        } else {
            spec.date_column.clone().unwrap_or_default()
        };
        return Err(Error::Parse {
            row: bad.line,
            column: col,
            message: "missing value".into(),
        });
    }
    let dropped_incomplete = before - rows.len();
    if rows.len() < 3 {
        return Err(Error::TooFewRows { rows: rows.len() });
    }

    let mut u = Vec::with_capacity(rows.len());
    for r in &rows {
        let v = r.u.expect("complete row");
        if spec.log_u {
            if v <= 0.0 {
                return Err(Error::NonPositiveUForLog {
                    row: r.line,
                    value: v,
                });
            }
            u.push(v.ln());
        } else {
            u.push(v);
        }
    }
    let m = response_idx.len();
    let raw = DMatrix::from_fn(rows.len(), m, |i, s| rows[i].y[s].expect("complete row"));
    let panel = center_columns(&raw, &u)?;
    Ok(IngestedPanel {
        panel,
        u_column: spec.u_column.clone(),
        response_names: response_idx.iter().map(|&i| headers[i].clone()).collect(),
        dates: date_idx.map(|_| rows.iter().map(|r| r.date.expect("complete row")).collect()),
        rows_read,
        dropped_incomplete,
    })
}
