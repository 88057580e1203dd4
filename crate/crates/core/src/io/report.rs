use std::path::Path;

use serde::{Deserialize, Serialize};

use super::atomic_write;
use crate::error::{Error, Result};
use crate::factor::KernelFamily;

/// Value of [`RunReport::schema`].
pub const REPORT_SCHEMA: &str = "ffselect.run-report/1";

/// Result of one selector inside a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    /// `ftcv1`, `ftcv10`, `ladle` or `icp`.
    pub method: String,
    pub p_hat: usize,
    /// Criterion per order `p_min..=p_max`.
    pub criterion_values: Vec<f64>,
    pub p_min: usize,
    pub p_max: usize,
    pub bandwidth: f64,
    pub kernel: KernelFamily,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_folds: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_boot: Option<usize>,
    pub warnings: Vec<String>,
    pub wall_ms: u64,
}

impl MethodReport {
    pub fn criterion_at_p_hat(&self) -> f64 {
        self.criterion_values[self.p_hat - self.p_min]
    }
}

/// Where the panel came from and how it was prepared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSummary {
    pub source: String,
    pub u_column: String,
    pub response_columns: Vec<String>,
    pub log_u: bool,
    pub n: usize,
    pub m: usize,
    pub rows_read: usize,
    pub dropped_incomplete: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date_start: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date_end: Option<String>,
    /// Always `"filter-then-center"`: period filtering precedes centering.
    pub preprocessing_order: String,
}

/// Machine-readable record of a `select` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub data: DataSummary,
    pub bandwidth: f64,
    /// `rule-of-thumb`, `loocv` or `fixed`.
    pub bandwidth_source: String,
    pub kernel: KernelFamily,
    pub seed: u64,
    pub methods: Vec<MethodReport>,
    pub warnings: Vec<String>,
}

impl RunReport {
    /// Checks the structural invariants of the schema.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(format!("run report: {msg}")));
        if self.schema != REPORT_SCHEMA {
            return bad(format!("unknown schema `{}`", self.schema));
        }
        if !(self.bandwidth > 0.0 && self.bandwidth.is_finite()) {
            return bad(format!("bandwidth {}", self.bandwidth));
        }
        for m in &self.methods {
            if m.p_min > m.p_max || m.criterion_values.len() != m.p_max - m.p_min + 1 {
                return bad(format!(
                    "{}: criterion vector does not match its range",
                    m.method
                ));
            }
            if !(m.p_min..=m.p_max).contains(&m.p_hat) {
                return bad(format!("{}: p_hat outside range", m.method));
            }
            let at = m.criterion_at_p_hat();
            if m.criterion_values.iter().any(|&v| v < at) {
                return bad(format!("{}: p_hat is not a minimiser", m.method));
            }
            if m.n != self.data.n || m.m != self.data.m {
                return bad(format!(
                    "{}: dimensions disagree with data summary",
                    m.method
                ));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        atomic_write(path, self.to_json()?.as_bytes())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}
