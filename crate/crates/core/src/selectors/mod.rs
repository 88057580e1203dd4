//! Order selectors: each scores every working order `p` in a range and
//! returns the smallest minimiser.

mod folds;
mod ftcv;
mod icp;
mod ladle;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::KernelFamily;

pub use folds::assign_folds;
pub use ftcv::{
    ftcv_select, ftcv_select_with_diagnostics, FtcvConfig, FtcvDiagnostics, FtcvProbe, ScalarFit,
};
pub use icp::{icp_penalty, icp_select, residual_variance};
pub use ladle::{ladle_select, ladle_select_with_components, LadleComponents, LadleConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "icp")]
    ICp,
    #[serde(rename = "ladle")]
    Ladle,
    #[serde(rename = "ftcv")]
    FTCV,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ICp => "icp",
            Method::Ladle => "ladle",
            Method::FTCV => "ftcv",
        })
    }
}

/// Inclusive range of working orders `min..=max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderRange {
    pub min: usize,
    pub max: usize,
}

impl OrderRange {
    pub fn new(min: usize, max: usize) -> Result<Self> {
        if min > max {
            return Err(Error::InvalidConfig(format!(
                "empty order range {min}..={max}"
            )));
        }
        Ok(Self { min, max })
    }

    /// `0..=p_max`.
    pub fn up_to(p_max: usize) -> Self {
        Self { min: 0, max: p_max }
    }

    pub fn len(&self) -> usize {
        self.max - self.min + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<usize> {
        self.min..=self.max
    }

    /// Checks `0 < p_max < m`.
    pub(crate) fn validate_for(&self, m: usize) -> Result<()> {
        if self.max == 0 || self.max >= m {
            return Err(Error::InvalidConfig(format!(
                "p_max must satisfy 0 < p_max < m = {m}, got {}",
                self.max
            )));
        }
        Ok(())
    }
}

/// Effective configuration of a selector run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub bandwidth: f64,
    pub kernel: KernelFamily,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k_folds: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_boot: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

/// Outcome of one selector run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub method: Method,
    pub p_hat: usize,
    /// `criterion_values[k]` scores order `p_range.min + k`.
    pub criterion_values: Vec<f64>,
    pub p_range: OrderRange,
    pub config_echo: ConfigEcho,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl SelectionReport {
    pub(crate) fn from_scores(
        method: Method,
        range: OrderRange,
        criterion_values: Vec<f64>,
        config_echo: ConfigEcho,
        warnings: Vec<String>,
    ) -> Self {
        debug_assert_eq!(criterion_values.len(), range.len());
        let p_hat = range.min + argmin(&criterion_values);
        Self {
            method,
            p_hat,
            criterion_values,
            p_range: range,
            config_echo,
            warnings,
        }
    }

    /// Criterion value at order `p`, if `p` was searched.
    pub fn criterion_at(&self, p: usize) -> Option<f64> {
        p.checked_sub(self.p_range.min)
            .and_then(|k| self.criterion_values.get(k).copied())
    }
}

/// Index of the smallest value; ties go to the lowest index and NaN never wins.
pub fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate() {
        let b = values[best];
        if v < b || (b.is_nan() && !v.is_nan()) {
            best = k;
        }
    }
    best
}
