use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input contains non-finite values ({context})")]
    NonFinite { context: &'static str },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("panel too small: n = {n}, m = {m} (need n >= 3 and m >= 2)")]
    TooSmall { n: usize, m: usize },

    #[error("exogenous variable has zero spread")]
    DegenerateU,

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("bandwidth {bandwidth} too small to smooth at u = {point}")]
    BandwidthTooSmall { bandwidth: f64, point: f64 },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("covariance has eigenvalue {value:e} below the roundoff floor")]
    NotPositiveSemidefinite { value: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("working order {p} outside 0..={max}")]
    OrderOutOfRange { p: usize, max: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("bootstrap replicate {replicate} stayed degenerate after {attempts} redraws")]
    BootstrapDegenerate { replicate: usize, attempts: usize },

    #[error("loading column {factor} is zero for every left-out series")]
    ZeroLoadingColumn { factor: usize },

    #[error("fold {fold} leaves {train_rows} training rows; order {p} needs at least {needed}")]
    FoldTooSmall {
        fold: usize,
        train_rows: usize,
        p: usize,
        needed: usize,
    },

    #[error("Cholesky factorization failed")]
    CholeskyFailure,

    #[error("replication failures in cell {cell} exceeded budget ({failures}/{replications})")]
    FailureBudget {
        cell: String,
        failures: usize,
        replications: usize,
    },

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("log transform requested but U = {value} at data row {row} is not positive")]
    NonPositiveUForLog { row: usize, value: f64 },

    #[error("too few rows after ingestion: {rows} (need at least 3)")]
    TooFewRows { rows: usize },

    #[error("parse error at row {row}, column `{column}`: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}
