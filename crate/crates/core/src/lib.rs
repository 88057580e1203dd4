//! Estimation of the number of common functional factors in a
//! semiparametric factor model `Y = F(U) Bᵀ + E`.
//!
//! The crate is organised around four layers:
//!
//! * [`factor`]: column centering, local-linear smoothing of every response
//!   series against the scalar exogenous variable `U`, the covariance of the
//!   smoothed surface, its eigendecomposition and the factor/loading
//!   extraction for a working order `p`.
//! * [`selectors`]: the three order selectors (panel information criterion,
//!   ladle, and functional twice cross-validation), all returning a
//!   [`SelectionReport`].
//! * [`simlab`]: synthetic scenario generators and a seeded Monte-Carlo grid
//!   runner producing correct-selection frequencies.
//! * [`io`]: CSV ingestion of real panels and the JSON run report.
//!
//! ```
//! use ffselect_core::{center_columns, estimate_factors, KernelSpec};
//! use nalgebra::DMatrix;
//!
//! let u: Vec<f64> = (0..40).map(|i| -1.0 + 2.0 * i as f64 / 39.0).collect();
//! let raw = DMatrix::from_fn(40, 3, |i, s| (s as f64 + 1.0) * (3.0 * u[i]).sin());
//! let panel = center_columns(&raw, &u).unwrap();
//! let kernel = KernelSpec::rule_of_thumb(&panel, Default::default()).unwrap();
//! let fit = estimate_factors(&panel, &kernel, 1).unwrap();
//! assert_eq!(fit.loadings().shape(), (3, 1));
//! ```

// `!(x > t)` guards deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod factor;
pub mod io;
pub mod parallel;
pub mod seed;
pub mod selectors;
pub mod simlab;

pub use error::{Error, Result};
pub use factor::{
    bandwidth_loocv, bandwidth_rule_of_thumb, center_columns, covariance_of_smoothed,
    eigendecompose, estimate_factors, fit_spectrum, local_linear_smooth, BandwidthRule,
    EigenSystem, FactorEstimate, KernelFamily, KernelSpec, PanelData, SmoothedSurface,
    SmootherWeights, SpectralFit,
};
pub use selectors::{
    ftcv_select, icp_select, ladle_select, residual_variance, FtcvConfig, LadleConfig, Method,
    OrderRange, SelectionReport,
};
