//! Estimation pipeline of the semiparametric factor model.
//!
//! `center_columns` → `local_linear_smooth` → `covariance_of_smoothed` →
//! `eigendecompose` → `estimate_factors`.

mod bandwidth;
mod eigen;
mod estimate;
mod kernel;
mod panel;
mod smoother;

pub use bandwidth::{bandwidth_loocv, bandwidth_rule_of_thumb, loocv_grid, BandwidthRule};
pub use eigen::{eigendecompose, EigenSystem};
pub use estimate::{
    covariance_of_smoothed, estimate_factors, fit_spectrum, FactorEstimate, SpectralFit,
};
pub use kernel::{KernelFamily, KernelSpec};
pub use panel::{center_columns, PanelData};
pub use smoother::{local_linear_smooth, smooth_at_observations, SmoothedSurface, SmootherWeights};

pub(crate) use estimate::{fit_raw, project};
