use nalgebra::DMatrix;

use super::eigen::{eigendecompose, EigenSystem};
use super::kernel::KernelSpec;
use super::panel::PanelData;
use super::smoother::{smooth_at_observations, smooth_raw, SmoothedSurface};
use crate::error::{Error, Result};

/// `(1/n) ĜᵀĜ` for a surface evaluated at the `n` observation points.
pub fn covariance_of_smoothed(surface: &SmoothedSurface) -> Result<DMatrix<f64>> {
    if !surface.at_observations() {
        return Err(Error::ShapeMismatch(format!(
            "covariance needs the surface at the observation points, got a {}-point grid",
            surface.eval_points().len()
        )));
    }
    Ok(covariance(surface.g_hat()))
}

pub(crate) fn covariance(g: &DMatrix<f64>) -> DMatrix<f64> {
    g.tr_mul(g) / g.nrows() as f64
}

/// `G · V[:, ..p]`, accumulated entry by entry in a fixed order so that the
/// leading columns do not depend on `p`.
pub(crate) fn project(g: &DMatrix<f64>, v: &DMatrix<f64>, p: usize) -> DMatrix<f64> {
    let (n, m) = g.shape();
    let mut out = DMatrix::zeros(n, p);
    for j in 0..p {
        let vj = v.column(j);
        for i in 0..n {
            let mut acc = 0.0;
            for s in 0..m {
                acc += g[(i, s)] * vj[s];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Smoothed surface at the observations together with the spectrum of its
/// covariance. Factor estimates for every working order are truncations of
/// this one fit.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFit {
    g_hat: DMatrix<f64>,
    eigen: EigenSystem,
}

impl SpectralFit {
    pub fn g_hat(&self) -> &DMatrix<f64> {
        &self.g_hat
    }

    pub fn eigen(&self) -> &EigenSystem {
        &self.eigen
    }

    /// Loadings `B̂ = V̂[:, ..p]` and factors `F̂ = Ĝ B̂`.
    pub fn truncate(&self, p: usize) -> Result<FactorEstimate> {
        let m = self.g_hat.ncols();
        if p > m {
            return Err(Error::OrderOutOfRange { p, max: m });
        }
        let loadings = self.eigen.eigenvectors().columns(0, p).into_owned();
        let factors = project(&self.g_hat, self.eigen.eigenvectors(), p);
        Ok(FactorEstimate {
            p,
            loadings,
            factors,
            eigenvalues_used: self.eigen.eigenvalues()[..p].to_vec(),
        })
    }
}

pub(crate) fn fit_raw(u: &[f64], y: &DMatrix<f64>, kernel: &KernelSpec) -> Result<SpectralFit> {
    let (g_hat, _) = smooth_raw(u, y, kernel, u)?;
    let eigen = eigendecompose(&covariance(&g_hat))?;
    Ok(SpectralFit { g_hat, eigen })
}

/// Runs smooth → covariance → eigendecomposition on a panel.
pub fn fit_spectrum(data: &PanelData, kernel: &KernelSpec) -> Result<SpectralFit> {
    let surface = smooth_at_observations(data, kernel)?;
    let eigen = eigendecompose(&covariance_of_smoothed(&surface)?)?;
    Ok(SpectralFit {
        g_hat: surface.g_hat().clone(),
        eigen,
    })
}

/// Factor structure for one working order `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorEstimate {
    p: usize,
    loadings: DMatrix<f64>,
    factors: DMatrix<f64>,
    eigenvalues_used: Vec<f64>,
}

impl FactorEstimate {
    pub fn p(&self) -> usize {
        self.p
    }

    /// `m × p`, orthonormal columns.
    pub fn loadings(&self) -> &DMatrix<f64> {
        &self.loadings
    }

    /// `n × p`, factor values at the observed `U`.
    pub fn factors(&self) -> &DMatrix<f64> {
        &self.factors
    }

    pub fn eigenvalues_used(&self) -> &[f64] {
        &self.eigenvalues_used
    }

    /// `F̂ B̂ᵀ`, the fitted common component.
    pub fn common_component(&self) -> DMatrix<f64> {
        &self.factors * self.loadings.transpose()
    }
}

/// Estimates `p` common functional factors and their loadings.
pub fn estimate_factors(data: &PanelData, kernel: &KernelSpec, p: usize) -> Result<FactorEstimate> {
    if p > data.m() {
        return Err(Error::OrderOutOfRange { p, max: data.m() });
    }
    fit_spectrum(data, kernel)?.truncate(p)
}
