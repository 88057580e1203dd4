use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use super::{ConfigEcho, Method, OrderRange, SelectionReport};
use crate::error::{Error, Result};
use crate::factor::{fit_raw, fit_spectrum, KernelSpec, PanelData, SpectralFit};
use crate::seed;

/// Redraw budget for a degenerate bootstrap replicate.
const MAX_REDRAWS: usize = 100;
/// Upper bound of the default replicate count.
const DEFAULT_BOOT_CAP: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadleConfig {
    pub range: OrderRange,
    pub n_boot: usize,
    pub rng_seed: u64,
}

impl LadleConfig {
    /// Orders `0..=p_max`, `min(n, 500)` bootstrap replicates.
    pub fn new(p_max: usize, n: usize, rng_seed: u64) -> Self {
        Self {
            range: OrderRange::up_to(p_max),
            n_boot: n.min(DEFAULT_BOOT_CAP),
            rng_seed,
        }
    }
}

/// Per-order ingredients of the ladle criterion for `p = 0..=p_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadleComponents {
    /// Rescaled scree `λ̂_{p+1} / (1 + Σ_{s ≤ p_max+1} λ̂_s)`.
    pub scree: Vec<f64>,
    /// Raw bootstrap eigenvector variability, zero at `p = 0`.
    pub variability_raw: Vec<f64>,
    /// `f0(p) / (1 + Σ_k f0(k))`.
    pub variability: Vec<f64>,
    /// `scree + variability`.
    pub ladle: Vec<f64>,
    /// Redraws spent on degenerate replicates.
    pub redraws: usize,
}

fn rescaled_scree(eigenvalues: &[f64], p_max: usize) -> Vec<f64> {
    let denom = 1.0 + eigenvalues[..=p_max].iter().sum::<f64>();
    (0..=p_max).map(|p| eigenvalues[p] / denom).collect()
}

/// `1 − |det(B̂_pᵀ B*_p)|` for `p = 1..=p_max`.
fn replicate_variability(full: &DMatrix<f64>, boot: &DMatrix<f64>, p_max: usize) -> Vec<f64> {
    let cross = full.columns(0, p_max).tr_mul(&boot.columns(0, p_max));
    (1..=p_max)
        .map(|p| 1.0 - cross.view((0, 0), (p, p)).into_owned().determinant().abs())
        .collect()
}

fn distinct_rows(idx: &[usize]) -> usize {
    let mut sorted = idx.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len()
}

/// One bootstrap replicate: rows `(U_i, y_i·)` resampled jointly, redrawn when
/// fewer than three distinct rows come up or the smoother is undefined on
/// the resample.
fn bootstrap_replicate(
    data: &PanelData,
    kernel: &KernelSpec,
    full: &SpectralFit,
    cfg: &LadleConfig,
    replicate: usize,
) -> Result<(Vec<f64>, usize)> {
    let n = data.n();
    let p_max = cfg.range.max;
    for attempt in 0..MAX_REDRAWS {
        let mut rng = seed::stream(cfg.rng_seed, &[replicate as u64, attempt as u64]);
        let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        if distinct_rows(&idx) < 3 {
            continue;
        }
        let u: Vec<f64> = idx.iter().map(|&i| data.u()[i]).collect();
        let y = data.y().select_rows(&idx);
        match fit_raw(&u, &y, kernel) {
            Ok(boot) => {
                let v = replicate_variability(
                    full.eigen().eigenvectors(),
                    boot.eigen().eigenvectors(),
                    p_max,
                );
                return Ok((v, attempt));
            }
            Err(Error::BandwidthTooSmall { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::BootstrapDegenerate {
        replicate,
        attempts: MAX_REDRAWS,
    })
}

/// Computes every ingredient of the ladle criterion.
pub fn ladle_select_with_components(
    data: &PanelData,
    kernel: &KernelSpec,
    cfg: &LadleConfig,
) -> Result<(SelectionReport, LadleComponents)> {
    cfg.range.validate_for(data.m())?;
    if cfg.n_boot == 0 {
        return Err(Error::InvalidConfig("n_boot must be at least 1".into()));
    }
    let p_max = cfg.range.max;
    let full = fit_spectrum(data, kernel)?;
    let scree = rescaled_scree(full.eigen().eigenvalues(), p_max);

    let replicates: Vec<Result<(Vec<f64>, usize)>> = (0..cfg.n_boot)
        .into_par_iter()
        .map(|b| bootstrap_replicate(data, kernel, &full, cfg, b))
        .collect();
    let mut sums = vec![0.0; p_max];
    let mut redraws = 0;
    for rep in replicates {
        let (v, r) = rep?;
        redraws += r;
        sums.iter_mut().zip(&v).for_each(|(acc, x)| *acc += x);
    }
    let mut variability_raw = vec![0.0];
    variability_raw.extend(sums.iter().map(|s| s / cfg.n_boot as f64));

    let denom = 1.0 + variability_raw.iter().sum::<f64>();
    let variability: Vec<f64> = variability_raw.iter().map(|f| f / denom).collect();
    let ladle: Vec<f64> = scree.iter().zip(&variability).map(|(a, b)| a + b).collect();

    let scores = cfg.range.iter().map(|p| ladle[p]).collect();
    let mut warnings = Vec::new();
    if redraws > 0 {
        warnings.push(format!("{redraws} degenerate bootstrap draws were redrawn"));
    }
    let report = SelectionReport::from_scores(
        Method::Ladle,
        cfg.range,
        scores,
        ConfigEcho {
            bandwidth: kernel.bandwidth(),
            kernel: kernel.family(),
            k_folds: None,
            n_boot: Some(cfg.n_boot),
            seed: Some(cfg.rng_seed),
        },
        warnings,
    );
    Ok((
        report,
        LadleComponents {
            scree,
            variability_raw,
            variability,
            ladle,
            redraws,
        },
    ))
}

/// Ladle estimator: rescaled scree plus rescaled bootstrap eigenvector
/// variability, minimised over the order range.
pub fn ladle_select(
    data: &PanelData,
    kernel: &KernelSpec,
    cfg: &LadleConfig,
) -> Result<SelectionReport> {
    ladle_select_with_components(data, kernel, cfg).map(|(r, _)| r)
}
