use serde::{Deserialize, Serialize};

use super::kernel::{KernelFamily, KernelSpec};
use super::panel::PanelData;
use super::smoother::smoother_matrix;
use crate::error::{Error, Result};

fn sample_sd(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Linearly interpolated quantile of sorted data.
fn quantile_sorted(sorted: &[f64], prob: f64) -> f64 {
    let pos = prob * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Normal-reference bandwidth `1.06 · min(sd, IQR/1.34) · n^(-1/5)`.
///
/// Falls back to the standard deviation when the interquartile range is
/// zero but the data are not constant.
pub fn bandwidth_rule_of_thumb(u: &[f64]) -> Result<f64> {
    if u.len() < 3 {
        return Err(Error::TooSmall { n: u.len(), m: 0 });
    }
    if u.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { context: "U" });
    }
    let sd = sample_sd(u);
    if !(sd > 0.0) {
        return Err(Error::DegenerateU);
    }
    let mut sorted = u.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    Ok(1.06 * spread * (u.len() as f64).powf(-0.2))
}

impl KernelSpec {
    /// Kernel of the given family with the rule-of-thumb bandwidth for `data.u()`.
    pub fn rule_of_thumb(data: &PanelData, family: KernelFamily) -> Result<Self> {
        Self::new(family, bandwidth_rule_of_thumb(data.u())?)
    }
}

/// How a bandwidth is chosen for a panel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BandwidthRule {
    RuleOfThumb,
    Loocv,
    Fixed(f64),
}

impl BandwidthRule {
    pub fn resolve(self, data: &PanelData, family: KernelFamily) -> Result<KernelSpec> {
        match self {
            BandwidthRule::RuleOfThumb => KernelSpec::rule_of_thumb(data, family),
            BandwidthRule::Loocv => KernelSpec::new(family, bandwidth_loocv(data, family)?.0),
            BandwidthRule::Fixed(h) => KernelSpec::new(family, h),
        }
    }

    /// Label recorded in reports.
    pub fn source(self) -> &'static str {
        match self {
            BandwidthRule::RuleOfThumb => "rule-of-thumb",
            BandwidthRule::Loocv => "loocv",
            BandwidthRule::Fixed(_) => "fixed",
        }
    }
}

/// Candidate grid for [`bandwidth_loocv`]: 20 log-spaced values in `[h0/4, 4 h0]`.
pub fn loocv_grid(h0: f64) -> Vec<f64> {
    const POINTS: usize = 20;
    let (lo, hi) = ((h0 / 4.0).ln(), (4.0 * h0).ln());
    (0..POINTS)
        .map(|k| (lo + (hi - lo) * k as f64 / (POINTS - 1) as f64).exp())
        .collect()
}

/// Leave-one-out cross-validated bandwidth, pooled over all series.
///
/// Candidates at which the smoother is undefined are skipped. Returns the
/// chosen bandwidth and the CV score per candidate (`inf` for skipped ones).
pub fn bandwidth_loocv(data: &PanelData, family: KernelFamily) -> Result<(f64, Vec<(f64, f64)>)> {
    let h0 = bandwidth_rule_of_thumb(data.u())?;
    let y = data.y();
    let (n, m) = y.shape();
    let mut scores = Vec::new();
    for h in loocv_grid(h0) {
        let kernel = KernelSpec::new(family, h)?;
        let score = match smoother_matrix(data.u(), &kernel, data.u()) {
            Ok((l, _)) if (0..n).all(|i| l[(i, i)] < 1.0 - 1e-10) => {
                let fitted = &l * y;
                let mut acc = 0.0;
                for s in 0..m {
                    for i in 0..n {
                        let r = (y[(i, s)] - fitted[(i, s)]) / (1.0 - l[(i, i)]);
                        acc += r * r;
                    }
                }
                acc / (n * m) as f64
            }
            _ => f64::INFINITY,
        };
        scores.push((h, score));
    }
    let best = scores
        .iter()
        .filter(|(_, s)| s.is_finite())
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|&(h, _)| h)
        .ok_or_else(|| {
            Error::NumericalFailure("no candidate bandwidth gives a defined smoother".into())
        })?;
    Ok((best, scores))
}
