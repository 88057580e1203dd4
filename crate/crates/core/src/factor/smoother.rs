use nalgebra::DMatrix;

use super::kernel::KernelSpec;
use super::panel::PanelData;
use crate::error::{Error, Result};

/// Kernel moment sums `s_r(u) = Σ_t K_h(U_t - u)(U_t - u)^r` at each
/// evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct SmootherWeights {
    pub s0: Vec<f64>,
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
    /// `s2·s0 - s1²`, which is also the sum of the local-linear weights.
    pub effective_denominator: Vec<f64>,
}

/// Local-linear fits of every response series on an evaluation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedSurface {
    g_hat: DMatrix<f64>,
    kernel: KernelSpec,
    weights: SmootherWeights,
    eval_points: Vec<f64>,
    at_observations: bool,
}

impl SmoothedSurface {
    /// Fitted values, `q × m` (one row per evaluation point).
    pub fn g_hat(&self) -> &DMatrix<f64> {
        &self.g_hat
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn weights(&self) -> &SmootherWeights {
        &self.weights
    }

    pub fn eval_points(&self) -> &[f64] {
        &self.eval_points
    }

    /// Whether the grid is exactly the observed `U`, in observation order.
    pub fn at_observations(&self) -> bool {
        self.at_observations
    }
}

/// Row-normalised local-linear weight matrix `L` (`q × n`) with
/// `Ĝ(u_j) = Σ_i L[j, i] y_i`.
pub(crate) fn smoother_matrix(
    u: &[f64],
    kernel: &KernelSpec,
    eval_points: &[f64],
) -> Result<(DMatrix<f64>, SmootherWeights)> {
    let n = u.len();
    let q = eval_points.len();
    let mut l = DMatrix::zeros(q, n);
    let mut w = SmootherWeights {
        s0: Vec::with_capacity(q),
        s1: Vec::with_capacity(q),
        s2: Vec::with_capacity(q),
        effective_denominator: Vec::with_capacity(q),
    };
    let mut k = vec![0.0; n];
    for (j, &at) in eval_points.iter().enumerate() {
        if !at.is_finite() {
            return Err(Error::NonFinite {
                context: "evaluation point",
            });
        }
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        let mut support = 0usize;
        for (ki, &ui) in k.iter_mut().zip(u) {
            let d = ui - at;
            *ki = kernel.weight(d);
            if *ki > 0.0 {
                support += 1;
                s0 += *ki;
                s1 += *ki * d;
                s2 += *ki * d * d;
            }
        }
        let denom = s2 * s0 - s1 * s1;
        // Cauchy-Schwarz gives denom >= 0 with equality when all mass sits at
        // one abscissa; the relative floor catches that case through rounding.
        if support < 2 || !(denom > 1e-12 * s0 * s2) {
            return Err(Error::BandwidthTooSmall {
                bandwidth: kernel.bandwidth(),
                point: at,
            });
        }
        for (i, (&ki, &ui)) in k.iter().zip(u).enumerate() {
            if ki > 0.0 {
                l[(j, i)] = ki * (s2 - s1 * (ui - at)) / denom;
            }
        }
        w.s0.push(s0);
        w.s1.push(s1);
        w.s2.push(s2);
        w.effective_denominator.push(denom);
    }
    Ok((l, w))
}

/// Smooths the columns of `y` against `u` without the centering contract of
/// [`PanelData`]; used for fold-reduced and bootstrap panels.
pub(crate) fn smooth_raw(
    u: &[f64],
    y: &DMatrix<f64>,
    kernel: &KernelSpec,
    eval_points: &[f64],
) -> Result<(DMatrix<f64>, SmootherWeights)> {
    let (l, w) = smoother_matrix(u, kernel, eval_points)?;
    let g = &l * y;
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            context: "smoothed surface",
        });
    }
    Ok((g, w))
}

/// Local-linear estimate of every series' regression function on `U`,
/// evaluated at `eval_points`.
///
/// Each fitted value is the ratio `Σ_i y_is W(U_i - u) / Σ_i W(U_i - u)` with
/// `W(U_i - u) = s2(u) K_h(U_i - u) - s1(u) K_h(U_i - u)(U_i - u)`, i.e. the
/// intercept of the kernel-weighted least-squares line at `u`.
pub fn local_linear_smooth(
    data: &PanelData,
    kernel: &KernelSpec,
    eval_points: &[f64],
) -> Result<SmoothedSurface> {
    let (g_hat, weights) = smooth_raw(data.u(), data.y(), kernel, eval_points)?;
    Ok(SmoothedSurface {
        g_hat,
        kernel: *kernel,
        weights,
        eval_points: eval_points.to_vec(),
        at_observations: eval_points == data.u(),
    })
}

/// [`local_linear_smooth`] at the observed `U`.
pub fn smooth_at_observations(data: &PanelData, kernel: &KernelSpec) -> Result<SmoothedSurface> {
    local_linear_smooth(data, kernel, data.u())
}
