use super::{ConfigEcho, Method, OrderRange, SelectionReport};
use crate::error::{Error, Result};
use crate::factor::{fit_spectrum, FactorEstimate, KernelSpec, PanelData};

/// Floor applied to the residual variance before taking its log.
const VARIANCE_FLOOR: f64 = 1e-12;

/// `σ̂²_[p] = (1/nm) Σ_i Σ_s (y_is − Σ_j b̂_sj F̂_j(U_i))²`.
pub fn residual_variance(data: &PanelData, fit: &FactorEstimate) -> Result<f64> {
    let (n, m) = data.y().shape();
    if fit.factors().nrows() != n || fit.loadings().nrows() != m {
        return Err(Error::ShapeMismatch(format!(
            "fit has {} factor rows and {} loading rows, panel is {n}x{m}",
            fit.factors().nrows(),
            fit.loadings().nrows()
        )));
    }
    let resid = data.y() - fit.common_component();
    Ok(resid.iter().map(|r| r * r).sum::<f64>() / (n * m) as f64)
}

/// Penalty `g(n, m) = ((n + m)/(nm)) · ln(nm/(n + m))`.
pub fn icp_penalty(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    (n + m) / (n * m) * (n * m / (n + m)).ln()
}

/// Panel information criterion `ln σ̂²_[p] + p · g(n, m)`.
pub fn icp_select(
    data: &PanelData,
    kernel: &KernelSpec,
    range: OrderRange,
) -> Result<SelectionReport> {
    range.validate_for(data.m())?;
    let spectrum = fit_spectrum(data, kernel)?;
    let penalty = icp_penalty(data.n(), data.m());
    let scores = range
        .iter()
        .map(|p| {
            let fit = spectrum.truncate(p)?;
            let var = residual_variance(data, &fit)?;
            Ok(var.max(VARIANCE_FLOOR).ln() + p as f64 * penalty)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SelectionReport::from_scores(
        Method::ICp,
        range,
        scores,
        ConfigEcho {
            bandwidth: kernel.bandwidth(),
            kernel: kernel.family(),
            k_folds: None,
            n_boot: None,
            seed: None,
        },
        Vec::new(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::{center_columns, estimate_factors, KernelFamily};
    use nalgebra::DMatrix;

    #[test]
    fn penalty_hand_value() {
        // n = m = 100: (200/10000)·ln(50)
        let g = icp_penalty(100, 100);
        assert!((g - 0.02 * 50f64.ln()).abs() < 1e-15);
        assert!((g - 0.0782).abs() < 1e-4);
    }

    #[test]
    fn penalty_is_positive_so_p_times_g_increases() {
        // n = m = 2 gives ln(1) = 0; panels have n >= 3
        assert_eq!(icp_penalty(2, 2), 0.0);
        for n in 3..40 {
            for m in 2..40 {
                assert!(icp_penalty(n, m) > 0.0, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn double_loop_oracle() {
        let raw = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, -0.5, 4.0, 3.0, -1.0]);
        let panel = center_columns(&raw, &[0.0, 0.5, 1.0]).unwrap();
        let k = KernelSpec::new(KernelFamily::Gaussian, 1.0).unwrap();
        for p in 0..=2 {
            let fit = estimate_factors(&panel, &k, p).unwrap();
            let mut acc = 0.0;
            for i in 0..3 {
                for s in 0..2 {
                    let mut pred = 0.0;
                    for j in 0..p {
                        pred += fit.loadings()[(s, j)] * fit.factors()[(i, j)];
                    }
                    acc += (panel.y()[(i, s)] - pred).powi(2);
                }
            }
            let got = residual_variance(&panel, &fit).unwrap();
            assert!((got - acc / 6.0).abs() < 1e-12);
            if p == 0 {
                assert!((got - panel.mean_square()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn constant_variance_selects_zero() {
        // identical σ̂² at every order
        let scores: Vec<f64> = (0..5)
            .map(|p| 0.3f64.ln() + p as f64 * icp_penalty(10, 10))
            .collect();
        assert_eq!(super::super::argmin(&scores), 0);
    }
}
