//! Functional twice cross-validation.
//!
//! Step 1 holds out a fold of observation rows, fits the factor model on
//! the remaining rows and keeps the fold's loadings `B̂` and in-sample factor
//! values. Step 2 predicts every held-out `y_is` from the other series of
//! the same row: factor values are fitted one at a time by no-intercept OLS
//! on the running residual, and each new factor column is made orthogonal
//! to the previous ones by regressing the spliced length-`n` factor vector
//! (held-out entries from Step 2, held-in entries from Step 1) on its
//! predecessors.
//!
//! All orders `0..=p_max` are scored from one pass: the sequential
//! construction for order `p` is a prefix of the one for `p_max`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::{assign_folds, ConfigEcho, Method, OrderRange, SelectionReport};
use crate::error::{Error, Result};
use crate::factor::{fit_raw, project, KernelSpec, PanelData};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtcvConfig {
    /// Number of folds `K`, `1 < K <= n`. `K = n` is leave-one-out.
    pub k_folds: usize,
    pub range: OrderRange,
    pub rng_seed: u64,
}

impl FtcvConfig {
    pub fn new(k_folds: usize, p_max: usize, rng_seed: u64) -> Self {
        Self {
            k_folds,
            range: OrderRange::up_to(p_max),
            rng_seed,
        }
    }

    /// Leave-one-out folds for a panel with `n` rows.
    pub fn leave_one_out(n: usize, p_max: usize) -> Self {
        Self::new(n, p_max, 0)
    }
}

/// Optional bookkeeping for [`ftcv_select_with_diagnostics`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FtcvProbe {
    /// Check every orthogonalisation residual against its regressors.
    pub orthogonality: bool,
    /// Keep every Step-2 scalar OLS value.
    pub scalar_fits: bool,
}

/// One Step-2 scalar OLS value `F̃_j,−s(U_i)` (0-based `factor`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarFit {
    pub fold: usize,
    pub series: usize,
    pub row: usize,
    pub factor: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FtcvDiagnostics {
    /// Largest `|⟨r, F̆_l⟩| / (‖r‖ ‖F̆_l‖)` over all orthogonalisations.
    pub max_orthogonality_defect: f64,
    pub orthogonality_checks: usize,
    /// `(fold, series, factor)` triples whose leave-one-out loading norm vanished.
    pub zero_loading_events: usize,
    pub scalar_fits: Vec<ScalarFit>,
}

impl FtcvDiagnostics {
    fn merge(&mut self, other: FtcvDiagnostics) {
        self.max_orthogonality_defect = self
            .max_orthogonality_defect
            .max(other.max_orthogonality_defect);
        self.orthogonality_checks += other.orthogonality_checks;
        self.zero_loading_events += other.zero_loading_events;
        self.scalar_fits.extend(other.scalar_fits);
    }
}

struct FoldOutcome {
    /// `(row, Σ_s (y_is − ŷ_is(p))²)` for `p = 0..=p_max`.
    row_errors: Vec<(usize, Vec<f64>)>,
    diagnostics: FtcvDiagnostics,
}

/// Solves the small normal equations `g β = rhs`, falling back to an SVD
/// least-squares solve when `g` is numerically singular.
fn solve_normal(g: DMatrix<f64>, rhs: DVector<f64>) -> DVector<f64> {
    match g.clone().cholesky() {
        Some(ch) => ch.solve(&rhs),
        None => {
            let tol = f64::EPSILON * g.amax().max(f64::MIN_POSITIVE) * g.nrows() as f64;
            g.svd(true, true)
                .solve(&rhs, tol)
                .unwrap_or_else(|_| DVector::zeros(rhs.len()))
        }
    }
}

fn dot_cols(a: &DMatrix<f64>, l: usize, b: &DMatrix<f64>, j: usize) -> f64 {
    let mut acc = 0.0;
    for t in 0..a.nrows() {
        acc += a[(t, l)] * b[(t, j)];
    }
    acc
}

#[allow(clippy::needless_range_loop)]
fn run_fold(
    data: &PanelData,
    kernel: &KernelSpec,
    fold_index: usize,
    held_out: &[usize],
    p_max: usize,
    probe: FtcvProbe,
) -> Result<FoldOutcome> {
    let (n, m) = data.y().shape();
    let mut in_fold = vec![false; n];
    held_out.iter().for_each(|&i| in_fold[i] = true);
    let train: Vec<usize> = (0..n).filter(|&i| !in_fold[i]).collect();
    if train.len() < p_max + 2 {
        return Err(Error::FoldTooSmall {
            fold: fold_index,
            train_rows: train.len(),
            p: p_max,
            needed: p_max + 2,
        });
    }

    // Step 1
    let u_train: Vec<f64> = train.iter().map(|&i| data.u()[i]).collect();
    let y_train = data.y().select_rows(&train);
    let fit = fit_raw(&u_train, &y_train, kernel)?;
    let b = fit.eigen().eigenvectors().columns(0, p_max).into_owned();
    let f_out = project(fit.g_hat(), fit.eigen().eigenvectors(), p_max);

    let mut g_out = DMatrix::zeros(p_max, p_max);
    let mut btb = DMatrix::zeros(p_max, p_max);
    for l in 0..p_max {
        for j in l..p_max {
            g_out[(l, j)] = dot_cols(&f_out, l, &f_out, j);
            g_out[(j, l)] = g_out[(l, j)];
            btb[(l, j)] = dot_cols(&b, l, &b, j);
            btb[(j, l)] = btb[(l, j)];
        }
    }

    let nk = held_out.len();
    let y = data.y();
    let mut yb = DMatrix::zeros(nk, p_max);
    for (r, &i) in held_out.iter().enumerate() {
        for j in 0..p_max {
            let mut acc = 0.0;
            for t in 0..m {
                acc += y[(i, t)] * b[(t, j)];
            }
            yb[(r, j)] = acc;
        }
    }

    let mut diagnostics = FtcvDiagnostics::default();
    let mut errors = vec![vec![0.0; p_max + 1]; nk];
    let mut zero_for_all = vec![true; p_max];
    let mut tilde = DMatrix::zeros(nk, p_max);
    let mut hat = DMatrix::zeros(nk, p_max);
    let mut q = DMatrix::zeros(p_max, p_max);

    // Step 2, one left-out series at a time.
    for s in 0..m {
        for l in 0..p_max {
            for j in 0..p_max {
                q[(l, j)] = btb[(l, j)] - b[(s, l)] * b[(s, j)];
            }
        }
        let mut gram = g_out.clone();
        for j in 0..p_max {
            let denom = q[(j, j)];
            let zero = !(denom > 1e-12 * btb[(j, j)]);
            if zero {
                diagnostics.zero_loading_events += 1;
            } else {
                zero_for_all[j] = false;
            }
            for (r, &i) in held_out.iter().enumerate() {
                let mut num = yb[(r, j)] - y[(i, s)] * b[(s, j)];
                for l in 0..j {
                    num -= hat[(r, l)] * q[(l, j)];
                }
                tilde[(r, j)] = if zero { 0.0 } else { num / denom };
            }
            if probe.scalar_fits {
                for (r, &i) in held_out.iter().enumerate() {
                    diagnostics.scalar_fits.push(ScalarFit {
                        fold: fold_index,
                        series: s,
                        row: i,
                        factor: j,
                        value: tilde[(r, j)],
                    });
                }
            }
            for l in 0..=j {
                let mut acc = g_out[(l, j)];
                for r in 0..nk {
                    acc += tilde[(r, l)] * tilde[(r, j)];
                }
                gram[(l, j)] = acc;
                gram[(j, l)] = acc;
            }
            if j == 0 {
                for r in 0..nk {
                    hat[(r, 0)] = tilde[(r, 0)];
                }
                continue;
            }
            let beta = solve_normal(
                gram.view((0, 0), (j, j)).into_owned(),
                gram.view((0, j), (j, 1)).column(0).into_owned(),
            );
            for r in 0..nk {
                let mut v = tilde[(r, j)];
                for l in 0..j {
                    v -= beta[l] * tilde[(r, l)];
                }
                hat[(r, j)] = v;
            }
            if probe.orthogonality {
                orthogonality_check(
                    &f_out,
                    &tilde,
                    &hat,
                    &beta,
                    &train,
                    held_out,
                    j,
                    &mut diagnostics,
                );
            }
        }
        for (r, &i) in held_out.iter().enumerate() {
            let obs = y[(i, s)];
            let mut pred = 0.0;
            errors[r][0] += obs * obs;
            for p in 1..=p_max {
                pred += hat[(r, p - 1)] * b[(s, p - 1)];
                errors[r][p] += (obs - pred) * (obs - pred);
            }
        }
    }
    if let Some(j) = zero_for_all.iter().position(|&z| z) {
        return Err(Error::ZeroLoadingColumn { factor: j + 1 });
    }
    Ok(FoldOutcome {
        row_errors: held_out.iter().copied().zip(errors).collect(),
        diagnostics,
    })
}

/// Rebuilds the full-length spliced vectors and measures how far the
/// orthogonalisation residual of factor `j` is from orthogonal to each
/// regressor.
#[allow(clippy::too_many_arguments)]
fn orthogonality_check(
    f_out: &DMatrix<f64>,
    tilde: &DMatrix<f64>,
    hat: &DMatrix<f64>,
    beta: &DVector<f64>,
    train: &[usize],
    held_out: &[usize],
    j: usize,
    diag: &mut FtcvDiagnostics,
) {
    let n = train.len() + held_out.len();
    let mut spliced = DMatrix::zeros(n, j);
    let mut resid = DVector::zeros(n);
    for (t, &i) in train.iter().enumerate() {
        let mut v = f_out[(t, j)];
        for l in 0..j {
            spliced[(i, l)] = f_out[(t, l)];
            v -= beta[l] * f_out[(t, l)];
        }
        resid[i] = v;
    }
    for (r, &i) in held_out.iter().enumerate() {
        for l in 0..j {
            spliced[(i, l)] = tilde[(r, l)];
        }
        resid[i] = hat[(r, j)];
    }
    let rn = resid.norm();
    for l in 0..j {
        let col = spliced.column(l);
        let scale = rn * col.norm();
        if scale > 0.0 {
            let defect = resid.dot(&col).abs() / scale;
            diag.max_orthogonality_defect = diag.max_orthogonality_defect.max(defect);
        }
        diag.orthogonality_checks += 1;
    }
}

/// Scores every order with FTCV and records the requested diagnostics.
pub fn ftcv_select_with_diagnostics(
    data: &PanelData,
    kernel: &KernelSpec,
    cfg: &FtcvConfig,
    probe: FtcvProbe,
) -> Result<(SelectionReport, FtcvDiagnostics)> {
    let (n, m) = data.y().shape();
    cfg.range.validate_for(m)?;
    let folds = assign_folds(n, cfg.k_folds, cfg.rng_seed)?;
    let p_max = cfg.range.max;

    let outcomes: Vec<Result<FoldOutcome>> = folds
        .par_iter()
        .enumerate()
        .map(|(k, fold)| run_fold(data, kernel, k, fold, p_max, probe))
        .collect();

    let mut totals = vec![0.0; p_max + 1];
    let mut diagnostics = FtcvDiagnostics::default();
    for outcome in outcomes {
        let outcome = outcome?;
        for (_, errs) in &outcome.row_errors {
            for (acc, e) in totals.iter_mut().zip(errs) {
                *acc += e / m as f64;
            }
        }
        diagnostics.merge(outcome.diagnostics);
    }
    let scores: Vec<f64> = cfg.range.iter().map(|p| totals[p] / n as f64).collect();

    let mut warnings = Vec::new();
    if diagnostics.zero_loading_events > 0 {
        warnings.push(format!(
            "ZeroLoadingColumn: {} leave-variable-out fits used a zero factor value",
            diagnostics.zero_loading_events
        ));
    }
    let report = SelectionReport::from_scores(
        Method::FTCV,
        cfg.range,
        scores,
        ConfigEcho {
            bandwidth: kernel.bandwidth(),
            kernel: kernel.family(),
            k_folds: Some(cfg.k_folds),
            n_boot: None,
            seed: Some(cfg.rng_seed),
        },
        warnings,
    );
    Ok((report, diagnostics))
}

/// Functional twice cross-validation order selection.
pub fn ftcv_select(
    data: &PanelData,
    kernel: &KernelSpec,
    cfg: &FtcvConfig,
) -> Result<SelectionReport> {
    ftcv_select_with_diagnostics(data, kernel, cfg, FtcvProbe::default()).map(|(r, _)| r)
}
