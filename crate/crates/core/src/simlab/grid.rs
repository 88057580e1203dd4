use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scenario::{ErrorRegime, Scenario, ScenarioSpec};
use crate::error::{Error, Result};
use crate::factor::{BandwidthRule, KernelFamily, KernelSpec, PanelData};
use crate::seed::derive_seed;
use crate::selectors::{
    ftcv_select, icp_select, ladle_select, FtcvConfig, LadleConfig, OrderRange, SelectionReport,
};

/// A selector together with its fold / bootstrap flavour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    /// Leave-one-out FTCV.
    Ftcv1,
    /// 10-fold FTCV (the fold count is [`GridSpec::k_folds`]).
    Ftcv10,
    Ladle,
    Icp,
}

impl MethodKind {
    pub const ALL: [MethodKind; 4] = [
        MethodKind::Ftcv1,
        MethodKind::Ftcv10,
        MethodKind::Ladle,
        MethodKind::Icp,
    ];

    fn id(self) -> u64 {
        match self {
            MethodKind::Ftcv1 => 1,
            MethodKind::Ftcv10 => 2,
            MethodKind::Ladle => 3,
            MethodKind::Icp => 4,
        }
    }

    /// Runs this selector on `data`.
    pub fn select(
        self,
        data: &PanelData,
        kernel: &KernelSpec,
        range: OrderRange,
        k_folds: usize,
        n_boot: Option<usize>,
        seed: u64,
    ) -> Result<SelectionReport> {
        match self {
            MethodKind::Ftcv1 => ftcv_select(
                data,
                kernel,
                &FtcvConfig {
                    k_folds: data.n(),
                    range,
                    rng_seed: seed,
                },
            ),
            MethodKind::Ftcv10 => ftcv_select(
                data,
                kernel,
                &FtcvConfig {
                    k_folds: k_folds.min(data.n()),
                    range,
                    rng_seed: seed,
                },
            ),
            MethodKind::Ladle => {
                let mut cfg = LadleConfig::new(range.max, data.n(), seed);
                cfg.range = range;
                if let Some(b) = n_boot {
                    cfg.n_boot = b;
                }
                ladle_select(data, kernel, &cfg)
            }
            MethodKind::Icp => icp_select(data, kernel, range),
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MethodKind::Ftcv1 => "ftcv1",
            MethodKind::Ftcv10 => "ftcv10",
            MethodKind::Ladle => "ladle",
            MethodKind::Icp => "icp",
        })
    }
}

impl FromStr for MethodKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ftcv1" => Ok(MethodKind::Ftcv1),
            "ftcv10" => Ok(MethodKind::Ftcv10),
            "ladle" => Ok(MethodKind::Ladle),
            "icp" => Ok(MethodKind::Icp),
            other => Err(Error::InvalidConfig(format!("unknown method `{other}`"))),
        }
    }
}

/// Design point of the replication grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellSpec {
    pub scenario: Scenario,
    pub n: usize,
    pub m: usize,
    pub theta: f64,
    pub regime: ErrorRegime,
}

impl CellSpec {
    /// Content-addressed seed path, so a cell reproduces in isolation.
    fn seed_path(&self, replication: usize) -> [u64; 6] {
        [
            self.scenario.id(),
            self.n as u64,
            self.m as u64,
            self.theta.to_bits(),
            self.regime.id(),
            replication as u64,
        ]
    }

    pub fn data_seed(&self, master_seed: u64, replication: usize) -> u64 {
        derive_seed(master_seed, &self.seed_path(replication))
    }
}

/// Full configuration of a Monte-Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub cells: Vec<CellSpec>,
    pub methods: Vec<MethodKind>,
    pub replications: usize,
    pub master_seed: u64,
    pub p_range: OrderRange,
    pub kernel: KernelFamily,
    /// Bandwidth selection applied to every generated panel.
    pub bandwidth: BandwidthRule,
    /// Fold count of [`MethodKind::Ftcv10`].
    pub k_folds: usize,
    /// Ladle replicate count; `None` uses `min(n, 500)`.
    pub n_boot: Option<usize>,
    /// Fraction of failed replications a cell may absorb.
    pub failure_budget: f64,
}

/// Default noise grid.
pub const DEFAULT_THETAS: [f64; 6] = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0];

impl GridSpec {
    /// Desk-scale defaults: orders `1..=8`, all four methods, `R = 100`,
    /// Gaussian kernel with a leave-one-out bandwidth.
    pub fn new(cells: Vec<CellSpec>, master_seed: u64) -> Self {
        Self {
            cells,
            methods: MethodKind::ALL.to_vec(),
            replications: 100,
            master_seed,
            p_range: OrderRange { min: 1, max: 8 },
            kernel: KernelFamily::Gaussian,
            bandwidth: BandwidthRule::Loocv,
            k_folds: 10,
            n_boot: None,
            failure_budget: 0.05,
        }
    }

    /// Cartesian product of the given axes.
    pub fn cartesian(
        scenarios: &[Scenario],
        regimes: &[ErrorRegime],
        ns: &[usize],
        ms: &[usize],
        thetas: &[f64],
    ) -> Vec<CellSpec> {
        let mut cells = Vec::new();
        for &scenario in scenarios {
            for &regime in regimes {
                for &n in ns {
                    for &m in ms {
                        for &theta in thetas {
                            cells.push(CellSpec {
                                scenario,
                                n,
                                m,
                                theta,
                                regime,
                            });
                        }
                    }
                }
            }
        }
        cells
    }
}

/// Frequency of correct selection for one `(cell, method)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub cell: CellSpec,
    pub method: MethodKind,
    pub replications: usize,
    pub correct: usize,
    pub failures: usize,
    /// Correct selections over all replications (failures count as misses).
    pub frequency: f64,
    /// Selected order per replication, `None` for a failed one.
    pub selections: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub cell: usize,
    pub replication: usize,
    pub data_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub spec: GridSpec,
    pub results: Vec<CellResult>,
    pub seeds: Vec<SeedRecord>,
}

fn run_replication(spec: &GridSpec, cell: &CellSpec, data_seed: u64) -> Vec<Result<usize>> {
    let scenario = ScenarioSpec {
        scenario: cell.scenario,
        n: cell.n,
        m: cell.m,
        theta: cell.theta,
        error_regime: cell.regime,
        rng_seed: data_seed,
    };
    let prepared = scenario.generate().and_then(|(data, _)| {
        spec.bandwidth
            .resolve(&data, spec.kernel)
            .map(|k| (data, k))
    });
    let (data, kernel) = match prepared {
        Ok(v) => v,
        Err(e) => {
            let msg = e.to_string();
            return spec
                .methods
                .iter()
                .map(|_| Err(Error::NumericalFailure(msg.clone())))
                .collect();
        }
    };
    spec.methods
        .iter()
        .map(|&method| {
            let seed = derive_seed(data_seed, &[method.id()]);
            method
                .select(
                    &data,
                    &kernel,
                    spec.p_range,
                    spec.k_folds,
                    spec.n_boot,
                    seed,
                )
                .map(|r| r.p_hat)
        })
        .collect()
}

/// Runs every `(cell, replication)` and aggregates correct-selection
/// frequencies per `(cell, method)`.
pub fn run_grid(spec: &GridSpec) -> Result<GridResult> {
    if spec.replications == 0 {
        return Err(Error::InvalidConfig(
            "replications must be at least 1".into(),
        ));
    }
    if spec.methods.is_empty() || spec.cells.is_empty() {
        return Err(Error::InvalidConfig(
            "grid needs at least one cell and one method".into(),
        ));
    }
    for cell in &spec.cells {
        spec.p_range.validate_for(cell.m)?;
    }

    let tasks: Vec<(usize, usize)> = (0..spec.cells.len())
        .flat_map(|c| (0..spec.replications).map(move |r| (c, r)))
        .collect();
    let outcomes: Vec<Vec<Result<usize>>> = tasks
        .par_iter()
        .map(|&(c, r)| {
            let cell = &spec.cells[c];
            run_replication(spec, cell, cell.data_seed(spec.master_seed, r))
        })
        .collect();

    let mut results = Vec::with_capacity(spec.cells.len() * spec.methods.len());
    for (c, cell) in spec.cells.iter().enumerate() {
        let reps = &outcomes[c * spec.replications..(c + 1) * spec.replications];
        for (k, &method) in spec.methods.iter().enumerate() {
            let selections: Vec<Option<usize>> =
                reps.iter().map(|o| o[k].as_ref().ok().copied()).collect();
            let failures = selections.iter().filter(|s| s.is_none()).count();
            if failures as f64 > spec.failure_budget * spec.replications as f64 {
                return Err(Error::FailureBudget {
                    cell: format!(
                        "{} {} n={} m={} theta={} {method}",
                        cell.scenario, cell.regime, cell.n, cell.m, cell.theta
                    ),
                    failures,
                    replications: spec.replications,
                });
            }
            let p0 = cell.scenario.true_order();
            let correct = selections.iter().filter(|s| **s == Some(p0)).count();
            results.push(CellResult {
                cell: *cell,
                method,
                replications: spec.replications,
                correct,
                failures,
                frequency: correct as f64 / spec.replications as f64,
                selections,
            });
        }
    }
    let seeds = tasks
        .iter()
        .map(|&(c, r)| SeedRecord {
            cell: c,
            replication: r,
            data_seed: spec.cells[c].data_seed(spec.master_seed, r),
        })
        .collect();
    Ok(GridResult {
        spec: spec.clone(),
        results,
        seeds,
    })
}
