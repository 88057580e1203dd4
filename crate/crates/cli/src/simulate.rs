use std::path::PathBuf;

use clap::Args;
use ffselect_core::simlab::{
    emit_frequency_curves, run_grid, ErrorRegime, GridSpec, MethodKind, Scenario, DEFAULT_THETAS,
};
use ffselect_core::{KernelFamily, OrderRange};

use crate::input::BandwidthArg;

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenarios: s1 (two trigonometric factors), s2 (three polynomial factors).
    #[arg(long, value_delimiter = ',', default_value = "s1")]
    pub scenario: Vec<Scenario>,
    /// Error regimes: e1 (iid), e2 (heteroskedastic), e3 (cross-correlated).
    #[arg(long, value_delimiter = ',', default_value = "e1")]
    pub regime: Vec<ErrorRegime>,
    #[arg(long, value_delimiter = ',', default_value = "150")]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "150")]
    pub m: Vec<usize>,
    /// Noise levels.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_THETAS)]
    pub theta: Vec<f64>,
    /// Replications per cell.
    #[arg(long, default_value_t = 100)]
    pub reps: usize,
    /// Master seed; every cell derives its own seeds from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',', default_values_t = MethodKind::ALL)]
    pub methods: Vec<MethodKind>,
    #[arg(long, default_value_t = 1)]
    pub p_min: usize,
    #[arg(long, default_value_t = 8)]
    pub p_max: usize,
    /// Fold count used by `ftcv10`.
    #[arg(long, default_value_t = 10)]
    pub k_folds: usize,
    /// Ladle bootstrap replicates; default min(n, 500).
    #[arg(long)]
    pub n_boot: Option<usize>,
    #[arg(long, default_value_t = KernelFamily::Gaussian)]
    pub kernel: KernelFamily,
    /// `rot`, `cv` or a fixed value, applied to every generated panel.
    #[arg(long, default_value = "cv")]
    pub bandwidth: BandwidthArg,
    /// Frequency CSV; the grid configuration is written next to it as
    /// `<stem>.config.json`.
    #[arg(long, short, default_value = "frequencies.csv")]
    pub output: PathBuf,
}

pub fn run(args: SimulateArgs) -> anyhow::Result<()> {
    let cells = GridSpec::cartesian(&args.scenario, &args.regime, &args.n, &args.m, &args.theta);
    let mut spec = GridSpec::new(cells, args.seed);
    spec.methods = args.methods;
    spec.replications = args.reps;
    spec.p_range = OrderRange::new(args.p_min, args.p_max)?;
    spec.k_folds = args.k_folds;
    spec.n_boot = args.n_boot;
    spec.kernel = args.kernel;
    spec.bandwidth = args.bandwidth.0;

    let result = run_grid(&spec)?;
    emit_frequency_curves(&result, &args.output)?;
    println!(
        "{:<8} {:<5} {:>5} {:>5} {:>7} {:<7} {:>9} {:>8}",
        "scenario", "error", "n", "m", "theta", "method", "frequency", "failures"
    );
    for r in &result.results {
        println!(
            "{:<8} {:<5} {:>5} {:>5} {:>7} {:<7} {:>9.3} {:>8}",
            r.cell.scenario.to_string(),
            r.cell.regime.to_string(),
            r.cell.n,
            r.cell.m,
            r.cell.theta,
            r.method.to_string(),
            r.frequency,
            r.failures
        );
    }
    Ok(())
}
