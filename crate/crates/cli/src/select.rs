use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use ffselect_core::io::{DataSummary, MethodReport, RunReport, REPORT_SCHEMA};
use ffselect_core::simlab::MethodKind;
use ffselect_core::{KernelFamily, OrderRange};

use crate::exit::UsageError;
use crate::input::{BandwidthArg, InputArgs};

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Selectors to run: ftcv1, ftcv10, ladle, icp.
    #[arg(long = "method", value_delimiter = ',', default_values_t = MethodKind::ALL)]
    pub methods: Vec<MethodKind>,
    /// Fold count used by `ftcv10` (`ftcv1` is always leave-one-out).
    #[arg(long, default_value_t = 10)]
    pub k_folds: usize,
    #[arg(long, default_value_t = 0)]
    pub p_min: usize,
    /// Largest order searched.
    #[arg(long, default_value_t = 8)]
    pub p_max: usize,
    /// `rot` (rule of thumb), `cv` (leave-one-out) or a fixed value.
    #[arg(long, default_value = "rot")]
    pub bandwidth: BandwidthArg,
    #[arg(long, default_value_t = KernelFamily::Epanechnikov)]
    pub kernel: KernelFamily,
    /// Seed for fold assignment and bootstrap draws.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Ladle bootstrap replicates; default min(n, 500).
    #[arg(long)]
    pub n_boot: Option<usize>,
    /// Run report destination.
    #[arg(long, short, default_value = "run_report.json")]
    pub output: PathBuf,
    /// Record wall_ms = 0 so reports are byte-identical across runs.
    #[arg(long)]
    pub no_timing: bool,
}

pub fn run(args: SelectArgs) -> anyhow::Result<()> {
    if args.p_max == 0 {
        return Err(UsageError("--p-max must be at least 1".into()).into());
    }
    if args.k_folds < 2 {
        return Err(UsageError("--k-folds must be at least 2".into()).into());
    }
    let range = OrderRange::new(args.p_min, args.p_max)?;
    let ingested = args.input.ingest()?;
    let data = &ingested.panel;
    let kernel = args.bandwidth.0.resolve(data, args.kernel)?;

    let mut methods = Vec::with_capacity(args.methods.len());
    for &method in &args.methods {
        let start = Instant::now();
        let report = method.select(data, &kernel, range, args.k_folds, args.n_boot, args.seed)?;
        let wall_ms = if args.no_timing {
            0
        } else {
            start.elapsed().as_millis() as u64
        };
        println!(
            "{method} {} {}",
            report.p_hat,
            report
                .criterion_at(report.p_hat)
                .expect("p_hat lies in the range")
        );
        methods.push(MethodReport {
            method: method.to_string(),
            p_hat: report.p_hat,
            criterion_values: report.criterion_values,
            p_min: range.min,
            p_max: range.max,
            bandwidth: kernel.bandwidth(),
            kernel: kernel.family(),
            seed: args.seed,
            n: data.n(),
            m: data.m(),
            k_folds: report.config_echo.k_folds,
            n_boot: report.config_echo.n_boot,
            warnings: report.warnings,
            wall_ms,
        });
    }

    let mut warnings = Vec::new();
    if ingested.dropped_incomplete > 0 {
        warnings.push(format!(
            "dropped {} incomplete rows",
            ingested.dropped_incomplete
        ));
    }
    let (date_start, date_end) = match ingested.date_range() {
        Some((a, b)) => (Some(a.to_string()), Some(b.to_string())),
        None => (None, None),
    };
    let report = RunReport {
        schema: REPORT_SCHEMA.into(),
        data: DataSummary {
            source: args.input.input.display().to_string(),
            u_column: ingested.u_column.clone(),
            response_columns: ingested.response_names.clone(),
            log_u: args.input.log_u,
            n: data.n(),
            m: data.m(),
            rows_read: ingested.rows_read,
            dropped_incomplete: ingested.dropped_incomplete,
            date_start,
            date_end,
            preprocessing_order: "filter-then-center".into(),
        },
        bandwidth: kernel.bandwidth(),
        bandwidth_source: args.bandwidth.0.source().into(),
        kernel: kernel.family(),
        seed: args.seed,
        methods,
        warnings,
    };
    report.validate()?;
    report.write(&args.output)?;
    Ok(())
}
