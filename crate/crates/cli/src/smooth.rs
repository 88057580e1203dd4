use std::path::PathBuf;

use clap::Args;
use ffselect_core::io::atomic_write;
use ffselect_core::{fit_spectrum, local_linear_smooth, KernelFamily};
use nalgebra::DMatrix;

use crate::exit::UsageError;
use crate::input::{BandwidthArg, InputArgs};

#[derive(Debug, Args)]
pub struct SmoothArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Number of equally spaced points on [min U, max U].
    #[arg(long, default_value_t = 101, conflicts_with = "at_observations")]
    pub grid: usize,
    /// Evaluate at the observed U values instead of a grid.
    #[arg(long)]
    pub at_observations: bool,
    /// Append this many estimated factor columns F1..Fp.
    #[arg(long, default_value_t = 0)]
    pub factors: usize,
    #[arg(long, default_value = "rot")]
    pub bandwidth: BandwidthArg,
    #[arg(long, default_value_t = KernelFamily::Epanechnikov)]
    pub kernel: KernelFamily,
    /// Destination CSV; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

pub fn run(args: SmoothArgs) -> anyhow::Result<()> {
    let ingested = args.input.ingest()?;
    let data = &ingested.panel;
    if args.factors > data.m() {
        return Err(UsageError(format!(
            "--factors {} exceeds the {} response columns",
            args.factors,
            data.m()
        ))
        .into());
    }
    let kernel = args.bandwidth.0.resolve(data, args.kernel)?;
    let eval: Vec<f64> = if args.at_observations {
        data.u().to_vec()
    } else {
        if args.grid < 2 {
            return Err(UsageError("--grid needs at least 2 points".into()).into());
        }
        let lo = data.u().iter().copied().fold(f64::INFINITY, f64::min);
        let hi = data.u().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (0..args.grid)
            .map(|k| lo + (hi - lo) * k as f64 / (args.grid - 1) as f64)
            .collect()
    };
    let surface = local_linear_smooth(data, &kernel, &eval)?;
    let factors = if args.factors > 0 {
        // loadings always come from the fit at the observations
        let spectrum = fit_spectrum(data, &kernel)?;
        let v = spectrum
            .eigen()
            .eigenvectors()
            .columns(0, args.factors)
            .into_owned();
        surface.g_hat() * v
    } else {
        DMatrix::zeros(eval.len(), 0)
    };

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["u".to_owned()];
    header.extend(ingested.response_names.iter().map(|n| format!("G_{n}")));
    header.extend((1..=args.factors).map(|j| format!("F{j}")));
    w.write_record(&header)?;
    for (q, u) in eval.iter().enumerate() {
        let mut row = vec![u.to_string()];
        row.extend(surface.g_hat().row(q).iter().map(f64::to_string));
        row.extend(factors.row(q).iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    match &args.output {
        Some(path) => atomic_write(path, &bytes)?,
        None => print!("{}", String::from_utf8(bytes)?),
    }
    Ok(())
}
