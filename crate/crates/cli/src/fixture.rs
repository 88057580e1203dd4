use std::path::PathBuf;

use clap::Subcommand;
use ffselect_core::io::atomic_write;
use ffselect_core::simlab::{ErrorRegime, Scenario, ScenarioSpec, TreasuryFixture};

#[derive(Debug, Subcommand)]
pub enum FixtureCommand {
    /// Daily yield-curve panel: date, vix and 12 maturities, with 8
    /// incomplete rows.
    Treasury {
        #[arg(long, short)]
        output: PathBuf,
        #[arg(long, default_value_t = TreasuryFixture::default().seed)]
        seed: u64,
    },
    /// One simulated panel with columns u, y1..ym.
    Scenario {
        #[arg(long, default_value = "s1")]
        scenario: Scenario,
        #[arg(long, default_value = "e1")]
        regime: ErrorRegime,
        #[arg(long, default_value_t = 150)]
        n: usize,
        #[arg(long, default_value_t = 150)]
        m: usize,
        #[arg(long, default_value_t = 0.25)]
        theta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        output: PathBuf,
    },
}

pub fn run(cmd: FixtureCommand) -> anyhow::Result<()> {
    match cmd {
        FixtureCommand::Treasury { output, seed } => {
            let fixture = TreasuryFixture {
                seed,
                ..TreasuryFixture::default()
            };
            atomic_write(&output, fixture.to_csv().as_bytes())?;
        }
        FixtureCommand::Scenario {
            scenario,
            regime,
            n,
            m,
            theta,
            seed,
            output,
        } => {
            let spec = ScenarioSpec {
                scenario,
                n,
                m,
                theta,
                error_regime: regime,
                rng_seed: seed,
            };
            let (data, _) = spec.generate()?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["u".to_owned()];
            header.extend((1..=m).map(|s| format!("y{s}")));
            w.write_record(&header)?;
            for i in 0..n {
                let mut row = vec![data.u()[i].to_string()];
                row.extend(data.y().row(i).iter().map(f64::to_string));
                w.write_record(&row)?;
            }
            let bytes = w.into_inner().map_err(|e| e.into_error())?;
            atomic_write(&output, &bytes)?;
        }
    }
    Ok(())
}
