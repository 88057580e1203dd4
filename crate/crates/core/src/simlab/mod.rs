//! Synthetic panels and the seeded Monte-Carlo replication grid.

mod curves;
mod fixture;
mod grid;
mod scenario;

pub use curves::{emit_frequency_curves, read_frequency_curves, CurveRow, CURVE_HEADER};
pub use fixture::{TreasuryFixture, TREASURY_MATURITIES};
pub use grid::{
    run_grid, CellResult, CellSpec, GridResult, GridSpec, MethodKind, SeedRecord, DEFAULT_THETAS,
};
pub use scenario::{
    gen_errors, gen_scenario1, gen_scenario2, scenario2_factors, ErrorRegime, Scenario,
    ScenarioSpec, TruthRecord,
};
