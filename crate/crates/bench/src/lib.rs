//! Shared inputs for the criterion benchmarks in `benches/`.

use ffselect_core::simlab::{ErrorRegime, Scenario, ScenarioSpec};
use ffselect_core::{KernelFamily, KernelSpec, PanelData};

/// A seeded Scenario 1 panel with its LOO-CV Gaussian kernel.
pub fn bench_panel(n: usize, m: usize) -> (PanelData, KernelSpec) {
    let spec = ScenarioSpec {
        scenario: Scenario::S1,
        n,
        m,
        theta: 0.25,
        error_regime: ErrorRegime::E1,
        rng_seed: 7,
    };
    let (panel, _) = spec.generate().expect("valid scenario");
    let kernel = ffselect_core::BandwidthRule::Loocv
        .resolve(&panel, KernelFamily::Gaussian)
        .expect("bandwidth");
    (panel, kernel)
}
