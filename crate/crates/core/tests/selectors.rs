mod common;

use common::{bits, random_panel};
use ffselect_core::selectors::{
    ftcv_select_with_diagnostics, ladle_select_with_components, FtcvProbe,
};
use ffselect_core::simlab::{ErrorRegime, Scenario, ScenarioSpec};
use ffselect_core::{
    center_columns, estimate_factors, fit_spectrum, ftcv_select, icp_select, ladle_select,
    BandwidthRule, Error, FtcvConfig, KernelFamily, KernelSpec, LadleConfig, OrderRange, PanelData,
};
use nalgebra::DMatrix;

fn scenario(scenario: Scenario, n: usize, theta: f64, seed: u64) -> (PanelData, KernelSpec) {
    let spec = ScenarioSpec {
        scenario,
        n,
        m: n,
        theta,
        error_regime: ErrorRegime::E1,
        rng_seed: seed,
    };
    let (data, _) = spec.generate().unwrap();
    let kernel = BandwidthRule::Loocv
        .resolve(&data, KernelFamily::Gaussian)
        .unwrap();
    (data, kernel)
}

fn scaled(data: &PanelData, c: f64) -> PanelData {
    center_columns(&(data.y() * c), data.u()).unwrap()
}

#[test]
fn ladle_variability_is_zero_at_order_zero_and_scale_free() {
    let (data, kernel) = scenario(Scenario::S1, 60, 0.5, 1);
    let cfg = LadleConfig::new(5, 60, 17);
    let (report, parts) = ladle_select_with_components(&data, &kernel, &cfg).unwrap();
    assert_eq!(parts.variability_raw[0], 0.0);
    assert_eq!(parts.variability_raw.len(), 6);
    assert!(parts.scree.iter().sum::<f64>() < 1.0);
    for c in [0.5, 2.0] {
        let (r, p) = ladle_select_with_components(&scaled(&data, c), &kernel, &cfg).unwrap();
        // the eigensolver rescales its input, so agreement is to roundoff
        for (a, b) in p.variability_raw.iter().zip(&parts.variability_raw) {
            assert!((a - b).abs() <= 1e-10, "c = {c}: {a} vs {b}");
        }
        assert_eq!(r.p_hat, report.p_hat);
    }
    for c in [0.6, 0.9, 1.3, 1.7] {
        let r = ladle_select(&scaled(&data, c), &kernel, &cfg).unwrap();
        assert_eq!(r.p_hat, report.p_hat, "c = {c}");
    }
}

#[test]
fn ladle_finds_single_dominant_factor() {
    // Scenario-1 design with the second factor switched off
    let spec = ScenarioSpec {
        scenario: Scenario::S1,
        n: 80,
        m: 40,
        theta: 0.05,
        error_regime: ErrorRegime::E1,
        rng_seed: 5,
    };
    let (_, truth) = spec.generate().unwrap();
    let mut rng = ffselect_core::seed::stream(5, &[1]);
    let noise = ffselect_core::simlab::gen_errors(ErrorRegime::E1, 80, 40, &mut rng).unwrap();
    let raw = DMatrix::from_fn(80, 40, |i, s| {
        truth.factors[(i, 0)] * truth.loadings[(s, 0)] + 0.05f64.sqrt() * noise[(i, s)]
    });
    let data = center_columns(&raw, &truth.u).unwrap();
    let kernel = BandwidthRule::Loocv
        .resolve(&data, KernelFamily::Gaussian)
        .unwrap();
    let r = ladle_select(&data, &kernel, &LadleConfig::new(6, 80, 3)).unwrap();
    assert_eq!(r.p_hat, 1);
}

#[test]
fn ladle_is_reproducible_and_shares_the_full_sample_fit() {
    let (data, kernel) = scenario(Scenario::S2, 50, 0.5, 2);
    let cfg = LadleConfig::new(4, 50, 99);
    let a = ladle_select(&data, &kernel, &cfg).unwrap();
    let b = ladle_select(&data, &kernel, &cfg).unwrap();
    assert_eq!(bits(&a.criterion_values), bits(&b.criterion_values));
    assert_eq!(a, b);
    let spectrum = fit_spectrum(&data, &kernel).unwrap();
    for p in 0..=4 {
        let direct = estimate_factors(&data, &kernel, p).unwrap();
        assert_eq!(spectrum.truncate(p).unwrap().loadings(), direct.loadings());
    }
}

#[test]
fn ftcv_zero_order_is_mean_square() {
    let data = random_panel(40, 6, 11);
    let kernel = KernelSpec::new(KernelFamily::Gaussian, 0.2).unwrap();
    let cfg = FtcvConfig {
        range: OrderRange::new(0, 3).unwrap(),
        ..FtcvConfig::new(5, 3, 1)
    };
    let r = ftcv_select(&data, &kernel, &cfg).unwrap();
    let rel = (r.criterion_values[0] - data.mean_square()).abs() / data.mean_square();
    assert!(rel < 1e-12, "{rel}");
}

#[test]
fn ftcv_orthogonalisation_residuals_are_orthogonal() {
    let (data, kernel) = scenario(Scenario::S1, 50, 1.0, 4);
    let probe = FtcvProbe {
        orthogonality: true,
        scalar_fits: false,
    };
    let (_, diag) =
        ftcv_select_with_diagnostics(&data, &kernel, &FtcvConfig::new(10, 6, 2), probe).unwrap();
    assert!(diag.orthogonality_checks > 0);
    assert!(
        diag.max_orthogonality_defect <= 1e-8,
        "{}",
        diag.max_orthogonality_defect
    );
}

#[test]
fn ftcv_leave_one_out_ignores_the_seed() {
    let data = random_panel(30, 5, 21);
    let kernel = KernelSpec::new(KernelFamily::Gaussian, 0.2).unwrap();
    let a = ftcv_select(&data, &kernel, &FtcvConfig::leave_one_out(30, 3)).unwrap();
    let b = ftcv_select(&data, &kernel, &FtcvConfig::leave_one_out(30, 3)).unwrap();
    let c = ftcv_select(
        &data,
        &kernel,
        &FtcvConfig {
            rng_seed: 12345,
            ..FtcvConfig::leave_one_out(30, 3)
        },
    )
    .unwrap();
    assert_eq!(bits(&a.criterion_values), bits(&b.criterion_values));
    assert_eq!(bits(&a.criterion_values), bits(&c.criterion_values));
}

#[test]
fn ftcv_scalar_fits_are_nested_in_the_order() {
    let data = random_panel(36, 8, 31);
    let kernel = KernelSpec::new(KernelFamily::Gaussian, 0.2).unwrap();
    let probe = FtcvProbe {
        orthogonality: false,
        scalar_fits: true,
    };
    let run = |p_max| {
        ftcv_select_with_diagnostics(&data, &kernel, &FtcvConfig::new(4, p_max, 8), probe)
            .unwrap()
            .1
            .scalar_fits
    };
    let small = run(3);
    let large = run(6);
    let keep =
        |v: &[ffselect_core::selectors::ScalarFit]| -> Vec<(usize, usize, usize, usize, u64)> {
            v.iter()
                .filter(|f| f.factor < 3)
                .map(|f| (f.fold, f.series, f.row, f.factor, f.value.to_bits()))
                .collect()
        };
    assert!(!small.is_empty());
    assert_eq!(keep(&small), keep(&large));
}

#[test]
fn ftcv_rejects_tiny_folds() {
    let data = random_panel(8, 7, 1);
    let kernel = KernelSpec::new(KernelFamily::Gaussian, 0.3).unwrap();
    let err = ftcv_select(&data, &kernel, &FtcvConfig::new(2, 5, 1)).unwrap_err();
    assert!(matches!(err, Error::FoldTooSmall { .. }), "{err:?}");
}

#[test]
fn ftcv_warns_when_a_factor_lives_on_one_series() {
    // only series 0 varies, so the leading loading column is e_0
    let u: Vec<f64> = (0..30).map(|i| i as f64 / 29.0).collect();
    let raw = DMatrix::from_fn(30, 3, |i, s| if s == 0 { (6.0 * u[i]).sin() } else { 0.0 });
    let data = center_columns(&raw, &u).unwrap();
    let kernel = KernelSpec::new(KernelFamily::Gaussian, 0.1).unwrap();
    let r = ftcv_select(&data, &kernel, &FtcvConfig::new(3, 1, 4)).unwrap();
    assert!(
        r.warnings
            .iter()
            .any(|w| w.starts_with("ZeroLoadingColumn")),
        "{:?}",
        r.warnings
    );
}

#[test]
fn low_noise_scenario_one_selects_two() {
    let (data, kernel) = scenario(Scenario::S1, 150, 0.25, 2024);
    let range = OrderRange::new(0, 8).unwrap();
    let ftcv = ftcv_select(
        &data,
        &kernel,
        &FtcvConfig {
            range,
            ..FtcvConfig::new(10, 8, 7)
        },
    )
    .unwrap();
    assert_eq!(ftcv.p_hat, 2);
    assert_eq!(icp_select(&data, &kernel, range).unwrap().p_hat, 2);
}
