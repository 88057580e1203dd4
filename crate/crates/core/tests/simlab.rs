use ffselect_core::io::{ingest_csv, IngestSpec};
use ffselect_core::simlab::{
    emit_frequency_curves, read_frequency_curves, run_grid, CellSpec, ErrorRegime, GridSpec,
    MethodKind, Scenario, ScenarioSpec, TreasuryFixture, CURVE_HEADER,
};
use ffselect_core::{fit_spectrum, BandwidthRule, Error, KernelFamily, OrderRange};

fn cell(scenario: Scenario, n: usize, theta: f64, regime: ErrorRegime) -> CellSpec {
    CellSpec {
        scenario,
        n,
        m: n,
        theta,
        regime,
    }
}

#[test]
fn scenario_two_zeroes_columns_uniformly() {
    let spec = ScenarioSpec {
        scenario: Scenario::S2,
        n: 5,
        m: 3000,
        theta: 1.0,
        error_regime: ErrorRegime::E1,
        rng_seed: 77,
    };
    let (_, truth) = spec.generate().unwrap();
    let mut counts = [0usize; 3];
    for s in 0..3000 {
        let zeros: Vec<usize> = (0..3).filter(|&j| truth.loadings[(s, j)] == 0.0).collect();
        assert_eq!(zeros.len(), 1, "series {s}");
        counts[zeros[0]] += 1;
    }
    // chi-square with 2 degrees of freedom, 0.1% critical value
    let chi2: f64 = counts
        .iter()
        .map(|&c| (c as f64 - 1000.0).powi(2) / 1000.0)
        .sum();
    assert!(chi2 < 13.82, "{counts:?}");
}

#[test]
fn noiseless_panels_have_rank_equal_to_the_true_order() {
    for (scenario, p0) in [(Scenario::S1, 2), (Scenario::S2, 3)] {
        let spec = ScenarioSpec {
            scenario,
            n: 80,
            m: 30,
            theta: 0.0,
            error_regime: ErrorRegime::E3,
            rng_seed: 3,
        };
        let (data, truth) = spec.generate().unwrap();
        assert_eq!(truth.p0, p0);
        let kernel = BandwidthRule::RuleOfThumb
            .resolve(&data, KernelFamily::Gaussian)
            .unwrap();
        let lambda = fit_spectrum(&data, &kernel)
            .unwrap()
            .eigen()
            .eigenvalues()
            .to_vec();
        assert!(lambda[p0 - 1] > 1e-3 * lambda[0]);
        assert!(
            lambda[p0] <= 1e-10 * lambda[0],
            "{scenario}: {:?}",
            &lambda[..p0 + 1]
        );
    }
}

#[test]
fn noiseless_grid_cell_is_always_right() {
    let mut spec = GridSpec::new(vec![cell(Scenario::S1, 150, 0.0, ErrorRegime::E1)], 11);
    spec.replications = 1;
    let result = run_grid(&spec).unwrap();
    assert_eq!(result.results.len(), 4);
    for r in &result.results {
        assert_eq!(r.frequency, 1.0, "{}", r.method);
        assert_eq!(r.failures, 0);
    }
}

fn small_grid(seed: u64) -> GridSpec {
    let cells = GridSpec::cartesian(
        &[Scenario::S1, Scenario::S2],
        &[ErrorRegime::E1, ErrorRegime::E2],
        &[30],
        &[20],
        &[0.5, 2.0],
    );
    let mut spec = GridSpec::new(cells, seed);
    spec.replications = 3;
    spec.p_range = OrderRange::new(1, 5).unwrap();
    spec
}

#[test]
fn grid_is_reproducible_and_cells_are_content_addressed() {
    let spec = small_grid(5);
    let a = run_grid(&spec).unwrap();
    let b = run_grid(&spec).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    assert_eq!(a.results.len(), 8 * 4);
    assert_eq!(a.seeds.len(), 8 * 3);

    // a cell run alone reproduces its slice of the full grid
    let mut single = spec.clone();
    single.cells = vec![spec.cells[5]];
    let alone = run_grid(&single).unwrap();
    assert_eq!(alone.results[..], a.results[5 * 4..6 * 4]);
}

#[test]
fn frequency_curves_round_trip() {
    let result = run_grid(&small_grid(9)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("freq.csv");
    let echo = emit_frequency_curves(&result, &path).unwrap();
    assert_eq!(echo, dir.path().join("freq.config.json"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), CURVE_HEADER);
    let rows = read_frequency_curves(&path).unwrap();
    assert_eq!(rows.len(), result.results.len());
    for (row, r) in rows.iter().zip(&result.results) {
        assert_eq!(row.frequency, r.frequency);
        assert_eq!(row.theta, r.cell.theta);
        assert_eq!(row.method, r.method.to_string());
        assert!((0.0..=1.0).contains(&row.frequency));
    }
    let back: GridSpec = serde_json::from_str(&std::fs::read_to_string(echo).unwrap()).unwrap();
    assert_eq!(back, result.spec);
}

#[test]
fn failure_budget_stops_a_broken_cell() {
    let mut spec = GridSpec::new(vec![cell(Scenario::S2, 40, 1.0, ErrorRegime::E1)], 1);
    spec.replications = 4;
    spec.methods = vec![MethodKind::Icp];
    spec.kernel = KernelFamily::Epanechnikov;
    spec.bandwidth = BandwidthRule::Fixed(1e-4);
    assert!(matches!(
        run_grid(&spec),
        Err(Error::FailureBudget { failures: 4, .. })
    ));
}

#[test]
fn treasury_fixture_ingests_to_the_documented_shape() {
    let fixture = TreasuryFixture::default();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    std::fs::write(&path, fixture.to_csv()).unwrap();
    let mut spec = IngestSpec::new(&path, "vix");
    spec.date_column = Some("date".into());
    spec.log_u = true;
    let panel = ingest_csv(&spec).unwrap();
    assert_eq!(panel.rows_read, 1027);
    assert_eq!(panel.dropped_incomplete, 8);
    assert_eq!((panel.panel.n(), panel.panel.m()), (1019, 12));
    assert_eq!(fixture.to_csv(), TreasuryFixture::default().to_csv());

    let checked_in = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../fixtures/treasury_like.csv"
    );
    assert_eq!(
        std::fs::read_to_string(checked_in).unwrap(),
        fixture.to_csv()
    );
}
