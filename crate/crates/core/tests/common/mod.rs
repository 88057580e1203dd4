#![allow(dead_code)]

use ffselect_core::seed;
use ffselect_core::{center_columns, KernelSpec, PanelData};
use nalgebra::{DMatrix, Matrix2, Vector2};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

/// Random panel: `U ~ U(0, 1)`, a few smooth factors plus noise.
pub fn random_panel(n: usize, m: usize, seed_value: u64) -> PanelData {
    let mut rng = seed::stream(seed_value, &[0x7E57]);
    let unif = Uniform::new(0.0, 1.0).unwrap();
    let u: Vec<f64> = (0..n).map(|_| unif.sample(&mut rng)).collect();
    let freqs: Vec<f64> = (0..m).map(|_| rng.random_range(0.5..3.0)).collect();
    let raw = DMatrix::from_fn(n, m, |i, s| {
        let e: f64 = StandardNormal.sample(&mut rng);
        (freqs[s] * std::f64::consts::PI * u[i]).sin() + u[i] * s as f64 + 0.3 * e
    });
    center_columns(&raw, &u).unwrap()
}

/// Intercept of the kernel-weighted straight-line fit at `x0`, solved from
/// its own 2×2 normal equations.
pub fn wls_intercept(u: &[f64], y: &[f64], kernel: &KernelSpec, x0: f64) -> f64 {
    let mut xtwx = Matrix2::zeros();
    let mut xtwy = Vector2::zeros();
    for (&ui, &yi) in u.iter().zip(y) {
        let w = kernel.weight(ui - x0);
        let x = Vector2::new(1.0, ui - x0);
        xtwx += w * x * x.transpose();
        xtwy += w * yi * x;
    }
    xtwx.lu().solve(&xtwy).expect("nonsingular design")[0]
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn bits(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}
