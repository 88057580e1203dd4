use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{center_columns, PanelData};
use crate::seed;

/// Data-generating design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// `U ~ Uniform(-1, 1)`, factors `cos 2πU` and `sin 2πU`.
    S1,
    /// `U ~ N(0, 1)`, Hermite factors `U`, `U² − 1`, `0.4 (U⁴ − 6U² + 3)`,
    /// one loading per series zeroed.
    S2,
}

impl Scenario {
    pub fn true_order(self) -> usize {
        match self {
            Scenario::S1 => 2,
            Scenario::S2 => 3,
        }
    }

    pub(crate) fn id(self) -> u64 {
        match self {
            Scenario::S1 => 1,
            Scenario::S2 => 2,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::S1 => "s1",
            Scenario::S2 => "s2",
        })
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s1" | "1" => Ok(Scenario::S1),
            "s2" | "2" => Ok(Scenario::S2),
            other => Err(Error::InvalidConfig(format!("unknown scenario `{other}`"))),
        }
    }
}

/// Idiosyncratic error design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorRegime {
    /// iid `N(0, 1)`.
    E1,
    /// `N(0, σ_s²)` with `σ_s² = 1` for odd `s`, `2` for even `s` (1-based).
    E2,
    /// Rows iid `N(0, Σ)`, `Σ_kl = 0.5^|k−l|`.
    E3,
}

impl ErrorRegime {
    pub(crate) fn id(self) -> u64 {
        match self {
            ErrorRegime::E1 => 1,
            ErrorRegime::E2 => 2,
            ErrorRegime::E3 => 3,
        }
    }
}

impl fmt::Display for ErrorRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorRegime::E1 => "e1",
            ErrorRegime::E2 => "e2",
            ErrorRegime::E3 => "e3",
        })
    }
}

impl FromStr for ErrorRegime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "e1" => Ok(ErrorRegime::E1),
            "e2" => Ok(ErrorRegime::E2),
            "e3" => Ok(ErrorRegime::E3),
            other => Err(Error::InvalidConfig(format!(
                "unknown error regime `{other}`"
            ))),
        }
    }
}

/// One fully specified synthetic panel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub scenario: Scenario,
    pub n: usize,
    pub m: usize,
    pub theta: f64,
    pub error_regime: ErrorRegime,
    pub rng_seed: u64,
}

impl ScenarioSpec {
    pub fn generate(&self) -> Result<(PanelData, TruthRecord)> {
        let mut rng = seed::stream(self.rng_seed, &[]);
        match self.scenario {
            Scenario::S1 => gen_scenario1(self.n, self.m, self.theta, self.error_regime, &mut rng),
            Scenario::S2 => gen_scenario2(self.n, self.m, self.theta, self.error_regime, &mut rng),
        }
    }
}

/// Ground truth behind a generated panel.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthRecord {
    pub p0: usize,
    /// `F_j(U_i)`, `n × p0`.
    pub factors: DMatrix<f64>,
    /// `b_sj`, `m × p0`.
    pub loadings: DMatrix<f64>,
    pub u: Vec<f64>,
}

impl TruthRecord {
    /// Noise-free signal `F Bᵀ`.
    pub fn signal(&self) -> DMatrix<f64> {
        &self.factors * self.loadings.transpose()
    }
}

fn normal_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    // column-major fill: draw order is column by column
    let data: Vec<f64> = (0..rows * cols)
        .map(|_| StandardNormal.sample(rng))
        .collect();
    DMatrix::from_vec(rows, cols, data)
}

/// `n × m` idiosyncratic errors for the given regime.
pub fn gen_errors<R: Rng + ?Sized>(
    regime: ErrorRegime,
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    let z = normal_matrix(n, m, rng);
    match regime {
        ErrorRegime::E1 => Ok(z),
        ErrorRegime::E2 => {
            let mut e = z;
            for (s, mut col) in e.column_iter_mut().enumerate() {
                // 0-based even index is a 1-based odd series
                if s % 2 == 1 {
                    col *= 2f64.sqrt();
                }
            }
            Ok(e)
        }
        ErrorRegime::E3 => {
            let sigma = DMatrix::from_fn(m, m, |k, l| 0.5f64.powi((k as i32 - l as i32).abs()));
            let chol = sigma.cholesky().ok_or(Error::CholeskyFailure)?;
            Ok(z * chol.l().transpose())
        }
    }
}

fn check_dims(n: usize, m: usize, theta: f64) -> Result<()> {
    if n < 3 || m < 3 {
        return Err(Error::TooSmall { n, m });
    }
    if !(theta >= 0.0 && theta.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "theta must be >= 0, got {theta}"
        )));
    }
    Ok(())
}

fn assemble<R: Rng + ?Sized>(
    u: Vec<f64>,
    factors: DMatrix<f64>,
    loadings: DMatrix<f64>,
    theta: f64,
    regime: ErrorRegime,
    rng: &mut R,
) -> Result<(PanelData, TruthRecord)> {
    let (n, m) = (factors.nrows(), loadings.nrows());
    let signal = &factors * loadings.transpose();
    let noise = gen_errors(regime, n, m, rng)?;
    let raw = signal + noise * theta.sqrt();
    let panel = center_columns(&raw, &u)?;
    let truth = TruthRecord {
        p0: factors.ncols(),
        factors,
        loadings,
        u,
    };
    Ok((panel, truth))
}

/// Scenario 1 panel: two trigonometric factors of a uniform `U`.
pub fn gen_scenario1<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    theta: f64,
    regime: ErrorRegime,
    rng: &mut R,
) -> Result<(PanelData, TruthRecord)> {
    check_dims(n, m, theta)?;
    let uniform = Uniform::new(-1.0, 1.0).expect("valid bounds");
    let u: Vec<f64> = (0..n).map(|_| uniform.sample(rng)).collect();
    let factors = DMatrix::from_fn(n, 2, |i, j| {
        let a = 2.0 * PI * u[i];
        if j == 0 {
            a.cos()
        } else {
            a.sin()
        }
    });
    let loadings = normal_matrix(m, 2, rng);
    assemble(u, factors, loadings, theta, regime, rng)
}

/// The three Scenario 2 factor functions at `u`.
pub fn scenario2_factors(u: f64) -> [f64; 3] {
    let u2 = u * u;
    [u, u2 - 1.0, 0.4 * (u2 * u2 - 6.0 * u2 + 3.0)]
}

/// Scenario 2 panel: three Hermite factors of a normal `U`, each series
/// loading on exactly two of them.
pub fn gen_scenario2<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    theta: f64,
    regime: ErrorRegime,
    rng: &mut R,
) -> Result<(PanelData, TruthRecord)> {
    check_dims(n, m, theta)?;
    let u: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let factors = DMatrix::from_fn(n, 3, |i, j| scenario2_factors(u[i])[j]);
    let mut loadings = normal_matrix(m, 3, rng);
    for s in 0..m {
        let zeroed = rng.random_range(0..3);
        loadings[(s, zeroed)] = 0.0;
    }
    assemble(u, factors, loadings, theta, regime, rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e2_variances_alternate() {
        let mut rng = seed::stream(1, &[]);
        let e = gen_errors(ErrorRegime::E2, 2000, 6, &mut rng).unwrap();
        for s in 0..6 {
            let col = e.column(s);
            let mean = col.mean();
            let var = col.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 1999.0;
            let want = if s % 2 == 0 { 1.0 } else { 2.0 };
            assert!((var - want).abs() < 0.5, "series {s}: {var}");
        }
    }

    #[test]
    fn e3_lag_one_correlation() {
        let mut rng = seed::stream(2, &[]);
        let e = gen_errors(ErrorRegime::E3, 2000, 5, &mut rng).unwrap();
        for s in 0..4 {
            let (a, b) = (e.column(s), e.column(s + 1));
            let (ma, mb) = (a.mean(), b.mean());
            let cov: f64 = a
                .iter()
                .zip(b.iter())
                .map(|(x, y)| (x - ma) * (y - mb))
                .sum();
            let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
            let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
            let r = cov / (va * vb).sqrt();
            assert!((r - 0.5).abs() < 0.1, "pair {s}: {r}");
        }
    }

    #[test]
    fn e1_is_centered() {
        let mut rng = seed::stream(3, &[]);
        let (n, m) = (300, 20);
        let e = gen_errors(ErrorRegime::E1, n, m, &mut rng).unwrap();
        assert!(e.mean().abs() <= 4.0 / ((n * m) as f64).sqrt());
    }

    #[test]
    fn s2_rows_have_one_zero() {
        let spec = ScenarioSpec {
            scenario: Scenario::S2,
            n: 30,
            m: 50,
            theta: 1.0,
            error_regime: ErrorRegime::E1,
            rng_seed: 9,
        };
        let (_, truth) = spec.generate().unwrap();
        assert_eq!(truth.p0, 3);
        for row in truth.loadings.row_iter() {
            assert_eq!(row.iter().filter(|&&b| b == 0.0).count(), 1);
        }
    }

    #[test]
    fn noise_scale_only_touches_noise() {
        let base = ScenarioSpec {
            scenario: Scenario::S1,
            n: 40,
            m: 10,
            theta: 0.5,
            error_regime: ErrorRegime::E3,
            rng_seed: 4,
        };
        let (_, a) = base.generate().unwrap();
        let (_, b) = ScenarioSpec { theta: 2.0, ..base }.generate().unwrap();
        assert_eq!(a.signal(), b.signal());
        assert_eq!(a.u, b.u);
    }

    #[test]
    fn parses_names() {
        assert_eq!("E3".parse::<ErrorRegime>().unwrap(), ErrorRegime::E3);
        assert!("e4".parse::<ErrorRegime>().is_err());
        assert_eq!("s2".parse::<Scenario>().unwrap(), Scenario::S2);
    }
}
