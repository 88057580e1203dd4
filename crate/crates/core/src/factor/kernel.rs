use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kernel family used by the local-linear smoother.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelFamily {
    /// `0.75 (1 - x²)` on `[-1, 1]`.
    #[default]
    Epanechnikov,
    /// Standard normal density.
    Gaussian,
}

impl KernelFamily {
    /// Evaluates the unscaled kernel `K(x)`.
    #[inline]
    pub fn eval(self, x: f64) -> f64 {
        match self {
            KernelFamily::Epanechnikov => {
                if x.abs() <= 1.0 {
                    0.75 * (1.0 - x * x)
                } else {
                    0.0
                }
            }
            KernelFamily::Gaussian => {
                const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
                INV_SQRT_2PI * (-0.5 * x * x).exp()
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KernelFamily::Epanechnikov => "epanechnikov",
            KernelFamily::Gaussian => "gaussian",
        }
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "epanechnikov" | "epa" => Ok(KernelFamily::Epanechnikov),
            "gaussian" | "normal" => Ok(KernelFamily::Gaussian),
            other => Err(Error::InvalidKernel(format!(
                "unknown kernel family `{other}`"
            ))),
        }
    }
}

/// Kernel family plus bandwidth `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    family: KernelFamily,
    bandwidth: f64,
}

impl KernelSpec {
    /// Validates the bandwidth and numerically checks that the kernel is a
    /// symmetric density.
    pub fn new(family: KernelFamily, bandwidth: f64) -> Result<Self> {
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(Error::InvalidKernel(format!(
                "bandwidth must be positive and finite, got {bandwidth}"
            )));
        }
        let (mass, asym) = density_check(family);
        if (mass - 1.0).abs() > 1e-6 || asym > 1e-6 {
            return Err(Error::InvalidKernel(format!(
                "{family} kernel failed the density check (mass {mass}, asymmetry {asym})"
            )));
        }
        Ok(Self { family, bandwidth })
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// Scaled kernel `K_h(d) = K(d / h) / h`.
    #[inline]
    pub fn weight(&self, d: f64) -> f64 {
        self.family.eval(d / self.bandwidth) / self.bandwidth
    }

    /// Same family, different bandwidth.
    pub fn with_bandwidth(&self, bandwidth: f64) -> Result<Self> {
        Self::new(self.family, bandwidth)
    }
}

/// Composite Simpson mass on `[-8, 8]` and max `|K(x) - K(-x)|` on the same grid.
fn density_check(family: KernelFamily) -> (f64, f64) {
    const HALF_WIDTH: f64 = 8.0;
    const INTERVALS: usize = 16_000;
    let step = 2.0 * HALF_WIDTH / INTERVALS as f64;
    let mut mass = 0.0;
    let mut asym: f64 = 0.0;
    for i in 0..=INTERVALS {
        let x = -HALF_WIDTH + i as f64 * step;
        let k = family.eval(x);
        let coef = if i == 0 || i == INTERVALS {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        mass += coef * k;
        asym = asym.max((k - family.eval(-x)).abs());
    }
    (mass * step / 3.0, asym)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_families_are_densities() {
        for fam in [KernelFamily::Epanechnikov, KernelFamily::Gaussian] {
            let (mass, asym) = density_check(fam);
            assert!((mass - 1.0).abs() < 1e-9, "{fam}: {mass}");
            assert_eq!(asym, 0.0);
        }
    }

    #[test]
    fn rejects_bad_bandwidth() {
        for h in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(KernelSpec::new(KernelFamily::Gaussian, h).is_err());
        }
    }

    #[test]
    fn scaled_weight() {
        let k = KernelSpec::new(KernelFamily::Epanechnikov, 2.0).unwrap();
        assert_eq!(k.weight(0.0), 0.375);
        assert_eq!(k.weight(2.5), 0.0);
        assert_eq!(k.weight(1.0), k.weight(-1.0));
    }

    #[test]
    fn parses_names() {
        assert_eq!(
            "Gaussian".parse::<KernelFamily>().unwrap(),
            KernelFamily::Gaussian
        );
        assert!("box".parse::<KernelFamily>().is_err());
    }
}
