use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// A centered observation panel: `n` rows of the exogenous variable `U`
/// paired with `m` response series.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelData {
    y: DMatrix<f64>,
    u: Vec<f64>,
    column_means: Vec<f64>,
}

impl PanelData {
    /// Centered responses, `n × m`.
    pub fn y(&self) -> &DMatrix<f64> {
        &self.y
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// Means removed by [`center_columns`].
    pub fn column_means(&self) -> &[f64] {
        &self.column_means
    }

    pub fn n(&self) -> usize {
        self.y.nrows()
    }

    pub fn m(&self) -> usize {
        self.y.ncols()
    }

    /// Mean of the squared centered entries.
    pub fn mean_square(&self) -> f64 {
        self.y.iter().map(|v| v * v).sum::<f64>() / (self.n() * self.m()) as f64
    }
}

fn check_shape(y: &DMatrix<f64>, u: &[f64]) -> Result<()> {
    if u.len() != y.nrows() {
        return Err(Error::ShapeMismatch(format!(
            "U has length {} but Y has {} rows",
            u.len(),
            y.nrows()
        )));
    }
    if y.nrows() < 3 || y.ncols() < 2 {
        return Err(Error::TooSmall {
            n: y.nrows(),
            m: y.ncols(),
        });
    }
    if y.iter().chain(u.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { context: "panel" });
    }
    Ok(())
}

/// Subtracts each column's mean from `raw_y` and pairs the result with `u`.
pub fn center_columns(raw_y: &DMatrix<f64>, u: &[f64]) -> Result<PanelData> {
    check_shape(raw_y, u)?;
    let n = raw_y.nrows() as f64;
    let mut y = raw_y.clone();
    let mut column_means = Vec::with_capacity(y.ncols());
    for mut col in y.column_iter_mut() {
        let mean = col.iter().sum::<f64>() / n;
        col.iter_mut().for_each(|v| *v -= mean);
        // A second pass removes the rounding residue of the first.
        let residue = col.iter().sum::<f64>() / n;
        col.iter_mut().for_each(|v| *v -= residue);
        column_means.push(mean + residue);
    }
    Ok(PanelData {
        y,
        u: u.to_vec(),
        column_means,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn two_by_two() {
        let raw = DMatrix::from_row_slice(3, 2, &[1.0, 3.0, 3.0, 5.0, 2.0, 4.0]);
        let p = center_columns(&raw, &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(p.column_means(), &[2.0, 4.0]);
        assert_eq!(
            p.y(),
            &DMatrix::from_row_slice(3, 2, &[-1.0, -1.0, 1.0, 1.0, 0.0, 0.0])
        );
        assert_eq!(p.u(), &[0.0, 1.0, 2.0]);
    }

    #[test]
    fn already_centered_is_identity() {
        let raw = DMatrix::from_row_slice(3, 2, &[-1.0, 2.0, 0.0, -4.0, 1.0, 2.0]);
        let p = center_columns(&raw, &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(p.y(), &raw);
        assert!(p.column_means().iter().all(|&m| m == 0.0));
    }

    #[test]
    fn random_columns_sum_to_zero() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let raw = DMatrix::from_fn(10, 4, |_, _| rng.random_range(-50.0..50.0));
        let u: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let p = center_columns(&raw, &u).unwrap();
        for s in 0..4 {
            // direct mean oracle
            let mean = (0..10).map(|i| raw[(i, s)]).sum::<f64>() / 10.0;
            assert!((p.column_means()[s] - mean).abs() < 1e-12);
            assert!(p.y().column(s).sum().abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let raw = DMatrix::from_element(3, 2, 1.0);
        assert!(matches!(
            center_columns(&raw, &[0.0, 1.0]),
            Err(Error::ShapeMismatch(_))
        ));
        let mut bad = raw.clone();
        bad[(1, 1)] = f64::NAN;
        assert!(matches!(
            center_columns(&bad, &[0.0, 1.0, 2.0]),
            Err(Error::NonFinite { .. })
        ));
        assert!(matches!(
            center_columns(&DMatrix::from_element(2, 2, 1.0), &[0.0, 1.0]),
            Err(Error::TooSmall { .. })
        ));
        assert!(matches!(
            center_columns(&DMatrix::from_element(3, 1, 1.0), &[0.0, 1.0, 2.0]),
            Err(Error::TooSmall { .. })
        ));
    }
}
