use std::cmp::Ordering;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigenpairs of a symmetric positive semidefinite matrix, eigenvalues in
/// non-increasing order.
///
/// Eigenvector signs are fixed so that the entry of largest magnitude in
/// every column is non-negative (the first such entry on ties).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl EigenSystem {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors; column `j` pairs with `eigenvalues()[j]`.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

fn max_abs(a: &DMatrix<f64>) -> f64 {
    a.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

fn fix_sign(v: &mut [f64]) {
    let mut pivot = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[pivot].abs() {
            pivot = i;
        }
    }
    if v[pivot] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Symmetric eigendecomposition with deterministic ordering and signs.
pub fn eigendecompose(lambda_hat: &DMatrix<f64>) -> Result<EigenSystem> {
    let m = lambda_hat.nrows();
    if lambda_hat.ncols() != m {
        return Err(Error::ShapeMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m,
            lambda_hat.ncols()
        )));
    }
    if lambda_hat.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            context: "covariance",
        });
    }
    let scale = max_abs(lambda_hat).max(1.0);
    let asymmetry = max_abs(&(lambda_hat - lambda_hat.transpose()));
    if asymmetry > 1e-10 * scale {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let sym = (lambda_hat + lambda_hat.transpose()) * 0.5;

    let dec = SymmetricEigen::try_new(sym, f64::EPSILON, 10_000 * m.max(1)).ok_or_else(|| {
        Error::NumericalFailure("symmetric eigendecomposition did not converge".into())
    })?;

    let mut pairs: Vec<(f64, Vec<f64>)> = (0..m)
        .map(|j| {
            let mut v: Vec<f64> = dec.eigenvectors.column(j).iter().copied().collect();
            fix_sign(&mut v);
            (dec.eigenvalues[j], v)
        })
        .collect();
    pairs.sort_by(|a, b| {
        b.0.total_cmp(&a.0).then_with(|| {
            a.1.iter()
                .zip(&b.1)
                .map(|(x, y)| y.total_cmp(x))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        })
    });

    if let Some(&(last, _)) = pairs.last() {
        let top = pairs[0].0.abs().max(1.0);
        if last < -1e-10 * top {
            return Err(Error::NotPositiveSemidefinite { value: last });
        }
    }

    let eigenvalues = pairs.iter().map(|p| p.0).collect();
    let eigenvectors = DMatrix::from_fn(m, m, |i, j| pairs[j].1[i]);
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn diagonal_input() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 3.0, 0.0]));
        let e = eigendecompose(&a).unwrap();
        assert_eq!(e.eigenvalues(), &[3.0, 1.0, 0.0]);
        let expected = DMatrix::from_row_slice(3, 3, &[0., 1., 0., 1., 0., 0., 0., 0., 1.]);
        assert!(max_abs(&(e.eigenvectors() - expected)) < 1e-14);
    }

    #[test]
    fn rotated_two_by_two() {
        let (c, s) = (0.3_f64.cos(), 0.3_f64.sin());
        let q = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        let d = DMatrix::from_row_slice(2, 2, &[5.0, 0.0, 0.0, 2.0]);
        let a = &q * d * q.transpose();
        let e = eigendecompose(&a).unwrap();
        assert!((e.eigenvalues()[0] - 5.0).abs() < 1e-12);
        assert!((e.eigenvalues()[1] - 2.0).abs() < 1e-12);
        // first eigenvector is ±(c, s); sign convention picks the larger entry positive
        assert!((e.eigenvectors()[(0, 0)] - c).abs() < 1e-12);
        assert!((e.eigenvectors()[(1, 0)] - s).abs() < 1e-12);
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let x = DMatrix::from_fn(30, 12, |_, _| rng.random_range(-1.0..1.0));
        let a = x.transpose() * &x / 30.0;
        let e = eigendecompose(&a).unwrap();
        let v = e.eigenvectors();
        let recon = v
            * DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(e.eigenvalues()))
            * v.transpose();
        assert!(max_abs(&(recon - &a)) <= 1e-8 * (1.0 + max_abs(&a)));
        let gram = v.transpose() * v;
        assert!(max_abs(&(gram - DMatrix::identity(12, 12))) <= 1e-10);
        assert!(e.eigenvalues().windows(2).all(|w| w[0] >= w[1]));
        for col in v.column_iter() {
            let big = col
                .iter()
                .fold(0.0_f64, |a, x| if x.abs() > a.abs() { *x } else { a });
            assert!(big >= 0.0);
        }
    }

    #[test]
    fn ties_are_deterministic() {
        let a = DMatrix::<f64>::identity(4, 4) * 2.0;
        let e1 = eigendecompose(&a).unwrap();
        let e2 = eigendecompose(&a).unwrap();
        assert_eq!(e1, e2);
    }

    #[test]
    fn errors() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]);
        assert!(matches!(
            eigendecompose(&a),
            Err(Error::NotSymmetric { .. })
        ));
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(
            eigendecompose(&b),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }
}
