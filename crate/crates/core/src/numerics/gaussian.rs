use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

const LN_2PI: f64 = 1.837_877_066_409_345_5;
const SYMMETRY_TOL: f64 = 1e-10;

/// Multivariate normal with a cached Cholesky factor and log-determinant.
#[derive(Debug, Clone)]
pub struct MultivariateGaussian {
    mean: DVector<f64>,
    covariance: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
    logdet: f64,
}

impl MultivariateGaussian {
    /// Fails unless `covariance` is square, matches `mean`, is symmetric
    /// to 1e-10 relative, and factorizes with strictly positive pivots.
    pub fn new(mean: DVector<f64>, covariance: DMatrix<f64>) -> Result<Self> {
        let d = mean.len();
        if covariance.nrows() != d || covariance.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: covariance.nrows(),
            });
        }
        if covariance.iter().any(|v| !v.is_finite()) || mean.iter().any(|v| !v.is_finite()) {
            return Err(Error::NotPositiveDefinite);
        }
        let scale = covariance.amax();
        let asym = (0..d)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .map(|(i, j)| (covariance[(i, j)] - covariance[(j, i)]).abs())
            .fold(0.0, f64::max);
        if scale > 0.0 && asym > SYMMETRY_TOL * scale {
            return Err(Error::NotSymmetric(asym / scale));
        }
        let chol = Cholesky::new(covariance.clone()).ok_or(Error::NotPositiveDefinite)?;
        let l = chol.l_dirty();
        let mut logdet = 0.0;
        for i in 0..d {
            let pivot = l[(i, i)];
            if !(pivot > 0.0) {
                return Err(Error::NotPositiveDefinite);
            }
            logdet += pivot.ln();
        }
        Ok(Self {
            mean,
            covariance,
            chol,
            logdet: 2.0 * logdet,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    /// Lower-triangular Cholesky factor.
    pub fn chol(&self) -> DMatrix<f64> {
        self.chol.l()
    }

    pub fn logdet(&self) -> f64 {
        self.logdet
    }

    /// Log-density in nats.
    pub fn logpdf(&self, point: &[f64]) -> Result<f64> {
        let d = self.dim();
        if point.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: point.len(),
            });
        }
        let diff = DVector::from_iterator(d, point.iter().zip(self.mean.iter()).map(|(x, m)| x - m));
        let z = self
            .chol
            .l_dirty()
            .solve_lower_triangular(&diff)
            .ok_or(Error::NotPositiveDefinite)?;
        let quad = z.norm_squared();
        Ok(-0.5 * (d as f64 * LN_2PI + self.logdet + quad))
    }
}

pub fn mvn_logpdf(dist: &MultivariateGaussian, point: &[f64]) -> Result<f64> {
    dist.logpdf(point)
}
