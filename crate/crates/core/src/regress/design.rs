use std::sync::OnceLock;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{invalid, Error, Result};
use crate::numerics::{MultivariateGaussian, RngStream};

/// Fixed design of the regression lab with cached Gram-matrix factorization.
#[derive(Debug, Clone)]
pub struct RegressionDesign {
    x: DMatrix<f64>,
    beta: DVector<f64>,
    sigma2: f64,
    xbar: DMatrix<f64>,
    xbar_chol: Cholesky<f64, Dyn>,
    xbar_inv: DMatrix<f64>,
    /// `beta^T x_j` for every column.
    mean_response: DVector<f64>,
    /// `x_j^T xbar^-1 x_j` for every column.
    leverage: Vec<f64>,
    q: OnceLock<MultivariateGaussian>,
}

impl RegressionDesign {
    /// `x` holds one feature vector per column. Requires `n > d` and a
    /// positive-definite Gram matrix `x x^T`.
    pub fn new(x: DMatrix<f64>, beta: DVector<f64>, sigma2: f64) -> Result<Self> {
        let (d, n) = x.shape();
        if d == 0 {
            return Err(invalid("x", "feature dimension must be positive"));
        }
        if n <= d {
            return Err(invalid("x", format!("need more samples than features, got n = {n}, d = {d}")));
        }
        if beta.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: beta.len(),
            });
        }
        if !(sigma2 >= 0.0) || !sigma2.is_finite() {
            return Err(invalid("sigma2", format!("must be finite and nonnegative, got {sigma2}")));
        }
        let xbar = &x * x.transpose();
        let xbar_chol = Cholesky::new(xbar.clone()).ok_or(Error::NotPositiveDefinite)?;
        let inv = xbar_chol.inverse();
        let xbar_inv = (&inv + inv.transpose()) * 0.5;
        let mean_response = x.transpose() * &beta;
        let leverage = (0..n)
            .map(|j| {
                let col = x.column(j);
                col.dot(&(&xbar_inv * col))
            })
            .collect();
        Ok(Self {
            x,
            beta,
            sigma2,
            xbar,
            xbar_chol,
            xbar_inv,
            mean_response,
            leverage,
            q: OnceLock::new(),
        })
    }

    /// Features i.i.d. standard normal, `beta` the unit-norm all-ones vector.
    pub fn random(d: usize, n: usize, sigma2: f64, rng: &mut RngStream) -> Result<Self> {
        let x = DMatrix::from_fn(d, n, |_, _| rng.standard_normal());
        Self::new(x, default_beta(d), sigma2)
    }

    pub fn dim(&self) -> usize {
        self.x.nrows()
    }

    pub fn n(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn beta(&self) -> &DVector<f64> {
        &self.beta
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn xbar(&self) -> &DMatrix<f64> {
        &self.xbar
    }

    pub fn xbar_inv(&self) -> &DMatrix<f64> {
        &self.xbar_inv
    }

    pub fn leverage(&self, j: usize) -> f64 {
        self.leverage[j]
    }

    pub fn mean_response(&self) -> &DVector<f64> {
        &self.mean_response
    }

    pub fn with_sigma2(&self, sigma2: f64) -> Result<Self> {
        Self::new(self.x.clone(), self.beta.clone(), sigma2)
    }

    /// Least-squares fit `theta = xbar^-1 x y^T` through the cached factor.
    pub fn ols_fit(&self, y: &[f64]) -> Result<DVector<f64>> {
        if y.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: y.len(),
            });
        }
        let rhs = &self.x * DVector::from_column_slice(y);
        Ok(self.xbar_chol.solve(&rhs))
    }

    /// `N(beta, sigma^2 xbar^-1)`: the law of the fitted parameters.
    pub fn posterior_q(&self) -> Result<MultivariateGaussian> {
        if let Some(q) = self.q.get() {
            return Ok(q.clone());
        }
        let q = MultivariateGaussian::new(self.beta.clone(), &self.xbar_inv * self.sigma2)?;
        Ok(self.q.get_or_init(|| q).clone())
    }

    pub(crate) fn with_q<T>(&self, f: impl FnOnce(&MultivariateGaussian) -> Result<T>) -> Result<T> {
        if self.q.get().is_none() {
            self.posterior_q()?;
        }
        f(self.q.get().expect("initialized above"))
    }

    /// Law of the fitted parameters given that training response `j` is `s`:
    /// mean `beta + xbar^-1 x_j (s - x_j^T beta)`, covariance
    /// `sigma^2 xbar^-1 (I - x_j x_j^T xbar^-1)`.
    pub fn posterior_qj(&self, j: usize, s: f64) -> Result<MultivariateGaussian> {
        let (mean, cov) = self.qj_moments(j, s)?;
        MultivariateGaussian::new(mean, cov)
    }

    fn qj_moments(&self, j: usize, s: f64) -> Result<(DVector<f64>, DMatrix<f64>)> {
        if j >= self.n() {
            return Err(invalid("j", format!("index {j} out of range for n = {}", self.n())));
        }
        if !(self.leverage[j] < 1.0) {
            return Err(Error::NotPositiveDefinite);
        }
        let u = &self.xbar_inv * self.x.column(j);
        let mean = &self.beta + &u * (s - self.mean_response[j]);
        // xbar^-1 - xbar^-1 x_j x_j^T xbar^-1, written symmetrically
        let cov = (&self.xbar_inv - &u * u.transpose()) * self.sigma2;
        Ok((mean, cov))
    }
}

pub(crate) fn default_beta(d: usize) -> DVector<f64> {
    DVector::from_element(d, 1.0 / (d as f64).sqrt())
}

/// Least squares for a bare `d x n` feature matrix with `n >= d`.
pub fn least_squares(x: &DMatrix<f64>, y: &[f64]) -> Result<DVector<f64>> {
    if y.len() != x.ncols() {
        return Err(Error::DimensionMismatch {
            expected: x.ncols(),
            got: y.len(),
        });
    }
    let chol = Cholesky::new(x * x.transpose()).ok_or(Error::NotPositiveDefinite)?;
    Ok(chol.solve(&(x * DVector::from_column_slice(y))))
}
