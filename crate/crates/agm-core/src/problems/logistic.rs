//! L2-regularised logistic regression.
//!
//! `f(x) = xi/2 ||x||^2 + sum_i log(1 + exp(-b_i <x, a_i>))` over `p`
//! samples `a_i` (the columns of an `n x p` feature matrix) with labels
//! `b_i` in `{-1, +1}`.
//!
//! The Hessian is `xi I + sum_i s_i (1 - s_i) a_i a_i^T` with
//! `s_i = sigm(b_i <x, a_i>)`; since `s(1-s) <= 1/4`, its eigenvalues lie
//! in `[xi, xi + lambda_max(A A^T)/4]`, which motivates the cheap bounds
//! `mu = xi`, `L = xi + ||A A^T||_1 / 4`.

use alloc::vec::Vec;

use rand::Rng;

use crate::eigen::gram_one_norm_bound;
use crate::linalg::{DenseMatrix, dot};
use crate::math;
use crate::objective::Objective;
use crate::problems::ProblemError;
use crate::rng::standard_normal_vector;

/// Numerically stable `1 / (1 + exp(-z))`.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + math::exp(-z))
    } else {
        let e = math::exp(z);
        e / (1.0 + e)
    }
}

/// Numerically stable `log(1 + exp(z))`.
fn log1p_exp(z: f64) -> f64 {
    if z > 0.0 {
        z + math::ln_1p(math::exp(-z))
    } else {
        math::ln_1p(math::exp(z))
    }
}

/// Regularised logistic regression over column-sample features.
#[derive(Debug, Clone)]
pub struct LogisticProblem {
    features: DenseMatrix,
    labels: Vec<f64>,
    xi: f64,
}

impl LogisticProblem {
    /// `features` is `n x p` with one sample per column; `labels` must be
    /// exactly `+1` or `-1`.
    pub fn new(features: DenseMatrix, labels: Vec<f64>, xi: f64) -> Result<Self, ProblemError> {
        if labels.len() != features.cols() {
            return Err(ProblemError::DimensionMismatch {
                expected: features.cols(),
                got: labels.len(),
            });
        }
        if let Some(index) = labels.iter().position(|&b| b != 1.0 && b != -1.0) {
            return Err(ProblemError::InvalidLabel {
                index,
                value: labels[index],
            });
        }
        if !(xi >= 0.0) || !xi.is_finite() {
            return Err(ProblemError::InvalidParameter(
                "regularization must be finite and nonnegative",
            ));
        }
        Ok(Self {
            features,
            labels,
            xi,
        })
    }

    pub fn features(&self) -> &DenseMatrix {
        &self.features
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn samples(&self) -> usize {
        self.features.cols()
    }

    /// `(mu, L) = (xi, xi + ||A A^T||_1 / 4)`.
    pub fn bounds(&self) -> (f64, f64) {
        (self.xi, self.xi + 0.25 * gram_one_norm_bound(&self.features))
    }

    /// Per-sample margins `b_i <x, a_i>`.
    fn margins(&self, x: &[f64]) -> Vec<f64> {
        let inner = self.features.tr_matvec(x);
        inner
            .iter()
            .zip(&self.labels)
            .map(|(m, b)| b * m)
            .collect()
    }
}

impl Objective for LogisticProblem {
    fn dim(&self) -> usize {
        self.features.rows()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let reg = 0.5 * self.xi * dot(x, x);
        let loss: f64 = self.margins(x).iter().map(|&m| log1p_exp(-m)).sum();
        reg + loss
    }

    fn grad(&self, x: &[f64]) -> Vec<f64> {
        // grad = xi x - A c with c_i = b_i sigm(-b_i <x, a_i>).
        let coeff: Vec<f64> = self
            .margins(x)
            .iter()
            .zip(&self.labels)
            .map(|(&m, &b)| b * sigmoid(-m))
            .collect();
        let ac = self.features.matvec(&coeff);
        x.iter()
            .zip(&ac)
            .map(|(xi_, aci)| self.xi * xi_ - aci)
            .collect()
    }

    fn hessian_vec(&self, x: &[f64], v: &[f64]) -> Option<Vec<f64>> {
        // H v = xi v + A (s (1-s) . (A^T v)).
        let atv = self.features.tr_matvec(v);
        let weights: Vec<f64> = self
            .margins(x)
            .iter()
            .zip(&atv)
            .map(|(&m, &h)| {
                let s = sigmoid(m);
                s * (1.0 - s) * h
            })
            .collect();
        let aw = self.features.matvec(&weights);
        Some(
            v.iter()
                .zip(&aw)
                .map(|(vi, awi)| self.xi * vi + awi)
                .collect(),
        )
    }
}

/// Random instance: standard normal features, Bernoulli(1/2) labels mapped
/// to `{-1, +1}`.
pub fn gen_logistic(n: usize, p: usize, xi: f64, rng: &mut impl Rng) -> LogisticProblem {
    assert!(n >= 1 && p >= 1, "dimensions must be positive");
    let mut features = DenseMatrix::zeros(n, p);
    for j in 0..p {
        let column = standard_normal_vector(n, rng);
        for (i, value) in column.into_iter().enumerate() {
            features.set(i, j, value);
        }
    }
    let labels: Vec<f64> = (0..p)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect();
    LogisticProblem::new(features, labels, xi).expect("generated labels are valid")
}
