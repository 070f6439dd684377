//! Extreme-eigenvalue estimation and problem rescaling.
//!
//! The adaptive rules assume the objective has been rescaled so its
//! smoothness constant is about 1. This module supplies the estimates that
//! enable the rescaling: power iteration for the largest Hessian
//! eigenvalue, shifted power iteration for the smallest, and the cheap
//! Gram-matrix 1-norm bound used by the logistic problem.

use alloc::vec::Vec;

use rand::Rng;

use crate::linalg::{dot, norm2, DenseMatrix};
use crate::problems::quadratic::QuadraticProblem;
use crate::rng::standard_normal_vector;

/// Default relative-change tolerance on the Rayleigh quotient.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Default iteration cap.
pub const DEFAULT_MAX_ITERATIONS: usize = 500;

/// Result of a power-iteration run.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerIterationOutcome {
    /// Estimated eigenvalue (for [`shifted_power_iteration`], the estimate
    /// of the smallest eigenvalue).
    pub eigenvalue: f64,
    pub iterations: usize,
    /// False when the iteration cap was reached before the Rayleigh
    /// quotient settled.
    pub converged: bool,
    /// Final unit iterate; feed it back as the start vector when
    /// re-estimating a slowly moving operator.
    pub eigenvector: Vec<f64>,
}

enum Iterated {
    Done(PowerIterationOutcome),
    /// The operator annihilated the start vector outright.
    ZeroImage,
}

fn iterate_rayleigh(
    apply: &impl Fn(&[f64]) -> Vec<f64>,
    mut v: Vec<f64>,
    tolerance: f64,
    max_iterations: usize,
) -> Iterated {
    let n = v.len();
    let mut w = apply(&v);
    assert_eq!(w.len(), n, "operator callback changed the dimension");
    let mut lambda = dot(&v, &w);
    if norm2(&w) == 0.0 {
        return Iterated::ZeroImage;
    }
    for iteration in 1..=max_iterations {
        let wn = norm2(&w);
        if wn == 0.0 {
            return Iterated::Done(PowerIterationOutcome {
                eigenvalue: 0.0,
                iterations: iteration,
                converged: true,
                eigenvector: v,
            });
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / wn;
        }
        w = apply(&v);
        let next = dot(&v, &w);
        let settled = (next - lambda).abs() <= tolerance * next.abs().max(f64::MIN_POSITIVE);
        lambda = next;
        if settled {
            return Iterated::Done(PowerIterationOutcome {
                eigenvalue: lambda,
                iterations: iteration,
                converged: true,
                eigenvector: v,
            });
        }
    }
    Iterated::Done(PowerIterationOutcome {
        eigenvalue: lambda,
        iterations: max_iterations,
        converged: false,
        eigenvector: v,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenError {
    /// Start-vector draws kept coming back zero (broken generator).
    ZeroStartVector,
}

impl core::fmt::Display for EigenError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EigenError::ZeroStartVector => write!(f, "could not draw a nonzero start vector"),
        }
    }
}

impl core::error::Error for EigenError {}

/// Estimate the largest eigenvalue of a symmetric positive semidefinite
/// operator given as an application callback.
///
/// Convergence is declared on the relative change of the Rayleigh
/// quotient, which matches the loose tolerances this estimate is used
/// with and is cheaper than tracking an eigenvector residual.
///
/// If the operator annihilates the start vector, a fresh vector is drawn
/// (up to 3 restarts); an operator that annihilates every draw is treated
/// as zero and reported as `eigenvalue = 0`.
pub fn power_iteration(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    n: usize,
    tolerance: f64,
    max_iterations: usize,
    rng: &mut impl Rng,
) -> Result<PowerIterationOutcome, EigenError> {
    assert!(n >= 1, "operator dimension must be positive");
    assert!(tolerance > 0.0, "tolerance must be positive");
    assert!(max_iterations >= 1, "iteration cap must be positive");

    const RESTARTS: usize = 3;
    for attempt in 0..=RESTARTS {
        let mut v = standard_normal_vector(n, rng);
        let vn = norm2(&v);
        if vn == 0.0 {
            if attempt == RESTARTS {
                return Err(EigenError::ZeroStartVector);
            }
            continue;
        }
        v.iter_mut().for_each(|x| *x /= vn);
        match iterate_rayleigh(&apply, v, tolerance, max_iterations) {
            Iterated::Done(outcome) => return Ok(outcome),
            Iterated::ZeroImage if attempt == RESTARTS => {
                // Every attempt was annihilated: the operator is zero for
                // all practical purposes.
                return Ok(PowerIterationOutcome {
                    eigenvalue: 0.0,
                    iterations: 0,
                    converged: true,
                    eigenvector: alloc::vec![0.0; n],
                });
            }
            Iterated::ZeroImage => continue,
        }
    }
    unreachable!("restart loop always returns")
}

/// [`power_iteration`] with an explicit (nonzero) start vector instead of
/// a random draw; use it to warm-start from a previous eigenvector when
/// the operator changes slowly.
pub fn power_iteration_from(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    start: &[f64],
    tolerance: f64,
    max_iterations: usize,
) -> Result<PowerIterationOutcome, EigenError> {
    assert!(tolerance > 0.0, "tolerance must be positive");
    assert!(max_iterations >= 1, "iteration cap must be positive");
    let vn = norm2(start);
    if vn == 0.0 {
        return Err(EigenError::ZeroStartVector);
    }
    let v: Vec<f64> = start.iter().map(|x| x / vn).collect();
    match iterate_rayleigh(&apply, v, tolerance, max_iterations) {
        Iterated::Done(outcome) => Ok(outcome),
        Iterated::ZeroImage => Ok(PowerIterationOutcome {
            eigenvalue: 0.0,
            iterations: 0,
            converged: true,
            eigenvector: start.iter().map(|x| x / vn).collect(),
        }),
    }
}

/// Estimate the smallest eigenvalue by power iteration on the shifted
/// operator `v -> lipschitz_bound * v - A v`, returning
/// `lipschitz_bound - lambda_max(shifted)`.
///
/// `lipschitz_bound` must dominate the true largest eigenvalue. The
/// degenerate case `A = lipschitz_bound * I` makes the shifted operator
/// zero; its largest eigenvalue is 0 and the formula degrades gracefully
/// to `mu = lipschitz_bound`.
pub fn shifted_power_iteration(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    n: usize,
    lipschitz_bound: f64,
    tolerance: f64,
    max_iterations: usize,
    rng: &mut impl Rng,
) -> Result<PowerIterationOutcome, EigenError> {
    assert!(
        lipschitz_bound.is_finite() && lipschitz_bound > 0.0,
        "shift must be positive"
    );
    let shifted = |v: &[f64]| -> Vec<f64> {
        let av = apply(v);
        v.iter()
            .zip(&av)
            .map(|(vi, avi)| lipschitz_bound * vi - avi)
            .collect()
    };
    let outcome = power_iteration(shifted, n, tolerance, max_iterations, rng)?;
    Ok(PowerIterationOutcome {
        eigenvalue: lipschitz_bound - outcome.eigenvalue,
        ..outcome
    })
}

/// [`shifted_power_iteration`] with an explicit start vector.
pub fn shifted_power_iteration_from(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    start: &[f64],
    lipschitz_bound: f64,
    tolerance: f64,
    max_iterations: usize,
) -> Result<PowerIterationOutcome, EigenError> {
    assert!(
        lipschitz_bound.is_finite() && lipschitz_bound > 0.0,
        "shift must be positive"
    );
    let shifted = |v: &[f64]| -> Vec<f64> {
        let av = apply(v);
        v.iter()
            .zip(&av)
            .map(|(vi, avi)| lipschitz_bound * vi - avi)
            .collect()
    };
    let outcome = power_iteration_from(shifted, start, tolerance, max_iterations)?;
    Ok(PowerIterationOutcome {
        eigenvalue: lipschitz_bound - outcome.eigenvalue,
        ..outcome
    })
}

/// `||A A^T||_1`: the maximum column absolute sum of the Gram matrix,
/// computed one Gram column at a time so the `n x n` product is never
/// materialized.
pub fn gram_one_norm_bound(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut best = 0.0f64;
    for j in 0..n {
        let row_j = a.row(j);
        // Gram column j = A * (row j of A).
        let col = a.matvec(&row_j);
        let sum: f64 = col.iter().map(|x| x.abs()).sum();
        best = best.max(sum);
    }
    best
}

/// Divide the operator and right-hand side by `l_hat`; the minimizer is
/// unchanged.
pub fn rescale_quadratic(problem: &QuadraticProblem, l_hat: f64) -> QuadraticProblem {
    assert!(l_hat > 0.0 && l_hat.is_finite(), "scale must be positive");
    let operator = problem.operator().scaled(l_hat);
    let b: Vec<f64> = problem.rhs().iter().map(|bi| bi / l_hat).collect();
    let minimizer = problem.known_minimizer().map(<[f64]>::to_vec);
    QuadraticProblem::new(operator, b, minimizer)
        .expect("rescaling preserves the minimizer identity")
}
