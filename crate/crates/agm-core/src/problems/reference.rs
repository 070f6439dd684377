//! High-precision reference solutions for problems without a closed-form
//! minimizer, via the convex NAG iteration with momentum `(k-1)/(k+2)`.

use alloc::vec::Vec;
use core::fmt;

use crate::linalg::norm2;
use crate::objective::Objective;
use crate::optimize::DIVERGENCE_FACTOR;

/// Outcome of [`reference_solve`].
#[derive(Debug, Clone)]
pub struct ReferenceSolution {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Final `||grad f(x)|| / ||grad f(x0)||`.
    pub relative_grad_norm: f64,
    /// False when the iteration cap was reached before the tolerance.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceError {
    Diverged { iterations: usize },
}

impl fmt::Display for ReferenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReferenceError::Diverged { iterations } => {
                write!(f, "reference solve diverged after {iterations} iterations")
            }
        }
    }
}

impl core::error::Error for ReferenceError {}

/// Minimize a smooth convex objective to high precision.
///
/// Runs NAG with momentum weight `(k-1)/(k+2)` and the given step size
/// (callers pass `1/L` for an upper bound `L` on the curvature), stopping
/// once the relative gradient norm drops below `tol` or after `max_iters`
/// iterations.
pub fn reference_solve<O: Objective + ?Sized>(
    objective: &O,
    x0: &[f64],
    step_size: f64,
    tol: f64,
    max_iters: usize,
) -> Result<ReferenceSolution, ReferenceError> {
    assert_eq!(x0.len(), objective.dim(), "x0 dimension mismatch");
    assert!(step_size > 0.0 && step_size.is_finite(), "invalid step size");
    assert!(tol > 0.0, "tolerance must be positive");

    let g0 = norm2(&objective.grad(x0));
    if g0 == 0.0 {
        return Ok(ReferenceSolution {
            x: x0.to_vec(),
            iterations: 0,
            relative_grad_norm: 0.0,
            converged: true,
        });
    }
    let diverge_limit = DIVERGENCE_FACTOR * g0;

    let mut x = x0.to_vec();
    let mut x_prev = x.clone();
    let mut ratio = 1.0;
    for k in 1..=max_iters {
        let weight = (k - 1) as f64 / (k + 2) as f64;
        let y: Vec<f64> = x
            .iter()
            .zip(&x_prev)
            .map(|(xi, pi)| xi + weight * (xi - pi))
            .collect();
        let gy = objective.grad(&y);
        let next: Vec<f64> = y
            .iter()
            .zip(&gy)
            .map(|(yi, gi)| yi - step_size * gi)
            .collect();
        x_prev = core::mem::replace(&mut x, next);

        let gn = norm2(&objective.grad(&x));
        if !gn.is_finite() || gn > diverge_limit {
            return Err(ReferenceError::Diverged { iterations: k });
        }
        ratio = gn / g0;
        if ratio < tol {
            return Ok(ReferenceSolution {
                x,
                iterations: k,
                relative_grad_norm: ratio,
                converged: true,
            });
        }
    }
    Ok(ReferenceSolution {
        x,
        iterations: max_iters,
        relative_grad_norm: ratio,
        converged: false,
    })
}
