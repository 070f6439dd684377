//! The differentiable-objective interface consumed by the optimizers.

use alloc::vec::Vec;

use crate::linalg::Spectrum;

/// A smooth objective `f: R^n -> R`.
///
/// The optimizers only require values and gradients. A Hessian-vector
/// product unlocks the eigenvalue-estimation baselines, and an exact
/// spectrum (quadratics with a known eigenvalue list) unlocks the spectral
/// oracles. Implementations must be safe to call concurrently on shared
/// read-only problem data.
pub trait Objective {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    fn grad(&self, x: &[f64]) -> Vec<f64>;

    /// Hessian-vector product at `x`, when available.
    fn hessian_vec(&self, _x: &[f64], _v: &[f64]) -> Option<Vec<f64>> {
        None
    }

    /// Exact Hessian spectrum, when the problem knows it.
    fn exact_spectrum(&self) -> Option<Spectrum> {
        None
    }
}
