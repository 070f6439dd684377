//! Optimizer loops: fixed-parameter GD/NAG/HB and their adaptive variants.
//!
//! A [`Driver`] owns the iterate pair, the residual bookkeeping, and the
//! rate estimator, and advances one iteration per [`Driver::step`] call
//! with whatever parameters the caller supplies. [`run`] wraps the driver
//! with the two stock parameter policies:
//!
//! * fixed parameters (classical methods), and
//! * adaptive parameters recomputed each iteration from the rate estimate.
//!
//! Callers with bespoke policies (e.g. re-estimating eigenvalues every
//! iteration) drive the loop themselves.
//!
//! Conventions shared by every run:
//!
//! * The residual is `r_k = -grad f(x_k)`; for quadratics this equals
//!   `b - A x_k`.
//! * Momentum methods start with one plain GD step (the "warm-up") before
//!   any momentum is applied; the first rate estimate is the plain ratio
//!   `||r_1|| / ||r_0||` and stacked-pair ratios take over from there.
//! * GD runs feed `||r_k||` to the estimator; NAG/HB runs feed the stacked
//!   norm `(||r_k||^2 + ||r_{k-1}||^2)^(1/2)`.
//! * A gradient norm that stops being finite, or grows past
//!   [`DIVERGENCE_FACTOR`] times its initial value, aborts the run with
//!   the trace collected so far. Heavy ball is parameter-sensitive enough
//!   to make this guard worth having.

mod params;

pub use params::{
    gd_step_size, hb_params, implied_mu, nag_params, optimal_params, rate_bound, MethodKind,
    StepParams,
};

use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{norm2, sub};
use crate::objective::Objective;
use crate::rate::{stacked_norm_of, RateEstimator, Window};

/// A run aborts once the gradient norm exceeds this multiple of its
/// initial value.
pub const DIVERGENCE_FACTOR: f64 = 1e12;

/// How [`RunConfig::tolerance`] is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToleranceMode {
    /// Stop when `||grad f(x_k)|| < tolerance`.
    AbsoluteGradNorm,
    /// Stop when `||grad f(x_k)|| / ||grad f(x_0)|| < tolerance`.
    RelativeGradNorm,
}

/// Termination controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub tolerance_mode: ToleranceMode,
}

/// Parameter policy for [`run`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    /// Classical method with constant parameters. `warmup_alpha` is the
    /// step size of the initial plain GD step taken by momentum methods
    /// (defaults to `params.alpha`; ignored by GD).
    Fixed {
        params: StepParams,
        warmup_alpha: Option<f64>,
    },
    /// Parameters recomputed each iteration from the windowed rate
    /// estimate, assuming smoothness bound `smoothness`. The first step is
    /// plain GD with `warmup_alpha` (defaults to `1 / smoothness`, the
    /// rescaled-problem convention).
    Adaptive {
        window: Window,
        smoothness: f64,
        warmup_alpha: Option<f64>,
    },
}

impl Schedule {
    pub fn fixed(alpha: f64, beta: f64) -> Self {
        Schedule::Fixed {
            params: StepParams { alpha, beta },
            warmup_alpha: None,
        }
    }

    pub fn adaptive(window: Window, smoothness: f64) -> Self {
        Schedule::Adaptive {
            window,
            smoothness,
            warmup_alpha: None,
        }
    }
}

/// Why a completed run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Tolerance,
    MaxIterations,
}

/// One per-iteration log row. Fields that are undefined at a given
/// iteration (errors without a reference solution, parameters at iteration
/// 0) are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub solution_error: Option<f64>,
    pub function_error: Option<f64>,
    pub grad_norm: f64,
    pub rho_estimate: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

/// Complete per-iteration log of a run.
#[derive(Debug, Clone)]
pub struct Trace {
    pub rows: Vec<TraceRecord>,
    pub stop_reason: StopReason,
}

impl Trace {
    pub fn last(&self) -> &TraceRecord {
        self.rows.last().expect("trace always has the initial row")
    }

    /// Iteration count of the final row.
    pub fn iterations(&self) -> usize {
        self.last().iteration
    }
}

/// The iteration left the finite regime.
#[derive(Debug, Clone)]
pub enum RunError {
    Diverged { rows: Vec<TraceRecord> },
}

impl RunError {
    pub fn rows(&self) -> &[TraceRecord] {
        match self {
            RunError::Diverged { rows } => rows,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Diverged { rows } => {
                write!(f, "iteration diverged after {} recorded rows", rows.len())
            }
        }
    }
}

impl core::error::Error for RunError {}

/// One GD step: `x - alpha * grad f(x)`.
pub fn step_gd<O: Objective + ?Sized>(objective: &O, x: &[f64], alpha: f64) -> Vec<f64> {
    assert!(alpha > 0.0, "step size must be positive");
    let g = objective.grad(x);
    x.iter().zip(&g).map(|(xi, gi)| xi - alpha * gi).collect()
}

/// One NAG step: `y = x + beta (x - x_prev)`, then `y - alpha * grad f(y)`.
pub fn step_nag<O: Objective + ?Sized>(
    objective: &O,
    x: &[f64],
    x_prev: &[f64],
    alpha: f64,
    beta: f64,
) -> Vec<f64> {
    assert!(alpha > 0.0, "step size must be positive");
    assert!(beta >= 0.0, "momentum weight must be nonnegative");
    let y: Vec<f64> = x
        .iter()
        .zip(x_prev)
        .map(|(xi, pi)| xi + beta * (xi - pi))
        .collect();
    let g = objective.grad(&y);
    y.iter().zip(&g).map(|(yi, gi)| yi - alpha * gi).collect()
}

/// One heavy-ball step: `x - alpha * grad f(x) + beta (x - x_prev)`.
pub fn step_hb<O: Objective + ?Sized>(
    objective: &O,
    x: &[f64],
    x_prev: &[f64],
    alpha: f64,
    beta: f64,
) -> Vec<f64> {
    assert!(alpha > 0.0, "step size must be positive");
    assert!(beta >= 0.0, "momentum weight must be nonnegative");
    let g = objective.grad(x);
    x.iter()
        .zip(x_prev)
        .zip(&g)
        .map(|((xi, pi), gi)| xi - alpha * gi + beta * (xi - pi))
        .collect()
}

/// State of a [`Driver`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriverStatus {
    Running,
    Finished(StopReason),
    Diverged,
}

/// Stepwise execution of one optimizer run.
///
/// The driver performs the state update, residual bookkeeping, estimator
/// feeding, trace logging, and termination checks; the caller chooses the
/// parameters for each step. Because `x_prev` starts equal to `x0`, the
/// first step of a momentum method degenerates to plain GD regardless of
/// the momentum weight passed, which is exactly the prescribed warm-up.
pub struct Driver<'a, O: Objective + ?Sized> {
    method: MethodKind,
    objective: &'a O,
    max_iterations: usize,
    tol_target: f64,
    diverge_limit: f64,
    x: Vec<f64>,
    x_prev: Vec<f64>,
    grad: Vec<f64>,
    grad_norm: f64,
    prev_grad_norm: f64,
    iteration: usize,
    estimator: RateEstimator,
    first_momentum_rate: Option<f64>,
    reference: Option<(Vec<f64>, f64)>,
    rows: Vec<TraceRecord>,
    status: DriverStatus,
}

impl<'a, O: Objective + ?Sized> Driver<'a, O> {
    /// Set up a run from `x0`. `window` sizes the rate estimator (fixed
    /// policies conventionally use window 1 for diagnostics). If `x_star`
    /// is given, solution and function errors are logged per iteration.
    pub fn new(
        method: MethodKind,
        objective: &'a O,
        x0: &[f64],
        config: &RunConfig,
        window: Window,
        x_star: Option<&[f64]>,
    ) -> Self {
        assert_eq!(x0.len(), objective.dim(), "x0 dimension mismatch");
        assert!(config.max_iterations >= 1, "max_iterations must be >= 1");
        assert!(
            config.tolerance > 0.0 && config.tolerance.is_finite(),
            "tolerance must be positive"
        );
        let x = x0.to_vec();
        let grad = objective.grad(&x);
        let grad_norm = norm2(&grad);
        assert!(grad_norm.is_finite(), "gradient not defined at x0");
        let reference = x_star.map(|xs| {
            assert_eq!(xs.len(), x0.len(), "x_star dimension mismatch");
            (xs.to_vec(), objective.value(xs))
        });
        let tol_target = match config.tolerance_mode {
            ToleranceMode::AbsoluteGradNorm => config.tolerance,
            ToleranceMode::RelativeGradNorm => config.tolerance * grad_norm,
        };
        let mut estimator = RateEstimator::new(window);
        if method == MethodKind::Gd {
            estimator.push_norm(grad_norm);
        }
        let row0 = Self::record(&reference, objective, &x, 0, grad_norm, None, None, None);
        let status = if grad_norm == 0.0 || grad_norm < tol_target {
            DriverStatus::Finished(StopReason::Tolerance)
        } else {
            DriverStatus::Running
        };
        Self {
            method,
            objective,
            max_iterations: config.max_iterations,
            tol_target,
            diverge_limit: DIVERGENCE_FACTOR * grad_norm,
            x_prev: x.clone(),
            x,
            grad,
            grad_norm,
            prev_grad_norm: grad_norm,
            iteration: 0,
            estimator,
            first_momentum_rate: None,
            reference,
            rows: alloc::vec![row0],
            status,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn record(
        reference: &Option<(Vec<f64>, f64)>,
        objective: &O,
        x: &[f64],
        iteration: usize,
        grad_norm: f64,
        rho: Option<f64>,
        alpha: Option<f64>,
        beta: Option<f64>,
    ) -> TraceRecord {
        let (solution_error, function_error) = match reference {
            Some((x_star, f_star)) => (
                Some(norm2(&sub(x, x_star))),
                Some(objective.value(x) - f_star),
            ),
            None => (None, None),
        };
        TraceRecord {
            iteration,
            solution_error,
            function_error,
            grad_norm,
            rho_estimate: rho,
            alpha,
            beta,
        }
    }

    pub fn status(&self) -> DriverStatus {
        self.status
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn iterate(&self) -> &[f64] {
        &self.x
    }

    pub fn gradient_norm(&self) -> f64 {
        self.grad_norm
    }

    /// Current clamped rate estimate; `None` before the first step.
    pub fn rate_estimate(&self) -> Option<f64> {
        self.estimator
            .current_rate()
            .ok()
            .or(self.first_momentum_rate)
    }

    /// Advance one iteration with the given parameters.
    pub fn step(&mut self, params: StepParams) -> DriverStatus {
        assert_eq!(self.status, DriverStatus::Running, "step on a finished run");
        let StepParams { alpha, beta } = params;
        self.iteration += 1;
        let k = self.iteration;

        let x_next = match self.method {
            // The driver caches grad f(x_k), so GD and HB reuse it instead
            // of calling step_gd/step_hb (one gradient eval per iteration).
            MethodKind::Gd => self
                .x
                .iter()
                .zip(&self.grad)
                .map(|(xi, gi)| xi - alpha * gi)
                .collect(),
            MethodKind::Nag => step_nag(self.objective, &self.x, &self.x_prev, alpha, beta),
            MethodKind::Hb => self
                .x
                .iter()
                .zip(&self.x_prev)
                .zip(&self.grad)
                .map(|((xi, pi), gi)| xi - alpha * gi + beta * (xi - pi))
                .collect(),
        };
        self.x_prev = core::mem::replace(&mut self.x, x_next);
        self.grad = self.objective.grad(&self.x);
        let gn = norm2(&self.grad);
        self.grad_norm = gn;

        if !gn.is_finite() {
            self.status = DriverStatus::Diverged;
            return self.status;
        }
        if gn > self.diverge_limit {
            let row = Self::record(
                &self.reference,
                self.objective,
                &self.x,
                k,
                gn,
                None,
                Some(alpha),
                Some(beta),
            );
            self.rows.push(row);
            self.status = DriverStatus::Diverged;
            return self.status;
        }

        match self.method {
            MethodKind::Gd => self.estimator.push_norm(gn),
            MethodKind::Nag | MethodKind::Hb => {
                self.estimator
                    .push_norm(stacked_norm_of(gn, self.prev_grad_norm));
                if k == 1 {
                    let ratio = gn / self.prev_grad_norm;
                    self.first_momentum_rate =
                        Some(ratio.clamp(0.0, self.estimator.clamp_ceiling()));
                }
                self.prev_grad_norm = gn;
            }
        }

        let row = Self::record(
            &self.reference,
            self.objective,
            &self.x,
            k,
            gn,
            self.rate_estimate(),
            Some(alpha),
            Some(beta),
        );
        self.rows.push(row);

        if gn == 0.0 || gn < self.tol_target {
            self.status = DriverStatus::Finished(StopReason::Tolerance);
        } else if k >= self.max_iterations {
            self.status = DriverStatus::Finished(StopReason::MaxIterations);
        }
        self.status
    }

    /// Consume the driver. Must not be called while the run is in progress.
    pub fn into_trace(self) -> Result<Trace, RunError> {
        match self.status {
            DriverStatus::Finished(stop_reason) => Ok(Trace {
                rows: self.rows,
                stop_reason,
            }),
            DriverStatus::Diverged => Err(RunError::Diverged { rows: self.rows }),
            DriverStatus::Running => panic!("into_trace on a run still in progress"),
        }
    }
}

/// Execute a full run under one of the stock parameter policies.
pub fn run<O: Objective + ?Sized>(
    method: MethodKind,
    schedule: &Schedule,
    objective: &O,
    x0: &[f64],
    config: &RunConfig,
    x_star: Option<&[f64]>,
) -> Result<Trace, RunError> {
    let window = match schedule {
        Schedule::Adaptive { window, .. } => *window,
        Schedule::Fixed { .. } => Window::Finite(1),
    };
    let mut driver = Driver::new(method, objective, x0, config, window, x_star);
    if driver.status() != DriverStatus::Running {
        return driver.into_trace();
    }

    let first = match schedule {
        Schedule::Fixed {
            params,
            warmup_alpha,
        } => match method {
            MethodKind::Gd => *params,
            _ => StepParams {
                alpha: warmup_alpha.unwrap_or(params.alpha),
                beta: 0.0,
            },
        },
        Schedule::Adaptive {
            smoothness,
            warmup_alpha,
            ..
        } => StepParams {
            alpha: warmup_alpha.unwrap_or(1.0 / smoothness),
            beta: 0.0,
        },
    };
    driver.step(first);

    while driver.status() == DriverStatus::Running {
        let params = match schedule {
            Schedule::Fixed { params, .. } => *params,
            Schedule::Adaptive { smoothness, .. } => {
                let rate = driver
                    .rate_estimate()
                    .expect("rate estimate available after the first step");
                match method {
                    MethodKind::Gd => StepParams {
                        alpha: gd_step_size(rate, *smoothness),
                        beta: 0.0,
                    },
                    MethodKind::Nag => nag_params(rate, *smoothness),
                    MethodKind::Hb => hb_params(rate, *smoothness),
                }
            }
        };
        driver.step(params);
    }
    driver.into_trace()
}
