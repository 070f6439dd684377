//! Convergence-rate estimation from residual norms.
//!
//! The estimator maintains the ratios of successive residual norms and
//! reports their windowed geometric average
//!
//! ```text
//! rate_k = (prod_{i=k-l+1..k} ||r_i|| / ||r_{i-1}||)^(1/l)    for k >= l,
//! rate_k = (||r_k|| / ||r_0||)^(1/k)                          for k <  l,
//! ```
//!
//! which serves as an empirical stand-in for the spectral radius of the
//! iteration operator. With `l = 1` this is the plain last ratio; in
//! full-history mode it is always `(||r_k|| / ||r_0||)^(1/k)`.
//!
//! Plain GD runs push `||r_k||` directly. Momentum methods obey a two-term
//! recurrence, so they push the norm of the stacked residual pair
//! `(r_k; r_{k-1})` instead; see [`StackedResidual`]. The first stacked
//! pair pushed, `(r_1; r_0)`, serves as the window base (a pair containing
//! an iterate before `r_0` does not exist).
//!
//! Ratios above 1 occur on nonlinear problems and during heavy-ball
//! oscillation; the reported rate is clamped into `[0, clamp_ceiling]` so
//! the downstream parameter maps, which require a rate strictly below 1,
//! stay defined.

use alloc::collections::VecDeque;
use core::fmt;

use crate::linalg::norm2;
use crate::math;

/// Default clamp ceiling: just below 1.
pub const DEFAULT_CLAMP_CEILING: f64 = 1.0 - 1e-12;

/// Averaging window for the rate estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    /// Geometric mean over the last `l >= 1` ratios.
    Finite(usize),
    /// Geometric mean over the whole history.
    Full,
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::Finite(l) => write!(f, "l{l}"),
            Window::Full => write!(f, "lfull"),
        }
    }
}

/// The estimator has seen fewer than two norms, so no ratio exists yet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotReady;

impl fmt::Display for NotReady {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rate estimator needs at least two pushed norms")
    }
}

impl core::error::Error for NotReady {}

/// Windowed geometric-average estimator of the convergence factor.
#[derive(Debug, Clone)]
pub struct RateEstimator {
    window: Window,
    ratios: VecDeque<f64>,
    base_norm: Option<f64>,
    latest_norm: f64,
    count: usize,
    converged: bool,
    clamp_ceiling: f64,
}

impl RateEstimator {
    pub fn new(window: Window) -> Self {
        Self::with_ceiling(window, DEFAULT_CLAMP_CEILING)
    }

    /// `clamp_ceiling` must lie in `(0, 1]`.
    pub fn with_ceiling(window: Window, clamp_ceiling: f64) -> Self {
        if let Window::Finite(l) = window {
            assert!(l >= 1, "finite window must be at least 1");
        }
        assert!(
            clamp_ceiling > 0.0 && clamp_ceiling <= 1.0,
            "clamp ceiling must lie in (0, 1]"
        );
        Self {
            window,
            ratios: VecDeque::new(),
            base_norm: None,
            latest_norm: 0.0,
            count: 0,
            converged: false,
            clamp_ceiling,
        }
    }

    /// Number of norms pushed after the base.
    pub fn count(&self) -> usize {
        self.count
    }

    /// A zero residual norm was pushed: the iteration has hit the solution.
    pub fn is_converged(&self) -> bool {
        self.converged
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn clamp_ceiling(&self) -> f64 {
        self.clamp_ceiling
    }

    /// Record the next residual norm. The first push sets the window base.
    ///
    /// A zero norm marks the estimator converged instead of producing a
    /// zero ratio (a zero ratio would drive the step size to its maximum on
    /// a run that is already over).
    ///
    /// Panics if `norm` is negative or not finite.
    pub fn push_norm(&mut self, norm: f64) {
        assert!(
            norm.is_finite() && norm >= 0.0,
            "residual norm must be finite and nonnegative, got {norm}"
        );
        let Some(_) = self.base_norm else {
            self.base_norm = Some(norm);
            self.latest_norm = norm;
            if norm == 0.0 {
                self.converged = true;
            }
            return;
        };
        self.count += 1;
        if norm == 0.0 || self.converged {
            self.converged = true;
            self.latest_norm = norm;
            return;
        }
        if let Window::Finite(l) = self.window {
            self.ratios.push_back(norm / self.latest_norm);
            if self.ratios.len() > l {
                self.ratios.pop_front();
            }
        }
        self.latest_norm = norm;
    }

    /// Current rate estimate, clamped into `[0, clamp_ceiling]`.
    ///
    /// Needs at least two pushed norms; a converged estimator reports 0.
    pub fn current_rate(&self) -> Result<f64, NotReady> {
        let base = self.base_norm.ok_or(NotReady)?;
        if self.count == 0 {
            return Err(NotReady);
        }
        if self.converged {
            return Ok(0.0);
        }
        let raw = match self.window {
            Window::Finite(l) if self.count >= l => {
                let product: f64 = self.ratios.iter().product();
                math::powf(product, 1.0 / l as f64)
            }
            // Warm-up for a finite window (count < l) and full-history mode
            // share the same formula.
            _ => math::powf(self.latest_norm / base, 1.0 / self.count as f64),
        };
        Ok(raw.clamp(0.0, self.clamp_ceiling))
    }
}

/// Residual pair `(current; previous)` for two-term momentum recurrences.
#[derive(Debug, Clone, PartialEq)]
pub struct StackedResidual {
    pub current: alloc::vec::Vec<f64>,
    pub previous: alloc::vec::Vec<f64>,
}

impl StackedResidual {
    pub fn new(current: alloc::vec::Vec<f64>, previous: alloc::vec::Vec<f64>) -> Self {
        assert_eq!(
            current.len(),
            previous.len(),
            "stacked residual: dimension mismatch"
        );
        Self { current, previous }
    }

    /// Euclidean norm of the concatenation: `(||r_k||^2 + ||r_{k-1}||^2)^(1/2)`.
    pub fn norm(&self) -> f64 {
        stacked_norm_of(norm2(&self.current), norm2(&self.previous))
    }

    /// Shift `current` into `previous` and install the next residual.
    pub fn advance(&mut self, next: alloc::vec::Vec<f64>) {
        assert_eq!(next.len(), self.current.len(), "stacked residual: dimension mismatch");
        self.previous = core::mem::replace(&mut self.current, next);
    }
}

/// Stacked-pair norm from the two component norms.
pub fn stacked_norm_of(current_norm: f64, previous_norm: f64) -> f64 {
    math::sqrt(current_norm * current_norm + previous_norm * previous_norm)
}
