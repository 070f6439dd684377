//! Parameter maps: the classical optimal parameters and rate bounds for
//! GD/NAG/HB on strongly convex quadratics, and the adaptive rules that
//! recover parameters from a convergence-rate estimate.
//!
//! The adaptive rules invert the rate-bound column: given an estimate
//! `rate` of the method's convergence factor and a smoothness bound
//! `lipschitz`, they reconstruct the strong convexity constant the bound
//! implies ([`implied_mu`]) and plug it back into the optimal-parameter
//! map. The composition simplifies:
//!
//! ```text
//! GD:   mu_k = lipschitz (1-rate)/(1+rate)      alpha = (1+rate)/lipschitz
//! NAG:  mu_k = lipschitz (1-rate)^2             alpha = 1/lipschitz, beta = rate/(2-rate)
//! HB:   mu_k = lipschitz ((1-rate)/(1+rate))^2  alpha = (1+rate)^2/lipschitz, beta = rate^2
//! ```
//!
//! Note the momentum weights do not depend on `lipschitz` at all.

use core::fmt;

use crate::math;

/// The three first-order methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodKind {
    Gd,
    Nag,
    Hb,
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodKind::Gd => write!(f, "gd"),
            MethodKind::Nag => write!(f, "nag"),
            MethodKind::Hb => write!(f, "hb"),
        }
    }
}

/// Step size and momentum weight for one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams {
    pub alpha: f64,
    pub beta: f64,
}

fn check_mu_l(mu: f64, lipschitz: f64) {
    assert!(
        mu > 0.0 && mu.is_finite() && lipschitz >= mu && lipschitz.is_finite(),
        "require 0 < mu <= lipschitz, got mu={mu}, lipschitz={lipschitz}"
    );
}

fn check_rate(rate: f64, lipschitz: f64) {
    assert!(
        (0.0..1.0).contains(&rate),
        "rate estimate must lie in [0, 1), got {rate}"
    );
    assert!(
        lipschitz > 0.0 && lipschitz.is_finite(),
        "smoothness bound must be positive, got {lipschitz}"
    );
}

/// Optimal `(alpha, beta)` for a quadratic with extreme eigenvalues
/// `(mu, lipschitz)`.
pub fn optimal_params(method: MethodKind, mu: f64, lipschitz: f64) -> StepParams {
    check_mu_l(mu, lipschitz);
    let (sl, sm) = (math::sqrt(lipschitz), math::sqrt(mu));
    match method {
        MethodKind::Gd => StepParams {
            alpha: 2.0 / (lipschitz + mu),
            beta: 0.0,
        },
        MethodKind::Nag => StepParams {
            alpha: 1.0 / lipschitz,
            beta: (sl - sm) / (sl + sm),
        },
        MethodKind::Hb => StepParams {
            alpha: 4.0 / ((sl + sm) * (sl + sm)),
            beta: ((sl - sm) / (sl + sm)) * ((sl - sm) / (sl + sm)),
        },
    }
}

/// Convergence-factor bound attained at the optimal parameters.
pub fn rate_bound(method: MethodKind, mu: f64, lipschitz: f64) -> f64 {
    check_mu_l(mu, lipschitz);
    match method {
        MethodKind::Gd => (lipschitz - mu) / (lipschitz + mu),
        MethodKind::Nag => 1.0 - math::sqrt(mu / lipschitz),
        MethodKind::Hb => {
            let (sl, sm) = (math::sqrt(lipschitz), math::sqrt(mu));
            (sl - sm) / (sl + sm)
        }
    }
}

/// Strong convexity constant implied by a rate estimate under `method`'s
/// rate bound, assuming smoothness `lipschitz`.
pub fn implied_mu(method: MethodKind, rate: f64, lipschitz: f64) -> f64 {
    check_rate(rate, lipschitz);
    match method {
        MethodKind::Gd => lipschitz * (1.0 - rate) / (1.0 + rate),
        MethodKind::Nag => lipschitz * (1.0 - rate) * (1.0 - rate),
        MethodKind::Hb => {
            let q = (1.0 - rate) / (1.0 + rate);
            lipschitz * q * q
        }
    }
}

/// Adaptive GD step size: `2 / (lipschitz + mu_k)` with
/// `mu_k = implied_mu(Gd, rate, lipschitz)`, which simplifies to
/// `(1 + rate) / lipschitz`. With `lipschitz = 1` this is exactly
/// `1 + rate`.
pub fn gd_step_size(rate: f64, lipschitz: f64) -> f64 {
    check_rate(rate, lipschitz);
    (1.0 + rate) / lipschitz
}

/// Adaptive NAG parameters: `alpha = 1/lipschitz`,
/// `beta = (1 - sqrt(mu_k/lipschitz)) / (1 + sqrt(mu_k/lipschitz))`, which
/// simplifies to `rate / (2 - rate)` for every `lipschitz`.
pub fn nag_params(rate: f64, lipschitz: f64) -> StepParams {
    check_rate(rate, lipschitz);
    StepParams {
        alpha: 1.0 / lipschitz,
        beta: rate / (2.0 - rate),
    }
}

/// Adaptive HB parameters: `alpha = (1 + rate)^2 / lipschitz`,
/// `beta = rate^2` (the momentum weight is `lipschitz`-free).
pub fn hb_params(rate: f64, lipschitz: f64) -> StepParams {
    check_rate(rate, lipschitz);
    StepParams {
        alpha: (1.0 + rate) * (1.0 + rate) / lipschitz,
        beta: rate * rate,
    }
}
