//! Exact spectral radii of the GD/NAG/HB iteration operators on known
//! spectra, and simulators of the adaptive rate recurrences.
//!
//! These oracles replace the residual-ratio estimate with the true
//! spectral radius of the current iteration matrix, which is what the
//! convergence analysis of the adaptive rules reasons about. They are
//! validation tools, not practical algorithms: computing spectral radii
//! each iteration costs far more than the residual ratios.
//!
//! For GD the iteration matrix is `I - alpha A` and the radius is attained
//! at an extreme eigenvalue. For NAG/HB the stacked-residual recurrence has
//! a 2n x 2n iteration matrix that is permutation-similar to 2x2 blocks,
//! one per eigenvalue `lambda`; the dominant root of each block's
//! characteristic quadratic gives the radius. The dominant block is not
//! always at `mu` once the roots turn real, so the NAG/HB radii scan the
//! whole eigenvalue list.

use alloc::vec::Vec;

use crate::linalg::Spectrum;
use crate::math;

/// Absolute slack when classifying the block discriminant against zero.
/// At the boundary both branches agree, so the repeated-root branch is
/// taken.
pub const DISCRIMINANT_SLACK: f64 = 1e-14;

/// Largest smoothness constant for which the adaptive-GD rate recurrence
/// contracts toward its fixed point from the start: `2/(2-mu) - mu`.
pub fn gd_threshold(mu: f64) -> f64 {
    assert!(mu > 0.0 && mu <= 1.0, "mu must lie in (0, 1]");
    2.0 / (2.0 - mu) - mu
}

/// Spectral radius of `I - alpha A`: `max(|1 - alpha mu|, |1 - alpha L|)`.
///
/// `|1 - alpha lambda|` is convex in `lambda`, so the extremes suffice for
/// any SPD spectrum.
pub fn gd_spectral_radius(alpha: f64, spectrum: &Spectrum) -> f64 {
    assert!(alpha > 0.0, "step size must be positive");
    let at_mu = (1.0 - alpha * spectrum.mu()).abs();
    let at_l = (1.0 - alpha * spectrum.lipschitz()).abs();
    at_mu.max(at_l)
}

/// Dominant-root magnitude of the NAG residual block at eigenvalue
/// `lambda`, with step size 1:
///
/// ```text
/// theta^2 - (1 + beta)(1 - lambda) theta + beta (1 - lambda) = 0
/// ```
///
/// Complex or repeated roots have magnitude `sqrt(beta (1 - lambda))`;
/// otherwise the larger real root dominates (both roots are nonnegative
/// for `lambda <= 1`).
pub fn nag_block_root(beta: f64, lambda: f64) -> f64 {
    assert!(beta >= 0.0, "momentum weight must be nonnegative");
    assert!(
        lambda > 0.0 && lambda <= 1.0,
        "eigenvalue must lie in (0, 1] after rescaling, got {lambda}"
    );
    let one_minus = 1.0 - lambda;
    let sum = (1.0 + beta) * one_minus;
    let product = beta * one_minus;
    let discriminant = sum * sum - 4.0 * product;
    if discriminant > DISCRIMINANT_SLACK {
        (sum + math::sqrt(discriminant)) / 2.0
    } else {
        math::sqrt(product.max(0.0))
    }
}

/// Spectral radius of the NAG residual iteration matrix: maximum of
/// [`nag_block_root`] over the whole eigenvalue list.
pub fn nag_spectral_radius(beta: f64, spectrum: &Spectrum) -> f64 {
    spectrum
        .eigenvalues()
        .iter()
        .map(|&lambda| nag_block_root(beta, lambda))
        .fold(0.0, f64::max)
}

/// Dominant-root magnitude of the heavy-ball residual block at eigenvalue
/// `lambda`:
///
/// ```text
/// theta^2 - (1 + beta - alpha lambda) theta + beta = 0
/// ```
///
/// Complex roots have magnitude `sqrt(beta)`. The linear coefficient can be
/// negative here, so in the real case the dominant root is the larger in
/// magnitude of the two.
pub fn hb_block_radius(alpha: f64, beta: f64, lambda: f64) -> f64 {
    assert!(alpha >= 0.0 && beta >= 0.0, "parameters must be nonnegative");
    let sum = 1.0 + beta - alpha * lambda;
    let discriminant = sum * sum - 4.0 * beta;
    if discriminant > DISCRIMINANT_SLACK {
        let root = math::sqrt(discriminant);
        let t1 = (sum + root) / 2.0;
        let t2 = (sum - root) / 2.0;
        t1.abs().max(t2.abs())
    } else {
        math::sqrt(beta)
    }
}

/// Spectral radius of the heavy-ball residual iteration matrix over a
/// whole spectrum.
pub fn hb_spectral_radius(alpha: f64, beta: f64, spectrum: &Spectrum) -> f64 {
    spectrum
        .eigenvalues()
        .iter()
        .map(|&lambda| hb_block_radius(alpha, beta, lambda))
        .fold(0.0, f64::max)
}

/// One step of the simulated adaptive-GD rate recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdOracleStep {
    /// Exact spectral radius `rho_k = rho(I - alpha_k A)`.
    pub rho: f64,
    /// Step size `alpha_k` that produced it.
    pub alpha: f64,
}

/// Iterate the exact adaptive-GD recurrence `alpha_{k+1} = 1 + rho_k`,
/// `rho_{k+1} = rho(I - alpha_{k+1} A)`, starting from `alpha_1 = 1`.
///
/// Requires a rescaled spectrum (`L <= 1`).
pub fn simulate_gd_rho_sequence(spectrum: &Spectrum, k_max: usize) -> Vec<GdOracleStep> {
    assert!(
        spectrum.lipschitz() <= 1.0 + 1e-12,
        "oracle recurrences assume the spectrum is rescaled to L <= 1"
    );
    let mut steps = Vec::with_capacity(k_max);
    let mut alpha = 1.0;
    for _ in 0..k_max {
        let rho = gd_spectral_radius(alpha, spectrum);
        steps.push(GdOracleStep { rho, alpha });
        alpha = 1.0 + rho;
    }
    steps
}

/// One step of the simulated adaptive-NAG rate recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NagOracleStep {
    /// Exact spectral radius of the block iteration matrix.
    pub rho: f64,
    /// Momentum weight `beta_k` used at this step (0 for the warm-up).
    pub beta: f64,
}

/// Iterate the exact adaptive-NAG recurrence: a GD warm-up step gives
/// `rho_1 = rho(I - A)`, then `beta_{k+1} = rho_k / (2 - rho_k)` and
/// `rho_{k+1}` is the block spectral radius at that momentum.
///
/// Requires a rescaled spectrum (`L <= 1`).
pub fn simulate_nag_rho_sequence(spectrum: &Spectrum, k_max: usize) -> Vec<NagOracleStep> {
    assert!(
        spectrum.lipschitz() <= 1.0 + 1e-12,
        "oracle recurrences assume the spectrum is rescaled to L <= 1"
    );
    let mut steps = Vec::with_capacity(k_max);
    if k_max == 0 {
        return steps;
    }
    let mut rho = gd_spectral_radius(1.0, spectrum);
    steps.push(NagOracleStep { rho, beta: 0.0 });
    for _ in 1..k_max {
        let beta = rho / (2.0 - rho);
        rho = nag_spectral_radius(beta, spectrum);
        steps.push(NagOracleStep { rho, beta });
    }
    steps
}

/// Which contraction band the estimate error `epsilon` falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsilonRegime {
    /// Upper band: the error contracts as `epsilon_{k+1} <= L epsilon_k`.
    UpperBand,
    /// Lower band: the error flips sign and contracts,
    /// `epsilon_{k+1} <= -mu epsilon_k`.
    LowerBand,
    /// Outside the reachable range of the recurrence.
    OutOfRange,
}

/// Decomposition of a rate estimate into the optimal rate, the rescaling
/// discrepancy, and the adaptive-update error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleDiagnostics {
    /// The decomposed estimate.
    pub rho: f64,
    /// Optimal GD rate `(L - mu) / (L + mu)`.
    pub rho_star: f64,
    /// Discrepancy from treating the smoothness constant as 1:
    /// `(1 - mu)/(1 + mu) - (L - mu)/(L + mu)`.
    pub delta_l: f64,
    /// Remaining error: `rho - rho_star - delta_l`.
    pub epsilon: f64,
    pub regime: EpsilonRegime,
    /// True when `L <= gd_threshold(mu)`. In that regime only the lower
    /// band is reachable and the published interval for it is internally
    /// inconsistent, so the band edges here come from the same general
    /// formulas as the above-threshold case rather than from that
    /// interval.
    pub below_threshold: bool,
}

/// Decompose `rho = rho_star + delta_l + epsilon` and classify which
/// contraction band `epsilon` occupies.
pub fn decompose_epsilon(rho: f64, spectrum: &Spectrum) -> OracleDiagnostics {
    let mu = spectrum.mu();
    let lipschitz = spectrum.lipschitz();
    let rho_star = (lipschitz - mu) / (lipschitz + mu);
    let delta_l = (1.0 - mu) / (1.0 + mu) - rho_star;
    let epsilon = rho - rho_star - delta_l;

    let lower_edge = -(1.0 - mu) / (1.0 + mu);
    let split = 2.0 / (lipschitz + mu) - 2.0 / (1.0 + mu);
    let upper_edge = (1.0 - mu) - (1.0 - mu) / (1.0 + mu);
    let regime = if epsilon > split && epsilon <= upper_edge {
        EpsilonRegime::UpperBand
    } else if epsilon > lower_edge && epsilon <= split {
        EpsilonRegime::LowerBand
    } else {
        EpsilonRegime::OutOfRange
    };
    OracleDiagnostics {
        rho,
        rho_star,
        delta_l,
        epsilon,
        regime,
        below_threshold: lipschitz <= gd_threshold(mu.min(1.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn spec(evals: &[f64]) -> Spectrum {
        Spectrum::new(evals.to_vec()).unwrap()
    }

    #[test]
    fn gd_radius_examples() {
        let s = spec(&[0.25, 1.0]);
        assert_eq!(gd_spectral_radius(1.0, &s), 0.75);
        assert!((gd_spectral_radius(1.6, &s) - 0.6).abs() < 1e-15);
        // alpha = 2/(mu + L) lands on the optimal rate for any spectrum.
        let s2 = spec(&[0.3, 0.9]);
        let alpha = 2.0 / (0.3 + 0.9);
        let expected = (0.9 - 0.3) / (0.9 + 0.3);
        assert!((gd_spectral_radius(alpha, &s2) - expected).abs() < 1e-15);
    }

    #[test]
    fn nag_block_root_examples() {
        // Zero discriminant: repeated root sqrt(1/3 * 3/4) = 1/2.
        assert!((nag_block_root(1.0 / 3.0, 0.25) - 0.5).abs() < 1e-12);
        // beta = 0 reduces to the GD factor.
        assert!((nag_block_root(0.0, 0.25) - 0.75).abs() < 1e-15);
        // lambda = 1 makes the block nilpotent.
        assert_eq!(nag_block_root(0.7, 1.0), 0.0);
    }

    #[test]
    fn nag_radius_examples() {
        let s = spec(&[0.25, 1.0]);
        let beta = (1.0 - 0.5) / (1.0 + 0.5);
        assert!((nag_spectral_radius(beta, &s) - 0.5).abs() < 1e-12);
        assert!((nag_spectral_radius(0.0, &s) - 0.75).abs() < 1e-15);
        let single = spec(&[1.0]);
        assert_eq!(nag_spectral_radius(0.9, &single), 0.0);
    }

    #[test]
    fn hb_block_examples() {
        // Optimal parameters for (0.25, 1): complex regime, magnitude sqrt(beta).
        let alpha = 16.0 / 9.0;
        let beta = 1.0 / 9.0;
        assert!((hb_block_radius(alpha, beta, 0.25) - 1.0 / 3.0).abs() < 1e-12);
        // beta = 0 reduces to |1 - alpha lambda|.
        assert!((hb_block_radius(0.7, 0.0, 0.5) - 0.65).abs() < 1e-15);
        // Stationary iteration.
        assert_eq!(hb_block_radius(0.0, 0.0, 0.5), 1.0);
    }

    #[test]
    fn gd_sequence_case1_contracts_with_factor_mu() {
        // L = 0.6 <= gd_threshold(0.25) ~ 0.8929.
        let s = spec(&[0.25, 0.6]);
        let steps = simulate_gd_rho_sequence(&s, 60);
        let limit = (1.0 - 0.25) / (1.0 + 0.25);
        assert_eq!(steps[0].alpha, 1.0);
        for pair in steps.windows(2) {
            let lhs = (pair[1].rho - limit).abs();
            let rhs = 0.25 * (pair[0].rho - limit).abs();
            assert!((lhs - rhs).abs() <= 1e-13);
        }
    }

    #[test]
    fn gd_sequence_is_constant_when_l_is_one() {
        let s = spec(&[0.25, 1.0]);
        let steps = simulate_gd_rho_sequence(&s, 20);
        for step in &steps {
            assert!((step.rho - 0.75).abs() <= 1e-15);
        }
    }

    #[test]
    fn gd_sequence_identity_converges_immediately() {
        let s = spec(&[1.0]);
        let steps = simulate_gd_rho_sequence(&s, 5);
        assert_eq!(steps[0].rho, 0.0);
        assert!(steps.iter().all(|s| s.rho == 0.0));
    }

    #[test]
    fn nag_sequence_reaches_one_minus_sqrt_mu() {
        let s = spec(&[0.25, 1.0]);
        let steps = simulate_nag_rho_sequence(&s, 400);
        let limit = 1.0 - 0.5;
        assert!((steps.last().unwrap().rho - limit).abs() < 1e-10);
        // Monotone nonincreasing once past the warm-up.
        for pair in steps[1..].windows(2) {
            assert!(pair[1].rho <= pair[0].rho + 1e-15);
        }
    }

    #[test]
    fn nag_sequence_mu_001_limit() {
        let s = spec(&[0.01, 1.0]);
        let steps = simulate_nag_rho_sequence(&s, 2000);
        assert!((steps.last().unwrap().rho - 0.9).abs() < 1e-8);
    }

    #[test]
    fn nag_sequence_identity_is_zero() {
        let s = spec(&[1.0]);
        let steps = simulate_nag_rho_sequence(&s, 5);
        assert!(steps.iter().all(|s| s.rho == 0.0));
    }

    #[test]
    fn epsilon_decomposition_at_the_limit_point() {
        let s = spec(&[0.3, 0.95]);
        let limit = (1.0 - 0.3) / (1.0 + 0.3);
        let d = decompose_epsilon(limit, &s);
        assert!(d.epsilon.abs() < 1e-15);
        // Identity holds by construction.
        assert!((d.rho_star + d.delta_l + d.epsilon - d.rho).abs() < 1e-15);
    }

    #[test]
    fn epsilon_decomposition_delta_vanishes_at_l_one() {
        let s = spec(&[0.3, 1.0]);
        let d = decompose_epsilon(0.6, &s);
        assert_eq!(d.delta_l, 0.0);
    }

    #[test]
    fn epsilon_decomposition_hand_example() {
        // mu = 0.3, L = 0.95, rho = 0.55:
        // delta_l = 7/13 - 13/25 = 6/325, epsilon = 0.03 - 6/325 = 3/260.
        let s = spec(&[0.3, 0.95]);
        let d = decompose_epsilon(0.55, &s);
        assert!((d.delta_l - 6.0 / 325.0).abs() < 1e-12);
        assert!((d.epsilon - 3.0 / 260.0).abs() < 1e-12);
        assert!(!d.below_threshold); // 0.95 > gd_threshold(0.3) ~ 0.8765
    }

    #[test]
    fn epsilon_regime_classification() {
        let s = spec(&[0.3, 0.95]);
        let split = 2.0 / (0.95 + 0.3) - 2.0 / 1.3;
        let rho_star = (0.95 - 0.3) / (0.95 + 0.3);
        let delta_l = (1.0 - 0.3) / 1.3 - rho_star;
        let upper_edge = (1.0 - 0.3) - (1.0 - 0.3) / 1.3;
        let upper = decompose_epsilon(rho_star + delta_l + 0.5 * (split + upper_edge), &s);
        assert_eq!(upper.regime, EpsilonRegime::UpperBand);
        let lower = decompose_epsilon(rho_star + delta_l + split - 0.01, &s);
        assert_eq!(lower.regime, EpsilonRegime::LowerBand);
        let out = decompose_epsilon(2.0, &s);
        assert_eq!(out.regime, EpsilonRegime::OutOfRange);
        // Below the threshold the flag is set.
        let s2 = spec(&[0.3, 0.6]);
        assert!(decompose_epsilon(0.5, &s2).below_threshold);
    }

    #[test]
    fn block_root_monotone_in_lambda_and_beta() {
        // Within the distinct-real-root regime the dominant root decreases
        // in both arguments.
        let lambdas: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
        let betas: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
        for &beta in &betas {
            for pair in lambdas.windows(2) {
                let threshold = |l: f64| {
                    let sl = math::sqrt(l);
                    (1.0 - sl) / (1.0 + sl)
                };
                // Skip pairs that cross into the complex regime.
                if beta >= threshold(pair[0]) || beta >= threshold(pair[1]) {
                    continue;
                }
                assert!(
                    nag_block_root(beta, pair[1]) <= nag_block_root(beta, pair[0]) + 1e-15,
                    "not decreasing in lambda at beta={beta}, pair={pair:?}"
                );
            }
        }
        for &lambda in &lambdas {
            for pair in betas.windows(2) {
                let sl = math::sqrt(lambda);
                let threshold = (1.0 - sl) / (1.0 + sl);
                if pair[1] >= threshold {
                    continue;
                }
                assert!(
                    nag_block_root(pair[1], lambda) <= nag_block_root(pair[0], lambda) + 1e-15,
                    "not decreasing in beta at lambda={lambda}, pair={pair:?}"
                );
            }
        }
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        // The adaptive-GD rate recurrence converges to (1-mu)/(1+mu)
        // whenever L < 1.
        #[test]
        fn gd_sequence_converges(mu in 0.05f64..0.9, t in 0.1f64..0.999) {
            let lipschitz = mu + (0.999 - mu).max(0.0) * t;
            prop_assume!(lipschitz > mu && lipschitz < 1.0);
            let s = Spectrum::new(alloc::vec![mu, lipschitz]).unwrap();
            let steps = simulate_gd_rho_sequence(&s, 3000);
            let limit = (1.0 - mu) / (1.0 + mu);
            prop_assert!((steps.last().unwrap().rho - limit).abs() < 1e-9);
        }

        // Along the NAG recurrence the radius never exceeds 1 - mu.
        #[test]
        fn nag_sequence_bounded_by_gd_rate(mu in 0.01f64..0.99) {
            let s = Spectrum::new(alloc::vec![mu, 1.0]).unwrap();
            let steps = simulate_nag_rho_sequence(&s, 500);
            for step in steps {
                prop_assert!(step.rho >= 0.0);
                prop_assert!(step.rho <= 1.0 - mu + 1e-13);
            }
        }
    }
}
