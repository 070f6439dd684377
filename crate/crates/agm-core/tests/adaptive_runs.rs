//! End-to-end behavior of the adaptive runs against the exact oracles.

use agm_core::linalg::Spectrum;
use agm_core::optimize::{
    optimal_params, run, MethodKind, RunConfig, Schedule, StopReason, ToleranceMode,
};
use agm_core::oracle::{simulate_gd_rho_sequence, simulate_nag_rho_sequence};
use agm_core::problems::quadratic::QuadraticProblem;
use agm_core::rate::Window;
use agm_core::rng::{derive_rng, uniform_vector};
use rand::Rng;

fn config(max_iterations: usize, tolerance: f64) -> RunConfig {
    RunConfig {
        max_iterations,
        tolerance,
        tolerance_mode: ToleranceMode::AbsoluteGradNorm,
    }
}

// For A = c I every residual is collinear with the previous one, so the
// empirical l = 1 ratio equals the exact spectral radius of the iteration
// matrix at every step and the run retraces the oracle recurrence.
#[test]
fn scaled_identity_rate_estimates_reproduce_the_oracle() {
    for c in [0.3, 0.5, 0.8, 0.95] {
        let spectrum = Spectrum::new(vec![c, c]).unwrap();
        let problem = QuadraticProblem::from_spectrum(&spectrum, vec![0.0, 0.0]).unwrap();
        let trace = run(
            MethodKind::Gd,
            &Schedule::adaptive(Window::Finite(1), 1.0),
            &problem,
            &[0.4, -1.1],
            &config(60, 1e-13),
            Some(&[0.0, 0.0]),
        )
        .unwrap();
        let oracle = simulate_gd_rho_sequence(&spectrum, trace.iterations());
        for (row, step) in trace.rows[1..].iter().zip(&oracle) {
            let rho = row.rho_estimate.unwrap();
            assert!(
                (rho - step.rho).abs() <= 1e-12,
                "c={c}, k={}: empirical {rho} vs oracle {}",
                row.iteration,
                step.rho
            );
            assert!((row.alpha.unwrap() - step.alpha).abs() <= 1e-12);
        }
        // The recurrence contracts toward (1-c)/(1+c), so the run reaches
        // tolerance well inside the iteration budget (one step when c = 1).
        assert_eq!(trace.stop_reason, StopReason::Tolerance);
    }
}

#[test]
fn identity_problem_converges_in_one_step() {
    let spectrum = Spectrum::new(vec![1.0, 1.0, 1.0]).unwrap();
    let problem = QuadraticProblem::from_spectrum(&spectrum, vec![0.0; 3]).unwrap();
    let trace = run(
        MethodKind::Gd,
        &Schedule::adaptive(Window::Finite(1), 1.0),
        &problem,
        &[0.2, -0.4, 0.9],
        &config(10, 1e-12),
        None,
    )
    .unwrap();
    assert_eq!(trace.stop_reason, StopReason::Tolerance);
    assert_eq!(trace.iterations(), 1);
}

// Residual contraction of adaptive GD: ||r_k|| <= (1 - mu) ||r_{k-1}||
// for every window choice, and step sizes stay within [1, 2 - mu].
#[test]
fn adaptive_gd_contraction_on_random_quadratics() {
    let mut rng = derive_rng(2024, 0);
    for _ in 0..25 {
        let mu = rng.random_range(0.05..0.5);
        let lipschitz = rng.random_range(f64::min(mu + 0.05, 1.0)..=1.0);
        let mut evals = vec![mu, lipschitz];
        for _ in 0..18 {
            evals.push(rng.random_range(mu..lipschitz));
        }
        let spectrum = Spectrum::new(evals).unwrap();
        let problem = QuadraticProblem::from_spectrum(&spectrum, vec![0.0; 20]).unwrap();
        let x0 = uniform_vector(20, &mut rng);
        for window in [Window::Finite(1), Window::Finite(5), Window::Full] {
            let trace = run(
                MethodKind::Gd,
                &Schedule::adaptive(window, 1.0),
                &problem,
                &x0,
                &config(800, 1e-12),
                None,
            )
            .unwrap();
            for pair in trace.rows.windows(2) {
                assert!(
                    pair[1].grad_norm <= (1.0 - mu) * pair[0].grad_norm * (1.0 + 1e-12),
                    "window {window}: contraction violated at k={}",
                    pair[1].iteration
                );
            }
            for row in &trace.rows[1..] {
                let alpha = row.alpha.unwrap();
                assert!(
                    (1.0 - 1e-12..=2.0 - mu + 1e-12).contains(&alpha),
                    "window {window}: alpha {alpha} outside [1, 2 - mu]"
                );
            }
        }
    }
}

// The empirical NAG rate estimate settles near the oracle limit 1 - sqrt(mu).
#[test]
fn adaptive_nag_rate_approaches_the_oracle_limit() {
    let spectrum = Spectrum::new(vec![0.25, 1.0]).unwrap();
    let problem = QuadraticProblem::from_spectrum(&spectrum, vec![0.0, 0.0]).unwrap();
    let trace = run(
        MethodKind::Nag,
        &Schedule::adaptive(Window::Full, 1.0),
        &problem,
        &[1.0, 1.0],
        &config(200, 1e-12),
        None,
    )
    .unwrap();
    let oracle = simulate_nag_rho_sequence(&spectrum, 400);
    let limit = oracle.last().unwrap().rho;
    let final_rate = trace.last().rho_estimate.unwrap();
    assert!(
        (final_rate - limit).abs() <= 0.05,
        "final rate {final_rate} vs oracle limit {limit}"
    );
}

// Fixed-parameter methods at the optimal point terminate within the
// iteration budget predicted by their rate bound.
#[test]
fn fixed_methods_meet_their_rate_bound_budget() {
    let spectrum = Spectrum::new(vec![0.09, 1.0]).unwrap();
    let problem = QuadraticProblem::from_spectrum(&spectrum, vec![0.0, 0.0]).unwrap();
    let x0 = [1.0, 1.0];
    for method in [MethodKind::Gd, MethodKind::Nag, MethodKind::Hb] {
        let params = optimal_params(method, 0.09, 1.0);
        let trace = run(
            method,
            &Schedule::Fixed {
                params,
                warmup_alpha: Some(1.0),
            },
            &problem,
            &x0,
            &config(2000, 1e-10),
            None,
        )
        .unwrap();
        assert_eq!(
            trace.stop_reason,
            StopReason::Tolerance,
            "{method} did not converge"
        );
        // Fixed runs still log a diagnostic rate estimate.
        assert!(trace.last().rho_estimate.is_some());
    }
}
