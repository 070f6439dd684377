//! Strongly convex quadratics `f(x) = x^T A x / 2 - b^T x` with
//! configurable eigenvalue distributions.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::linalg::{dot, norm2, SpdOperator, Spectrum};
use crate::objective::Objective;
use crate::oracle::gd_threshold;
use crate::problems::ProblemError;

/// Eigenvalue-distribution recipes for diagonal test problems.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumSpec {
    /// `n` evenly spaced eigenvalues on `[lo, hi]`.
    Uniform { lo: f64, hi: f64, n: usize },
    /// `n` logarithmically spaced eigenvalues from `10^lo_exp` to
    /// `10^hi_exp`.
    LogSpace { lo_exp: f64, hi_exp: f64, n: usize },
    /// A bulk draw plus a small cluster of outliers; extremes are whatever
    /// was drawn. `outlier_fraction` of the `n` eigenvalues (rounded down)
    /// come from `outliers`, the rest from `bulk`.
    Cluster {
        bulk: (f64, f64),
        outliers: (f64, f64),
        outlier_fraction: f64,
        n: usize,
    },
    /// Random `mu` from `mu_range` with the largest eigenvalue placed
    /// deliberately above or below the adaptive-GD contraction threshold
    /// `2/(2-mu) - mu`: above lands halfway between the threshold and 1,
    /// below halfway between `mu` and the threshold. The extremes are
    /// pinned; interior eigenvalues are uniform on `[mu, L]`. Needs
    /// `n >= 2`.
    NearThreshold {
        side: ThresholdSide,
        mu_range: (f64, f64),
        n: usize,
    },
    /// Exactly the two eigenvalues `{mu, lipschitz}`.
    TwoPoint { mu: f64, lipschitz: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdSide {
    Above,
    Below,
}

/// Draw a spectrum according to `spec`.
pub fn gen_spectrum(spec: &SpectrumSpec, rng: &mut impl Rng) -> Spectrum {
    let eigenvalues = match spec {
        SpectrumSpec::Uniform { lo, hi, n } => {
            assert!(*n >= 2 && *lo > 0.0 && hi > lo, "invalid uniform spectrum");
            linspace(*lo, *hi, *n)
        }
        SpectrumSpec::LogSpace { lo_exp, hi_exp, n } => {
            assert!(*n >= 2 && hi_exp > lo_exp, "invalid logspace spectrum");
            linspace(*lo_exp, *hi_exp, *n)
                .into_iter()
                .map(|e| crate::math::powf(10.0, e))
                .collect()
        }
        SpectrumSpec::Cluster {
            bulk,
            outliers,
            outlier_fraction,
            n,
        } => {
            assert!(
                *n >= 2 && (0.0..1.0).contains(outlier_fraction),
                "invalid cluster spectrum"
            );
            assert!(bulk.0 >= 0.0 && bulk.1 > bulk.0 && outliers.0 > 0.0 && outliers.1 > outliers.0);
            let n_outliers = (*outlier_fraction * *n as f64) as usize;
            let mut evals = Vec::with_capacity(*n);
            for _ in 0..(*n - n_outliers) {
                // u in (0, 1] keeps an open lower range strictly positive.
                let u = 1.0 - rng.random::<f64>();
                evals.push(bulk.0 + (bulk.1 - bulk.0) * u);
            }
            for _ in 0..n_outliers {
                evals.push(rng.random_range(outliers.0..outliers.1));
            }
            evals
        }
        SpectrumSpec::NearThreshold { side, mu_range, n } => {
            assert!(*n >= 2, "near-threshold spectra need n >= 2");
            assert!(mu_range.0 > 0.0 && mu_range.1 > mu_range.0 && mu_range.1 < 1.0);
            let mu = rng.random_range(mu_range.0..mu_range.1);
            let t = gd_threshold(mu);
            let lipschitz = match side {
                ThresholdSide::Above => 0.5 * (1.0 + t),
                ThresholdSide::Below => 0.5 * (mu + t),
            };
            let mut evals = Vec::with_capacity(*n);
            evals.push(mu);
            for _ in 0..(*n - 2) {
                evals.push(mu + (lipschitz - mu) * rng.random::<f64>());
            }
            evals.push(lipschitz);
            evals
        }
        SpectrumSpec::TwoPoint { mu, lipschitz } => {
            assert!(*mu > 0.0 && lipschitz >= mu, "invalid two-point spectrum");
            vec![*mu, *lipschitz]
        }
    };
    Spectrum::new(eigenvalues).expect("generated eigenvalues are positive")
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

/// `f(x) = x^T A x / 2 - b^T x` for an SPD operator `A`.
#[derive(Debug, Clone)]
pub struct QuadraticProblem {
    operator: SpdOperator,
    b: Vec<f64>,
    known_minimizer: Option<Vec<f64>>,
}

impl QuadraticProblem {
    /// A claimed minimizer must satisfy `||A x* - b|| <= 1e-10 ||b||`
    /// (absolute `1e-10` when `b = 0`).
    pub fn new(
        operator: SpdOperator,
        b: Vec<f64>,
        known_minimizer: Option<Vec<f64>>,
    ) -> Result<Self, ProblemError> {
        if b.len() != operator.dim() {
            return Err(ProblemError::DimensionMismatch {
                expected: operator.dim(),
                got: b.len(),
            });
        }
        if let Some(x_star) = &known_minimizer {
            if x_star.len() != operator.dim() {
                return Err(ProblemError::DimensionMismatch {
                    expected: operator.dim(),
                    got: x_star.len(),
                });
            }
            let residual_norm = norm2(&operator.residual(&b, x_star));
            let bound = 1e-10 * norm2(&b).max(1.0);
            if residual_norm > bound {
                return Err(ProblemError::MinimizerInconsistent { residual_norm });
            }
        }
        Ok(Self {
            operator,
            b,
            known_minimizer,
        })
    }

    /// Diagonal problem from an eigenvalue list. The minimizer is solved
    /// exactly (`x*_i = b_i / lambda_i`); with `b = 0` it is the origin.
    pub fn from_spectrum(spectrum: &Spectrum, b: Vec<f64>) -> Result<Self, ProblemError> {
        if b.len() != spectrum.len() {
            return Err(ProblemError::DimensionMismatch {
                expected: spectrum.len(),
                got: b.len(),
            });
        }
        let eigenvalues = spectrum.eigenvalues().to_vec();
        let minimizer: Vec<f64> = b.iter().zip(&eigenvalues).map(|(bi, l)| bi / l).collect();
        let operator = SpdOperator::diagonal(eigenvalues)?;
        Ok(Self {
            operator,
            b,
            known_minimizer: Some(minimizer),
        })
    }

    pub fn operator(&self) -> &SpdOperator {
        &self.operator
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    pub fn known_minimizer(&self) -> Option<&[f64]> {
        self.known_minimizer.as_deref()
    }

    /// Residual `b - A x = -grad f(x)`.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        self.operator.residual(&self.b, x)
    }
}

impl Objective for QuadraticProblem {
    fn dim(&self) -> usize {
        self.operator.dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        0.5 * dot(x, &self.operator.apply(x)) - dot(&self.b, x)
    }

    fn grad(&self, x: &[f64]) -> Vec<f64> {
        let mut ax = self.operator.apply(x);
        for (g, bi) in ax.iter_mut().zip(&self.b) {
            *g -= bi;
        }
        ax
    }

    fn hessian_vec(&self, _x: &[f64], v: &[f64]) -> Option<Vec<f64>> {
        Some(self.operator.apply(v))
    }

    fn exact_spectrum(&self) -> Option<Spectrum> {
        self.operator.spectrum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::Objective;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_spectrum_hits_the_paper_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = gen_spectrum(
            &SpectrumSpec::Uniform {
                lo: 1.0,
                hi: 1000.0,
                n: 1000,
            },
            &mut rng,
        );
        assert_eq!(s.mu(), 1.0);
        assert_eq!(s.lipschitz(), 1000.0);
        assert_eq!(s.kappa(), 1000.0);
        assert_eq!(s.len(), 1000);
    }

    #[test]
    fn logspace_spectrum_spans_five_decades() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = gen_spectrum(
            &SpectrumSpec::LogSpace {
                lo_exp: 0.0,
                hi_exp: 5.0,
                n: 1000,
            },
            &mut rng,
        );
        assert!((s.mu() - 1.0).abs() < 1e-12);
        assert!((s.lipschitz() - 1e5).abs() < 1e-7);
    }

    #[test]
    fn cluster_spectrum_counts_and_ranges() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = SpectrumSpec::Cluster {
            bulk: (0.0, 0.1),
            outliers: (0.65, 0.75),
            outlier_fraction: 0.1,
            n: 200,
        };
        let s = gen_spectrum(&spec, &mut rng);
        let bulk = s.eigenvalues().iter().filter(|&&l| l <= 0.1).count();
        let outliers = s
            .eigenvalues()
            .iter()
            .filter(|&&l| (0.65..0.75).contains(&l))
            .count();
        assert_eq!(bulk, 180);
        assert_eq!(outliers, 20);
        assert!(s.mu() > 0.0);
    }

    #[test]
    fn near_threshold_formula_at_mu_03() {
        // L above-threshold at mu = 0.3 is (1 + 2/1.7 - 0.3)/2.
        let expected: f64 = 0.5 * (1.0 + 2.0 / 1.7 - 0.3);
        assert!((expected - 0.9382352941176471).abs() < 1e-15);
    }

    #[test]
    fn near_threshold_sides_land_where_promised() {
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let above = gen_spectrum(
                &SpectrumSpec::NearThreshold {
                    side: ThresholdSide::Above,
                    mu_range: (0.2, 0.4),
                    n: 40,
                },
                &mut rng,
            );
            let t = gd_threshold(above.mu());
            assert!(above.lipschitz() > t);
            assert!(above.lipschitz() < 1.0);

            let below = gen_spectrum(
                &SpectrumSpec::NearThreshold {
                    side: ThresholdSide::Below,
                    mu_range: (0.2, 0.4),
                    n: 40,
                },
                &mut rng,
            );
            let t = gd_threshold(below.mu());
            assert!(below.lipschitz() <= t);
        }
    }

    #[test]
    fn from_spectrum_solves_the_minimizer() {
        let s = Spectrum::new(vec![2.0]).unwrap();
        let p = QuadraticProblem::from_spectrum(&s, vec![4.0]).unwrap();
        assert_eq!(p.known_minimizer(), Some(&[2.0][..]));

        let s = Spectrum::new(vec![1.0, 4.0]).unwrap();
        let p = QuadraticProblem::from_spectrum(&s, vec![1.0, 4.0]).unwrap();
        assert_eq!(p.known_minimizer(), Some(&[1.0, 1.0][..]));

        let p = QuadraticProblem::from_spectrum(&s, vec![0.0, 0.0]).unwrap();
        assert_eq!(p.known_minimizer(), Some(&[0.0, 0.0][..]));
        assert_eq!(p.value(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn inconsistent_minimizer_is_rejected() {
        let op = SpdOperator::diagonal(vec![2.0]).unwrap();
        let err = QuadraticProblem::new(op, vec![4.0], Some(vec![1.0])).unwrap_err();
        assert!(matches!(err, ProblemError::MinimizerInconsistent { .. }));
    }

    #[test]
    fn gradient_is_residual_negated() {
        let s = Spectrum::new(vec![0.5, 2.0]).unwrap();
        let p = QuadraticProblem::from_spectrum(&s, vec![1.0, -1.0]).unwrap();
        let x = [0.3, 0.7];
        let g = p.grad(&x);
        let r = p.residual(&x);
        for i in 0..2 {
            assert_eq!(g[i], -r[i]);
        }
    }

    #[test]
    fn same_seed_reproduces_spectrum() {
        let spec = SpectrumSpec::Cluster {
            bulk: (0.0, 0.1),
            outliers: (0.65, 0.75),
            outlier_fraction: 0.1,
            n: 64,
        };
        let a = gen_spectrum(&spec, &mut ChaCha8Rng::seed_from_u64(11));
        let b = gen_spectrum(&spec, &mut ChaCha8Rng::seed_from_u64(11));
        assert_eq!(a.eigenvalues(), b.eigenvalues());
    }
}
