//! Huber-TV image denoising.
//!
//! `f(u) = xi/2 sum (u - u0)^2 + eta sum h_delta(|grad u|)` over the pixel
//! grid, where `h_delta` is the Huber function (quadratic within `delta`,
//! linear outside) and the image gradient uses forward differences with
//! Neumann boundary conditions (zero difference on the last row/column).
//!
//! The induced discrete Laplacian has 1-norm at most 8, so the objective's
//! curvature is bounded by `xi <= H <= xi + 8 eta / delta`, which is what
//! [`DenoiseProblem::bounds`] reports.
//!
//! Pixel sums stand in for the integrals with unit grid spacing; the
//! discrete bound above already assumes that normalization.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::math;
use crate::objective::Objective;
use crate::problems::ProblemError;

/// Row-major image grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Grid {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "grid dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "grid data length mismatch");
        Self { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut g = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                g.data[i * cols + j] = f(i, j);
            }
        }
        g
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Huber function: `t^2 / (2 delta)` for `|t| <= delta`, else
/// `|t| - delta/2`.
pub fn huber(t: f64, delta: f64) -> f64 {
    assert!(delta > 0.0, "huber threshold must be positive");
    if t.abs() <= delta {
        t * t / (2.0 * delta)
    } else {
        t.abs() - delta / 2.0
    }
}

/// Derivative of [`huber`]: `t / delta` inside the threshold, `sign(t)`
/// outside. Continuous at the junction.
pub fn huber_deriv(t: f64, delta: f64) -> f64 {
    assert!(delta > 0.0, "huber threshold must be positive");
    if t.abs() <= delta {
        t / delta
    } else if t > 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Forward-difference image gradient with Neumann boundary conditions:
/// `ux` holds horizontal differences (zero on the last column), `uy`
/// vertical differences (zero on the last row).
pub fn grad_image(u: &Grid) -> (Grid, Grid) {
    let (rows, cols) = (u.rows(), u.cols());
    let mut ux = Grid::zeros(rows, cols);
    let mut uy = Grid::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if j + 1 < cols {
                ux.set(i, j, u.get(i, j + 1) - u.get(i, j));
            }
            if i + 1 < rows {
                uy.set(i, j, u.get(i + 1, j) - u.get(i, j));
            }
        }
    }
    (ux, uy)
}

/// Discrete divergence: the negative adjoint of [`grad_image`], i.e.
/// `<grad u, (px, py)> = -<u, divergence(px, py)>` exactly (up to
/// floating-point associativity).
pub fn divergence(px: &Grid, py: &Grid) -> Grid {
    assert_eq!(px.rows(), py.rows(), "divergence: dimension mismatch");
    assert_eq!(px.cols(), py.cols(), "divergence: dimension mismatch");
    let (rows, cols) = (px.rows(), px.cols());
    let mut out = Grid::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let dx = if cols == 1 {
                0.0
            } else if j == 0 {
                px.get(i, 0)
            } else if j == cols - 1 {
                -px.get(i, cols - 2)
            } else {
                px.get(i, j) - px.get(i, j - 1)
            };
            let dy = if rows == 1 {
                0.0
            } else if i == 0 {
                py.get(0, j)
            } else if i == rows - 1 {
                -py.get(rows - 2, j)
            } else {
                py.get(i, j) - py.get(i - 1, j)
            };
            out.set(i, j, dx + dy);
        }
    }
    out
}

/// Huber-TV denoising objective anchored at a noisy image `u0`.
#[derive(Debug, Clone)]
pub struct DenoiseProblem {
    u0: Grid,
    xi: f64,
    eta: f64,
    delta: f64,
}

impl DenoiseProblem {
    /// Requires a grid of at least 2x2, `xi > 0`, `eta >= 0`, `delta > 0`.
    pub fn new(u0: Grid, xi: f64, eta: f64, delta: f64) -> Result<Self, ProblemError> {
        if u0.rows() < 2 || u0.cols() < 2 {
            return Err(ProblemError::GridTooSmall {
                rows: u0.rows(),
                cols: u0.cols(),
            });
        }
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(ProblemError::InvalidParameter("fidelity weight must be positive"));
        }
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(ProblemError::InvalidParameter(
                "smoothness weight must be nonnegative",
            ));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(ProblemError::InvalidParameter("huber threshold must be positive"));
        }
        Ok(Self { u0, xi, eta, delta })
    }

    pub fn noisy_image(&self) -> &Grid {
        &self.u0
    }

    pub fn rows(&self) -> usize {
        self.u0.rows()
    }

    pub fn cols(&self) -> usize {
        self.u0.cols()
    }

    /// `(mu, L) = (xi, xi + 8 eta / delta)`.
    pub fn bounds(&self) -> (f64, f64) {
        (self.xi, self.xi + 8.0 * self.eta / self.delta)
    }

    fn grid_from(&self, x: &[f64]) -> Grid {
        assert_eq!(x.len(), self.dim(), "image vector length mismatch");
        Grid::from_vec(self.rows(), self.cols(), x.to_vec())
    }
}

impl Objective for DenoiseProblem {
    fn dim(&self) -> usize {
        self.rows() * self.cols()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let u = self.grid_from(x);
        let fidelity: f64 = u
            .as_slice()
            .iter()
            .zip(self.u0.as_slice())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let (ux, uy) = grad_image(&u);
        let tv: f64 = ux
            .as_slice()
            .iter()
            .zip(uy.as_slice())
            .map(|(&gx, &gy)| huber(math::sqrt(gx * gx + gy * gy), self.delta))
            .sum();
        0.5 * self.xi * fidelity + self.eta * tv
    }

    fn grad(&self, x: &[f64]) -> Vec<f64> {
        let u = self.grid_from(x);
        let (ux, uy) = grad_image(&u);
        // Flux h'(|g|) g / |g|; on the quadratic branch this is g / delta,
        // which also removes the 0/0 at g = 0.
        let (rows, cols) = (self.rows(), self.cols());
        let mut qx = Grid::zeros(rows, cols);
        let mut qy = Grid::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let gx = ux.get(i, j);
                let gy = uy.get(i, j);
                let mag = math::sqrt(gx * gx + gy * gy);
                let scale = if mag <= self.delta {
                    1.0 / self.delta
                } else {
                    1.0 / mag
                };
                qx.set(i, j, gx * scale);
                qy.set(i, j, gy * scale);
            }
        }
        let div = divergence(&qx, &qy);
        u.as_slice()
            .iter()
            .zip(self.u0.as_slice())
            .zip(div.as_slice())
            .map(|((ui, u0i), di)| self.xi * (ui - u0i) - self.eta * di)
            .collect()
    }
}

/// Piecewise-constant test image: rectangles and a disk over a horizontal
/// intensity ramp, values within `[0, 1]`.
pub fn synthetic_phantom(rows: usize, cols: usize) -> Grid {
    assert!(rows >= 2 && cols >= 2);
    let rf = rows as f64;
    let cf = cols as f64;
    Grid::from_fn(rows, cols, |i, j| {
        let y = i as f64 / (rf - 1.0);
        let x = j as f64 / (cf - 1.0);
        // Ramp background.
        let mut value = 0.15 + 0.35 * x;
        if (0.15..0.45).contains(&y) && (0.10..0.45).contains(&x) {
            value = 0.85;
        }
        if (0.55..0.85).contains(&y) && (0.20..0.55).contains(&x) {
            value = 0.35;
        }
        if (0.20..0.35).contains(&y) && (0.60..0.90).contains(&x) {
            value = 0.65;
        }
        let (dy, dx) = (y - 0.68, x - 0.75);
        if dy * dy + dx * dx <= 0.13 * 0.13 {
            value = 0.95;
        }
        value
    })
}

/// `grid + N(0, sigma^2)` noise, entry by entry. Values are not clamped;
/// noise may leave `[0, 1]`.
pub fn add_gaussian_noise(grid: &Grid, sigma: f64, rng: &mut impl Rng) -> Grid {
    assert!(sigma >= 0.0, "noise level must be nonnegative");
    let data = grid
        .as_slice()
        .iter()
        .map(|&v| v + sigma * rng.sample::<f64, _>(StandardNormal))
        .collect();
    Grid::from_vec(grid.rows(), grid.cols(), data)
}

/// Denoising instance from a clean image: add seeded Gaussian noise and
/// wrap the result with the given weights.
pub fn gen_denoise(
    clean: &Grid,
    sigma: f64,
    xi: f64,
    eta: f64,
    delta: f64,
    rng: &mut impl Rng,
) -> Result<DenoiseProblem, ProblemError> {
    let noisy = add_gaussian_noise(clean, sigma, rng);
    DenoiseProblem::new(noisy, xi, eta, delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dot;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn huber_examples() {
        let d = 0.05;
        assert_eq!(huber(0.0, d), 0.0);
        assert!((huber(d, d) - d / 2.0).abs() < 1e-16);
        assert!((huber(2.0 * d, d) - 1.5 * d).abs() < 1e-16);
        // C1 junction: both one-sided derivatives equal 1.
        assert_eq!(huber_deriv(d, d), 1.0);
        assert_eq!(huber_deriv(d * (1.0 + 1e-12), d), 1.0);
        assert_eq!(huber_deriv(-d, d), -1.0);
    }

    #[test]
    fn huber_is_c1_near_the_threshold() {
        let d = 0.05;
        for eps in [1e-3, 1e-6] {
            let hi = huber_deriv(d * (1.0 + eps), d);
            let lo = huber_deriv(d * (1.0 - eps), d);
            assert!((hi - lo).abs() <= 2.0 * eps);
        }
    }

    #[test]
    fn constant_image_has_zero_gradient_field() {
        let u = Grid::from_fn(4, 5, |_, _| 0.7);
        let (ux, uy) = grad_image(&u);
        assert!(ux.as_slice().iter().all(|&v| v == 0.0));
        assert!(uy.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn ramp_forward_differences() {
        let u = Grid::from_vec(1, 3, vec![0.0, 1.0, 2.0]);
        let (ux, _) = grad_image(&u);
        assert_eq!(ux.as_slice(), &[1.0, 1.0, 0.0]);
    }

    #[test]
    fn divergence_is_negative_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let rand_grid = |rng: &mut ChaCha8Rng| {
                Grid::from_fn(5, 5, |_, _| rng.random_range(-1.0..1.0))
            };
            let u = rand_grid(&mut rng);
            let px = rand_grid(&mut rng);
            let py = rand_grid(&mut rng);
            let (ux, uy) = grad_image(&u);
            let lhs = dot(ux.as_slice(), px.as_slice()) + dot(uy.as_slice(), py.as_slice());
            let rhs = -dot(u.as_slice(), divergence(&px, &py).as_slice());
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn value_and_gradient_vanish_at_a_constant_noisy_image() {
        let u0 = Grid::from_fn(4, 4, |_, _| 0.3);
        let p = DenoiseProblem::new(u0.clone(), 4.0, 0.06, 0.05).unwrap();
        assert_eq!(p.value(u0.as_slice()), 0.0);
        assert!(p.grad(u0.as_slice()).iter().all(|&g| g == 0.0));
    }

    #[test]
    fn zero_smoothness_reduces_to_fidelity() {
        let u0 = Grid::from_fn(3, 3, |i, j| (i + j) as f64 / 4.0);
        let p = DenoiseProblem::new(u0.clone(), 2.0, 0.0, 0.05).unwrap();
        let x: Vec<f64> = u0.as_slice().iter().map(|v| v + 0.1).collect();
        let expected = 0.5 * 2.0 * 9.0 * 0.01;
        assert!((p.value(&x) - expected).abs() < 1e-12);
        let g = p.grad(&x);
        assert!(g.iter().all(|&gi| (gi - 0.2).abs() < 1e-12));
        assert_eq!(p.bounds(), (2.0, 2.0));
    }

    #[test]
    fn gradient_matches_central_differences_on_6x6() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let clean = Grid::from_fn(6, 6, |_, _| rng.random_range(0.0..1.0));
        let p = DenoiseProblem::new(clean, 4.0, 0.06, 0.05).unwrap();
        let x: Vec<f64> = (0..36).map(|_| rng.random_range(0.0..1.0)).collect();
        let g = p.grad(&x);
        let h = 1e-6;
        for i in 0..36 {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            let fd = (p.value(&xp) - p.value(&xm)) / (2.0 * h);
            assert!(
                (g[i] - fd).abs() <= 1e-5 * g[i].abs().max(1.0),
                "pixel {i}: {} vs {}",
                g[i],
                fd
            );
        }
    }

    #[test]
    fn bounds_match_the_parameter_formula() {
        let p = DenoiseProblem::new(synthetic_phantom(8, 8), 4.0, 0.06, 0.05).unwrap();
        let (mu, l) = p.bounds();
        assert_eq!(mu, 4.0);
        assert_eq!(l, 13.6);
    }

    #[test]
    fn phantom_stays_in_unit_range_and_noise_is_seeded() {
        let clean = synthetic_phantom(64, 64);
        assert!(clean.as_slice().iter().all(|&v| (0.0..=1.0).contains(&v)));
        let a = add_gaussian_noise(&clean, 0.05, &mut ChaCha8Rng::seed_from_u64(5));
        let b = add_gaussian_noise(&clean, 0.05, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
        let silent = add_gaussian_noise(&clean, 0.0, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(silent, clean);
    }

    #[test]
    fn rejects_tiny_grids() {
        let err = DenoiseProblem::new(Grid::zeros(1, 5), 4.0, 0.06, 0.05).unwrap_err();
        assert!(matches!(err, ProblemError::GridTooSmall { .. }));
    }
}
