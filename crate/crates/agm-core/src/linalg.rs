//! Dense vectors, SPD linear operators, and the norms shared by the rest of
//! the crate.
//!
//! Vectors are plain `Vec<f64>` / `&[f64]`; problem sizes here are desk
//! scale (n up to a few thousand), so there is no packed or sparse storage.
//! All arithmetic is in `f64`: the contraction factors this crate studies
//! sit close to 1 and would be masked by single precision.
//!
//! Dimension mismatches are contract violations and panic; constructor
//! invariants (positivity, symmetry) are reported as [`OperatorError`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Entrywise relative tolerance for accepting a dense matrix as symmetric.
pub const SYMMETRY_RTOL: f64 = 1e-12;

/// Euclidean inner product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dot: dimension mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
pub fn norm2(v: &[f64]) -> f64 {
    crate::math::sqrt(v.iter().map(|x| x * x).sum())
}

/// `y += alpha * x`.
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    assert_eq!(x.len(), y.len(), "axpy: dimension mismatch");
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// `a - b` as a new vector.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), b.len(), "sub: dimension mismatch");
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Column-major dense matrix.
///
/// Used for feature matrices (columns are samples) and for the dense kind
/// of [`SpdOperator`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.data[j * rows + i] = f(i, j);
            }
        }
        m
    }

    /// Build from row-major nested slices, e.g. `&[&[1.0, 0.0], &[1.0, 1.0]]`.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        assert!(!rows.is_empty(), "matrix must have at least one row");
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[j * self.rows + i] = value;
    }

    /// Column `j` as a contiguous slice.
    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Row `i` gathered into a new vector (strided access).
    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    /// `A v` for `v` of length `cols`.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols, "matvec: dimension mismatch");
        let mut out = vec![0.0; self.rows];
        for (j, vj) in v.iter().enumerate() {
            if *vj != 0.0 {
                axpy(*vj, self.column(j), &mut out);
            }
        }
        out
    }

    /// `A^T x` for `x` of length `rows`.
    pub fn tr_matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows, "tr_matvec: dimension mismatch");
        (0..self.cols).map(|j| dot(self.column(j), x)).collect()
    }
}

/// Errors from operator and spectrum constructors.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorError {
    /// An eigenvalue list was empty.
    Empty,
    /// A diagonal entry or eigenvalue was not strictly positive (or not finite).
    NonPositiveEigenvalue { index: usize, value: f64 },
    /// A dense matrix failed the entrywise symmetry check.
    NotSymmetric { row: usize, col: usize },
    /// A dense operator was built from a non-square matrix.
    NotSquare { rows: usize, cols: usize },
}

impl fmt::Display for OperatorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorError::Empty => write!(f, "eigenvalue list is empty"),
            OperatorError::NonPositiveEigenvalue { index, value } => {
                write!(f, "eigenvalue {index} is not strictly positive: {value}")
            }
            OperatorError::NotSymmetric { row, col } => {
                write!(f, "matrix is not symmetric at entry ({row}, {col})")
            }
            OperatorError::NotSquare { rows, cols } => {
                write!(f, "dense operator requires a square matrix, got {rows}x{cols}")
            }
        }
    }
}

impl core::error::Error for OperatorError {}

/// Symmetric positive definite operator: either a diagonal matrix given by
/// its eigenvalues, or a full symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum SpdOperator {
    Diagonal { eigenvalues: Vec<f64> },
    Dense { matrix: DenseMatrix },
}

impl SpdOperator {
    /// Diagonal operator; every eigenvalue must be strictly positive.
    pub fn diagonal(eigenvalues: Vec<f64>) -> Result<Self, OperatorError> {
        if eigenvalues.is_empty() {
            return Err(OperatorError::Empty);
        }
        for (index, &value) in eigenvalues.iter().enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(OperatorError::NonPositiveEigenvalue { index, value });
            }
        }
        Ok(SpdOperator::Diagonal { eigenvalues })
    }

    /// Dense operator; the matrix must be square and symmetric to within
    /// [`SYMMETRY_RTOL`] entrywise. Positive definiteness is the caller's
    /// responsibility (there is no cheap check).
    pub fn dense(matrix: DenseMatrix) -> Result<Self, OperatorError> {
        if matrix.rows() != matrix.cols() {
            return Err(OperatorError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        for i in 0..matrix.rows() {
            for j in (i + 1)..matrix.cols() {
                let a = matrix.get(i, j);
                let b = matrix.get(j, i);
                let scale = a.abs().max(b.abs());
                if scale > 0.0 && (a - b).abs() > SYMMETRY_RTOL * scale {
                    return Err(OperatorError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(SpdOperator::Dense { matrix })
    }

    pub fn dim(&self) -> usize {
        match self {
            SpdOperator::Diagonal { eigenvalues } => eigenvalues.len(),
            SpdOperator::Dense { matrix } => matrix.rows(),
        }
    }

    /// `A v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim(), "apply: dimension mismatch");
        match self {
            SpdOperator::Diagonal { eigenvalues } => {
                eigenvalues.iter().zip(v).map(|(d, x)| d * x).collect()
            }
            SpdOperator::Dense { matrix } => matrix.matvec(v),
        }
    }

    /// Residual `b - A x`; for the quadratic objective this equals
    /// `-grad f(x)`.
    pub fn residual(&self, b: &[f64], x: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.dim(), "residual: dimension mismatch");
        let ax = self.apply(x);
        sub(b, &ax)
    }

    /// Exact spectrum, available for the diagonal kind.
    pub fn spectrum(&self) -> Option<Spectrum> {
        match self {
            SpdOperator::Diagonal { eigenvalues } => Spectrum::new(eigenvalues.clone()).ok(),
            SpdOperator::Dense { .. } => None,
        }
    }

    /// Same operator with every entry scaled by `1 / factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        assert!(factor > 0.0, "scale factor must be positive");
        match self {
            SpdOperator::Diagonal { eigenvalues } => SpdOperator::Diagonal {
                eigenvalues: eigenvalues.iter().map(|d| d / factor).collect(),
            },
            SpdOperator::Dense { matrix } => {
                let scaled =
                    DenseMatrix::from_fn(matrix.rows(), matrix.cols(), |i, j| {
                        matrix.get(i, j) / factor
                    });
                SpdOperator::Dense { matrix: scaled }
            }
        }
    }
}

/// Sorted eigenvalue list of an SPD operator.
///
/// `mu` is the smallest eigenvalue, `lipschitz` the largest, and
/// `kappa = lipschitz / mu` the condition number; all three are read off
/// the sorted list, so the invariants hold by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Sorts the list ascending; all values must be strictly positive and
    /// finite.
    pub fn new(mut eigenvalues: Vec<f64>) -> Result<Self, OperatorError> {
        if eigenvalues.is_empty() {
            return Err(OperatorError::Empty);
        }
        for (index, &value) in eigenvalues.iter().enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(OperatorError::NonPositiveEigenvalue { index, value });
            }
        }
        eigenvalues.sort_by(f64::total_cmp);
        Ok(Self { eigenvalues })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Smallest eigenvalue (strong convexity constant).
    pub fn mu(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Largest eigenvalue (smoothness constant).
    pub fn lipschitz(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// Condition number `lipschitz / mu`.
    pub fn kappa(&self) -> f64 {
        self.lipschitz() / self.mu()
    }

    /// Spectrum with every eigenvalue divided by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        assert!(factor > 0.0, "scale factor must be positive");
        Self {
            eigenvalues: self.eigenvalues.iter().map(|v| v / factor).collect(),
        }
    }
}
