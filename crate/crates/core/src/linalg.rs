//! Minimal dense linear algebra over complex scalars.
//!
//! Real matrices are complex matrices whose imaginary parts are zero, so one
//! row reduction serves both the lattice code and the constraint systems whose
//! right-hand side involves powers of `2i`.

use num_complex::Complex64;
use thiserror::Error;

/// Relative pivot threshold for rank decisions in [`solve_affine`].
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Relative pivot threshold below which [`invert`] reports a singular matrix.
pub const SINGULAR_TOLERANCE: f64 = 1e-12;

const JACOBI_TOLERANCE: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("data length {got} does not match a {rows}x{cols} matrix")]
    InvalidData { rows: usize, cols: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("system is inconsistent (residual row value {residual:e})")]
    Inconsistent { residual: f64 },
}

/// Row-major dense matrix: `entries[i * cols + j]` holds `A[i, j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(LinalgError::InvalidData {
                rows,
                cols,
                got: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a real matrix from its rows. All rows must have equal length.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch {
                expected: cols,
                got: bad.len(),
            });
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        Self::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Real parts in row-major order.
    pub fn real_entries(&self) -> Vec<f64> {
        self.entries.iter().map(|z| z.re).collect()
    }

    pub fn real_rows(&self) -> Vec<Vec<f64>> {
        self.entries
            .chunks(self.cols)
            .map(|row| row.iter().map(|z| z.re).collect())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok(self
            .entries
            .chunks(self.cols)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Determinant by LU elimination with partial pivoting.
    pub fn determinant(&self) -> Result<Complex64, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.entries.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))
                .unwrap_or(col);
            if a[pivot * n + col].norm() == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for i in col + 1..n {
                let factor = a[i * n + col] / p;
                if factor.norm() == 0.0 {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[i * n + j] -= factor * v;
                }
            }
        }
        Ok(det)
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// Solution family `{ particular + Σ t_i · nullspace_basis[i] }` of `A·x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSolutionSet {
    pub particular: Vec<Complex64>,
    /// Orthonormal basis of the nullspace of `A`.
    pub nullspace_basis: Vec<Vec<Complex64>>,
    pub rank: usize,
}

impl AffineSolutionSet {
    pub fn dimension(&self) -> usize {
        self.nullspace_basis.len()
    }

    /// Family member at the given nullspace coordinates. Missing trailing
    /// coordinates are taken as zero.
    pub fn member(&self, coords: &[Complex64]) -> Vec<Complex64> {
        let mut x = self.particular.clone();
        for (t, v) in coords.iter().zip(&self.nullspace_basis) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += t * vi;
            }
        }
        x
    }
}

/// Solves `A·x = b` by Gauss-Jordan elimination with partial pivoting and
/// returns a particular solution (free variables set to zero) together with an
/// orthonormal nullspace basis.
///
/// A column is treated as pivot-free when its best remaining entry is at most
/// [`RANK_TOLERANCE`] times the largest entry of `A`.
pub fn solve_affine(a: &DenseMatrix, b: &[Complex64]) -> Result<AffineSolutionSet, LinalgError> {
    if b.len() != a.rows {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows,
            got: b.len(),
        });
    }
    let (rows, cols) = (a.rows, a.cols);
    let scale = a.max_abs();
    let tol = RANK_TOLERANCE * if scale > 0.0 { scale } else { 1.0 };
    let rhs_tol = RANK_TOLERANCE * b.iter().map(|z| z.norm()).fold(scale.max(1.0), f64::max);

    let mut m = a.entries.clone();
    let mut rhs = b.to_vec();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let best = (row..rows)
            .max_by(|&i, &j| m[i * cols + col].norm().total_cmp(&m[j * cols + col].norm()))
            .expect("non-empty row range");
        if m[best * cols + col].norm() <= tol {
            continue;
        }
        if best != row {
            for j in 0..cols {
                m.swap(best * cols + j, row * cols + j);
            }
            rhs.swap(best, row);
        }
        let p = m[row * cols + col];
        for j in 0..cols {
            m[row * cols + j] /= p;
        }
        rhs[row] /= p;
        for i in 0..rows {
            if i == row {
                continue;
            }
            let factor = m[i * cols + col];
            if factor.norm() == 0.0 {
                continue;
            }
            for j in 0..cols {
                let v = m[row * cols + j];
                m[i * cols + j] -= factor * v;
            }
            let r = rhs[row];
            rhs[i] -= factor * r;
        }
        pivot_cols.push(col);
        row += 1;
    }
    let rank = pivot_cols.len();

    if let Some(worst) = rhs[rank..]
        .iter()
        .map(|z| z.norm())
        .filter(|&r| r > rhs_tol)
        .reduce(f64::max)
    {
        return Err(LinalgError::Inconsistent { residual: worst });
    }

    let mut particular = vec![Complex64::new(0.0, 0.0); cols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        particular[c] = rhs[r];
    }

    let mut is_pivot = vec![false; cols];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    let raw_basis: Vec<Vec<Complex64>> = (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Complex64::new(0.0, 0.0); cols];
            v[f] = Complex64::new(1.0, 0.0);
            for (r, &c) in pivot_cols.iter().enumerate() {
                v[c] = -m[r * cols + f];
            }
            v
        })
        .collect();

    Ok(AffineSolutionSet {
        particular,
        nullspace_basis: orthonormalize(raw_basis),
        rank,
    })
}

/// Modified Gram-Schmidt under the Hermitian inner product.
pub fn orthonormalize(vectors: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        for u in &basis {
            let proj: Complex64 = u.iter().zip(&v).map(|(ui, vi)| ui.conj() * vi).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|z| *z /= norm);
            basis.push(v);
        }
    }
    basis
}

/// Gauss-Jordan inverse.
pub fn invert(b: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    if !b.is_square() {
        return Err(LinalgError::NotSquare {
            rows: b.rows,
            cols: b.cols,
        });
    }
    let n = b.rows;
    let threshold = SINGULAR_TOLERANCE * b.max_abs();
    let mut m = b.entries.clone();
    let mut inv = DenseMatrix::identity(n).entries;
    for col in 0..n {
        let best = (col..n)
            .max_by(|&i, &j| m[i * n + col].norm().total_cmp(&m[j * n + col].norm()))
            .expect("non-empty row range");
        if m[best * n + col].norm() <= threshold || m[best * n + col].norm() == 0.0 {
            return Err(LinalgError::Singular);
        }
        if best != col {
            for j in 0..n {
                m.swap(best * n + j, col * n + j);
                inv.swap(best * n + j, col * n + j);
            }
        }
        let p = m[col * n + col];
        for j in 0..n {
            m[col * n + j] /= p;
            inv[col * n + j] /= p;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let factor = m[i * n + col];
            if factor.norm() == 0.0 {
                continue;
            }
            for j in 0..n {
                let (mv, iv) = (m[col * n + j], inv[col * n + j]);
                m[i * n + j] -= factor * mv;
                inv[i * n + j] -= factor * iv;
            }
        }
    }
    DenseMatrix::new(n, n, inv)
}

/// Operator 2-norm `sup_{‖x‖=1} ‖Bx‖` of the real part of `b`, computed as the
/// square root of the largest eigenvalue of `BᵀB`.
pub fn spectral_norm(b: &DenseMatrix) -> f64 {
    let (rows, cols) = (b.rows, b.cols);
    let re = b.real_entries();
    let mut gram = vec![0.0; cols * cols];
    for i in 0..cols {
        for j in i..cols {
            let s: f64 = (0..rows).map(|k| re[k * cols + i] * re[k * cols + j]).sum();
            gram[i * cols + j] = s;
            gram[j * cols + i] = s;
        }
    }
    symmetric_eigenvalues(gram, cols)
        .into_iter()
        .fold(0.0, f64::max)
        .max(0.0)
        .sqrt()
}

/// Eigenvalues of a real symmetric `n×n` matrix (row-major) by cyclic Jacobi
/// rotations. Iteration stops once every off-diagonal entry is at most
/// `1e-13` times the trace scale `Σ|a_ii|`.
pub fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n, "matrix data must be n*n");
    let scale = (0..n).map(|i| a[i * n + i].abs()).sum::<f64>().max(f64::MIN_POSITIVE);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].abs())
            .fold(0.0, f64::max);
        if off <= JACOBI_TOLERANCE * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}
