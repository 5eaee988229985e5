//! Modulation matrices `B`, the dual matrix `B♯ = (Bᵀ)⁻¹`, the support
//! condition `B♯n ∉ (−N,N)ᵈ` and coset representatives of `ℤᵈ / B⁻¹ℤᵈ`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, DenseMatrix, LinalgError};
use crate::trigpoly::MultiIndex;

/// Smallest admissible `|det B|`.
pub const DET_TOLERANCE: f64 = 1e-12;

/// Guard band for the open cube: `|(B♯n)_j| ≥ N − 1e-12` does not violate.
pub const BOUNDARY_GUARD: f64 = 1e-12;

/// Slack added to the enumeration radius.
pub const RADIUS_SLACK: f64 = 1e-9;

/// Distance to the nearest integer accepted for integer matrices.
pub const INTEGER_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("matrix must be square and non-empty, got {rows} rows with lengths {lengths:?}")]
    Shape { rows: usize, lengths: Vec<usize> },
    #[error("matrix entries must be finite")]
    NotFinite,
    #[error("matrix is singular (det = {det:e})")]
    Singular { det: f64 },
    #[error("entry ({row},{col}) = {value} is not an integer")]
    NotInteger { row: usize, col: usize, value: f64 },
    #[error("cannot parse matrix: {0}")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A real invertible `d×d` matrix with its determinant and `B♯` cached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct LatticeMatrix {
    dim: usize,
    entries: Vec<f64>,
    det: f64,
    sharp: Vec<f64>,
}

impl LatticeMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, LatticeError> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(LatticeError::Shape {
                rows: dim,
                lengths: rows.iter().map(Vec::len).collect(),
            });
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(LatticeError::NotFinite);
        }
        let dense = DenseMatrix::from_real_rows(&rows)?;
        let det = dense.determinant()?.re;
        if det.abs() < DET_TOLERANCE {
            return Err(LatticeError::Singular { det });
        }
        let sharp = linalg::invert(&dense.transpose()).map_err(|_| LatticeError::Singular { det })?;
        Ok(Self {
            dim,
            entries: rows.into_iter().flatten().collect(),
            det,
            sharp: sharp.real_entries(),
        })
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self, LatticeError> {
        let d = diag.len();
        let rows = (0..d)
            .map(|i| (0..d).map(|j| if i == j { diag[i] } else { 0.0 }).collect())
            .collect();
        Self::new(rows)
    }

    /// `c·I` in dimension `d`.
    pub fn scalar(d: usize, c: f64) -> Result<Self, LatticeError> {
        Self::diagonal(&vec![c; d])
    }

    /// Parses a JSON row-major array of arrays.
    pub fn from_json_str(s: &str) -> Result<Self, LatticeError> {
        let rows: Vec<Vec<f64>> =
            serde_json::from_str(s).map_err(|e| LatticeError::Parse(e.to_string()))?;
        Self::new(rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn abs_det(&self) -> f64 {
        self.det.abs()
    }

    /// Rows of `B♯ = (Bᵀ)⁻¹`.
    pub fn sharp_rows(&self) -> Vec<Vec<f64>> {
        self.sharp.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    /// `B♯` as a lattice matrix in its own right.
    pub fn sharp(&self) -> LatticeMatrix {
        Self::new(self.sharp_rows()).expect("inverse of an invertible matrix is invertible")
    }

    /// Rows of `B⁻¹ = (B♯)ᵀ`.
    pub fn inverse_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.sharp[j * self.dim + i]).collect())
            .collect()
    }

    /// `B⁻¹` rounded to integers, or `NotInteger` for the first entry further
    /// than [`INTEGER_TOLERANCE`] from an integer.
    pub fn integer_inverse(&self) -> Result<Vec<Vec<i64>>, LatticeError> {
        integer_rows(&self.inverse_rows())
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.entries, self.dim, x)
    }

    /// `B♯n` for an integer vector `n`.
    pub fn sharp_apply(&self, n: &[i64]) -> Vec<f64> {
        let x: Vec<f64> = n.iter().map(|&v| v as f64).collect();
        mat_vec(&self.sharp, self.dim, &x)
    }

    pub fn spectral_norm(&self) -> f64 {
        let dense = DenseMatrix::from_real_rows(&self.rows()).expect("square matrix");
        linalg::spectral_norm(&dense)
    }

    /// Maximum of `|B♯ᵀB − I|` over entries.
    pub fn sharp_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let v: f64 = (0..d).map(|k| self.sharp[k * d + i] * self.entry(k, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }
}

fn mat_vec(entries: &[f64], d: usize, x: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), d, "vector has wrong dimension");
    entries
        .chunks(d)
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

impl TryFrom<Vec<Vec<f64>>> for LatticeMatrix {
    type Error = LatticeError;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self, Self::Error> {
        Self::new(rows)
    }
}

impl From<LatticeMatrix> for Vec<Vec<f64>> {
    fn from(b: LatticeMatrix) -> Self {
        b.rows()
    }
}

/// Inline syntax: rows separated by `;`, entries by `,`, e.g. `0.5,0;-0.5,0.5`.
impl FromStr for LatticeMatrix {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rows = s
            .trim()
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<f64>()
                            .map_err(|e| LatticeError::Parse(format!("{v:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(rows)
    }
}

impl fmt::Display for LatticeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            let parts: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))?;
        }
        Ok(())
    }
}

/// Outcome of [`support_condition`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub pass: bool,
    /// Shortest violating `n` (ties broken towards the lexicographically
    /// largest), present exactly when `pass` is false.
    pub witness: Option<MultiIndex>,
    /// `B♯n` for the witness.
    pub witness_image: Option<Vec<f64>>,
    /// Every nonzero `n` with `‖n‖₂` at most this radius was examined.
    pub enumeration_radius: f64,
    pub spectral_norm: f64,
    /// Enumerated `n` whose image lies on the cube boundary within the guard
    /// band. These are not counted as violations.
    pub boundary_hits: usize,
}

/// Checks `B♯n ∉ (−N,N)ᵈ` for every `n ∈ ℤᵈ \ {0}`.
///
/// A violating `n` satisfies `‖n‖ ≤ ‖B‖·‖B♯n‖ < ‖B‖·√d·N`, so only the
/// ball of that radius is enumerated.
pub fn support_condition(b: &LatticeMatrix, n: u64) -> ConditionReport {
    let d = b.dim();
    let norm = b.spectral_norm();
    let radius = (d as f64).sqrt() * n as f64 * norm + RADIUS_SLACK;
    let r = radius.floor() as i64;
    let limit = n as f64 - BOUNDARY_GUARD;
    let mut best: Option<(i64, MultiIndex, Vec<f64>)> = None;
    let mut boundary_hits = 0;
    for k in crate::trigpoly::index_box(d, -r, r) {
        if k.is_zero() {
            continue;
        }
        let norm2: i64 = k.0.iter().map(|v| v * v).sum();
        if norm2 as f64 > radius * radius {
            continue;
        }
        let image = b.sharp_apply(&k.0);
        let sup = image.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if sup < limit {
            let better = match &best {
                None => true,
                Some((bn, bk, _)) => norm2 < *bn || (norm2 == *bn && k > *bk),
            };
            if better {
                best = Some((norm2, k, image));
            }
        } else if sup <= n as f64 + BOUNDARY_GUARD {
            boundary_hits += 1;
        }
    }
    let (witness, witness_image) = match best {
        Some((_, k, img)) => (Some(k), Some(img)),
        None => (None, None),
    };
    ConditionReport {
        pass: witness.is_none(),
        witness,
        witness_image,
        enumeration_radius: radius,
        spectral_norm: norm,
        boundary_hits,
    }
}

/// `‖B‖ ≤ 1/(√d·N)`, a sufficient (not necessary) criterion for the support
/// condition.
pub fn norm_sufficient(b: &LatticeMatrix, n: u64) -> bool {
    b.spectral_norm() <= 1.0 / ((b.dim() as f64).sqrt() * n as f64) + 1e-12
}

/// `√ε·diag(a, 1/a)` with `a` the smallest power of two putting `B♯(1,0)`
/// inside `(−2,2)²`. The determinant is `ε` yet the support condition fails
/// for `N = 2`.
pub fn scaling_counterexample(epsilon: f64) -> Result<LatticeMatrix, LatticeError> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(LatticeError::InvalidParameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let s = epsilon.sqrt();
    let mut a = 1.0_f64;
    while 1.0 / (s * a) >= 2.0 {
        a *= 2.0;
    }
    LatticeMatrix::diagonal(&[s * a, s / a])
}

/// Rounds every entry to an integer, failing on the first entry further than
/// [`INTEGER_TOLERANCE`] away.
pub fn integer_rows(rows: &[Vec<f64>]) -> Result<Vec<Vec<i64>>, LatticeError> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &v)| {
                    let r = v.round();
                    if (v - r).abs() > INTEGER_TOLERANCE {
                        Err(LatticeError::NotInteger {
                            row: i,
                            col: j,
                            value: v,
                        })
                    } else {
                        Ok(r as i64)
                    }
                })
                .collect()
        })
        .collect()
}

fn int_det(m: &[Vec<i64>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0] as i128,
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] as i128 * int_det(&minor)
            })
            .sum(),
    }
}

/// Adjugate: `adj(M)·M = det(M)·I`.
#[allow(clippy::needless_range_loop)]
fn adjugate(m: &[Vec<i64>]) -> Vec<Vec<i128>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = sign * int_det(&minor);
        }
    }
    adj
}

/// One representative per coset of `ℤᵈ / B⁻¹ℤᵈ`.
///
/// `j ≡ j′` exactly when `adj(B⁻¹)(j − j′) ≡ 0 (mod |det B⁻¹|)`, and
/// `|det B⁻¹|·ℤᵈ ⊆ B⁻¹ℤᵈ`, so scanning `[0, |det|)ᵈ` lexicographically and
/// keeping the first member of each class yields a full transversal.
pub fn coset_reps(binv: &[Vec<f64>]) -> Result<Vec<MultiIndex>, LatticeError> {
    let d = binv.len();
    if d == 0 || binv.iter().any(|r| r.len() != d) {
        return Err(LatticeError::Shape {
            rows: d,
            lengths: binv.iter().map(Vec::len).collect(),
        });
    }
    let m = integer_rows(binv)?;
    let det = int_det(&m);
    if det == 0 {
        return Err(LatticeError::Singular { det: 0.0 });
    }
    let modulus = det.abs();
    let count = usize::try_from(modulus)
        .map_err(|_| LatticeError::InvalidParameter(format!("index {modulus} too large")))?;
    let adj = adjugate(&m);
    let hi = i64::try_from(modulus - 1)
        .map_err(|_| LatticeError::InvalidParameter(format!("index {modulus} too large")))?;
    let mut seen = HashSet::with_capacity(count);
    let mut reps = Vec::with_capacity(count);
    for j in crate::trigpoly::index_box(d, 0, hi) {
        let key: Vec<i128> = adj
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&j.0)
                    .map(|(&a, &v)| a * v as i128)
                    .sum::<i128>()
                    .rem_euclid(modulus)
            })
            .collect();
        if seen.insert(key) {
            reps.push(j);
            if reps.len() == count {
                break;
            }
        }
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> LatticeMatrix {
        "0.5,0;-0.5,0.5".parse().unwrap()
    }

    fn b_eps(eps: f64) -> LatticeMatrix {
        let c = (1.0 + eps) / 4.0;
        LatticeMatrix::new(vec![vec![c, c], vec![c, -c]]).unwrap()
    }

    #[test]
    fn sharp_of_figure_matrix() {
        let b = fig1();
        let s = b.sharp_rows();
        let want = [[2.0, 2.0], [0.0, 2.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((s[i][j] - want[i][j]).abs() < 1e-14);
            }
        }
        assert!((b.det() - 0.25).abs() < 1e-15);
        assert!(b.sharp_defect() < 1e-14);
        assert!(support_condition(&b, 2).pass);
    }

    #[test]
    fn too_coarse_lattice_fails_at_unit_vector() {
        let r = support_condition(&b_eps(0.1), 2);
        assert!(!r.pass);
        assert_eq!(r.witness, Some(MultiIndex(vec![1, 0])));
        let img = r.witness_image.unwrap();
        assert!((img[0] - 2.0 / 1.1).abs() < 1e-13);
        assert!((img[1] - 2.0 / 1.1).abs() < 1e-13);
        assert!(!norm_sufficient(&b_eps(0.1), 2));
    }

    #[test]
    fn sheared_lattice_with_large_norm_passes() {
        let a = 100.0;
        let b = LatticeMatrix::new(vec![vec![0.5, 0.0], vec![-0.5 * a, 0.5]]).unwrap();
        assert!(b.spectral_norm() >= a / 2.0);
        assert!(support_condition(&b, 2).pass);
        assert!(!norm_sufficient(&b, 2));
    }

    #[test]
    fn lemma_boundary_matrix() {
        let b = LatticeMatrix::scalar(2, 1.0 / (2.0_f64.sqrt() * 2.0)).unwrap();
        assert!(norm_sufficient(&b, 2));
        assert!(support_condition(&b, 2).pass);
    }

    #[test]
    fn small_determinant_counterexamples() {
        for eps in [0.25, 0.01, 1e-4] {
            let b = scaling_counterexample(eps).unwrap();
            assert!((b.det() - eps).abs() <= 1e-12);
            assert!(!support_condition(&b, 2).pass, "eps = {eps}");
        }
        let b = scaling_counterexample(1e-4).unwrap();
        assert!((b.entry(0, 0) - 0.64).abs() < 1e-14);
        assert!(scaling_counterexample(0.0).is_err());
    }

    #[test]
    fn boundary_is_not_a_violation() {
        let b = LatticeMatrix::scalar(1, 0.5).unwrap();
        let r = support_condition(&b, 2);
        assert!(r.pass);
        assert_eq!(r.boundary_hits, 2);
    }

    #[test]
    fn parsing() {
        let b: LatticeMatrix = "0.25".parse().unwrap();
        assert_eq!(b.dim(), 1);
        assert!("1,2;3".parse::<LatticeMatrix>().is_err());
        assert!("1,x;3,4".parse::<LatticeMatrix>().is_err());
        assert!(matches!(
            "1,2;2,4".parse::<LatticeMatrix>(),
            Err(LatticeError::Singular { .. })
        ));
        let j = LatticeMatrix::from_json_str("[[0.5,0],[-0.5,0.5]]").unwrap();
        assert_eq!(j, fig1());
        let round: LatticeMatrix = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(round, j);
        assert_eq!(fig1().to_string().parse::<LatticeMatrix>().unwrap(), fig1());
    }

    #[test]
    fn cosets_of_small_lattices() {
        let two = vec![vec![2.0, 0.0], vec![0.0, 2.0]];
        let reps = coset_reps(&two).unwrap();
        let want: Vec<MultiIndex> = [[0, 0], [0, 1], [1, 0], [1, 1]]
            .iter()
            .map(|v| MultiIndex(v.to_vec()))
            .collect();
        assert_eq!(reps, want);
        assert_eq!(coset_reps(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap().len(), 1);
        assert_eq!(coset_reps(&[vec![2.0, 2.0], vec![0.0, 2.0]]).unwrap().len(), 4);
        assert_eq!(coset_reps(&[vec![3.0]]).unwrap().len(), 3);
        assert!(matches!(
            coset_reps(&[vec![1.5]]),
            Err(LatticeError::NotInteger { .. })
        ));
        assert!(matches!(
            coset_reps(&[vec![1.0, 2.0], vec![2.0, 4.0]]),
            Err(LatticeError::Singular { .. })
        ));
    }

    #[test]
    fn integer_inverse_of_figure_matrix() {
        assert_eq!(fig1().integer_inverse().unwrap(), vec![vec![2, 0], vec![2, 2]]);
        assert!(b_eps(0.1).integer_inverse().is_err());
    }
}
