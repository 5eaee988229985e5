//! Partitions of unity `Σ_{n∈ℤ^d} P(x+n)·χ_{[0,N]^d}(x+n) = 1`.
//!
//! Two families of inputs are handled:
//!
//! - trigonometric polynomials ([`TrigPoly`] over denominator `N`), tested
//!   exactly on their Fourier coefficients: the partition holds iff
//!   `c_k = N^{-d}·δ_{k,0}` for every `k ∈ (Nℤ)^d`;
//! - arbitrary evaluators ([`PouEvaluator`]), tested by direct summation or
//!   through the one-variable Fourier coefficients of
//!   `Q_j(x, y) = Σ_{n∈{0..N−1}^{d−1}} P_j(x, y+n)`.
//!
//! For polynomials the smoothness of `P·χ_{[0,N]^d}` is read off from how many
//! times `P` is divisible by `∏_j (e^{πi x_j/N} sin(πx_j/N)) = ∏_j (z_j − 1)/(2i)`;
//! [`build_constraint_system`] and [`solve_pou`] produce every polynomial of a
//! given smoothness order that is a partition of unity.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, AffineSolutionSet, DenseMatrix, LinalgError};
use crate::rng;
use crate::trigpoly::{
    binomial, cos_power_expand, index_box, index_range, sin_power_expand, tensor, MultiIndex,
    TrigPoly, TrigPolyError,
};

/// Absolute tolerance of the coefficient test.
pub const COEFF_TOLERANCE: f64 = 1e-12;

/// Tolerance on `c_0(y) = 1/N` and `c_{mN}(y) = 0` in [`qj_fourier_check`].
pub const QJ_TOLERANCE: f64 = 1e-8;

/// Largest relative jump `|Q_j(x+N) − Q_j(x)|` accepted as periodic.
pub const PERIODICITY_TOLERANCE: f64 = 1e-8;

const PERIODICITY_PROBES: usize = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PartitionError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("polynomial has denominator {got}, expected {expected}")]
    DenomMismatch { expected: u64, got: u64 },
    #[error("not divisible: {0}")]
    NotDivisible(TrigPolyError),
    #[error("no partition of unity of this smoothness exists for the budget (residual {residual:e})")]
    Inconsistent { residual: f64 },
    #[error("Q_j is not N-periodic (deviation {deviation:e})")]
    NotPeriodic { deviation: f64 },
    #[error("unknown gallery example {0:?}")]
    UnknownExample(String),
    #[error("the zero polynomial has no finite smoothness order")]
    ZeroPolynomial,
    #[error(transparent)]
    Poly(TrigPolyError),
    #[error(transparent)]
    Linalg(LinalgError),
}

impl From<TrigPolyError> for PartitionError {
    fn from(e: TrigPolyError) -> Self {
        match e {
            TrigPolyError::NotDivisible { .. } => PartitionError::NotDivisible(e),
            other => PartitionError::Poly(other),
        }
    }
}

impl From<LinalgError> for PartitionError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::Inconsistent { residual } => PartitionError::Inconsistent { residual },
            other => PartitionError::Linalg(other),
        }
    }
}

/// Frequency budget `K`, cube size `N`, smoothness order `L` and dimension
/// `d` of a smooth partition-of-unity problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PouProblem {
    pub k: u32,
    pub n: u64,
    pub l: u32,
    pub d: usize,
}

impl PouProblem {
    /// Checks `K, N, d ≥ 1` and `1 ≤ L ≤ 2K`.
    pub fn new(k: u32, n: u64, l: u32, d: usize) -> Result<Self, PartitionError> {
        if k == 0 || n == 0 || d == 0 {
            return Err(PartitionError::InvalidProblem(
                "K, N and d must be positive".into(),
            ));
        }
        if l == 0 || l > 2 * k {
            return Err(PartitionError::InvalidProblem(format!(
                "smoothness order L = {l} must lie in [1, 2K] = [1, {}]",
                2 * k
            )));
        }
        Ok(Self { k, n, l, d })
    }

    /// Index box `[−K, K−L]^d` of the residual coefficients `a_k`.
    pub fn unknown_indices(&self) -> Vec<MultiIndex> {
        let k = i64::from(self.k);
        index_box(self.d, -k, k - i64::from(self.l)).collect()
    }

    /// Equation indices `(Nℤ)^d ∩ [−K, K]^d`.
    pub fn equation_indices(&self) -> Vec<MultiIndex> {
        let k = i64::from(self.k);
        let n = self.n as i64;
        let reach = k / n;
        index_box(self.d, -reach, reach)
            .map(|m| MultiIndex(m.0.iter().map(|v| v * n).collect()))
            .collect()
    }
}

/// One offending coefficient in a [`PouReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub index: Vec<i64>,
    pub value_re: f64,
    pub value_im: f64,
}

/// Outcome of a partition-of-unity test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PouReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
    pub max_residual: f64,
}

/// Exact coefficient test: `c_0 = N^{-d}` and `c_k = 0` for every stored
/// `k ∈ (Nℤ)^d \ {0}`, each within [`COEFF_TOLERANCE`].
///
/// `p` must already be expressed over denominator `n`.
pub fn check_pou_coeff(p: &TrigPoly, n: u64) -> Result<PouReport, PartitionError> {
    if p.denom() != n {
        return Err(PartitionError::DenomMismatch {
            expected: n,
            got: p.denom(),
        });
    }
    let target = (n as f64).powi(p.dim() as i32).recip();
    let zero = MultiIndex::zeros(p.dim());
    let c0 = p.coeff(&zero);
    let mut max_residual = (c0 - target).norm();
    let mut violations = Vec::new();
    if max_residual > COEFF_TOLERANCE {
        violations.push(Violation {
            index: zero.0.clone(),
            value_re: c0.re,
            value_im: c0.im,
        });
    }
    for (k, c) in p.terms() {
        if k.is_zero() || !k.in_scaled_lattice(n as i64) {
            continue;
        }
        max_residual = max_residual.max(c.norm());
        if c.norm() > COEFF_TOLERANCE {
            violations.push(Violation {
                index: k.0.clone(),
                value_re: c.re,
                value_im: c.im,
            });
        }
    }
    Ok(PouReport {
        pass: violations.is_empty(),
        violations,
        max_residual,
    })
}

type Sampler = dyn Fn(&[f64]) -> Complex64 + Send + Sync;

/// A function on `ℝ^d`, typically the restriction of an entire function.
/// Samplers must be stateless so they can be called concurrently.
#[derive(Clone)]
pub struct PouEvaluator {
    dim: usize,
    sampler: Arc<Sampler>,
}

impl fmt::Debug for PouEvaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PouEvaluator").field("dim", &self.dim).finish_non_exhaustive()
    }
}

impl PouEvaluator {
    pub fn new<F>(dim: usize, sampler: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            dim,
            sampler: Arc::new(sampler),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        (self.sampler)(x)
    }
}

impl From<TrigPoly> for PouEvaluator {
    fn from(p: TrigPoly) -> Self {
        let dim = p.dim();
        Self::new(dim, move |x| p.eval(x))
    }
}

fn cube_offsets(dim: usize, n: u64) -> Vec<Vec<f64>> {
    index_box(dim, 0, n as i64 - 1)
        .map(|k| k.0.iter().map(|&v| v as f64).collect())
        .collect()
}

/// Largest `|Σ_{n∈{0..N−1}^d} P(x+n) − 1|` over `samples` uniform points of
/// `[0,1]^d`, drawn from the default seed.
pub fn check_pou_numeric(p: &PouEvaluator, n: u64, samples: usize) -> f64 {
    check_pou_numeric_seeded(p, n, samples, rng::DEFAULT_SEED)
}

pub fn check_pou_numeric_seeded(p: &PouEvaluator, n: u64, samples: usize, seed: u64) -> f64 {
    let offsets = cube_offsets(p.dim, n);
    let mut rng = rng::seeded(seed);
    rng::unit_cube_points(&mut rng, p.dim, samples)
        .iter()
        .map(|x| {
            let total: Complex64 = offsets
                .iter()
                .map(|o| {
                    let shifted: Vec<f64> = x.iter().zip(o).map(|(a, b)| a + b).collect();
                    p.eval(&shifted)
                })
                .sum();
            (total - 1.0).norm()
        })
        .fold(0.0, f64::max)
}

/// Fourier coefficient of `Q_j(·, y)` at frequency `k/N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierCoefficient {
    pub k: i64,
    pub re: f64,
    pub im: f64,
}

/// Result of [`qj_fourier_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QjReport {
    pub axis: usize,
    pub y: Vec<f64>,
    pub coefficients: Vec<FourierCoefficient>,
    /// `|c_0(y) − 1/N|`.
    pub c0_deviation: f64,
    /// `max |c_{mN}(y)|` over `0 < |mN| ≤ Kmax`.
    pub lattice_max: f64,
    pub periodicity_deviation: f64,
    pub pass: bool,
}

impl QjReport {
    pub fn coefficient(&self, k: i64) -> Option<Complex64> {
        self.coefficients
            .iter()
            .find(|c| c.k == k)
            .map(|c| Complex64::new(c.re, c.im))
    }
}

/// Default trapezoid node count for a given `Kmax`.
pub fn default_quad_points(kmax: usize) -> usize {
    16 * (kmax + 1)
}

/// Pulls out axis `axis` (0-based): forms
/// `Q(x) = Σ_{n∈{0..N−1}^{d−1}} P(y_1+n_1, …, x, …, y_{d−1}+n_{d−1})`,
/// checks `Q(x+N) = Q(x)` at 32 probes and computes
/// `c_k = (1/N)∫_0^N Q(x)e^{−2πikx/N}dx` for `|k| ≤ kmax` by the trapezoid
/// rule on `quad_points` nodes.
///
/// The test passes when `c_0 = 1/N` and `c_{mN} = 0` for `0 < |mN| ≤ kmax`,
/// both within [`QJ_TOLERANCE`]. Only the supplied `y` is probed.
pub fn qj_fourier_check(
    p: &PouEvaluator,
    n: u64,
    axis: usize,
    y: &[f64],
    kmax: usize,
    quad_points: usize,
) -> Result<QjReport, PartitionError> {
    let d = p.dim;
    if axis >= d {
        return Err(PartitionError::InvalidProblem(format!(
            "axis {axis} out of range for dimension {d}"
        )));
    }
    if y.len() + 1 != d {
        return Err(PartitionError::InvalidProblem(format!(
            "y must have {} components",
            d - 1
        )));
    }
    if quad_points < 4 * kmax.max(1) {
        return Err(PartitionError::InvalidProblem(format!(
            "quad_points = {quad_points} is below 4·Kmax"
        )));
    }
    let period = n as f64;
    let offsets = if d > 1 { cube_offsets(d - 1, n) } else { vec![Vec::new()] };
    let q = |x: f64| -> Complex64 {
        offsets
            .iter()
            .map(|o| {
                let mut point: Vec<f64> = y.iter().zip(o).map(|(a, b)| a + b).collect();
                point.insert(axis, x);
                p.eval(&point)
            })
            .sum()
    };

    let periodicity_deviation = (0..PERIODICITY_PROBES)
        .map(|i| {
            let x = period * (i as f64 + 0.5) / PERIODICITY_PROBES as f64;
            let (a, b) = (q(x), q(x + period));
            (a - b).norm() / a.norm().max(1.0)
        })
        .fold(0.0, f64::max);
    if periodicity_deviation > PERIODICITY_TOLERANCE {
        return Err(PartitionError::NotPeriodic {
            deviation: periodicity_deviation,
        });
    }

    let samples: Vec<(f64, Complex64)> = (0..quad_points)
        .map(|i| {
            let x = period * i as f64 / quad_points as f64;
            (x, q(x))
        })
        .collect();
    let kmax = kmax as i64;
    let coefficients: Vec<FourierCoefficient> = (-kmax..=kmax)
        .map(|k| {
            let w = -2.0 * std::f64::consts::PI * k as f64 / period;
            let c: Complex64 = samples.iter().map(|(x, v)| v * Complex64::cis(w * x)).sum::<Complex64>()
                / quad_points as f64;
            FourierCoefficient { k, re: c.re, im: c.im }
        })
        .collect();

    let value = |k: i64| {
        let c = &coefficients[(k + kmax) as usize];
        Complex64::new(c.re, c.im)
    };
    let c0_deviation = (value(0) - 1.0 / period).norm();
    let step = n as i64;
    let lattice_max = (1..=kmax / step)
        .flat_map(|m| [m * step, -m * step])
        .map(|k| value(k).norm())
        .fold(0.0, f64::max);
    Ok(QjReport {
        axis,
        y: y.to_vec(),
        coefficients,
        c0_deviation,
        lattice_max,
        periodicity_deviation,
        pass: c0_deviation <= QJ_TOLERANCE && lattice_max <= QJ_TOLERANCE,
    })
}

fn two_i_power(power: u32) -> Complex64 {
    Complex64::new(0.0, 2.0).powu(power)
}

/// Divides `p` by `∏_j ((z_j − 1)/(2i))^L`, returning the residual
/// polynomial `A_L` with `P = ∏_j (e^{πi x_j/N} sin(πx_j/N))^L · A_L`.
///
/// `NotDivisible` means `P·χ_{[0,N]^d}` is not `C^{L−1}`.
pub fn factor_out_sin(p: &TrigPoly, n: u64, l: u32) -> Result<TrigPoly, PartitionError> {
    if p.denom() != n {
        return Err(PartitionError::DenomMismatch {
            expected: n,
            got: p.denom(),
        });
    }
    let mut q = p.clone();
    for axis in 0..p.dim() {
        for _ in 0..l {
            q = q.divide_z_minus_one(axis)?;
        }
    }
    Ok(q.scale(two_i_power(l * p.dim() as u32)))
}

/// Largest `L` for which [`factor_out_sin`] succeeds. `P·χ_{[0,N]^d}` is then
/// `C^{L−1}` but not `C^L`; `0` means it may be discontinuous.
pub fn smoothness_order(p: &TrigPoly, n: u64) -> Result<u32, PartitionError> {
    if p.denom() != n {
        return Err(PartitionError::DenomMismatch {
            expected: n,
            got: p.denom(),
        });
    }
    if p.is_zero() {
        return Err(PartitionError::ZeroPolynomial);
    }
    let mut order = 0;
    let mut q = p.clone();
    'outer: loop {
        for axis in 0..p.dim() {
            match q.divide_z_minus_one(axis) {
                Ok(next) => q = next,
                Err(_) => break 'outer,
            }
        }
        order += 1;
    }
    Ok(order)
}

/// Multiplies `a_l` by `∏_j ((z_j − 1)/(2i))^L`; inverse of
/// [`factor_out_sin`].
pub fn assemble_window_poly(a_l: &TrigPoly, prob: &PouProblem) -> Result<TrigPoly, PartitionError> {
    if a_l.denom() != prob.n {
        return Err(PartitionError::DenomMismatch {
            expected: prob.n,
            got: a_l.denom(),
        });
    }
    if a_l.dim() != prob.d {
        return Err(PartitionError::Poly(TrigPolyError::DimMismatch {
            left: prob.d,
            right: a_l.dim(),
        }));
    }
    let (lo, hi) = (-i64::from(prob.k), i64::from(prob.k) - i64::from(prob.l));
    if let Some((k, _)) = a_l.terms().find(|(k, _)| k.0.iter().any(|&v| v < lo || v > hi)) {
        return Err(PartitionError::InvalidProblem(format!(
            "coefficient index {k} lies outside [{lo}, {hi}]^d"
        )));
    }
    let mut p = a_l.clone();
    for axis in 0..prob.d {
        for _ in 0..prob.l {
            p = p.mul_z_minus_one(axis)?;
        }
    }
    Ok(p.scale(two_i_power(prob.l * prob.d as u32).inv()))
}

/// Linear system on the residual coefficients `a_k`, `k ∈ [−K, K−L]^d`, one
/// equation per `m ∈ (Nℤ)^d ∩ [−K, K]^d`:
///
/// `Σ_{j+k=m, j∈[0,L]^d} (−1)^{Ld−Σj} C(L,j_1)⋯C(L,j_d) a_k = ((2i)^L/N)^d δ_{m,0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    pub matrix: DenseMatrix,
    pub rhs: Vec<Complex64>,
    pub unknowns: Vec<MultiIndex>,
    pub equations: Vec<MultiIndex>,
}

impl ConstraintSystem {
    /// `max_i |(A·x − b)_i|`.
    pub fn residual(&self, x: &[Complex64]) -> Result<f64, PartitionError> {
        let ax = self.matrix.mul_vec(x)?;
        Ok(ax
            .iter()
            .zip(&self.rhs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `max_i |(A·v)_i|`.
    pub fn homogeneous_residual(&self, v: &[Complex64]) -> Result<f64, PartitionError> {
        Ok(self
            .matrix
            .mul_vec(v)?
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }

    /// Full coefficient vector from `(index, value)` pairs; unnamed unknowns
    /// are zero.
    pub fn vector_from(&self, values: &[(MultiIndex, Complex64)]) -> Vec<Complex64> {
        let lookup: BTreeMap<&MultiIndex, Complex64> = values.iter().map(|(k, v)| (k, *v)).collect();
        self.unknowns
            .iter()
            .map(|k| lookup.get(k).copied().unwrap_or_default())
            .collect()
    }
}

pub fn build_constraint_system(prob: &PouProblem) -> ConstraintSystem {
    let unknowns = prob.unknown_indices();
    let equations = prob.equation_indices();
    let l = prob.l;
    let ld = i64::from(l) * prob.d as i64;
    let mut matrix = DenseMatrix::zeros(equations.len(), unknowns.len());
    for (row, m) in equations.iter().enumerate() {
        for (col, k) in unknowns.iter().enumerate() {
            let j = m.sub(k);
            if j.0.iter().any(|&v| v < 0 || v > i64::from(l)) {
                continue;
            }
            let sign = if (ld - j.0.iter().sum::<i64>()).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let weight: f64 = j.0.iter().map(|&v| binomial(l, v as u32)).product();
            matrix[(row, col)] = Complex64::new(sign * weight, 0.0);
        }
    }
    let target = (two_i_power(l) / prob.n as f64).powu(prob.d as u32);
    let rhs = equations
        .iter()
        .map(|m| if m.is_zero() { target } else { Complex64::new(0.0, 0.0) })
        .collect();
    ConstraintSystem {
        matrix,
        rhs,
        unknowns,
        equations,
    }
}

/// The affine family of residual coefficient vectors solving a
/// [`ConstraintSystem`].
#[derive(Debug, Clone, PartialEq)]
pub struct PouSolution {
    pub problem: PouProblem,
    /// Unknown ordering, lexicographic over `[−K, K−L]^d`.
    pub index_box: Vec<MultiIndex>,
    /// Family over the full unknown vector (expanded when the symmetry
    /// reduction was used).
    pub solution: AffineSolutionSet,
    pub symmetric: bool,
    pub system: ConstraintSystem,
}

impl PouSolution {
    pub fn dimension(&self) -> usize {
        self.solution.dimension()
    }

    pub fn coefficient_vector(&self, coords: &[f64]) -> Vec<Complex64> {
        let coords: Vec<Complex64> = coords.iter().map(|&t| Complex64::new(t, 0.0)).collect();
        self.solution.member(&coords)
    }

    /// `A_L` for the family member at the given nullspace coordinates.
    pub fn residual_poly(&self, coords: &[f64]) -> TrigPoly {
        TrigPoly::from_terms(
            self.problem.d,
            self.problem.n,
            self.index_box.iter().cloned().zip(self.coefficient_vector(coords)),
        )
    }

    /// The partition-of-unity polynomial `P` for the member at `coords`.
    pub fn window_poly(&self, coords: &[f64]) -> Result<TrigPoly, PartitionError> {
        assemble_window_poly(&self.residual_poly(coords), &self.problem)
    }
}

fn mirror_index(k: &MultiIndex, l: u32) -> MultiIndex {
    MultiIndex(k.0.iter().map(|&v| -v - i64::from(l)).collect())
}

/// Solves the smooth partition-of-unity system for `prob`.
///
/// With `symmetry`, unknowns are first identified pairwise by
/// `a_k = a_{−k−(L,…,L)}` (the relation making `P` real for real `a_k`) and
/// the reduced system is solved; the returned family is expanded back to all
/// unknowns.
pub fn solve_pou(prob: &PouProblem, symmetry: bool) -> Result<PouSolution, PartitionError> {
    let system = build_constraint_system(prob);
    let unknowns = &system.unknowns;
    let solution = if symmetry {
        let position: BTreeMap<&MultiIndex, usize> =
            unknowns.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut class = vec![usize::MAX; unknowns.len()];
        let mut classes = 0;
        for (i, k) in unknowns.iter().enumerate() {
            if class[i] != usize::MAX {
                continue;
            }
            class[i] = classes;
            let partner = position[&mirror_index(k, prob.l)];
            class[partner] = classes;
            classes += 1;
        }
        let mut reduced = DenseMatrix::zeros(system.matrix.rows(), classes);
        for row in 0..system.matrix.rows() {
            for (col, &cls) in class.iter().enumerate() {
                reduced[(row, cls)] += system.matrix[(row, col)];
            }
        }
        let red = linalg::solve_affine(&reduced, &system.rhs)?;
        let expand = |v: &[Complex64]| -> Vec<Complex64> { class.iter().map(|&c| v[c]).collect() };
        AffineSolutionSet {
            particular: expand(&red.particular),
            nullspace_basis: linalg::orthonormalize(
                red.nullspace_basis.iter().map(|v| expand(v)).collect(),
            ),
            rank: red.rank,
        }
    } else {
        linalg::solve_affine(&system.matrix, &system.rhs)?
    };
    Ok(PouSolution {
        problem: *prob,
        index_box: unknowns.clone(),
        solution,
        symmetric: symmetry,
        system,
    })
}

/// Normalisation `4^{N−1} / (N·C(2N−2, N−1))` making `sin^{2N−2}(πx/N)` a
/// one-dimensional partition of unity over `[0, N]`.
pub fn max_smooth_scale(n: u64) -> f64 {
    let m = (n - 1) as u32;
    4f64.powi(m as i32) / (n as f64 * binomial(2 * m, m))
}

/// `(4^{N−1}/(N·C(2N−2,N−1)))^d ∏_j sin^{2N−2}(πx_j/N)`, the unique
/// maximally smooth partition of unity with frequencies in `[−(N−1), N−1]^d`.
/// Its cut-off `P·χ_{[0,N]^d}` is `C^{2N−3}`.
pub fn max_smooth_poly(n: u64, d: usize) -> TrigPoly {
    assert!(n >= 1 && d >= 1, "N and d must be positive");
    let factor = sin_power_expand(n, 2 * (n as u32 - 1)).scale(Complex64::new(max_smooth_scale(n), 0.0));
    tensor(&vec![factor; d]).expect("factors share a denominator")
}

/// `Σ_{k=0}^{L−1} C(2L−1,k) sin^{2(L−1−k)}(πx/2) cos^{2k}(πx/2)` over
/// denominator 2.
pub fn fixed_support_inner(l: u32) -> TrigPoly {
    assert!(l >= 1, "L must be positive");
    (0..l)
        .map(|k| {
            sin_power_expand(2, 2 * (l - 1 - k))
                .mul(&cos_power_expand(2, 2 * k))
                .expect("shared denominator")
                .scale(Complex64::new(binomial(2 * l - 1, k), 0.0))
        })
        .reduce(|a, b| a.add(&b).expect("shared denominator"))
        .expect("L ≥ 1")
}

/// `∏_j sin^{2L}(πx_j/2)·Σ_{k=0}^{L−1} C(2L−1,k) sin^{2(L−1−k)}(πx_j/2) cos^{2k}(πx_j/2)`:
/// a partition of unity on `[0,2]^d` whose cut-off is `C^{2L−1}`.
pub fn fixed_support_poly(l: u32, d: usize) -> TrigPoly {
    let factor = sin_power_expand(2, 2 * l)
        .mul(&fixed_support_inner(l))
        .expect("shared denominator");
    tensor(&vec![factor; d]).expect("factors share a denominator")
}

/// Non-periodic entire partitions of unity on `ℝ²` with `N = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GalleryExample {
    /// `P(x_1,x_2) = e^{πi x_2} f(x_1) + 1/4 + e^{πi x_1} f(x_2)`.
    ThreeTerm,
    /// `P = 1/4 + e^{πi x_2} f(x_1) + e^{πi x_1} f(x_2) + e^{−πi x_2} g(x_1) + e^{−πi x_1} g(x_2)`
    /// with `g(x) = −1/4 − f(x) + e^{−πi x}/8`; vanishes on the boundary of
    /// `[0,2]^2` when `f(0) = f(2) = 0`.
    FiveTerm,
}

impl FromStr for GalleryExample {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "three-term" => Ok(Self::ThreeTerm),
            "five-term" => Ok(Self::FiveTerm),
            other => Err(PartitionError::UnknownExample(other.to_string())),
        }
    }
}

pub type ScalarFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

pub fn gallery(example: GalleryExample, f: ScalarFn) -> PouEvaluator {
    let phase = |x: f64, sign: f64| Complex64::cis(sign * std::f64::consts::PI * x);
    match example {
        GalleryExample::ThreeTerm => PouEvaluator::new(2, move |x: &[f64]| {
            phase(x[1], 1.0) * f(x[0]) + 0.25 + phase(x[0], 1.0) * f(x[1])
        }),
        GalleryExample::FiveTerm => PouEvaluator::new(2, move |x: &[f64]| {
            let g = |t: f64| -0.25 - f(t) + phase(t, -1.0) / 8.0;
            Complex64::new(0.25, 0.0)
                + phase(x[1], 1.0) * f(x[0])
                + phase(x[0], 1.0) * f(x[1])
                + phase(x[1], -1.0) * g(x[0])
                + phase(x[0], -1.0) * g(x[1])
        }),
    }
}

/// Residual index box helper used by reports: `∏[lo_i, hi_i]`.
pub fn coefficient_box(lows: Vec<i64>, highs: Vec<i64>) -> Vec<MultiIndex> {
    index_range(lows, highs).collect()
}
