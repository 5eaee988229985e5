//! Sampled windows on `ℓ²(ℤᵈ)`, the discrete duality condition and exact
//! finite reconstruction.
//!
//! For `B` with integer `B⁻¹` the character `j ↦ e^{2πi Bm·j}` depends only
//! on `Bm mod ℤᵈ`, so the modulations reduce to the finite group
//! `Bℤᵈ/ℤᵈ` of order `1/|det B|`. Reconstruction sums once over that group.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gabor::{overlapping_shifts, Window};
use crate::lattice::{coset_reps, LatticeError, LatticeMatrix, INTEGER_TOLERANCE};
use crate::trigpoly::{finite_number, index_box, parse_point_row, MultiIndex};

/// Values at or below this magnitude are not stored.
pub const DROP_THRESHOLD: f64 = 1e-15;

/// Discrete duality residuals at or below this admit reconstruction.
pub const DUALITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscreteError {
    #[error("B^-1 is not an integer matrix: {0}")]
    NotInteger(LatticeError),
    #[error("discrete duality fails (max residual {residual:e})")]
    DualityFailed { residual: f64 },
    #[error("expected {expected} modulation characters, found {got}")]
    CharacterCount { expected: usize, got: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("invalid sequence: {0}")]
    Invalid(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A finitely supported sequence on `ℤᵈ`, stored sparsely in lexicographic
/// index order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiscreteWindowJson", into = "DiscreteWindowJson")]
pub struct DiscreteWindow {
    dim: usize,
    points: BTreeMap<MultiIndex, Complex64>,
}

/// Signals share the representation of windows.
pub type Sequence = DiscreteWindow;

impl DiscreteWindow {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self {
            dim,
            points: BTreeMap::new(),
        }
    }

    /// Repeated indices accumulate; negligible values are dropped.
    pub fn from_points<I>(dim: usize, points: I) -> Result<Self, DiscreteError>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut w = Self::zero(dim);
        for (j, v) in points {
            if j.dim() != dim {
                return Err(DiscreteError::DimMismatch {
                    left: dim,
                    right: j.dim(),
                });
            }
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(DiscreteError::Invalid(format!("value at {j} is not finite")));
            }
            *w.points.entry(j).or_default() += v;
        }
        w.points.retain(|_, v| v.norm() > DROP_THRESHOLD);
        Ok(w)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, j: &MultiIndex) -> Complex64 {
        self.points.get(j).copied().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = &MultiIndex> {
        self.points.keys()
    }

    pub fn points(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.points.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.points.values().map(Complex64::norm_sqr).sum()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self::from_points(self.dim, self.points.iter().map(|(j, v)| (j.clone(), v * c)))
            .expect("scaling keeps indices valid")
    }

    /// Largest `|self(j) − other(j)|` over the union of supports.
    pub fn max_diff(&self, other: &DiscreteWindow) -> f64 {
        self.support()
            .chain(other.support())
            .map(|j| (self.get(j) - other.get(j)).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteWindowJson {
    pub dim: usize,
    /// Rows `[j_1, …, j_d, re, im]`.
    pub points: Vec<Vec<serde_json::Number>>,
}

impl From<DiscreteWindow> for DiscreteWindowJson {
    fn from(w: DiscreteWindow) -> Self {
        let points = w
            .points
            .iter()
            .map(|(j, v)| {
                j.0.iter()
                    .map(|&k| serde_json::Number::from(k))
                    .chain([finite_number(v.re), finite_number(v.im)])
                    .collect()
            })
            .collect();
        Self { dim: w.dim, points }
    }
}

impl TryFrom<DiscreteWindowJson> for DiscreteWindow {
    type Error = DiscreteError;

    fn try_from(raw: DiscreteWindowJson) -> Result<Self, Self::Error> {
        if raw.dim == 0 {
            return Err(DiscreteError::Invalid("dim must be positive".into()));
        }
        let rows = raw
            .points
            .iter()
            .map(|row| parse_point_row(row, raw.dim))
            .collect::<Result<Vec<_>, _>>()
            .map_err(DiscreteError::Invalid)?;
        Self::from_points(raw.dim, rows)
    }
}

/// Values of `w` at the integer points of `[0,N]ᵈ`.
pub fn sample_window(w: &Window) -> DiscreteWindow {
    let pts = index_box(w.dim(), 0, w.n() as i64).map(|j| {
        let x: Vec<f64> = j.0.iter().map(|&v| v as f64).collect();
        let v = w.eval(&x);
        (j, v)
    });
    DiscreteWindow::from_points(w.dim(), pts).expect("indices have the window dimension")
}

/// Per-shift detail of [`verify_discrete_duality`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftResidual {
    pub n: MultiIndex,
    pub image: Vec<f64>,
    /// False when `B♯n` is not an integer vector; the correlation is then
    /// taken over an empty overlap.
    pub integer: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteDualityReport {
    pub pass: bool,
    pub max_residual: f64,
    pub shifts: Vec<ShiftResidual>,
    pub non_integer_shifts: usize,
    pub abs_det: f64,
}

fn integer_vector(v: &[f64]) -> Option<Vec<i64>> {
    v.iter()
        .map(|&x| {
            let r = x.round();
            ((x - r).abs() <= INTEGER_TOLERANCE).then_some(r as i64)
        })
        .collect()
}

/// `Σ_k conj(c(j − s + k))·d(j + k)`. Summing over all of `ℤᵈ` makes the
/// value independent of `j`, so it is evaluated once over the support of `d`.
pub fn shifted_correlation(c: &DiscreteWindow, dseq: &DiscreteWindow, s: &[i64]) -> Complex64 {
    dseq.points()
        .map(|(m, v)| {
            let at = MultiIndex(m.0.iter().zip(s).map(|(a, b)| a - b).collect());
            c.get(&at).conj() * v
        })
        .sum()
}

/// Checks `Σ_k conj(c(j − B♯n + k)) d(j + k) = |det B| δ_{n,0}` for every `n`
/// with `B♯n ∈ [−N,N]ᵈ`. Shifts with non-integer `B♯n` meet the integer
/// supports nowhere and contribute the value 0.
pub fn verify_discrete_duality(
    c: &DiscreteWindow,
    dseq: &DiscreteWindow,
    b: &LatticeMatrix,
    n: u64,
) -> Result<DiscreteDualityReport, DiscreteError> {
    for w in [c, dseq] {
        if w.dim() != b.dim() {
            return Err(DiscreteError::DimMismatch {
                left: b.dim(),
                right: w.dim(),
            });
        }
    }
    let abs_det = b.abs_det();
    let mut shifts = Vec::new();
    let mut max_residual: f64 = 0.0;
    let mut non_integer_shifts = 0;
    for k in overlapping_shifts(b, n) {
        let image = b.sharp_apply(&k.0);
        let target = if k.is_zero() { abs_det } else { 0.0 };
        let (integer, value) = match integer_vector(&image) {
            Some(s) => (true, shifted_correlation(c, dseq, &s)),
            None => {
                non_integer_shifts += 1;
                (false, Complex64::new(0.0, 0.0))
            }
        };
        let residual = (value - target).norm();
        max_residual = max_residual.max(residual);
        shifts.push(ShiftResidual {
            n: k,
            image,
            integer,
            residual,
        });
    }
    Ok(DiscreteDualityReport {
        pass: max_residual <= DUALITY_TOLERANCE,
        max_residual,
        shifts,
        non_integer_shifts,
        abs_det,
    })
}

/// `{B·m mod ℤᵈ : m ∈ Ω}` with `Ω` a transversal of `ℤᵈ/B⁻¹ℤᵈ`; components in
/// `[0,1)`.
pub fn modulation_characters(b: &LatticeMatrix) -> Result<Vec<Vec<f64>>, DiscreteError> {
    let binv = b.integer_inverse().map_err(DiscreteError::NotInteger)?;
    let rows: Vec<Vec<f64>> = binv
        .iter()
        .map(|r| r.iter().map(|&v| v as f64).collect())
        .collect();
    let reps = coset_reps(&rows)?;
    let chars: Vec<Vec<f64>> = reps
        .iter()
        .map(|m| {
            let x: Vec<f64> = m.0.iter().map(|&v| v as f64).collect();
            b.apply(&x).into_iter().map(reduce_mod_one).collect()
        })
        .collect();
    let expected = b.abs_det().recip().round() as usize;
    if chars.len() != expected {
        return Err(DiscreteError::CharacterCount {
            expected,
            got: chars.len(),
        });
    }
    Ok(chars)
}

fn reduce_mod_one(v: f64) -> f64 {
    let r = v - v.floor();
    if r > 1.0 - 1e-12 {
        0.0
    } else {
        r
    }
}

fn character(lambda: &[f64], j: &MultiIndex) -> Complex64 {
    let phase: f64 = lambda.iter().zip(&j.0).map(|(l, &v)| l * v as f64).sum();
    Complex64::cis(2.0 * PI * phase)
}

/// The system `{e^{2πi λ·j} c(j − n)}` over the distinct characters `λ` and
/// all `n ∈ ℤᵈ`.
#[derive(Debug, Clone)]
pub struct DiscreteGaborSystem {
    window: DiscreteWindow,
    lattice: LatticeMatrix,
    modulation_set: Vec<Vec<f64>>,
}

/// `⟨f, e^{2πiλ·}c(· − n)⟩` for one character index and translation.
#[derive(Debug, Clone, PartialEq)]
pub struct GaborCoefficient {
    pub character: usize,
    pub translation: MultiIndex,
    pub value: Complex64,
}

impl DiscreteGaborSystem {
    pub fn new(window: DiscreteWindow, lattice: LatticeMatrix) -> Result<Self, DiscreteError> {
        if window.dim() != lattice.dim() {
            return Err(DiscreteError::DimMismatch {
                left: lattice.dim(),
                right: window.dim(),
            });
        }
        let modulation_set = modulation_characters(&lattice)?;
        Ok(Self {
            window,
            lattice,
            modulation_set,
        })
    }

    pub fn window(&self) -> &DiscreteWindow {
        &self.window
    }

    pub fn lattice(&self) -> &LatticeMatrix {
        &self.lattice
    }

    pub fn modulation_set(&self) -> &[Vec<f64>] {
        &self.modulation_set
    }

    /// Translations `n` for which `c(· − n)` meets the support of `f`.
    pub fn translations(&self, f: &Sequence) -> Vec<MultiIndex> {
        let set: BTreeSet<MultiIndex> = f
            .support()
            .flat_map(|l| self.window.support().map(move |s| l.sub(s)))
            .collect();
        set.into_iter().collect()
    }

    /// Every nonzero-able analysis coefficient of `f`, character-major.
    pub fn analyze(&self, f: &Sequence) -> Vec<GaborCoefficient> {
        let translations = self.translations(f);
        let mut out = Vec::with_capacity(self.modulation_set.len() * translations.len());
        for (li, lambda) in self.modulation_set.iter().enumerate() {
            for n in &translations {
                let value: Complex64 = f
                    .points()
                    .map(|(l, v)| v * (character(lambda, l) * self.window.get(&l.sub(n))).conj())
                    .sum();
                out.push(GaborCoefficient {
                    character: li,
                    translation: n.clone(),
                    value,
                });
            }
        }
        out
    }

    /// `Σ coeff·e^{2πiλ·j} d(j − n)` with `d` this system's window.
    pub fn synthesize(&self, coeffs: &[GaborCoefficient]) -> Sequence {
        let mut acc: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for c in coeffs {
            let lambda = &self.modulation_set[c.character];
            for (s, v) in self.window.points() {
                let j = s.add(&c.translation);
                let term = c.value * character(lambda, &j) * v;
                *acc.entry(j).or_default() += term;
            }
        }
        DiscreteWindow::from_points(self.window.dim(), acc).expect("indices have the window dimension")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub signal: Sequence,
    pub max_error: f64,
    pub characters: usize,
    pub translations: usize,
}

/// `f̂ = Σ_λ Σ_n ⟨f, e^{2πiλ·}c(·−n)⟩ e^{2πiλ·}d(·−n)` and `max |f̂ − f|`.
///
/// The character sum collapses `f̂(j)` to
/// `|Λ|·Σ_p f(j − B♯p)·Σ_k conj(c(j − B♯p + k)) d(j + k)`, which the duality
/// condition reduces to `|Λ|·|det B|·f(j) = f(j)`.
pub fn reconstruct(
    f: &Sequence,
    c: &DiscreteWindow,
    dseq: &DiscreteWindow,
    b: &LatticeMatrix,
    n: u64,
) -> Result<Reconstruction, DiscreteError> {
    if f.dim() != b.dim() {
        return Err(DiscreteError::DimMismatch {
            left: b.dim(),
            right: f.dim(),
        });
    }
    let report = verify_discrete_duality(c, dseq, b, n)?;
    if !report.pass {
        return Err(DiscreteError::DualityFailed {
            residual: report.max_residual,
        });
    }
    let analysis = DiscreteGaborSystem::new(c.clone(), b.clone())?;
    let synthesis = DiscreteGaborSystem::new(dseq.clone(), b.clone())?;
    let coeffs = analysis.analyze(f);
    let signal = synthesis.synthesize(&coeffs);
    Ok(Reconstruction {
        max_error: signal.max_diff(f),
        characters: analysis.modulation_set().len(),
        translations: analysis.translations(f).len(),
        signal,
    })
}

/// Samples of the tight window `√|det B|·(4^{N−1}/(N·C(2N−2,N−1)))^{d/2}·∏sin^{N−1}(πj_ℓ/N)`.
pub fn discrete_tight_window(n: u64, d: usize, b: &LatticeMatrix) -> Result<DiscreteWindow, crate::gabor::GaborError> {
    b.integer_inverse()?;
    let w = crate::gabor::tight_window(n, d, b)?;
    Ok(sample_window(&w))
}
