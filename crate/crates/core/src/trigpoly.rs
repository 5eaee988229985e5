//! Sparse multivariate trigonometric polynomials
//! `P(x) = Σ_k c_k e^{2πi k·x/Q}` with integer frequency indices over an
//! explicit per-axis denominator `Q`.
//!
//! Writing `z_j = e^{2πi x_j/Q}`, a polynomial is a Laurent polynomial in
//! `z_1, …, z_d`. Keeping frequencies as integers means conditions such as
//! "every coefficient at an index in `(Nℤ)^d`" are exact lookups.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Coefficients with magnitude at or below this are dropped.
pub const DROP_THRESHOLD: f64 = 1e-15;

/// Relative remainder tolerance for [`TrigPoly::divide_z_minus_one`].
pub const DIVISION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrigPolyError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("denominator mismatch: {left} vs {right}")]
    DenomMismatch { left: u64, right: u64 },
    #[error("{from} does not divide {to}")]
    NotDivisor { from: u64, to: u64 },
    #[error("not divisible by (z_{axis} - 1): remainder {remainder:e}")]
    NotDivisible { axis: usize, remainder: f64 },
    #[error("axis {axis} out of range for dimension {dim}")]
    InvalidAxis { axis: usize, dim: usize },
    #[error("invalid polynomial: {0}")]
    Invalid(String),
}

/// A multi-index `k ∈ ℤ^d`. Ordering is lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<i64>);

impl MultiIndex {
    pub fn zeros(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    /// True when every component is a multiple of `n`.
    pub fn in_scaled_lattice(&self, n: i64) -> bool {
        self.0.iter().all(|&k| k % n == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl From<Vec<i64>> for MultiIndex {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// Iterates the integer box `[lo, hi]^dim` in lexicographic order.
pub fn index_box(dim: usize, lo: i64, hi: i64) -> impl Iterator<Item = MultiIndex> {
    let lows = vec![lo; dim];
    let highs = vec![hi; dim];
    index_range(lows, highs)
}

/// Iterates the integer box `∏ [lows_i, highs_i]` in lexicographic order.
pub fn index_range(lows: Vec<i64>, highs: Vec<i64>) -> impl Iterator<Item = MultiIndex> {
    let empty = lows.iter().zip(&highs).any(|(l, h)| l > h);
    let mut current = if empty { None } else { Some(lows.clone()) };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut axis = next.len();
        loop {
            if axis == 0 {
                current = None;
                break;
            }
            axis -= 1;
            if next[axis] < highs[axis] {
                next[axis] += 1;
                current = Some(next);
                break;
            }
            next[axis] = lows[axis];
        }
        Some(MultiIndex(out))
    })
}

/// `P(x) = Σ_k c_k e^{2πi k·x/denom}` with finitely many nonzero `c_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TrigPolyJson", into = "TrigPolyJson")]
pub struct TrigPoly {
    dim: usize,
    denom: u64,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl TrigPoly {
    /// The zero polynomial.
    pub fn zero(dim: usize, denom: u64) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        assert!(denom >= 1, "denominator must be positive");
        Self {
            dim,
            denom,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, denom: u64, c: Complex64) -> Self {
        Self::monomial(dim, denom, MultiIndex::zeros(dim), c)
    }

    pub fn monomial(dim: usize, denom: u64, index: MultiIndex, c: Complex64) -> Self {
        Self::from_terms(dim, denom, [(index, c)])
    }

    /// Sums the given terms (repeated indices accumulate) and drops
    /// negligible coefficients.
    ///
    /// Panics if an index has the wrong length.
    pub fn from_terms<I>(dim: usize, denom: u64, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut p = Self::zero(dim, denom);
        for (k, c) in terms {
            assert_eq!(k.dim(), dim, "index {k} has wrong dimension");
            *p.coeffs.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        self.coeffs.retain(|_, c| c.norm() > DROP_THRESHOLD);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: &MultiIndex) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Stored terms in lexicographic index order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    /// Per-axis `(min, max)` of the stored indices, `None` for the zero
    /// polynomial.
    pub fn index_bounds(&self) -> Option<Vec<(i64, i64)>> {
        let mut iter = self.coeffs.keys();
        let first = iter.next()?;
        let mut bounds: Vec<(i64, i64)> = first.0.iter().map(|&k| (k, k)).collect();
        for k in iter {
            for (b, &v) in bounds.iter_mut().zip(&k.0) {
                b.0 = b.0.min(v);
                b.1 = b.1.max(v);
            }
        }
        Some(bounds)
    }

    /// Evaluates at a real point, summing in lexicographic index order.
    ///
    /// Per-axis factors `e^{2πi k x_j/Q}` are tabulated once over the index
    /// bounds, so each term costs `d` complex products.
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.dim, "point has wrong dimension");
        let Some(bounds) = self.index_bounds() else {
            return Complex64::new(0.0, 0.0);
        };
        let w = 2.0 * PI / self.denom as f64;
        let tables: Vec<Vec<Complex64>> = bounds
            .iter()
            .zip(x)
            .map(|(&(lo, hi), &xi)| (lo..=hi).map(|k| Complex64::cis(w * k as f64 * xi)).collect())
            .collect();
        self.coeffs
            .iter()
            .map(|(k, c)| {
                k.0.iter()
                    .zip(&tables)
                    .zip(&bounds)
                    .fold(*c, |acc, ((&ki, table), &(lo, _))| acc * table[(ki - lo) as usize])
            })
            .sum()
    }

    fn check_compatible(&self, other: &TrigPoly) -> Result<(), TrigPolyError> {
        if self.dim != other.dim {
            return Err(TrigPolyError::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if self.denom != other.denom {
            return Err(TrigPolyError::DenomMismatch {
                left: self.denom,
                right: other.denom,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &TrigPoly) -> Result<TrigPoly, TrigPolyError> {
        self.check_compatible(other)?;
        Ok(Self::from_terms(
            self.dim,
            self.denom,
            self.coeffs
                .iter()
                .chain(&other.coeffs)
                .map(|(k, c)| (k.clone(), *c)),
        ))
    }

    pub fn scale(&self, c: Complex64) -> TrigPoly {
        Self::from_terms(
            self.dim,
            self.denom,
            self.coeffs.iter().map(|(k, v)| (k.clone(), v * c)),
        )
    }

    /// Product by convolution of coefficient supports.
    pub fn mul(&self, other: &TrigPoly) -> Result<TrigPoly, TrigPolyError> {
        self.check_compatible(other)?;
        let mut out: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &other.coeffs {
                *out.entry(ka.add(kb)).or_default() += ca * cb;
            }
        }
        let mut p = Self {
            dim: self.dim,
            denom: self.denom,
            coeffs: out,
        };
        p.normalize();
        Ok(p)
    }

    pub fn conj(&self) -> TrigPoly {
        Self::from_terms(
            self.dim,
            self.denom,
            self.coeffs
                .iter()
                .map(|(k, c)| (MultiIndex(k.0.iter().map(|v| -v).collect()), c.conj())),
        )
    }

    /// Rewrites over the finer denominator `new_denom`, a multiple of the
    /// current one. Evaluation is unchanged.
    pub fn rebase(&self, new_denom: u64) -> Result<TrigPoly, TrigPolyError> {
        if new_denom == 0 || !new_denom.is_multiple_of(self.denom) {
            return Err(TrigPolyError::NotDivisor {
                from: self.denom,
                to: new_denom,
            });
        }
        let factor = (new_denom / self.denom) as i64;
        Ok(Self {
            dim: self.dim,
            denom: new_denom,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (MultiIndex(k.0.iter().map(|v| v * factor).collect()), *c))
                .collect(),
        })
    }

    /// Inverse of [`rebase`](Self::rebase): rewrites over the coarser
    /// denominator `new_denom`, which must divide the current one, provided
    /// every stored index is compatible with it.
    pub fn coarsen(&self, new_denom: u64) -> Result<TrigPoly, TrigPolyError> {
        if new_denom == 0 || !self.denom.is_multiple_of(new_denom) {
            return Err(TrigPolyError::NotDivisor {
                from: new_denom,
                to: self.denom,
            });
        }
        let factor = (self.denom / new_denom) as i64;
        if let Some((k, _)) = self.coeffs.iter().find(|(k, _)| !k.in_scaled_lattice(factor)) {
            return Err(TrigPolyError::Invalid(format!(
                "index {k} has no representation over denominator {new_denom}"
            )));
        }
        Ok(Self {
            dim: self.dim,
            denom: new_denom,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (MultiIndex(k.0.iter().map(|v| v / factor).collect()), *c))
                .collect(),
        })
    }

    /// Partial derivative along `axis` (0-based).
    pub fn derivative(&self, axis: usize) -> Result<TrigPoly, TrigPolyError> {
        self.check_axis(axis)?;
        let w = 2.0 * PI / self.denom as f64;
        Ok(Self::from_terms(
            self.dim,
            self.denom,
            self.coeffs
                .iter()
                .map(|(k, c)| (k.clone(), c * Complex64::new(0.0, w * k.0[axis] as f64))),
        ))
    }

    fn check_axis(&self, axis: usize) -> Result<(), TrigPolyError> {
        if axis >= self.dim {
            return Err(TrigPolyError::InvalidAxis {
                axis,
                dim: self.dim,
            });
        }
        Ok(())
    }

    /// Multiplies by `(z_axis − 1)`.
    pub fn mul_z_minus_one(&self, axis: usize) -> Result<TrigPoly, TrigPolyError> {
        self.check_axis(axis)?;
        let shifted = self.coeffs.iter().map(|(k, c)| {
            let mut up = k.clone();
            up.0[axis] += 1;
            (up, *c)
        });
        let negated = self.coeffs.iter().map(|(k, c)| (k.clone(), -c));
        Ok(Self::from_terms(self.dim, self.denom, shifted.chain(negated)))
    }

    /// Exact division by `(z_axis − 1)` in the Laurent ring, one synthetic
    /// division per fiber of indices along `axis`.
    ///
    /// Fails with `NotDivisible` when some fiber leaves a remainder larger than
    /// [`DIVISION_TOLERANCE`] relative to the largest coefficient in that fiber,
    /// i.e. when `P` does not vanish on `x_axis = 0`.
    pub fn divide_z_minus_one(&self, axis: usize) -> Result<TrigPoly, TrigPolyError> {
        self.check_axis(axis)?;
        // Group coefficients by the remaining indices.
        let mut fibers: BTreeMap<Vec<i64>, BTreeMap<i64, Complex64>> = BTreeMap::new();
        for (k, c) in &self.coeffs {
            let mut rest = k.0.clone();
            let along = rest.remove(axis);
            fibers.entry(rest).or_default().insert(along, *c);
        }

        let mut out = Vec::with_capacity(self.coeffs.len());
        for (rest, fiber) in fibers {
            let (&lo, _) = fiber.first_key_value().expect("fiber is non-empty");
            let (&hi, _) = fiber.last_key_value().expect("fiber is non-empty");
            let scale = fiber.values().map(|c| c.norm()).fold(0.0, f64::max);
            // (z − 1)·q has coefficient q_{k−1} − q_k at k, so walk down from
            // the top: q_{hi−1} = a_hi, q_{k−1} = a_k + q_k.
            let mut q = Complex64::new(0.0, 0.0);
            for k in (lo + 1..=hi).rev() {
                q += fiber.get(&k).copied().unwrap_or_default();
                let mut idx = rest.clone();
                idx.insert(axis, k - 1);
                out.push((MultiIndex(idx), q));
            }
            let remainder = (fiber.get(&lo).copied().unwrap_or_default() + q).norm();
            if remainder > DIVISION_TOLERANCE * scale {
                return Err(TrigPolyError::NotDivisible { axis, remainder });
            }
        }
        Ok(Self::from_terms(self.dim, self.denom, out))
    }

    /// True iff `c_{−k} = conj(c_k)` for every `k` within `tol`, i.e. the
    /// polynomial is real-valued on `ℝ^d`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|(k, c)| {
            let mirror = MultiIndex(k.0.iter().map(|v| -v).collect());
            (self.coeff(&mirror) - c.conj()).norm() <= tol
        })
    }

    /// Largest coefficient-wise difference to `other` (same dim and denom).
    pub fn max_coeff_diff(&self, other: &TrigPoly) -> Result<f64, TrigPolyError> {
        self.check_compatible(other)?;
        Ok(self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max))
    }
}

/// `C(n, k)` as a float; exact for the small arguments used here.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

fn half_angle_power(n: u64, power: u32, sine: bool) -> TrigPoly {
    // sin(πx/N) = (w − w⁻¹)/(2i), cos(πx/N) = (w + w⁻¹)/2 with w = e^{πix/N},
    // a unit frequency over denominator 2N.
    let prefactor = if sine {
        Complex64::new(0.0, -0.5).powu(power)
    } else {
        Complex64::new(0.5, 0.0).powu(power)
    };
    let terms = (0..=power).map(|j| {
        let sign = if sine && (power - j) % 2 == 1 { -1.0 } else { 1.0 };
        let k = 2 * i64::from(j) - i64::from(power);
        (MultiIndex(vec![k]), prefactor * sign * binomial(power, j))
    });
    let p = TrigPoly::from_terms(1, 2 * n, terms);
    if power.is_multiple_of(2) {
        p.coarsen(n).expect("even powers only use even frequencies")
    } else {
        p
    }
}

/// `sin^M(πx/N)` as a one-dimensional polynomial: over denominator `N` when
/// `M` is even, over `2N` when `M` is odd. `M = 0` gives the constant 1.
pub fn sin_power_expand(n: u64, m: u32) -> TrigPoly {
    half_angle_power(n, m, true)
}

/// `cos^M(πx/N)`, with the same denominator convention as
/// [`sin_power_expand`].
pub fn cos_power_expand(n: u64, m: u32) -> TrigPoly {
    half_angle_power(n, m, false)
}

/// Tensor product `∏_j p_j(x_j)` of one-dimensional factors sharing a
/// denominator.
pub fn tensor(factors: &[TrigPoly]) -> Result<TrigPoly, TrigPolyError> {
    let first = factors
        .first()
        .ok_or_else(|| TrigPolyError::Invalid("tensor of no factors".into()))?;
    let denom = first.denom;
    for f in factors {
        if f.dim != 1 {
            return Err(TrigPolyError::DimMismatch {
                left: 1,
                right: f.dim,
            });
        }
        if f.denom != denom {
            return Err(TrigPolyError::DenomMismatch {
                left: denom,
                right: f.denom,
            });
        }
    }
    let mut terms: Vec<(Vec<i64>, Complex64)> = vec![(Vec::new(), Complex64::new(1.0, 0.0))];
    for f in factors {
        terms = terms
            .iter()
            .flat_map(|(k, c)| {
                f.coeffs.iter().map(move |(kf, cf)| {
                    let mut idx = k.clone();
                    idx.push(kf.0[0]);
                    (idx, c * cf)
                })
            })
            .collect();
    }
    Ok(TrigPoly::from_terms(
        factors.len(),
        denom,
        terms.into_iter().map(|(k, c)| (MultiIndex(k), c)),
    ))
}

/// Wire format: `{ "dim": d, "denom": Q, "coeffs": [[k_1, …, k_d, re, im], …] }`
/// with indices in lexicographic order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrigPolyJson {
    pub dim: usize,
    pub denom: u64,
    pub coeffs: Vec<Vec<serde_json::Number>>,
}

impl From<TrigPoly> for TrigPolyJson {
    fn from(p: TrigPoly) -> Self {
        let coeffs = p
            .coeffs
            .iter()
            .map(|(k, c)| {
                let mut row: Vec<serde_json::Number> =
                    k.0.iter().map(|&v| serde_json::Number::from(v)).collect();
                row.push(finite_number(c.re));
                row.push(finite_number(c.im));
                row
            })
            .collect();
        Self {
            dim: p.dim,
            denom: p.denom,
            coeffs,
        }
    }
}

pub(crate) fn finite_number(v: f64) -> serde_json::Number {
    serde_json::Number::from_f64(v).expect("coefficients are finite")
}

pub(crate) fn parse_point_row(
    row: &[serde_json::Number],
    dim: usize,
) -> Result<(MultiIndex, Complex64), String> {
    if row.len() != dim + 2 {
        return Err(format!("entry has {} fields, expected {}", row.len(), dim + 2));
    }
    let index = row[..dim]
        .iter()
        .map(|n| n.as_i64().ok_or_else(|| format!("index component {n} is not an integer")))
        .collect::<Result<Vec<_>, _>>()?;
    let re = row[dim].as_f64().ok_or("real part is not a number")?;
    let im = row[dim + 1].as_f64().ok_or("imaginary part is not a number")?;
    Ok((MultiIndex(index), Complex64::new(re, im)))
}

impl TryFrom<TrigPolyJson> for TrigPoly {
    type Error = TrigPolyError;

    fn try_from(raw: TrigPolyJson) -> Result<Self, Self::Error> {
        if raw.dim == 0 || raw.denom == 0 {
            return Err(TrigPolyError::Invalid("dim and denom must be positive".into()));
        }
        let terms = raw
            .coeffs
            .iter()
            .map(|row| parse_point_row(row, raw.dim))
            .collect::<Result<Vec<_>, _>>()
            .map_err(TrigPolyError::Invalid)?;
        Ok(TrigPoly::from_terms(raw.dim, raw.denom, terms))
    }
}
