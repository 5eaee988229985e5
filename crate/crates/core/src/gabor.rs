//! Compactly supported windows `g = scale·∏ sin^M(πx_j/N)·F(x)·χ_{[0,N]^d}`
//! and the pointwise duality test for Gabor systems `{E_{Bm} T_n g}`.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{self, LatticeMatrix, RADIUS_SLACK};
use crate::partition::{
    self, check_pou_coeff, fixed_support_inner, max_smooth_scale, PartitionError, PouEvaluator,
};
use crate::rng;
use crate::trigpoly::{index_box, sin_power_expand, tensor, MultiIndex, TrigPoly, TrigPolyError};

/// Probe count used by [`verify_duality`] when none is given.
pub const DEFAULT_PROBES: usize = 100;

/// Duality residuals at or below this count as a pass.
pub const DUALITY_TOLERANCE: f64 = 1e-10;

/// Grid points per axis for the nonnegativity probe of `G·H`.
pub const NONNEG_GRID: usize = 64;

/// `G·H` below this on the probe grid is rejected.
pub const NONNEG_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaborError {
    #[error("sin^(2M)·G·H is not a partition of unity (max coefficient residual {max_residual:e})")]
    NotPartitionOfUnity { max_residual: f64 },
    #[error("lattice condition fails: witness n = {witness} with B#n = {image:?}")]
    LatticeConditionFailed { witness: MultiIndex, image: Vec<f64> },
    #[error("G·H = {value:e} at {x:?} is negative or not real")]
    NegativeProduct { x: Vec<f64>, value: Complex64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("evaluator-backed windows have no polynomial factor to serialize")]
    NotSerializable,
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Poly(#[from] TrigPolyError),
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
}

/// The non-sine part of a window.
#[derive(Debug, Clone)]
pub enum WindowFactor {
    Poly(TrigPoly),
    /// Only produced by [`tight_from_nonneg`], whose square root leaves the
    /// polynomial class.
    Evaluator(PouEvaluator),
}

impl WindowFactor {
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        match self {
            Self::Poly(p) => p.eval(x),
            Self::Evaluator(e) => e.eval(x),
        }
    }

    pub fn as_poly(&self) -> Option<&TrigPoly> {
        match self {
            Self::Poly(p) => Some(p),
            Self::Evaluator(_) => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Window {
    n: u64,
    d: usize,
    m: u32,
    factor: WindowFactor,
    scale: f64,
}

impl Window {
    pub fn new(n: u64, d: usize, m: u32, factor: WindowFactor, scale: f64) -> Result<Self, GaborError> {
        if n == 0 || d == 0 {
            return Err(GaborError::InvalidParameter(format!(
                "N and d must be positive, got N = {n}, d = {d}"
            )));
        }
        if let WindowFactor::Poly(p) = &factor {
            if p.dim() != d {
                return Err(TrigPolyError::DimMismatch {
                    left: d,
                    right: p.dim(),
                }
                .into());
            }
        }
        if !scale.is_finite() {
            return Err(GaborError::InvalidParameter(format!("scale {scale} is not finite")));
        }
        Ok(Self {
            n,
            d,
            m,
            factor,
            scale,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn sin_power(&self) -> u32 {
        self.m
    }

    pub fn factor(&self) -> &WindowFactor {
        &self.factor
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            scale: self.scale * c,
            ..self.clone()
        }
    }

    pub fn in_support(&self, x: &[f64]) -> bool {
        let n = self.n as f64;
        x.iter().all(|&v| (0.0..=n).contains(&v))
    }

    /// Zero outside the closed cube `[0,N]^d`.
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.d, "point has wrong dimension");
        if !self.in_support(x) {
            return Complex64::new(0.0, 0.0);
        }
        let n = self.n as f64;
        let sines: f64 = x
            .iter()
            .map(|&v| (PI * v / n).sin().powi(self.m as i32))
            .product();
        self.factor.eval(x) * (self.scale * sines)
    }

    pub fn to_json(&self) -> Result<WindowJson, GaborError> {
        let factor = self.factor.as_poly().ok_or(GaborError::NotSerializable)?.clone();
        Ok(WindowJson {
            n: self.n,
            d: self.d,
            m: self.m,
            scale: self.scale,
            factor,
        })
    }

    pub fn from_json(w: WindowJson) -> Result<Self, GaborError> {
        Self::new(w.n, w.d, w.m, WindowFactor::Poly(w.factor), w.scale)
    }
}

/// Serialized form of a polynomial-factor [`Window`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowJson {
    pub n: u64,
    pub d: usize,
    pub m: u32,
    pub scale: f64,
    pub factor: TrigPoly,
}

/// Analysis window `g`, synthesis window `h` and modulation matrix `B`.
#[derive(Debug, Clone)]
pub struct DualPair {
    analysis: Window,
    synthesis: Window,
    lattice: LatticeMatrix,
}

impl DualPair {
    /// Checks that the windows share `N` and `d` and that `B` satisfies the
    /// support condition. Duality itself is left to [`verify_duality`].
    pub fn new(analysis: Window, synthesis: Window, lattice: LatticeMatrix) -> Result<Self, GaborError> {
        if analysis.n != synthesis.n || analysis.d != synthesis.d {
            return Err(GaborError::InvalidParameter(format!(
                "windows disagree: (N, d) = ({}, {}) vs ({}, {})",
                analysis.n, analysis.d, synthesis.n, synthesis.d
            )));
        }
        if lattice.dim() != analysis.d {
            return Err(GaborError::InvalidParameter(format!(
                "lattice dimension {} does not match window dimension {}",
                lattice.dim(),
                analysis.d
            )));
        }
        require_support_condition(&lattice, analysis.n)?;
        Ok(Self {
            analysis,
            synthesis,
            lattice,
        })
    }

    pub fn analysis(&self) -> &Window {
        &self.analysis
    }

    pub fn synthesis(&self) -> &Window {
        &self.synthesis
    }

    pub fn lattice(&self) -> &LatticeMatrix {
        &self.lattice
    }

    pub fn to_json(&self) -> Result<DualPairJson, GaborError> {
        Ok(DualPairJson {
            analysis: self.analysis.to_json()?,
            synthesis: self.synthesis.to_json()?,
            lattice: self.lattice.clone(),
        })
    }

    pub fn from_json(p: DualPairJson) -> Result<Self, GaborError> {
        Self::new(
            Window::from_json(p.analysis)?,
            Window::from_json(p.synthesis)?,
            p.lattice,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualPairJson {
    pub analysis: WindowJson,
    pub synthesis: WindowJson,
    pub lattice: LatticeMatrix,
}

fn require_support_condition(b: &LatticeMatrix, n: u64) -> Result<(), GaborError> {
    let report = lattice::support_condition(b, n);
    match (report.witness, report.witness_image) {
        (Some(witness), Some(image)) => Err(GaborError::LatticeConditionFailed { witness, image }),
        _ => Ok(()),
    }
}

fn check_dims(b: &LatticeMatrix, d: usize) -> Result<(), GaborError> {
    if b.dim() != d {
        return Err(GaborError::InvalidParameter(format!(
            "lattice dimension {} does not match d = {d}",
            b.dim()
        )));
    }
    Ok(())
}

/// `∏_j sin^{2M}(πx_j/N)·G·H` over denominator `N`.
pub fn pou_product(g: &TrigPoly, h: &TrigPoly, m: u32, n: u64) -> Result<TrigPoly, GaborError> {
    if g.dim() != h.dim() {
        return Err(TrigPolyError::DimMismatch {
            left: g.dim(),
            right: h.dim(),
        }
        .into());
    }
    for q in [g.denom(), h.denom()] {
        if q != n && q != 2 * n {
            return Err(GaborError::InvalidParameter(format!(
                "factor denominator {q} must be N = {n} or 2N"
            )));
        }
    }
    let common = g.denom().max(h.denom());
    let sines = tensor(&vec![sin_power_expand(n, 2 * m); g.dim()])?;
    let p = sines
        .rebase(common)?
        .mul(&g.rebase(common)?)?
        .mul(&h.rebase(common)?)?;
    match p.coarsen(n) {
        Ok(p) => Ok(p),
        Err(_) => Err(GaborError::NotPartitionOfUnity {
            max_residual: p
                .terms()
                .filter(|(k, _)| k.0.iter().any(|v| v % 2 != 0))
                .map(|(_, c)| c.norm())
                .fold(0.0, f64::max),
        }),
    }
}

/// `g = ∏sin^M·conj(G)·χ`, `h = |det B|·∏sin^M·H·χ`.
///
/// `G` is conjugated on the analysis side so that `ḡ·h = |det B|·∏sin^{2M}·G·H`
/// for complex `G` as well.
pub fn build_pair(
    g: &TrigPoly,
    h: &TrigPoly,
    m: u32,
    n: u64,
    b: &LatticeMatrix,
) -> Result<DualPair, GaborError> {
    check_dims(b, g.dim())?;
    let p = pou_product(g, h, m, n)?;
    let report = check_pou_coeff(&p, n)?;
    if !report.pass {
        return Err(GaborError::NotPartitionOfUnity {
            max_residual: report.max_residual,
        });
    }
    require_support_condition(b, n)?;
    let d = g.dim();
    let analysis = Window::new(n, d, m, WindowFactor::Poly(g.conj()), 1.0)?;
    let synthesis = Window::new(n, d, m, WindowFactor::Poly(h.clone()), b.abs_det())?;
    DualPair::new(analysis, synthesis, b.clone())
}

/// `G = ∏_j e^{2πi x_j M/N}` over denominator `N`.
pub fn phase_factor(m: u32, n: u64, d: usize) -> TrigPoly {
    TrigPoly::monomial(d, n, MultiIndex(vec![i64::from(m); d]), Complex64::new(1.0, 0.0))
}

/// `√|det B|·(4^{N−1}/(N·C(2N−2,N−1)))^{d/2}·∏ sin^{N−1}(πx_j/N)·χ`, a window
/// generating a tight frame with bound 1.
pub fn tight_window(n: u64, d: usize, b: &LatticeMatrix) -> Result<Window, GaborError> {
    if n < 2 {
        return Err(GaborError::InvalidParameter(format!("tight window needs N ≥ 2, got {n}")));
    }
    check_dims(b, d)?;
    require_support_condition(b, n)?;
    let scale = b.abs_det().sqrt() * max_smooth_scale(n).powf(d as f64 / 2.0);
    let one = TrigPoly::constant(d, n, Complex64::new(1.0, 0.0));
    Window::new(n, d, (n - 1) as u32, WindowFactor::Poly(one), scale)
}

/// `√|det B|·∏sin^M·√(G·H)·χ` for `G·H ≥ 0`.
pub fn tight_from_nonneg(
    g: &TrigPoly,
    h: &TrigPoly,
    m: u32,
    n: u64,
    b: &LatticeMatrix,
) -> Result<Window, GaborError> {
    check_dims(b, g.dim())?;
    let p = pou_product(g, h, m, n)?;
    let report = check_pou_coeff(&p, n)?;
    if !report.pass {
        return Err(GaborError::NotPartitionOfUnity {
            max_residual: report.max_residual,
        });
    }
    require_support_condition(b, n)?;
    let d = g.dim();
    let step = n as f64 / (NONNEG_GRID - 1) as f64;
    for k in index_box(d, 0, NONNEG_GRID as i64 - 1) {
        let x: Vec<f64> = k.0.iter().map(|&i| i as f64 * step).collect();
        let v = g.eval(&x) * h.eval(&x);
        if v.re < -NONNEG_TOLERANCE || v.im.abs() > NONNEG_TOLERANCE {
            return Err(GaborError::NegativeProduct { x, value: v });
        }
    }
    let (g, h) = (g.clone(), h.clone());
    let root = PouEvaluator::new(d, move |x: &[f64]| {
        Complex64::new((g.eval(x) * h.eval(x)).re.max(0.0).sqrt(), 0.0)
    });
    Window::new(n, d, m, WindowFactor::Evaluator(root), b.abs_det().sqrt())
}

/// `g = ∏sin^L(πx_j/2)·χ` and `h = |det B|·∏sin^L(πx_j/2)·S_L(x_j)·χ` on
/// `[0,2]^d`, with `S_L = Σ_{k<L} C(2L−1,k) sin^{2(L−1−k)} cos^{2k}`.
pub fn fixed_support_pair(l: u32, d: usize, b: &LatticeMatrix) -> Result<DualPair, GaborError> {
    if l == 0 {
        return Err(GaborError::InvalidParameter("L must be positive".into()));
    }
    check_dims(b, d)?;
    require_support_condition(b, 2)?;
    let one = TrigPoly::constant(d, 2, Complex64::new(1.0, 0.0));
    let inner = tensor(&vec![fixed_support_inner(l); d])?;
    let analysis = Window::new(2, d, l, WindowFactor::Poly(one), 1.0)?;
    let synthesis = Window::new(2, d, l, WindowFactor::Poly(inner), b.abs_det())?;
    DualPair::new(analysis, synthesis, b.clone())
}

/// Outcome of [`verify_duality`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityReport {
    pub pass: bool,
    /// Largest `|Σ_k ḡ(x − B♯n + k) h(x + k) − |det B| δ_{n,0}|`.
    pub max_residual: f64,
    /// Largest deviation at `n = 0`.
    pub residual_at_zero: f64,
    /// Largest absolute sum over `n ≠ 0`.
    pub max_off_zero: f64,
    /// Every `n` with `B♯n ∈ [−N,N]^d`, in lexicographic order.
    pub shifts: Vec<MultiIndex>,
    pub probes: usize,
    pub seed: u64,
    pub abs_det: f64,
}

/// Shifts `n` with `B♯n` in the closed cube `[−N,N]^d`; all others give
/// disjoint supports.
pub fn overlapping_shifts(b: &LatticeMatrix, n: u64) -> Vec<MultiIndex> {
    let d = b.dim();
    let radius = (d as f64).sqrt() * n as f64 * b.spectral_norm() + RADIUS_SLACK;
    let r = radius.floor() as i64;
    let limit = n as f64 + lattice::BOUNDARY_GUARD;
    index_box(d, -r, r)
        .filter(|k| {
            let norm2: i64 = k.0.iter().map(|v| v * v).sum();
            norm2 as f64 <= radius * radius
                && b.sharp_apply(&k.0).iter().all(|v| v.abs() <= limit)
        })
        .collect()
}

/// `Σ_k conj(g(x − s + k))·h(x + k)` over the `k` keeping `x + k` in the
/// support of `h`.
pub fn correlation(g: &Window, h: &Window, x: &[f64], s: &[f64]) -> Complex64 {
    let d = h.dim();
    let lows: Vec<i64> = x.iter().map(|&v| (-v).ceil() as i64).collect();
    let highs: Vec<i64> = x.iter().map(|&v| (h.n() as f64 - v).floor() as i64).collect();
    crate::trigpoly::index_range(lows, highs)
        .map(|k| {
            let xk: Vec<f64> = x.iter().zip(&k.0).map(|(a, &b)| a + b as f64).collect();
            let gx: Vec<f64> = xk.iter().zip(s).map(|(a, b)| a - b).collect();
            debug_assert_eq!(gx.len(), d);
            g.eval(&gx).conj() * h.eval(&xk)
        })
        .sum()
}

pub fn verify_duality(pair: &DualPair, probes: usize) -> DualityReport {
    verify_duality_seeded(pair, probes, rng::DEFAULT_SEED)
}

/// Checks the pointwise duality condition at `probes` random `x ∈ [0,1)^d`
/// (the sums are `ℤ^d`-periodic in `x`) for every overlapping shift.
pub fn verify_duality_seeded(pair: &DualPair, probes: usize, seed: u64) -> DualityReport {
    let (g, h, b) = (&pair.analysis, &pair.synthesis, &pair.lattice);
    let abs_det = b.abs_det();
    let shifts = overlapping_shifts(b, g.n());
    let mut rng = rng::seeded(seed);
    let points = rng::unit_cube_points(&mut rng, g.dim(), probes);
    let mut residual_at_zero: f64 = 0.0;
    let mut max_off_zero: f64 = 0.0;
    for n in &shifts {
        let s = b.sharp_apply(&n.0);
        for x in &points {
            let v = correlation(g, h, x, &s);
            if n.is_zero() {
                residual_at_zero = residual_at_zero.max((v - abs_det).norm());
            } else {
                max_off_zero = max_off_zero.max(v.norm());
            }
        }
    }
    let max_residual = residual_at_zero.max(max_off_zero);
    DualityReport {
        pass: max_residual <= DUALITY_TOLERANCE,
        max_residual,
        residual_at_zero,
        max_off_zero,
        shifts,
        probes,
        seed,
        abs_det,
    }
}

/// One row of a window table.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSample {
    pub x: Vec<f64>,
    pub value: Complex64,
}

/// Samples on the grid `{0, s, 2s, …}^d ∩ [0,N]^d`, last axis fastest.
pub fn sample_window_grid(w: &Window, step: f64) -> Result<Vec<GridSample>, GaborError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(GaborError::InvalidParameter(format!("step must be positive, got {step}")));
    }
    let count = (w.n() as f64 / step + 1e-9).floor() as i64;
    Ok(index_box(w.dim(), 0, count)
        .map(|k| {
            let x: Vec<f64> = k.0.iter().map(|&i| i as f64 * step).collect();
            let value = w.eval(&x);
            GridSample { x, value }
        })
        .collect())
}

/// Writes `x1,…,xd,re,im` rows with 17 significant digits.
pub fn write_grid_csv<W: Write>(rows: &[GridSample], dim: usize, mut out: W) -> io::Result<()> {
    let header: Vec<String> = (1..=dim)
        .map(|i| format!("x{i}"))
        .chain(["re".to_string(), "im".to_string()])
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let fields: Vec<String> = row
            .x
            .iter()
            .copied()
            .chain([row.value.re, row.value.im])
            .map(|v| format!("{v:.16e}"))
            .collect();
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

/// `(G, H) = (∏e^{2πi x_j M/N}, A_{2M})` with `A_{2M}` the particular
/// solution of the smooth partition system with frequency budget `K`.
pub fn phase_factorization(
    k: u32,
    n: u64,
    m: u32,
    d: usize,
    symmetry: bool,
) -> Result<(TrigPoly, TrigPoly), GaborError> {
    let prob = partition::PouProblem::new(k, n, 2 * m, d)?;
    let sol = partition::solve_pou(&prob, symmetry)?;
    Ok((phase_factor(m, n, d), sol.residual_poly(&[])))
}
