//! Trigonometric-polynomial partitions of unity and the dual Gabor frames
//! they generate.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: small dense complex linear algebra (affine solve, inverse,
//!   spectral norm by Jacobi iteration).
//! - [`trigpoly`]: sparse multivariate trigonometric polynomials
//!   `P(x) = Σ c_k e^{2πi k·x/Q}` with exact integer frequency lookups.
//! - [`partition`]: partition-of-unity tests, the sine-power factorization
//!   that measures smoothness, the linear constraint system for smooth
//!   partitions, and closed-form builders.
//! - [`lattice`]: modulation matrices `B`, the dual matrix `B♯ = (Bᵀ)⁻¹`,
//!   the support condition `B♯n ∉ (−N,N)ᵈ` and coset representatives.
//! - [`gabor`]: window pairs on `L²(ℝᵈ)` and the pointwise duality test.
//! - [`discrete`]: sampled windows on `ℓ²(ℤᵈ)`, discrete duality and finite
//!   reconstruction.
//! - [`cli`]: the command layer behind the `gaborpou` binary.
//!
//! Runnable walkthroughs of each capability live in `examples/`.

pub mod cli;
pub mod discrete;
pub mod gabor;
pub mod lattice;
pub mod linalg;
pub mod partition;
pub mod rng;
pub mod trigpoly;

pub use num_complex::Complex64;
