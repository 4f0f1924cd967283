//! Direct and inverse spectral theory of N-periodic Jacobi operators
//! with complex coefficients.
//!
//! The operator acts on two-sided sequences as
//! `(L w)(n) = a(n) w(n+1) + a(n-1) w(n-1) + b(n) w(n)`
//! with `a`, `b` complex and N-periodic, `a(n) != 0`. The crate computes
//! fundamental solutions, the monodromy matrix and Hill discriminant,
//! Floquet multipliers and spectra (arcs in the complex plane), Dirichlet
//! and periodic/antiperiodic eigenvalue families, Jordan classification of
//! the double-period matrix, inverse discriminant solvers, two-spectra
//! reconstruction, and the Toda isospectral flow.

pub mod cpoly;
pub mod error;
pub mod floquet;
pub mod inverse;
pub mod linalg;
pub mod operator;
mod par;
pub mod spectral;
pub mod toda;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;

/// Shorthand constructor.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
