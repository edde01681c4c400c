//! Free-space Green functions of the Poisson equation in two, three and four
//! dimensions, their radial-angular expansions, and the special functions and
//! quadrature rules needed to evaluate and cross-check them.
//!
//! The crate also carries the hydrogen momentum-space wave functions written
//! through four-dimensional harmonics, and Schwinger's integral
//! representation of the momentum-space Schrödinger-Coulomb Green function.
//!
//! Atomic units (ħ = mₑ = a₀ = 1) are used throughout.

pub mod coulomb;
pub mod error;
pub mod harmonics;
pub mod hydrogen;
pub mod kernels;
pub mod polynomials;
pub mod quadrature;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Cartesian 2-vector.
pub type Vec2 = [f64; 2];
/// Cartesian 3-vector.
pub type Vec3 = [f64; 3];
/// Cartesian (Euclidean) 4-vector.
pub type Vec4 = [f64; 4];

pub(crate) fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm<const N: usize>(a: &[f64; N]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn dist_sq<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
