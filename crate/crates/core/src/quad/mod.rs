//! Quadrature primitives: Gauss–Legendre rules, adaptive Gauss–Kronrod in one
//! dimension and adaptive Genz–Malik cubature for boxes in 2–4 dimensions.

mod cubature;
mod gauss;
mod kronrod;

pub use cubature::{cubature, Cubature, CubatureOptions, Region};
pub use gauss::{gauss_legendre, GaussRule};
pub use kronrod::{integrate_1d, Integral1d};

use std::f64::consts::TAU;

/// Nodes `2πk/n` of the periodic trapezoid rule (common weight `2π/n`).
pub fn trapezoid_angles(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| TAU * k as f64 / n as f64)
}
