//! Level measures `μ_{u,r}`, interior Monge–Ampère integrals and the mixed
//! wedge pairing `dd^cφ ∧ (dd^cu)^{n−1}`.

mod interior;
mod level;
mod test_fn;
mod volume;
mod wedge;

pub use interior::{interior_ma_integral, ma_integral_between};
pub use level::{level_integral, level_quadrature, pair_level, LevelQuadrature, LevelRule};
pub use test_fn::{mixed_density, ModulusPower, SmoothTestFunction, TestFunction};
pub use volume::{ball_region_integral, ball_region_integral_smooth, disk_region_integral};
pub use wedge::{wedge_pairing, wedge_pairing_fn};

use serde::Serialize;

/// Quadrature budget shared by all measure computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Budget {
    /// Trapezoid nodes on circle levels.
    pub circle: usize,
    /// Trapezoid nodes per angle on torus levels.
    pub torus: usize,
    /// Trapezoid nodes per angle on sphere levels (`sphere/4` Gauss nodes in `s`).
    pub sphere: usize,
    /// Outer Gauss nodes in `s` for volume integrals over ball regions.
    pub slice_s: usize,
    /// Outer trapezoid nodes in the slice angle.
    pub slice_chi: usize,
    /// Relative tolerance of adaptive inner integrals.
    pub rel_tol: f64,
    /// Evaluation cap of each adaptive integral.
    pub max_evals: usize,
    /// Gauss nodes per radial panel in Bergman-type integrals.
    pub radial_nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            circle: 256,
            torus: 64,
            sphere: 64,
            slice_s: 12,
            slice_chi: 16,
            rel_tol: 1e-9,
            max_evals: 400_000,
            radial_nodes: 8,
        }
    }
}

impl Budget {
    pub fn low() -> Self {
        Self {
            circle: 128,
            torus: 32,
            sphere: 32,
            slice_s: 8,
            slice_chi: 8,
            rel_tol: 1e-7,
            max_evals: 100_000,
            radial_nodes: 6,
        }
    }

    pub fn doubled(&self) -> Self {
        Self {
            circle: 2 * self.circle,
            torus: 2 * self.torus,
            sphere: 2 * self.sphere,
            slice_s: 2 * self.slice_s,
            slice_chi: 2 * self.slice_chi,
            rel_tol: self.rel_tol / 4.0,
            max_evals: 4 * self.max_evals,
            radial_nodes: 2 * self.radial_nodes,
        }
    }

    pub(crate) fn level_resolution(&self, shape: &crate::geometry::LevelShape) -> usize {
        use crate::geometry::LevelShape::*;
        match shape {
            Circle { .. } => self.circle,
            Torus { .. } => self.torus,
            Sphere { .. } => self.sphere,
            Empty => 1,
        }
    }
}

/// A quadrature value with its error estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pairing {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
    pub warnings: Vec<String>,
}

impl Pairing {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
            warnings: vec![],
        }
    }

    pub(crate) fn plus(mut self, o: Pairing) -> Pairing {
        self.value += o.value;
        self.error_estimate += o.error_estimate;
        self.evaluations += o.evaluations;
        self.converged &= o.converged;
        self.warnings.extend(o.warnings);
        self
    }

    pub(crate) fn scaled(mut self, k: f64) -> Pairing {
        self.value *= k;
        self.error_estimate *= k.abs();
        self
    }
}
