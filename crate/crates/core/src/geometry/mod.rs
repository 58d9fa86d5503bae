//! Model domains, exhaustion functions, Green functions and holomorphic maps.

mod domain;
mod exhaustion;
mod holo;
mod kernel;
mod point;
mod polynomial;

pub use domain::{green_function, mobius_log_abs, ModelDomain};
pub use exhaustion::{
    discrete_complex_hessian, min_hermitian_eigenvalue, Exhaustion, ExhaustionClass,
    ExhaustionKind, LevelShape,
};
pub use holo::{verify_containment, Composition, HoloFunction, HoloMap, Holomorphic};
pub use kernel::TestKernel;
pub use point::{CPoint, C64};
pub use polynomial::{polynomial_value, Monomial, Polynomial, MAX_DEGREE};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Integrability exponent `p` and radial weight `α` of a Hardy (`α = −1`) or
/// weighted Bergman space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    pub p: f64,
    pub alpha: f64,
}

impl SpaceParams {
    pub fn new(p: f64, alpha: f64) -> Result<Self> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::param("p", format!("p must be > 0, got {p}")));
        }
        if alpha.is_nan() || alpha < -1.0 || !alpha.is_finite() {
            return Err(Error::param("alpha", format!("alpha must be ≥ -1, got {alpha}")));
        }
        Ok(Self { p, alpha })
    }

    pub fn hardy(p: f64) -> Result<Self> {
        Self::new(p, -1.0)
    }

    pub fn is_hardy(&self) -> bool {
        self.alpha == -1.0
    }
}
