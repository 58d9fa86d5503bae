//! Nevanlinna counting functions `n(w,r)`, `N(w,r)` and `N_α(w)`.

mod fiber;
mod one_d;
mod sample;

pub use fiber::{fiber_quadrature_2d, FiberChart, FiberOptions};
pub use one_d::{counting_1d, roots_1d, FiberPoint};
pub use sample::{write_counting_csv, CountingMethod, CountingOutcome, CountingSample};

use crate::error::{Error, Result};
use crate::geometry::{CPoint, Exhaustion, HoloFunction, HoloMap, Holomorphic, C64};

/// Returns the pole of `u` mapped to `w` by `f`, if any.
pub(crate) fn pole_hit(f: &dyn Holomorphic, u: &Exhaustion, w: C64) -> Option<CPoint> {
    u.poles()
        .iter()
        .find(|p| (f.value(p.coords()) - w).norm() <= 1e-12 * w.norm().max(1.0))
        .copied()
}

/// `N_{F,β}(z)` for a scalar map `F` into the unit disk: root sums on the
/// disk, fiber quadrature on two-dimensional sources.
pub fn counting_for_map(
    f: &HoloMap,
    u: &Exhaustion,
    z: C64,
    beta: f64,
    opts: &FiberOptions,
) -> Result<CountingOutcome> {
    let g = f
        .scalar()
        .ok_or_else(|| Error::Unsupported("counting needs a scalar map into the unit disk".into()))?;
    if f.source() != u.domain() {
        return Err(Error::param("u", format!("exhaustion lives on {}, map on {}", u.domain(), f.source())));
    }
    if f.source().dim() == 1 {
        counting_1d(&HoloFunction::Polynomial(g.clone()), u, z, beta, &[0.0])
    } else {
        fiber_quadrature_2d(g, u, z, &[0.0], beta, opts)
    }
}

/// Evaluates many targets in parallel; results keep the input order.
pub fn counting_sweep(
    f: &HoloMap,
    u: &Exhaustion,
    targets: &[C64],
    alpha: f64,
    r_grid: &[f64],
    opts: &FiberOptions,
) -> Vec<Result<CountingOutcome>> {
    let g = f.scalar().cloned();
    crate::exec::map_slice(targets, |&w| {
        let g = g
            .clone()
            .ok_or_else(|| Error::Unsupported("counting needs a scalar map into the unit disk".into()))?;
        if f.source().dim() == 1 {
            counting_1d(&HoloFunction::Polynomial(g), u, w, alpha, r_grid)
        } else {
            fiber_quadrature_2d(&g, u, w, r_grid, alpha, opts)
        }
    })
}
