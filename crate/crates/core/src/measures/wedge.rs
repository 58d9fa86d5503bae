use super::interior::ensure_supported_volume;
use super::test_fn::{mixed_density, ModulusPower, TestFunction};
use super::volume::{ball_region_integral, ball_region_integral_smooth, disk_region_integral};
use super::{Budget, Pairing};
use crate::error::{Error, Result};
use crate::geometry::{Exhaustion, ExhaustionKind, Holomorphic, ModelDomain, C64};

fn has_truncation(u: &Exhaustion) -> bool {
    match u.kind() {
        ExhaustionKind::Truncated { .. } => true,
        ExhaustionKind::Scaled { inner, .. } => has_truncation(inner),
        _ => false,
    }
}

/// `∫_{B_u(r)} weight(u) dd^c|g|^p ∧ (dd^c u)^{n−1}`.
pub fn wedge_pairing(
    u: &Exhaustion,
    g: &dyn Holomorphic,
    p: f64,
    r: f64,
    weight: &(dyn Fn(f64) -> f64 + Sync),
    budget: &Budget,
) -> Result<Pairing> {
    if !(p > 0.0) {
        return Err(Error::param("p", format!("p must be > 0, got {p}")));
    }
    wedge_pairing_fn(u, &ModulusPower { g, p }, r, weight, budget)
}

/// [`wedge_pairing`] for an arbitrary test function with known complex Hessian.
pub fn wedge_pairing_fn(
    u: &Exhaustion,
    phi: &dyn TestFunction,
    r: f64,
    weight: &(dyn Fn(f64) -> f64 + Sync),
    budget: &Budget,
) -> Result<Pairing> {
    if r > 0.0 || r.is_nan() {
        return Err(Error::param("r", format!("region level must be ≤ 0, got {r}")));
    }
    if phi.dim() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), got: phi.dim() });
    }
    ensure_supported_volume(u)?;
    let Some(t_max) = u.profile_sublevel(r) else {
        return Ok(Pairing::exact(0.0));
    };
    let mut out = match u.domain() {
        ModelDomain::UnitDisk => {
            let a = u.base_pole().expect("disk exhaustions have a pole")[0];
            disk_region_integral(a, f64::NEG_INFINITY, t_max, budget, |z, t| {
                let h = phi.hessian(&[z]);
                let lap = 4.0 * h[0][0].re;
                if lap == 0.0 {
                    0.0
                } else {
                    weight(u.profile(t)) * lap
                }
            })
        }
        ModelDomain::UnitBall2 => {
            if has_truncation(u) {
                return Err(Error::Unsupported(format!(
                    "mixed wedge measure of {} in C^2 (singular part on the truncation sphere)",
                    u.describe()
                )));
            }
            let density = |z: &[C64; 2], t: f64| {
                let m = mixed_density(&phi.hessian(z), &u.hessian(z));
                if m == 0.0 {
                    0.0
                } else {
                    weight(u.profile(t)) * m
                }
            };
            if phi.is_smooth() {
                ball_region_integral_smooth(f64::NEG_INFINITY, t_max, budget, density)
            } else {
                ball_region_integral(f64::NEG_INFINITY, t_max, budget, density)
            }
        }
        ModelDomain::Bidisk => unreachable!("rejected above"),
    };
    if phi.may_be_nonintegrable() {
        out.warnings.push("p < 1: dd^c|g|^p may fail to be integrable near zeros of g".into());
    }
    if !out.value.is_finite() {
        return Err(Error::Evaluation { node: "wedge integrand".into(), value: out.value });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Polynomial, C64};
    use std::f64::consts::{E, TAU};

    #[test]
    fn disk_identity_full_domain() {
        let u = Exhaustion::log_abs(ModelDomain::UnitDisk);
        let g = Polynomial::var(1, 0);
        let w = |t: f64| -t;
        let p = wedge_pairing(&u, &g, 2.0, 0.0, &w, &Budget::default()).unwrap();
        assert!((p.value - TAU).abs() < 1e-9, "{p:?}");
    }

    #[test]
    fn disk_lelong_jensen_closed_form() {
        let u = Exhaustion::log_abs(ModelDomain::UnitDisk);
        let g = Polynomial::var(1, 0);
        let r = -0.5;
        let w = move |t: f64| r - t;
        let p = wedge_pairing(&u, &g, 2.0, r, &w, &Budget::default()).unwrap();
        assert!((p.value - TAU / E).abs() < 1e-9 * p.value, "{p:?}");
    }

    #[test]
    fn constant_has_zero_pairing_in_ball() {
        let u = Exhaustion::smooth_square();
        let g = Polynomial::constant(2, C64::new(0.7, 0.0));
        let p = wedge_pairing(&u, &g, 2.0, -0.2, &|_| 1.0, &Budget::low()).unwrap();
        assert_eq!(p.value, 0.0);
    }
}
