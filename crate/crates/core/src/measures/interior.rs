use super::level::level_integral;
use super::volume::ball_region_integral;
use super::{Budget, Pairing};
use crate::error::{Error, Result};
use crate::geometry::{CPoint, Exhaustion, ExhaustionKind, ModelDomain};

/// `∫_{B_u(r)} weight(u) φ (dd^c u)^n` (`r = None` means the whole domain).
///
/// Point masses contribute `mass · weight(−∞) · φ(pole)`, with the
/// convention `0 · ∞ = 0` when `φ(pole) = 0`.
pub fn interior_ma_integral<F>(
    u: &Exhaustion,
    phi: F,
    weight: &(dyn Fn(f64) -> f64 + Sync),
    r: Option<f64>,
    budget: &Budget,
) -> Result<Pairing>
where
    F: Fn(&CPoint) -> f64 + Sync + Send,
{
    ma_integral_between(u, &phi, weight, f64::NEG_INFINITY, r.unwrap_or(0.0), budget)
}

/// `∫_{lo < u < hi} weight(u) φ (dd^c u)^n`, with the point masses at
/// `u = −∞` included when `lo = −∞`.
pub fn ma_integral_between(
    u: &Exhaustion,
    phi: &(dyn Fn(&CPoint) -> f64 + Sync),
    weight: &(dyn Fn(f64) -> f64 + Sync),
    lo: f64,
    hi: f64,
    budget: &Budget,
) -> Result<Pairing> {
    if hi <= lo {
        return Ok(Pairing::exact(0.0));
    }
    let n = u.dim() as i32;
    match u.kind() {
        ExhaustionKind::LogAbs | ExhaustionKind::LogMaxAbs | ExhaustionKind::GreenPole { .. } => {
            if lo > f64::NEG_INFINITY {
                return Ok(Pairing::exact(0.0));
            }
            let mut total = 0.0;
            for (pole, mass) in u.atoms() {
                let f = phi(&pole);
                if f == 0.0 {
                    continue;
                }
                let w = weight(f64::NEG_INFINITY);
                let v = mass * w * f;
                if !v.is_finite() {
                    return Err(Error::Evaluation { node: pole.to_string(), value: v });
                }
                total += v;
            }
            Ok(Pairing::exact(total))
        }
        ExhaustionKind::SmoothSquare => {
            let t_lo = if lo <= -1.0 { f64::NEG_INFINITY } else { 0.5 * (1.0 + lo).ln() };
            let t_hi = if hi <= -1.0 { return Ok(Pairing::exact(0.0)) } else { 0.5 * (1.0 + hi).ln() };
            let p = ball_region_integral(t_lo, t_hi, budget, |z, _| {
                let uz = z[0].norm_sqr() + z[1].norm_sqr() - 1.0;
                32.0 * weight(uz) * phi(&CPoint::two(z[0], z[1]))
            });
            if !p.value.is_finite() {
                return Err(Error::Evaluation { node: "interior of the ball".into(), value: p.value });
            }
            Ok(p)
        }
        ExhaustionKind::Scaled { factor, inner } => {
            let c = *factor;
            let w = move |t: f64| weight(c * t);
            Ok(ma_integral_between(inner, phi, &w, lo / c, hi / c, budget)?.scaled(c.powi(n)))
        }
        ExhaustionKind::Truncated { level, inner } => {
            let s = *level;
            let mut out = Pairing::exact(0.0);
            if lo < s && s < hi {
                let m = level_integral(inner, s, budget, |z| phi(z))?;
                out = out.plus(m.scaled(weight(s)));
            }
            let rest = ma_integral_between(inner, phi, weight, lo.max(s), hi, budget)?;
            Ok(out.plus(rest))
        }
    }
}

/// Rejects exhaustions without a slice chart for volume integrals.
pub(crate) fn ensure_supported_volume(u: &Exhaustion) -> Result<()> {
    if u.domain() == ModelDomain::Bidisk {
        return Err(Error::Unsupported(format!(
            "volume integrals against {} (the bidisk carries no smooth slice chart)",
            u.describe()
        )));
    }
    Ok(())
}
