//! The weights σ_α and γ_α built on the regularised lower incomplete gamma.

use crate::error::{Error, Result};
use statrs::function::gamma::gamma;

/// Lower incomplete gamma `∫_0^x t^{a-1} e^{-t} dt` for `a > 0`, `x ≥ 0`.
///
/// Series below `x = a + 1`, Lentz continued fraction for the complement above.
pub fn lower_incomplete_gamma(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0);
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return gamma(a);
    }
    if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut k = a;
        for _ in 0..10_000 {
            k += 1.0;
            term *= x / k;
            sum += term;
            if term.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        (a * x.ln() - x).exp() * sum
    } else {
        gamma(a) - upper_incomplete_gamma_cf(a, x)
    }
}

/// `Γ(a, x)` by the modified Lentz continued fraction (valid for `x > a + 1`).
fn upper_incomplete_gamma_cf(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (a * x.ln() - x).exp() * h
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha < -1.0 {
        return Err(Error::param("alpha", format!("alpha must be ≥ -1, got {alpha}")));
    }
    Ok(())
}

fn check_u(u: f64) -> Result<()> {
    if u.is_nan() || u > 0.0 {
        return Err(Error::param("u", format!("level value must be ≤ 0, got {u}")));
    }
    Ok(())
}

/// `σ_α(u) = ∫_u^0 |r|^α e^r dr`, with `σ_{-1} ≡ 1`.
pub fn sigma_alpha(u: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_u(u)?;
    Ok(sigma_unchecked(u, alpha))
}

pub(crate) fn sigma_unchecked(u: f64, alpha: f64) -> f64 {
    if alpha == -1.0 {
        return 1.0;
    }
    if u == f64::NEG_INFINITY {
        return gamma_fn(alpha + 1.0);
    }
    lower_incomplete_gamma(alpha + 1.0, -u)
}

/// `γ_α(u) = ∫_u^0 |r|^α e^r (r − u) dr`, with `γ_{-1}(u) = −u`.
pub fn gamma_alpha(u: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_u(u)?;
    Ok(gamma_unchecked(u, alpha))
}

pub(crate) fn gamma_unchecked(u: f64, alpha: f64) -> f64 {
    if alpha == -1.0 {
        return -u;
    }
    if u == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    if u == 0.0 {
        return 0.0;
    }
    let g = -sigma_unchecked(u, alpha + 1.0) - u * sigma_unchecked(u, alpha);
    g.max(0.0)
}

/// Weight `|r|^α e^r` of the radial integrals (`α > −1`).
#[inline]
pub fn radial_weight(r: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        r.exp()
    } else {
        (-r).powf(alpha) * r.exp()
    }
}

/// `Γ(α + 1)`, the value of `σ_α(−∞)`.
pub fn gamma_fn(x: f64) -> f64 {
    if x.fract() == 0.0 && (1.0..=21.0).contains(&x) {
        return (1..x as u32).map(f64::from).product();
    }
    gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_alpha(-2.7, -1.0).unwrap(), 1.0);
        let s = sigma_alpha(-1.0, 0.0).unwrap();
        assert!((s - (1.0 - (-1f64).exp())).abs() < 1e-15);
        assert!((sigma_alpha(f64::NEG_INFINITY, 1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_alpha(-0.25, -1.0).unwrap(), 0.25);
        let g = gamma_alpha(-1.0, 0.0).unwrap();
        assert!((g - (-1f64).exp()).abs() < 1e-15);
        let g = gamma_alpha(-0.01, 0.0).unwrap();
        assert!((g / 0.5e-4 - 1.0).abs() < 0.01);
    }

    #[test]
    fn closed_form_gamma_zero() {
        for &u in &[-0.001f64, -0.3, -1.7, -5.0, -20.0, -39.0] {
            let exact = if u.abs() < 0.1 {
                (2..30).map(|k| u.powi(k) / (1..=k).map(f64::from).product::<f64>()).sum::<f64>()
            } else {
                u.exp_m1() - u
            };
            let g = gamma_unchecked(u, 0.0);
            assert!((g - exact).abs() <= 1e-14 * exact.max(1e-300) + 1e-18, "u={u}");
        }
    }

    #[test]
    fn agrees_with_statrs_regularised_gamma() {
        for &(a, x) in &[(0.3, 0.1), (1.5, 2.4), (2.0, 3.5), (4.5, 1.0), (0.7, 30.0), (6.0, 6.9)] {
            let ours = lower_incomplete_gamma(a, x) / gamma(a);
            let theirs = statrs::function::gamma::gamma_lr(a, x);
            assert!((ours - theirs).abs() < 1e-13, "a={a} x={x}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(sigma_alpha(-1.0, -1.5).is_err());
        assert!(gamma_alpha(0.5, 0.0).is_err());
    }
}
