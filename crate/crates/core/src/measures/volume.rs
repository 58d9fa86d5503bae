use super::{Budget, Pairing};
use crate::exec::{map_range, KahanSum};
use crate::geometry::C64;
use crate::quad::{cubature, gauss_legendre, integrate_1d, CubatureOptions, Region};
use std::f64::consts::TAU;

/// Lower cut-off of log-radius coordinates.
pub(crate) const T_FLOOR: f64 = -40.0;

/// Log-radius panels `[t_lo, t_hi]` graded towards `t_hi`, times `k` angular panels.
fn polar_panels(t_lo: f64, t_hi: f64, k: usize) -> Vec<Region<2>> {
    let mut cuts = vec![t_hi];
    let mut step = 0.25;
    while t_hi - step > t_lo {
        cuts.push(t_hi - step);
        step *= 2.0;
    }
    cuts.push(t_lo);
    let mut out = vec![];
    for w in cuts.windows(2) {
        let (hi, lo) = (w[0], w[1]);
        if hi - lo <= 0.0 {
            continue;
        }
        out.extend(Region::new([lo, 0.0], [hi, TAU]).grid([1, k]));
    }
    out
}

fn options(budget: &Budget) -> CubatureOptions {
    CubatureOptions {
        abs_tol: 1e-14,
        rel_tol: budget.rel_tol,
        max_evals: budget.max_evals,
    }
}

/// `∫ f dA` over `{t_lo < log|φ_a(z)| < t_hi}` in the unit disk.
///
/// `f(z, t)` receives the point and its Green coordinate `t = log|φ_a(z)|`.
/// Integration runs in Möbius log-polar coordinates `ζ = e^{t+iθ}`,
/// `z = (ζ + a)/(1 + āζ)`, truncated at `t = −40`.
pub fn disk_region_integral<F>(a: C64, t_lo: f64, t_hi: f64, budget: &Budget, f: F) -> Pairing
where
    F: Fn(C64, f64) -> f64 + Sync + Send,
{
    let t_lo = t_lo.max(T_FLOOR);
    let t_hi = t_hi.min(0.0);
    if t_hi <= t_lo {
        return Pairing::exact(0.0);
    }
    let one = C64::new(1.0, 0.0);
    let a_abs2 = a.norm_sqr();
    let integrand = |x: &[f64; 2], out: &mut [f64]| {
        let (t, th) = (x[0], x[1]);
        let zeta = C64::from_polar(t.exp(), th);
        let den = one + a.conj() * zeta;
        let z = if a_abs2 == 0.0 { zeta } else { (zeta + a) / den };
        let jac = (1.0 - a_abs2).powi(2) / den.norm_sqr().powi(2) * (2.0 * t).exp();
        let v = f(z, t);
        out[0] = if jac == 0.0 { 0.0 } else { v * jac };
    };
    let res = cubature(integrand, &polar_panels(t_lo, t_hi, 8), 1, &options(budget));
    Pairing {
        value: res.values[0],
        error_estimate: res.errors[0],
        evaluations: res.evals,
        converged: res.converged,
        warnings: vec![],
    }
}

/// `∫ f dV` over the shell `{e^{t_lo} < |z| < e^{t_hi}}` of the ball.
///
/// The shell is sliced by complex lines `z = λ v(s, χ)` with
/// `v = (√(1−s), √s e^{iχ})`, so `dV = ½|λ|² dA(λ) ds dχ`. The outer `(s, χ)`
/// rule is Gauss × trapezoid; each slice is integrated adaptively in
/// log-polar coordinates of `λ`. The error estimate adds the adaptive error
/// to the difference against the half-resolution outer rule.
pub fn ball_region_integral<F>(t_lo: f64, t_hi: f64, budget: &Budget, f: F) -> Pairing
where
    F: Fn(&[C64; 2], f64) -> f64 + Sync + Send,
{
    let t_lo = t_lo.max(T_FLOOR);
    let t_hi = t_hi.min(0.0);
    if t_hi <= t_lo {
        return Pairing::exact(0.0);
    }
    let panels = polar_panels(t_lo, t_hi, 4);
    let opts = options(budget);
    ball_slices(budget, |v| {
        let integrand = |x: &[f64; 2], out: &mut [f64]| {
            let (t, th) = (x[0], x[1]);
            let lam = C64::from_polar(t.exp(), th);
            let val = f(&[lam * v[0], lam * v[1]], t);
            out[0] = if val == 0.0 { 0.0 } else { 0.5 * (4.0 * t).exp() * val };
        };
        let r = cubature(integrand, &panels, 1, &opts);
        (r.values[0], r.errors[0], r.evals, r.converged)
    })
}

/// [`ball_region_integral`] for integrands smooth on every slice, using
/// nested Gauss–Kronrod rules in `log|λ|` and `arg λ` instead of the
/// two-dimensional cubature.
pub fn ball_region_integral_smooth<F>(t_lo: f64, t_hi: f64, budget: &Budget, f: F) -> Pairing
where
    F: Fn(&[C64; 2], f64) -> f64 + Sync + Send,
{
    let t_lo = t_lo.max(T_FLOOR);
    let t_hi = t_hi.min(0.0);
    if t_hi <= t_lo {
        return Pairing::exact(0.0);
    }
    ball_slices(budget, |v| {
        let mut inner_err = 0.0;
        let mut inner_evals = 0;
        let mut inner_ok = true;
        let res = integrate_1d(
            |t| {
                let rad = t.exp();
                let scale = 0.5 * (4.0 * t).exp();
                let ring = integrate_1d(
                    |th| {
                        let lam = C64::from_polar(rad, th);
                        let val = f(&[lam * v[0], lam * v[1]], t);
                        if val == 0.0 { 0.0 } else { scale * val }
                    },
                    0.0,
                    TAU,
                    1e-18,
                    0.1 * budget.rel_tol,
                    budget.max_evals / 20,
                );
                inner_err += ring.error;
                inner_evals += ring.evals;
                inner_ok &= ring.converged;
                ring.value
            },
            t_lo,
            t_hi,
            1e-16,
            budget.rel_tol,
            budget.max_evals / 200,
        );
        // Mean outer node weight times the summed inner errors.
        let err = res.error + inner_err * (t_hi - t_lo) / (res.evals as f64).max(1.0);
        (res.value, err, res.evals + inner_evals, res.converged && inner_ok)
    })
}

/// Outer Gauss × trapezoid rule over slice directions, at full and half
/// resolution.
fn ball_slices<S>(budget: &Budget, slice: S) -> Pairing
where
    S: Fn([C64; 2]) -> (f64, f64, usize, bool) + Sync + Send,
{
    let outer = |ns: usize, nchi: usize| {
        let rule = gauss_legendre(ns);
        let cells = map_range(ns * nchi, |i| {
            let (k, j) = (i / nchi, i % nchi);
            let s = 0.5 * (1.0 + rule.nodes[k]);
            let w = 0.5 * rule.weights[k] * TAU / nchi as f64;
            let chi = TAU * j as f64 / nchi as f64;
            let (v, e, n, ok) = slice([C64::new((1.0 - s).sqrt(), 0.0), C64::from_polar(s.sqrt(), chi)]);
            (w * v, w * e, n, ok)
        });
        let mut v = KahanSum::new();
        let mut e = KahanSum::new();
        let mut evals = 0;
        let mut ok = true;
        for (a, b, c, d) in cells {
            v.add(a);
            e.add(b);
            evals += c;
            ok &= d;
        }
        (v.value(), e.value(), evals, ok)
    };
    let (fine, fine_err, n1, ok1) = outer(budget.slice_s, budget.slice_chi);
    let (coarse, _, n2, ok2) = outer((budget.slice_s / 2).max(2), (budget.slice_chi / 2).max(2));
    Pairing {
        value: fine,
        error_estimate: fine_err + (fine - coarse).abs(),
        evaluations: n1 + n2,
        converged: ok1 && ok2,
        warnings: vec![],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_area_with_shifted_center() {
        let b = Budget::default();
        let a = C64::new(0.4, 0.3);
        let p = disk_region_integral(a, f64::NEG_INFINITY, 0.0, &b, |_, _| 1.0);
        assert!((p.value - std::f64::consts::PI).abs() < 1e-9, "{p:?}");
    }

    #[test]
    fn ball_volume_and_moment() {
        let b = Budget::default();
        let p = ball_region_integral(f64::NEG_INFINITY, 0.0, &b, |_, _| 1.0);
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((p.value - pi2 / 2.0).abs() < 1e-9, "{p:?}");
        // ∫_B |z₁|² dV = π²/6
        let p = ball_region_integral(f64::NEG_INFINITY, 0.0, &b, |z, _| z[0].norm_sqr());
        assert!((p.value - pi2 / 6.0).abs() < 1e-9, "{p:?}");
    }
}
