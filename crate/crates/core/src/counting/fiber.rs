use super::{pole_hit, CountingMethod, CountingOutcome, CountingSample};
use crate::error::{Error, Result};
use crate::geometry::{polynomial_value, Exhaustion, ExhaustionKind, ModelDomain, Polynomial, C64};
use crate::quad::{cubature, integrate_1d, CubatureOptions, Region};
use crate::roots::{cluster_roots, poly_roots_fast};
use crate::special::gamma_unchecked;
use serde::Serialize;
use std::f64::consts::TAU;

/// Tolerances of the fiber integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiberOptions {
    /// Relative tolerance for `N(w,r)` and `N_α(w)`.
    pub rel_tol: f64,
    /// Relative tolerance for `n(w,r)`, whose integrand jumps at the level set.
    pub count_rel_tol: f64,
    pub abs_tol: f64,
    pub max_evals: usize,
}

impl Default for FiberOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-7, count_rel_tol: 1e-4, abs_tol: 1e-13, max_evals: 400_000 }
    }
}

impl FiberOptions {
    pub fn low() -> Self {
        Self { rel_tol: 1e-5, count_rel_tol: 1e-3, abs_tol: 1e-11, max_evals: 100_000 }
    }

    pub fn doubled(&self) -> Self {
        Self {
            rel_tol: self.rel_tol / 16.0,
            count_rel_tol: self.count_rel_tol / 16.0,
            abs_tol: self.abs_tol / 16.0,
            max_evals: 4 * self.max_evals,
        }
    }
}

/// Parametrisation used for the fiber `{F = w}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiberChart {
    /// `F = c(z₁² + z₂²) + d`: the fiber is `{a b = w'}` with `a = z₁ + i z₂`,
    /// `b = z₁ − i z₂`, parametrised by `a`.
    Quadric,
    /// Roots in `z₁` over a grid of `z₂`, plus vertical lines `z₂ = ζ₀`.
    Projection,
    Empty,
}

/// `Δ(u∘h)` for a holomorphic curve `h` with derivative `hp` at `z = h(ζ)`.
fn pullback_laplacian(u: &Exhaustion, z: &[C64; 2], hp: &[C64; 2]) -> f64 {
    let h = u.hessian(z);
    let mut s = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            s += (h[i][j] * hp[i] * hp[j].conj()).re;
        }
    }
    4.0 * s
}

fn supported(u: &Exhaustion) -> Result<()> {
    fn ok(k: &ExhaustionKind) -> bool {
        match k {
            ExhaustionKind::LogAbs | ExhaustionKind::GreenPole { .. } | ExhaustionKind::SmoothSquare => true,
            ExhaustionKind::Scaled { inner, .. } => ok(inner.kind()),
            _ => false,
        }
    }
    if u.domain() != ModelDomain::UnitBall2 || !ok(u.kind()) {
        return Err(Error::Unsupported(format!(
            "fiber quadrature for {} (the restricted measure is singular or unsupported)",
            u.describe()
        )));
    }
    Ok(())
}

/// Accumulated components: `N_α`, `N(r_k)`, `n(r_k)`.
struct Parts {
    values: Vec<f64>,
    errors: Vec<f64>,
    converged_n: bool,
    converged_count: bool,
}

fn add_contribution(out: &mut [f64], r_grid: &[f64], alpha: f64, uval: f64, lap: f64, weight: f64, counts: bool) {
    let k = r_grid.len();
    if counts {
        for (j, &r) in r_grid.iter().enumerate() {
            if uval < r {
                out[j] += weight * lap;
            }
        }
    } else {
        out[0] += weight * gamma_unchecked(uval, alpha) * lap;
        for (j, &r) in r_grid.iter().enumerate() {
            out[1 + j] += weight * (r - uval).max(0.0) * lap;
        }
        debug_assert_eq!(out.len(), k + 1);
    }
}

/// Integral over the quadric fiber `{a b = w'}`, radial in `|a|`.
fn quadric(u: &Exhaustion, wp: C64, r_grid: &[f64], alpha: f64) -> Parts {
    let m = wp.norm();
    let k = r_grid.len();
    let mut values = vec![0.0; 1 + 2 * k];
    let mut errors = vec![0.0; 1 + 2 * k];
    let mut conv = true;
    if m >= 1.0 {
        return Parts { values, errors, converged_n: true, converged_count: true };
    }
    let lines = if m == 0.0 { 2.0 } else { 1.0 };
    let lower = |q: f64| -> f64 {
        let s = q * q - m * m;
        // q − √(q² − m²) without cancellation.
        if m == 0.0 {
            (-80.0f64).exp()
        } else {
            (m * m / (q + s.sqrt())).sqrt()
        }
    };
    let upper = |q: f64| (q + (q * q - m * m).max(0.0).sqrt()).sqrt();
    let point = |rho: f64| {
        let a = C64::new(rho, 0.0);
        let b = wp / a;
        let bp = -b / a;
        let i = C64::new(0.0, 1.0);
        let z = [(a + b) * 0.5, (a - b) / (2.0 * i)];
        let hp = [(C64::new(1.0, 0.0) + bp) * 0.5, (C64::new(1.0, 0.0) - bp) / (2.0 * i)];
        (u.value(&z), pullback_laplacian(u, &z, &hp))
    };
    let mid = 0.5 * m.ln();
    let integrate = |q: f64, f: &dyn Fn(f64, f64) -> f64| -> (f64, f64, bool) {
        if q <= m {
            return (0.0, 0.0, true);
        }
        let (x0, x1) = (lower(q).ln(), upper(q).ln());
        let mut cuts = vec![x0];
        if m > 0.0 && mid > x0 && mid < x1 {
            cuts.push(mid);
        }
        cuts.push(x1);
        let mut acc = (0.0, 0.0, true);
        for c in cuts.windows(2) {
            let res = integrate_1d(
                |x| {
                    let rho = x.exp();
                    let (uv, lap) = point(rho);
                    f(uv, lap) * rho * rho
                },
                c[0],
                c[1],
                1e-15,
                1e-11,
                200_000,
            );
            acc.0 += res.value;
            acc.1 += res.error;
            acc.2 &= res.converged;
        }
        (TAU * lines * acc.0, TAU * lines * acc.1, acc.2)
    };
    let q_of = |r: f64| u.profile_sublevel(r).map_or(0.0, |t| (2.0 * t).exp());
    let (v, e, c) = integrate(1.0, &|uv, lap| gamma_unchecked(uv, alpha) * lap);
    values[0] = v;
    errors[0] = e;
    conv &= c;
    for (j, &r) in r_grid.iter().enumerate() {
        let q = q_of(r);
        let (v, e, c) = integrate(q, &|uv, lap| (r - uv).max(0.0) * lap);
        values[1 + j] = v;
        errors[1 + j] = e;
        conv &= c;
        let (v, e, c) = integrate(q, &|_, lap| lap);
        values[1 + k + j] = v;
        errors[1 + k + j] = e;
        conv &= c;
    }
    Parts { values, errors, converged_n: conv, converged_count: conv }
}

fn polar_regions() -> Vec<Region<2>> {
    let mut cuts = vec![0.0];
    for j in (1..=6).rev() {
        cuts.push(0.5f64.powi(j));
    }
    cuts.push(1.0);
    cuts.windows(2)
        .flat_map(|c| Region::new([c[0], 0.0], [c[1], TAU]).grid([1, 8]))
        .collect()
}

/// `∫` over polar coordinates of the unit disk of a per-point contribution.
fn polar_cubature<G>(g: G, m: usize, rel_tol: f64, opts: &FiberOptions) -> (Vec<f64>, Vec<f64>, bool)
where
    G: Fn(C64, f64, &mut [f64]) + Sync + Send,
{
    let res = cubature(
        |x: &[f64; 2], out: &mut [f64]| {
            out.iter_mut().for_each(|o| *o = 0.0);
            let zeta = C64::from_polar(x[0], x[1]);
            g(zeta, x[0], out);
        },
        &polar_regions(),
        m,
        &CubatureOptions { abs_tol: opts.abs_tol, rel_tol, max_evals: opts.max_evals },
    );
    (res.values, res.errors, res.converged)
}

/// Common roots `ζ₀` (with `|ζ₀| < 1`) of all `z₁`-coefficients: the fiber
/// contains the line `z₂ = ζ₀` with the returned multiplicity.
fn vertical_lines(coefs: &[Vec<C64>]) -> Vec<(C64, usize)> {
    let nonzero: Vec<&Vec<C64>> = coefs.iter().filter(|c| c.iter().any(|x| x.norm_sqr() > 0.0)).collect();
    let Some(base) = nonzero.iter().min_by_key(|c| c.iter().rposition(|x| x.norm_sqr() > 0.0)) else {
        return vec![];
    };
    let cands = crate::roots::roots_with_multiplicity(base);
    let order = |c: &[C64], z: C64| -> usize {
        let scale: f64 = c.iter().map(|x| x.norm()).sum::<f64>().max(1e-300);
        let mut d = c.to_vec();
        let mut k = 0;
        while !d.is_empty() && polynomial_value(&d, z).norm() <= 1e-9 * scale {
            k += 1;
            d = d.iter().enumerate().skip(1).map(|(i, x)| x * i as f64).collect();
        }
        k
    };
    cands
        .into_iter()
        .filter(|r| r.z.norm() < 1.0)
        .filter_map(|r| {
            let k = nonzero.iter().map(|c| order(c, r.z)).min().unwrap_or(0);
            (k > 0).then_some((r.z, k))
        })
        .collect()
}

fn projection(
    f: &Polynomial,
    u: &Exhaustion,
    w: C64,
    r_grid: &[f64],
    alpha: f64,
    opts: &FiberOptions,
) -> (Parts, Vec<String>) {
    let mut coefs = f.split_in(0);
    coefs[0][0] -= w;
    let deg = coefs.len() - 1;
    let mut d1 = vec![f.clone()];
    for j in 1..=deg {
        d1.push(d1[j - 1].derivative(0));
    }
    let d12: Vec<Polynomial> = d1.iter().map(|p| p.derivative(1)).collect();
    let k = r_grid.len();
    let mut warnings = vec![];

    let on_fiber = |zeta: C64, jac: f64, out: &mut [f64], counts: bool| {
        if deg == 0 {
            return;
        }
        let c: Vec<C64> = coefs.iter().map(|cz| polynomial_value(cz, zeta)).collect();
        if c.iter().all(|x| x.norm_sqr() == 0.0) {
            return;
        }
        let roots = poly_roots_fast(&c);
        for root in cluster_roots(&c, &roots, 1e-8) {
            let z = [root.z, zeta];
            if !(z[0].norm_sqr() + z[1].norm_sqr() < 1.0) {
                continue;
            }
            let m = root.multiplicity.min(deg);
            let den = d1[m].eval(&z);
            if den.norm_sqr() == 0.0 {
                continue;
            }
            let gp = -d12[m - 1].eval(&z) / den;
            let lap = pullback_laplacian(u, &z, &[gp, C64::new(1.0, 0.0)]);
            add_contribution(out, r_grid, alpha, u.value(&z), lap, jac * m as f64, counts);
        }
    };
    let (mut values, mut errors, conv_n) = polar_cubature(|z, rho, out| on_fiber(z, rho, out, false), 1 + k, opts.rel_tol, opts);
    let (cv, ce, conv_c) = if k > 0 {
        polar_cubature(|z, rho, out| on_fiber(z, rho, out, true), k, opts.count_rel_tol, opts)
    } else {
        (vec![], vec![], true)
    };
    values.extend(cv);
    errors.extend(ce);
    let mut conv_n = conv_n;
    let mut conv_c = conv_c;

    for (z0, mult) in vertical_lines(&coefs) {
        let r2 = 1.0 - z0.norm_sqr();
        if r2 <= 0.0 {
            continue;
        }
        let scale = r2.sqrt();
        let line = |t: C64, rho: f64, out: &mut [f64], counts: bool| {
            let z = [t * scale, z0];
            let lap = pullback_laplacian(u, &z, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
            add_contribution(out, r_grid, alpha, u.value(&z), lap, rho * scale * scale * mult as f64, counts);
        };
        let (v, e, c) = polar_cubature(|t, rho, out| line(t, rho, out, false), 1 + k, opts.rel_tol, opts);
        for j in 0..=k {
            values[j] += v[j];
            errors[j] += e[j];
        }
        conv_n &= c;
        if k > 0 {
            let (v, e, c) = polar_cubature(|t, rho, out| line(t, rho, out, true), k, opts.count_rel_tol, opts);
            for j in 0..k {
                values[1 + k + j] += v[j];
                errors[1 + k + j] += e[j];
            }
            conv_c &= c;
        }
        warnings.push(format!("fiber contains the line z2 = {z0} with multiplicity {mult}"));
    }
    (Parts { values, errors, converged_n: conv_n, converged_count: conv_c }, warnings)
}

fn is_quadric(f: &Polynomial) -> Option<(C64, C64)> {
    let mut c2 = [C64::new(0.0, 0.0); 2];
    let mut d = C64::new(0.0, 0.0);
    for t in f.terms() {
        match t.exp {
            [2, 0] => c2[0] = t.coef,
            [0, 2] => c2[1] = t.coef,
            [0, 0] => d = t.coef,
            _ => return None,
        }
    }
    (c2[0] == c2[1] && c2[0].norm_sqr() > 0.0).then_some((c2[0], d))
}

/// Counting functions of `F: D → ℂ` on a domain in `ℂ²` by integrating the
/// restricted measure `(dd^c u)|_{F = w}` over the fiber.
///
/// `F = c(z₁²+z₂²) + d` uses the quadric chart; otherwise the fiber is
/// parametrised by `z₂`, summing symmetrically over the `z₁`-roots of
/// `F(·, z₂) = w` (degree ≤ 4), and adding any vertical lines.
pub fn fiber_quadrature_2d(
    f: &Polynomial,
    u: &Exhaustion,
    w: C64,
    r_grid: &[f64],
    alpha: f64,
    opts: &FiberOptions,
) -> Result<CountingOutcome> {
    if f.vars() != 2 || u.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: f.vars().min(u.dim()) });
    }
    if !(alpha >= -1.0) {
        return Err(Error::param("alpha", "alpha must be ≥ -1"));
    }
    if r_grid.iter().any(|&r| !(r <= 0.0)) {
        return Err(Error::param("r_grid", "levels must be ≤ 0"));
    }
    if let Some(p) = pole_hit(f, u, w) {
        return Ok(CountingOutcome::infinite(w, p));
    }
    supported(u)?;
    let k = r_grid.len();
    let mut warnings = vec![];
    let (chart, parts) = if f.is_constant() {
        if (f.constant_term() - w).norm() <= 1e-14 * w.norm().max(1.0) {
            return Err(Error::param("w", "the fiber of a constant map at its value is the whole domain"));
        }
        let zeros = Parts { values: vec![0.0; 1 + 2 * k], errors: vec![0.0; 1 + 2 * k], converged_n: true, converged_count: true };
        (FiberChart::Empty, zeros)
    } else if let Some((c, d)) = is_quadric(f) {
        (FiberChart::Quadric, quadric(u, (w - d) / c, r_grid, alpha))
    } else {
        let g = if f.degree_in(0) <= 4 {
            f.clone()
        } else if f.degree_in(1) <= 4 {
            f.swapped()
        } else {
            return Err(Error::Unsupported(format!(
                "fiber quadrature needs degree ≤ 4 in one variable (got {} and {})",
                f.degree_in(0),
                f.degree_in(1)
            )));
        };
        let (p, wn) = projection(&g, u, w, r_grid, alpha, opts);
        warnings.extend(wn);
        (FiberChart::Projection, p)
    };
    if !parts.converged_n {
        warnings.push("N quadrature did not reach its tolerance".into());
    }
    if !parts.converged_count {
        warnings.push("n(w,r) quadrature did not reach its tolerance".into());
    }
    let v = &parts.values;
    let e = &parts.errors;
    let error_estimate = e[..=k].iter().copied().fold(0.0, f64::max);
    Ok(CountingOutcome::Finite(CountingSample {
        w,
        alpha,
        r_grid: r_grid.to_vec(),
        n_of_r: v[1 + k..].to_vec(),
        big_n_of_r: v[1..=k].to_vec(),
        n_alpha: v[0],
        error_estimate,
        n_alpha_error: e[0],
        n_of_r_error: e[1 + k..].to_vec(),
        method: CountingMethod::Fiber2d,
        chart: serde_json::to_value(chart).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
        flagged: !parts.converged_n,
        warnings,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn z1() -> Polynomial {
        Polynomial::var(2, 0)
    }

    fn ball_n(w: f64) -> f64 {
        PI * (w * w - 1.0 - 2.0 * w.ln())
    }

    #[test]
    fn projection_closed_form() {
        let u = Exhaustion::log_abs(ModelDomain::UnitBall2);
        for w in [0.3, 0.5, 0.7, 0.9] {
            let s = fiber_quadrature_2d(&z1(), &u, C64::new(0.0, w), &[0.0, -0.2], -1.0, &FiberOptions::default()).unwrap();
            let s = s.sample().unwrap().clone();
            assert!((s.n_alpha - ball_n(w)).abs() < 1e-6 * ball_n(w), "{w}: {} vs {}", s.n_alpha, ball_n(w));
            assert!((s.big_n_of_r[0] - s.n_alpha).abs() < 1e-6 * s.n_alpha);
            assert!(!s.flagged);
        }
        let z2 = Polynomial::var(2, 1);
        let s = fiber_quadrature_2d(&z2, &u, C64::new(0.5, 0.0), &[0.0], -1.0, &FiberOptions::default()).unwrap();
        assert!((s.n_alpha() - ball_n(0.5)).abs() < 1e-6 * ball_n(0.5), "{}", s.n_alpha());
    }

    #[test]
    fn quadric_against_projection() {
        let f = Polynomial::var(2, 0).pow(2).unwrap().add(&Polynomial::var(2, 1).pow(2).unwrap());
        let u = Exhaustion::smooth_square();
        let w = C64::new(0.3, 0.2);
        let q = fiber_quadrature_2d(&f, &u, w, &[-0.2], 0.0, &FiberOptions::default()).unwrap();
        let q = q.sample().unwrap().clone();
        assert_eq!(q.chart, "quadric");
        // Same fiber through the projection chart (a non-quadric rewrite of F).
        let g = f.add(&Polynomial::monomial(2, [1, 1], C64::new(1e-30, 0.0)).unwrap());
        let p = fiber_quadrature_2d(&g, &u, w, &[-0.2], 0.0, &FiberOptions::default()).unwrap();
        let p = p.sample().unwrap().clone();
        assert_eq!(p.chart, "projection");
        assert!((q.n_alpha - p.n_alpha).abs() < 1e-4 * q.n_alpha, "{} vs {}", q.n_alpha, p.n_alpha);
        assert!((q.big_n_of_r[0] - p.big_n_of_r[0]).abs() < 1e-4 * q.big_n_of_r[0]);
        assert!((q.n_of_r[0] - p.n_of_r[0]).abs() < 1e-3 * q.n_of_r[0]);
    }

    #[test]
    fn infinite_and_unsupported() {
        let zz = Polynomial::var(2, 0).mul(&Polynomial::var(2, 1)).unwrap();
        let o = fiber_quadrature_2d(&zz, &Exhaustion::log_max_abs(), C64::new(0.0, 0.0), &[0.0], -1.0, &FiberOptions::default()).unwrap();
        assert!(o.is_infinite());
        assert!(fiber_quadrature_2d(&zz, &Exhaustion::log_max_abs(), C64::new(0.1, 0.0), &[0.0], -1.0, &FiberOptions::default()).is_err());
    }

    #[test]
    fn vertical_components() {
        // F = z₂(z₁ − 0.5) at w = 0: the line z₂ = 0 and the line z₁ = 0.5.
        let f = Polynomial::var(2, 1)
            .mul(&Polynomial::var(2, 0).sub(&Polynomial::constant(2, C64::new(0.5, 0.0))))
            .unwrap();
        let u = Exhaustion::smooth_square();
        let s = fiber_quadrature_2d(&f, &u, C64::new(0.0, 0.0), &[0.0], -1.0, &FiberOptions::default()).unwrap();
        // Each line {z_j = c} meets the ball in a disk of radius² ρ² = 1 − |c|²
        // with ΔU = 4, and N = ∫ (1 − |c|² − |t|²) 4 dA = 2π ρ⁴.
        let line = |c: f64| TAU * (1.0 - c * c).powi(2);
        let exact = line(0.0) + line(0.5);
        assert!((s.n_alpha() - exact).abs() < 1e-6 * exact, "{} vs {exact}", s.n_alpha());
    }
}
