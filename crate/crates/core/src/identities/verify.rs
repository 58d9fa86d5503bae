use super::plane::{plane_integral, PlaneRule};
use super::report::{IdentityPoint, IdentityReport};
use crate::counting::{counting_1d, fiber_quadrature_2d, CountingOutcome, FiberOptions};
use crate::error::{Error, Result};
use crate::geometry::{
    mobius_log_abs, CPoint, Exhaustion, ExhaustionKind, HoloFunction, HoloMap, Holomorphic, ModelDomain,
    Polynomial, SpaceParams, C64,
};
use crate::measures::{
    interior_ma_integral, level_integral, level_quadrature, wedge_pairing, Budget,
};
use crate::quad::gauss_legendre;
use crate::spaces::{bergman_norm, NormOptions};
use crate::special::sigma_unchecked;
use serde::Serialize;
use std::f64::consts::TAU;

/// Quadrature budgets for measures and fiber integrals.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Budgets {
    pub measure: Budget,
    pub fiber: FiberOptions,
}

impl Default for Budgets {
    fn default() -> Self {
        Self { measure: Budget::default(), fiber: FiberOptions::default() }
    }
}

impl Budgets {
    pub fn low() -> Self {
        Self { measure: Budget::low(), fiber: FiberOptions::low() }
    }

    pub fn doubled(&self) -> Self {
        Self { measure: self.measure.doubled(), fiber: self.fiber.doubled() }
    }

    pub fn describe(&self) -> String {
        let m = &self.measure;
        format!(
            "circle {} torus {} sphere {} slice {}x{} radial {} rel_tol {:e} evals {}; fiber rel_tol {:e} evals {}",
            m.circle, m.torus, m.sphere, m.slice_s, m.slice_chi, m.radial_nodes, m.rel_tol, m.max_evals,
            self.fiber.rel_tol, self.fiber.max_evals
        )
    }
}

fn abs_pow(z: C64, p: f64) -> f64 {
    if p == 2.0 {
        z.norm_sqr()
    } else {
        z.norm().powf(p)
    }
}

/// Counting functions of a polynomial on its natural domain.
fn count(
    f: &Polynomial,
    u: &Exhaustion,
    w: C64,
    alpha: f64,
    r_grid: &[f64],
    fiber: &FiberOptions,
) -> Result<CountingOutcome> {
    if f.vars() == 1 {
        counting_1d(&HoloFunction::Polynomial(f.clone()), u, w, alpha, r_grid)
    } else {
        fiber_quadrature_2d(f, u, w, r_grid, alpha, fiber)
    }
}

/// `(N_α(w), error)` or `(N(w, r_grid[0]), error)`; the infinite-counting
/// condition contributes zero, being confined to finitely many `w`.
fn counted(o: CountingOutcome, use_r: bool) -> (f64, f64) {
    match o {
        CountingOutcome::Finite(s) => {
            if use_r {
                (s.big_n_of_r[0], s.error_estimate)
            } else {
                (s.n_alpha, s.n_alpha_error)
            }
        }
        CountingOutcome::Infinite { .. } => (0.0, 0.0),
    }
}

fn green(domain: ModelDomain, z0: CPoint) -> Result<Exhaustion> {
    match domain {
        ModelDomain::UnitDisk => Exhaustion::green_pole(domain, z0),
        _ => {
            if !z0.is_origin() {
                return Err(Error::Unsupported(format!("Green pole {z0} in C^2 (only the origin is supported)")));
            }
            Ok(Exhaustion::log_abs(domain))
        }
    }
}

/// `μ_{u,r}(φ) − ∫_{B_u(r)} φ (dd^c u)^n = ∫_{B_u(r)} (r − u) dd^c φ ∧ (dd^c u)^{n−1}`
/// for `φ = |g|^p`.
pub fn verify_lelong_jensen(
    u: &Exhaustion,
    g: &dyn Holomorphic,
    p: f64,
    r: f64,
    budgets: &Budgets,
    tol: f64,
) -> Result<IdentityReport> {
    let b = &budgets.measure;
    let phi = |z: &CPoint| abs_pow(g.value(z.coords()), p);
    let level = level_integral(u, r, b, phi)?;
    let interior = interior_ma_integral(u, phi, &|_| 1.0, Some(r), b)?;
    let wedge = wedge_pairing(u, g, p, r, &|t| r - t, b)?;
    let mut rep = IdentityReport::equality(
        "lelong-jensen",
        level.value - interior.value,
        wedge.value,
        level.error_estimate + interior.error_estimate + wedge.error_estimate,
        &budgets.describe(),
        tol,
    );
    for w in level.warnings.iter().chain(&interior.warnings).chain(&wedge.warnings) {
        rep.notes.push(w.clone());
    }
    if !(interior.converged && wedge.converged) {
        rep.notes.push("adaptive quadrature stopped at its evaluation cap".into());
    }
    Ok(rep)
}

/// `‖f‖^p = (2π)^n σ_α(−∞) |f(z₀)|^p + ∫ N_α(w) Δ|w|^p dA(w)` for the Green
/// exhaustion with pole `z₀`.
pub fn verify_littlewood_paley(
    f: &Polynomial,
    domain: ModelDomain,
    z0: CPoint,
    params: SpaceParams,
    budgets: &Budgets,
    tol: f64,
) -> Result<IdentityReport> {
    let params = SpaceParams::new(params.p, params.alpha)?;
    if f.vars() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), got: f.vars() });
    }
    domain.check(&z0)?;
    let u = green(domain, z0)?;
    let (p, alpha) = (params.p, params.alpha);
    let norm = bergman_norm(f, &u, params, &NormOptions::with_budget(budgets.measure))?;
    let n = domain.dim() as i32;
    let f0 = f.value(z0.coords());
    let atom = TAU.powi(n) * sigma_unchecked(f64::NEG_INFINITY, alpha) * abs_pow(f0, p);
    let mut notes = vec![];
    let (area, area_err) = if f.is_constant() {
        (0.0, 0.0)
    } else {
        let radius = f.coefficient_l1();
        let rule = PlaneRule::new(radius, f0, &budgets.measure);
        let res = plane_integral(&rule, |w| {
            let (v, e) = counted(count(f, &u, w, alpha, &[0.0], &budgets.fiber)?, false);
            let lap = p * p * w.norm().powf(p - 2.0);
            Ok((v * lap, e * lap))
        })?;
        notes.push(format!("w-plane disk of radius {radius} centred at f(z0); the fiber through the pole is excluded (a single point)"));
        (res.value, res.error_estimate)
    };
    let mut rep = IdentityReport::equality(
        "littlewood-paley",
        norm.value_p,
        atom + area,
        norm.error_estimate + area_err,
        &budgets.describe(),
        tol,
    );
    rep.notes.extend(notes);
    if !norm.converged {
        rep.notes.push("norm quadrature flagged unconverged".into());
    }
    Ok(rep)
}

/// Outer edge of the image of the level set `S_u(r)`, in the Möbius-polar
/// radius of `rule`; `N(·, r)` has a kink there.
fn level_image_breaks(f: &Polynomial, u: &Exhaustion, r: f64, rule: &PlaneRule) -> Vec<f64> {
    let Ok(q) = level_quadrature(u, r, 64) else { return vec![] };
    if q.nodes.is_empty() {
        return vec![];
    }
    let s: Vec<f64> = q.nodes.iter().map(|(z, _)| rule.s_of(f.value(z.coords()))).collect();
    vec![s.iter().copied().fold(0.0, f64::max)]
}

/// `∫_{B_u(r)} (r − u) (dd^c u)^{n−1} ∧ dd^c (v∘F) = ∫ N(w, r) dd^c v` for
/// `v = |w|^q`.
pub fn verify_change_of_variables(
    f: &Polynomial,
    u: &Exhaustion,
    q: f64,
    r: f64,
    budgets: &Budgets,
    tol: f64,
) -> Result<IdentityReport> {
    if !(q > 0.0) {
        return Err(Error::param("q", "target exponent must be > 0"));
    }
    if f.vars() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), got: f.vars() });
    }
    let lhs = wedge_pairing(u, f, q, r, &|t| r - t, &budgets.measure)?;
    let (rhs, rhs_err) = if f.is_constant() {
        (0.0, 0.0)
    } else {
        let center = u.base_pole().map_or(C64::new(0.0, 0.0), |p| f.value(p.coords()));
        let mut rule = PlaneRule::new(f.coefficient_l1(), center, &budgets.measure);
        rule.breaks = level_image_breaks(f, u, r, &rule);
        let res = plane_integral(&rule, |w| {
            let (v, e) = counted(count(f, u, w, -1.0, &[r], &budgets.fiber)?, true);
            let lap = q * q * w.norm().powf(q - 2.0);
            Ok((v * lap, e * lap))
        })?;
        (res.value, res.error_estimate)
    };
    Ok(IdentityReport::equality(
        "change-of-variables",
        lhs.value,
        rhs,
        lhs.error_estimate + rhs_err,
        &budgets.describe(),
        tol,
    ))
}

/// `μ_{u,r}(φ∘f) ≤ (2π)^{n−1} μ_{v,r}(φ)` with `u` the Green function of the
/// source with pole `z₀` and `v` the disk Green function with pole `f(z₀)`.
pub fn verify_subordination(
    f: &HoloMap,
    z0: CPoint,
    g: &dyn Holomorphic,
    p: f64,
    r_grid: &[f64],
    budgets: &Budgets,
) -> Result<IdentityReport> {
    let fs = f
        .scalar()
        .ok_or_else(|| Error::Unsupported("subordination needs a map into the unit disk".into()))?;
    if g.vars() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: g.vars() });
    }
    let u = green(f.source(), z0)?;
    let w0 = f.eval(&z0)?[0];
    let v = Exhaustion::disk_green(w0)?;
    let n = f.source().dim() as i32;
    let slack = 1e-7;
    let b = &budgets.measure;
    let mut points = vec![];
    let mut err = 0.0;
    for &r in r_grid {
        let l = level_integral(&u, r, b, |z| abs_pow(g.value(&[fs.value(z.coords())]), p))?;
        let rv = level_integral(&v, r, b, |w| abs_pow(g.value(w.coords()), p))?;
        let rhs = TAU.powi(n - 1) * rv.value;
        err += l.error_estimate + rv.error_estimate;
        points.push(IdentityPoint {
            label: format!("r={r}"),
            lhs: l.value,
            rhs,
            holds: l.value <= rhs * (1.0 + slack) + 1e-300,
        });
    }
    Ok(IdentityReport::inequality("subordination", points, err, &budgets.describe(), slack))
}

/// `N_u(w) ≤ −(2π)^n log|(w₀ − w)/(1 − w̄₀ w)|` with `u` the Green function
/// with pole `z₀` and `w₀ = f(z₀)`.
pub fn verify_log_bound(f: &HoloMap, z0: CPoint, w_grid: &[C64], budgets: &Budgets) -> Result<IdentityReport> {
    let fs = f
        .scalar()
        .ok_or_else(|| Error::Unsupported("the logarithmic bound needs a map into the unit disk".into()))?;
    let u = green(f.source(), z0)?;
    let w0 = f.eval(&z0)?[0];
    let n = f.source().dim() as i32;
    let slack = 1e-6;
    let rows = crate::exec::map_slice(w_grid, |&w| -> Result<IdentityPoint> {
        let bound = -TAU.powi(n) * mobius_log_abs(w, w0);
        let o = count(fs, &u, w, -1.0, &[0.0], &budgets.fiber)?;
        let lhs = o.n_alpha();
        Ok(IdentityPoint {
            label: format!("w={w}"),
            lhs,
            rhs: bound,
            holds: bound == f64::INFINITY || lhs <= bound * (1.0 + slack),
        })
    });
    let points = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(IdentityReport::inequality("log-bound", points, 0.0, &budgets.describe(), slack))
}

/// Sample points of the support of `(dd^c u)^n`.
fn ma_support_samples(u: &Exhaustion) -> Result<Vec<CPoint>> {
    match u.kind() {
        ExhaustionKind::LogAbs | ExhaustionKind::LogMaxAbs | ExhaustionKind::GreenPole { .. } => {
            Ok(u.atoms().into_iter().map(|(p, _)| p).collect())
        }
        ExhaustionKind::Scaled { inner, .. } => ma_support_samples(inner),
        ExhaustionKind::SmoothSquare => {
            let mut pts = vec![CPoint::origin(2)];
            for k in 1..=16 {
                let r = -1.0 + k as f64 / 16.0 - 1e-9;
                pts.extend(level_quadrature(u, r, 16)?.nodes.into_iter().map(|(z, _)| z));
            }
            Ok(pts)
        }
        ExhaustionKind::Truncated { level, inner } => {
            let mut pts: Vec<CPoint> = level_quadrature(inner, *level, 64)?.nodes.into_iter().map(|(z, _)| z).collect();
            if u.dim() == 2 {
                pts.extend(ma_support_samples(inner)?.into_iter().filter(|z| inner.value(z.coords()) > *level));
            }
            Ok(pts)
        }
    }
}

/// `N_{u,α}(w₀) ≤ (πρ²)^{-1} ∫_{D(w₀,ρ)} N_{u,α} dA` for `ρ` below the
/// distance from `w₀` to the image of the support of `(dd^c u)^n`.
pub fn verify_mean_value(
    f: &Polynomial,
    u: &Exhaustion,
    alpha: f64,
    w0: C64,
    rho: f64,
    budgets: &Budgets,
) -> Result<IdentityReport> {
    if f.vars() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), got: f.vars() });
    }
    let support = ma_support_samples(u)?;
    let dist = support
        .iter()
        .map(|z| (f.value(z.coords()) - w0).norm())
        .fold(f64::INFINITY, f64::min);
    if !(rho > 0.0 && rho < dist * (1.0 - 1e-3)) {
        return Err(Error::Precondition(format!(
            "rho = {rho} must be positive and below the distance {dist} from w0 to f(supp (dd^c u)^n)"
        )));
    }
    let center = count(f, u, w0, alpha, &[0.0], &budgets.fiber)?;
    let (lhs, lhs_err) = counted(center, false);
    let nr = 2 * budgets.measure.radial_nodes;
    let na = 2 * budgets.measure.slice_chi;
    let mean = |n: usize, m: usize| -> Result<(f64, f64)> {
        let rule = gauss_legendre(n);
        let mut nodes = vec![];
        for (t, wt) in rule.on(0.0, rho) {
            for k in 0..m {
                nodes.push((w0 + C64::from_polar(t, TAU * k as f64 / m as f64), wt * t * TAU / m as f64));
            }
        }
        let vals = crate::exec::map_slice(&nodes, |(w, _)| count(f, u, *w, alpha, &[0.0], &budgets.fiber));
        let mut acc = crate::exec::KahanSum::new();
        let mut err = 0.0;
        for ((_, wt), v) in nodes.iter().zip(vals) {
            let (v, e) = counted(v?, false);
            acc.add(wt * v);
            err += wt * e;
        }
        let area = std::f64::consts::PI * rho * rho;
        Ok((acc.value() / area, err / area))
    };
    let (fine, ferr) = mean(nr, na)?;
    let (coarse, _) = mean(nr / 2, na / 2)?;
    let err = ferr + (fine - coarse).abs() + lhs_err;
    let rel = (err / fine.abs().max(1e-300)).max(1e-12);
    let point = IdentityPoint {
        label: format!("w0={w0}, rho={rho}"),
        lhs,
        rhs: fine,
        holds: lhs <= fine * (1.0 + 2.0 * rel),
    };
    Ok(IdentityReport::inequality("mean-value", vec![point], err, &budgets.describe(), 2.0 * rel))
}

/// `m μ_{v,r}(φ) = μ_{v*,r}(φ∘f)` for `f(z) = z^m`, `v = log|w|` and
/// `v* = v∘f = m log|z|`.
pub fn verify_proper_pushforward(
    m: u32,
    phi: &(dyn Fn(C64) -> f64 + Sync),
    r: f64,
    budgets: &Budgets,
    tol: f64,
) -> Result<IdentityReport> {
    if m == 0 {
        return Err(Error::param("m", "multiplicity must be ≥ 1"));
    }
    let v = Exhaustion::log_abs(ModelDomain::UnitDisk);
    let vstar = Exhaustion::scaled(m as f64, v.clone())?;
    let b = &budgets.measure;
    let lhs = level_integral(&v, r, b, |w| phi(w[0]))?;
    let rhs = level_integral(&vstar, r, b, |z| phi(z[0].powu(m)))?;
    Ok(IdentityReport::equality(
        "proper-pushforward",
        m as f64 * lhs.value,
        rhs.value,
        m as f64 * lhs.error_estimate + rhs.error_estimate,
        &budgets.describe(),
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn zk(k: u32) -> Polynomial {
        Polynomial::var(1, 0).pow(k).unwrap()
    }

    fn disk() -> Exhaustion {
        Exhaustion::log_abs(ModelDomain::UnitDisk)
    }

    #[test]
    fn lelong_jensen_examples() {
        let b = Budgets::default();
        let r = verify_lelong_jensen(&disk(), &zk(1), 2.0, -0.5, &b, 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.lhs - TAU * (-1.0f64).exp()).abs() < 1e-12);
        let one = Polynomial::constant(1, C64::new(1.0, 0.0));
        let r = verify_lelong_jensen(&disk(), &one, 2.0, -0.5, &b, 1e-8).unwrap();
        assert!(r.pass && r.lhs.abs() < 1e-12 && r.rhs == 0.0);
        let z1 = Polynomial::var(2, 0);
        let r = verify_lelong_jensen(&Exhaustion::smooth_square(), &z1, 2.0, -0.5, &Budgets::low(), 1e-3).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn littlewood_paley_disk() {
        for k in 1..=3 {
            let r = verify_littlewood_paley(&zk(k), ModelDomain::UnitDisk, CPoint::real1(0.0), SpaceParams::hardy(2.0).unwrap(), &Budgets::default(), 1e-6).unwrap();
            assert!(r.pass, "{r:?}");
            assert!((r.rhs - TAU).abs() < 1e-6 * TAU);
        }
        let c = Polynomial::constant(1, C64::new(0.5, 0.5));
        let r = verify_littlewood_paley(&c, ModelDomain::UnitDisk, CPoint::real1(0.2), SpaceParams::new(2.0, 1.0).unwrap(), &Budgets::default(), 1e-10).unwrap();
        assert!(r.pass, "{r:?}");
        let one = Polynomial::constant(1, C64::new(1.0, 0.0));
        let r = verify_littlewood_paley(&one, ModelDomain::UnitDisk, CPoint::real1(0.0), SpaceParams::new(2.0, 0.0).unwrap(), &Budgets::default(), 1e-12).unwrap();
        assert_eq!(r.rhs, TAU);
        assert!(r.pass);
        let f = Polynomial::univariate(&[C64::new(0.2, 0.0), C64::new(0.5, 0.1), C64::new(0.0, -0.3)]);
        let r = verify_littlewood_paley(&f, ModelDomain::UnitDisk, CPoint::real1(0.3), SpaceParams::new(2.0, 0.5).unwrap(), &Budgets::default(), 1e-4).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn change_of_variables_disk() {
        let r = verify_change_of_variables(&zk(1), &disk(), 2.0, -0.3, &Budgets::default(), 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
        let c = Polynomial::constant(1, C64::new(0.5, 0.0));
        let r = verify_change_of_variables(&c, &disk(), 2.0, -0.3, &Budgets::default(), 1e-8).unwrap();
        assert!(r.pass && r.lhs == 0.0 && r.rhs == 0.0);
    }

    #[test]
    fn subordination_and_bounds() {
        let b = Budgets::default();
        let f = HoloMap::to_disk(zk(2), ModelDomain::UnitDisk).unwrap();
        let rep = verify_subordination(&f, CPoint::real1(0.0), &zk(1), 2.0, &[-2.0, -1.0, -0.5, -0.1], &b).unwrap();
        assert!(rep.pass);
        for p in &rep.points {
            let r: f64 = p.label[2..].parse().unwrap();
            assert!((p.lhs - TAU * (4.0 * r).exp()).abs() < 1e-12);
            assert!((p.rhs - TAU * (2.0 * r).exp()).abs() < 1e-12);
        }
        let c = HoloMap::to_disk(Polynomial::constant(1, C64::new(0.3, 0.1)), ModelDomain::UnitDisk).unwrap();
        let rep = verify_subordination(&c, CPoint::real1(0.2), &zk(1), 2.0, &[-1.0, -0.1], &b).unwrap();
        assert!(rep.pass && (rep.lhs - TAU * 0.1).abs() < 1e-12);
        let one = Polynomial::constant(1, C64::new(0.7, 0.0));
        let rep = verify_subordination(&c, CPoint::real1(0.2), &one, 2.0, &[-1.0, -0.1], &b).unwrap();
        assert!(rep.pass && (rep.lhs - rep.rhs).abs() < 1e-12);

        let grid: Vec<C64> = (0..6).map(|k| C64::from_polar(0.5 + 0.098 * k as f64, 0.3 * k as f64)).collect();
        for k in 1..=3 {
            let f = HoloMap::to_disk(zk(k), ModelDomain::UnitDisk).unwrap();
            let rep = verify_log_bound(&f, CPoint::real1(0.0), &grid, &b).unwrap();
            assert!(rep.pass);
        }
        let f = HoloMap::to_disk(zk(1), ModelDomain::UnitDisk).unwrap();
        let rep = verify_log_bound(&f, CPoint::real1(0.0), &[C64::new(0.0, 0.0)], &b).unwrap();
        assert!(rep.pass && rep.rhs == f64::INFINITY);
    }

    #[test]
    fn mean_value_examples() {
        let b = Budgets::default();
        let r = verify_mean_value(&zk(2), &disk(), -1.0, C64::new(0.5, 0.0), 0.2, &b).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.lhs - r.rhs).abs() < 1e-8, "{} {}", r.lhs, r.rhs);
        let r = verify_mean_value(&zk(1), &disk(), 0.0, C64::new(0.5, 0.0), 0.3, &b).unwrap();
        assert!(r.pass && r.lhs < r.rhs);
        assert!(verify_mean_value(&zk(1), &disk(), 0.0, C64::new(0.5, 0.0), 0.6, &b).is_err());
    }

    #[test]
    fn pushforward_examples() {
        let b = Budgets::default();
        let r = verify_proper_pushforward(2, &|w: C64| w.norm_sqr(), -0.4, &b, 1e-12).unwrap();
        assert!(r.pass);
        assert!((r.lhs - 4.0 * PI * (-0.8f64).exp()).abs() < 1e-12);
        let r = verify_proper_pushforward(3, &|_| 1.0, -0.4, &b, 1e-12).unwrap();
        assert!((r.lhs - 6.0 * PI).abs() < 1e-12 && r.pass);
    }
}
