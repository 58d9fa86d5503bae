use crate::counting::{counting_for_map, CountingOutcome};
use crate::error::{Error, Result};
use crate::geometry::{Composition, Exhaustion, HoloFunction, HoloMap, Holomorphic, SpaceParams, C64};
use crate::identities::{plane_integral, Budgets, IdentityReport, PlaneRule};
use crate::measures::interior_ma_integral;
use crate::spaces::{bergman_norm, NormOptions};
use crate::special::sigma_unchecked;

/// `‖f∘F‖^p = ∫ σ_α(u)|f∘F|^p (dd^c u)^n + ∫_𝔻 N_{F,α}(w) Δ|f|^p dA(w)`,
/// with the left side computed directly as a Bergman norm.
pub fn compfnorm_via_counting(
    f_map: &HoloMap,
    f: &HoloFunction,
    u: &Exhaustion,
    params: SpaceParams,
    budgets: &Budgets,
    tol: f64,
) -> Result<IdentityReport> {
    let params = SpaceParams::new(params.p, params.alpha)?;
    let (p, alpha) = (params.p, params.alpha);
    let g = f_map
        .scalar()
        .ok_or_else(|| Error::Unsupported("the norm formula needs a scalar map into the unit disk".into()))?;
    if f_map.source() != u.domain() {
        return Err(Error::param("u", format!("exhaustion lives on {}, map on {}", u.domain(), f_map.source())));
    }
    if f.vars() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: f.vars() });
    }
    let comp = Composition { outer: f, inner: g };
    let norm = bergman_norm(&comp, u, params, &NormOptions::with_budget(budgets.measure))?;
    let pow = |z: C64| if p == 2.0 { z.norm_sqr() } else { z.norm().powf(p) };
    let interior = interior_ma_integral(
        u,
        |z| pow(comp.value(z.coords())),
        &|t| sigma_unchecked(t, alpha),
        None,
        &budgets.measure,
    )?;
    let mut notes = vec![];
    let (area, area_err) = if f.is_constant() || g.is_constant() {
        (0.0, 0.0)
    } else {
        let center = match u.base_pole() {
            Some(z) => g.eval(z.coords()),
            None => g.eval(&vec![C64::new(0.0, 0.0); g.vars()]),
        };
        let radius = g.coefficient_l1().min(1.0).max(center.norm() * (1.0 + 1e-9));
        let rule = PlaneRule::new(radius, center, &budgets.measure);
        let res = plane_integral(&rule, |w| {
            let (n, e) = match counting_for_map(f_map, u, w, alpha, &budgets.fiber)? {
                CountingOutcome::Finite(s) => (s.n_alpha, s.n_alpha_error),
                CountingOutcome::Infinite { .. } => (0.0, 0.0),
            };
            if n == 0.0 && e == 0.0 {
                return Ok((0.0, 0.0));
            }
            let fw = f.value(&[w]);
            let d = f.gradient(&[w])[0];
            let lap = if p == 2.0 { 4.0 * d.norm_sqr() } else { p * p * fw.norm().powf(p - 2.0) * d.norm_sqr() };
            Ok((n * lap, e * lap))
        })?;
        notes.push(format!("w-plane disk of radius {radius} centred at {center}"));
        (res.value, res.error_estimate)
    };
    let mut rep = IdentityReport::equality(
        "composition-norm",
        norm.value_p,
        interior.value + area,
        norm.error_estimate + interior.error_estimate + area_err,
        &budgets.describe(),
        tol,
    );
    rep.notes.extend(notes);
    if !norm.converged {
        rep.notes.push("norm quadrature flagged unconverged".into());
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ModelDomain, Polynomial};
    use crate::random::{random_disk_map, random_polynomial, rng};
    use std::f64::consts::{PI, TAU};

    #[test]
    fn identity_and_constants() {
        let u = Exhaustion::log_abs(ModelDomain::UnitDisk);
        let id = HoloMap::identity_disk();
        let z: HoloFunction = Polynomial::var(1, 0).into();
        let r = compfnorm_via_counting(&id, &z, &u, SpaceParams::hardy(2.0).unwrap(), &Budgets::default(), 1e-6).unwrap();
        assert!(r.pass && (r.lhs - TAU).abs() < 1e-8 && (r.rhs - TAU).abs() < 1e-6, "{r:?}");
        let c: HoloFunction = Polynomial::constant(1, C64::new(0.0, 2.0)).into();
        for a in [-1.0, 0.0, 1.5] {
            let r = compfnorm_via_counting(&id, &c, &u, SpaceParams::new(3.0, a).unwrap(), &Budgets::default(), 1e-8)
                .unwrap();
            let e = TAU * 8.0 * if a == -1.0 { 1.0 } else { crate::special::gamma_fn(a + 1.0) };
            assert!(r.pass && (r.rhs - e).abs() < 1e-12 * e, "{r:?}");
        }
    }

    #[test]
    fn ball_coordinate() {
        let u = Exhaustion::log_abs(ModelDomain::UnitBall2);
        let f = HoloMap::to_disk(Polynomial::var(2, 0), ModelDomain::UnitBall2).unwrap();
        let z: HoloFunction = Polynomial::var(1, 0).into();
        let r = compfnorm_via_counting(&f, &z, &u, SpaceParams::hardy(2.0).unwrap(), &Budgets::low(), 1e-3).unwrap();
        assert!(r.pass && (r.lhs - 2.0 * PI * PI).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn random_disk_pairs() {
        let mut g = rng(11);
        let u = Exhaustion::log_abs(ModelDomain::UnitDisk);
        for k in 0..4 {
            let f_map = random_disk_map(&mut g, ModelDomain::UnitDisk, 1 + k % 3).unwrap();
            let f: HoloFunction = random_polynomial(&mut g, 1, 2).into();
            let params = SpaceParams::new(2.0, [-1.0, 0.0, 1.0][k as usize % 3]).unwrap();
            let r = compfnorm_via_counting(&f_map, &f, &u, params, &Budgets::default(), 1e-3).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
}
