use super::norms::radial_panels;
use crate::error::{Error, Result};
use crate::exec::{map_slice, KahanSum};
use crate::geometry::{Exhaustion, ExhaustionKind, HoloMap, Holomorphic, LevelShape, C64};
use crate::measures::{Budget, LevelRule};
use crate::quad::gauss_legendre;
use crate::special::radial_weight;
use serde::Serialize;
use std::f64::consts::TAU;

/// Quadrature controls for [`carleson_window`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CarlesonOptions {
    pub budget: Budget,
    pub dyadic_panels: usize,
    pub t_max: f64,
}

impl Default for CarlesonOptions {
    fn default() -> Self {
        Self { budget: Budget::default(), dyadic_panels: 20, t_max: 40.0 }
    }
}

impl CarlesonOptions {
    /// Level resolution doubled once, radial nodes unchanged.
    pub fn refined(&self) -> Self {
        let mut b = self.budget;
        b.circle *= 2;
        b.torus *= 2;
        b.sphere *= 2;
        Self { budget: b, ..*self }
    }
}

/// Least-squares growth exponent of `ν` against `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum ExponentFit {
    /// Slope of `log ν` against `log s` with a leave-one-out half-width.
    Finite { exponent: f64, half_width: f64 },
    /// `ν` vanishes at the smallest radii while positive at larger ones.
    Infinite { vanishing_below: f64 },
    /// Every `ν` is zero.
    Undefined,
}

impl ExponentFit {
    /// The exponent as a number; `+∞` when vanishing, `NaN` when undefined.
    pub fn value(&self) -> f64 {
        match self {
            ExponentFit::Finite { exponent, .. } => *exponent,
            ExponentFit::Infinite { .. } => f64::INFINITY,
            ExponentFit::Undefined => f64::NAN,
        }
    }

    pub fn at_least(&self, bound: f64) -> bool {
        self.value() >= bound
    }
}

/// `ν_{f,α}(E(w,s))` on a list of window radii.
#[derive(Debug, Clone, Serialize)]
pub struct CarlesonReport {
    pub w: (f64, f64),
    pub alpha: f64,
    pub radii: Vec<f64>,
    /// Raw indicator values.
    pub nu: Vec<f64>,
    /// Values with the indicator ramped over one node spacing.
    pub nu_smoothed: Vec<f64>,
    pub fit: ExponentFit,
    pub fit_smoothed: ExponentFit,
    pub total_mass: f64,
    pub level_resolution: usize,
}

/// Fits `log ν ≈ a + e log s` over the radii with positive `ν`.
pub(crate) fn fit_exponent(radii: &[f64], nu: &[f64]) -> ExponentFit {
    let pos: Vec<(f64, f64)> = radii
        .iter()
        .zip(nu)
        .filter(|(_, &v)| v > 0.0)
        .map(|(&s, &v)| (s.ln(), v.ln()))
        .collect();
    if pos.is_empty() {
        return ExponentFit::Undefined;
    }
    let smallest_pos = radii.iter().zip(nu).filter(|(_, &v)| v > 0.0).map(|(&s, _)| s).fold(f64::INFINITY, f64::min);
    if let Some(&s0) = radii.iter().zip(nu).filter(|(_, &v)| v <= 0.0).map(|(s, _)| s).find(|&&s| s < smallest_pos) {
        let below = radii.iter().zip(nu).filter(|(_, &v)| v <= 0.0).map(|(&s, _)| s).fold(s0, f64::max);
        return ExponentFit::Infinite { vanishing_below: below };
    }
    if pos.len() < 2 {
        return ExponentFit::Undefined;
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = pos.iter().copied().unzip();
    let (e, hw) = crate::fit::loo_slope(&xs, &ys);
    ExponentFit::Finite { exponent: e, half_width: hw }
}

/// Estimates `ν_{f,α}(E(w,s)) = ∫ |r|^α e^r μ_{u,r}(χ_{E(w,s)}∘f) dr` for each
/// `s` in `radii`, where `E(w,s) = {ζ ∈ 𝔻 : |ζ − w| < s}`.
pub fn carleson_window(
    f: &HoloMap,
    u: &Exhaustion,
    alpha: f64,
    w: C64,
    radii: &[f64],
    opts: &CarlesonOptions,
) -> Result<CarlesonReport> {
    let g = f
        .scalar()
        .ok_or_else(|| Error::Unsupported("Carleson windows need a map into the unit disk".into()))?;
    if f.source() != u.domain() {
        return Err(Error::param("u", format!("exhaustion lives on {}, map on {}", u.domain(), f.source())));
    }
    match u.kind() {
        ExhaustionKind::GreenPole { .. } | ExhaustionKind::LogAbs | ExhaustionKind::LogMaxAbs => {}
        _ => return Err(Error::Unsupported(format!("Carleson window for {}", u.describe()))),
    }
    if !(alpha > -1.0) {
        return Err(Error::param("alpha", format!("alpha must be > -1, got {alpha}")));
    }
    if (w.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::param("w", format!("window centre must have modulus 1, got {}", w.norm())));
    }
    if radii.is_empty() || radii.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
        return Err(Error::param("radii", "radii must be positive and finite"));
    }

    // Radial nodes (t, weight) with t = −r; first panel uses y = t^{α+1}.
    let rule = gauss_legendre(opts.budget.radial_nodes);
    let mut pts: Vec<(f64, f64)> = vec![];
    for (i, (a, b)) in radial_panels(opts.dyadic_panels, opts.t_max).into_iter().enumerate() {
        if i == 0 {
            let e = alpha + 1.0;
            for (y, wt) in rule.on(0.0, b.powf(e)) {
                let t = y.powf(1.0 / e);
                pts.push((t, wt / e * (-t).exp()));
            }
        } else {
            for (t, wt) in rule.on(a, b) {
                pts.push((t, wt * radial_weight(-t, alpha)));
            }
        }
    }
    let m = radii.len();
    let resolution = |shape: &LevelShape| match shape {
        LevelShape::Circle { .. } => opts.budget.circle,
        LevelShape::Torus { .. } => opts.budget.torus,
        LevelShape::Sphere { .. } => opts.budget.sphere,
        LevelShape::Empty => 4,
    };
    let per_level: Vec<Result<(Vec<f64>, Vec<f64>, f64, usize)>> = map_slice(&pts, |&(t, _)| {
        let shape = u.level_shape(-t)?;
        let n = resolution(&shape);
        let lr = LevelRule::new(shape, n)?;
        let width = TAU / n as f64;
        let mut raw: Vec<KahanSum> = vec![KahanSum::new(); m];
        let mut smooth: Vec<KahanSum> = vec![KahanSum::new(); m];
        for i in 0..lr.len() {
            let (z, wt) = lr.node(i);
            let d = (g.value(z.coords()) - w).norm();
            for k in 0..m {
                if d < radii[k] {
                    raw[k].add(wt);
                }
                let ramp = ((radii[k] - d) / width + 0.5).clamp(0.0, 1.0);
                if ramp > 0.0 {
                    smooth[k].add(wt * ramp);
                }
            }
        }
        Ok((
            raw.iter().map(|s| s.value()).collect(),
            smooth.iter().map(|s| s.value()).collect(),
            shape.mass(),
            n,
        ))
    });
    let mut nu = vec![KahanSum::new(); m];
    let mut nu_s = vec![KahanSum::new(); m];
    let mut total = KahanSum::new();
    let mut level_resolution = 0;
    for (&(_, wt), lv) in pts.iter().zip(per_level) {
        let (raw, smooth, mass, n) = lv?;
        level_resolution = level_resolution.max(n);
        total.add(wt * mass);
        for k in 0..m {
            nu[k].add(wt * raw[k]);
            nu_s[k].add(wt * smooth[k]);
        }
    }
    let nu: Vec<f64> = nu.iter().map(|s| s.value()).collect();
    let nu_smoothed: Vec<f64> = nu_s.iter().map(|s| s.value()).collect();
    Ok(CarlesonReport {
        w: (w.re, w.im),
        alpha,
        radii: radii.to_vec(),
        fit: fit_exponent(radii, &nu),
        fit_smoothed: fit_exponent(radii, &nu_smoothed),
        nu,
        nu_smoothed,
        total_mass: total.value(),
        level_resolution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ModelDomain, Polynomial};
    use statrs::function::gamma::gamma;

    fn disk_id() -> (HoloMap, Exhaustion) {
        (HoloMap::identity_disk(), Exhaustion::log_abs(ModelDomain::UnitDisk))
    }

    #[test]
    fn disk_identity_matches_area_oracle() {
        let (f, u) = disk_id();
        let radii = [0.4, 0.2, 0.1, 0.05];
        let mut o = CarlesonOptions::default();
        o.budget.circle = 8192;
        let rep = carleson_window(&f, &u, 0.0, C64::new(1.0, 0.0), &radii, &o).unwrap();
        let oracle = [0.27921875, 0.06585283, 0.01606209, 0.00396992];
        for (v, e) in rep.nu.iter().zip(oracle) {
            assert!((v - e).abs() < 2e-2 * e, "{v} vs {e}");
        }
        assert!(rep.fit.at_least(1.9), "{:?}", rep.fit);
        assert!(rep.nu.windows(2).all(|p| p[0] >= p[1]));
    }

    #[test]
    fn full_and_empty_windows() {
        let (f, u) = disk_id();
        let rep = carleson_window(&f, &u, 1.0, C64::new(0.0, 1.0), &[2.5], &CarlesonOptions::default()).unwrap();
        let full = TAU * gamma(2.0);
        assert!((rep.nu[0] - full).abs() < 1e-9 * full);
        let zero = HoloMap::to_disk(Polynomial::zero(1), ModelDomain::UnitDisk).unwrap();
        let rep = carleson_window(&zero, &u, 0.0, C64::new(1.0, 0.0), &[0.5, 0.9], &CarlesonOptions::default()).unwrap();
        assert_eq!(rep.nu, vec![0.0, 0.0]);
        assert_eq!(rep.fit, ExponentFit::Undefined);
    }

    #[test]
    fn fits() {
        let r = [0.4, 0.2, 0.1];
        let nu: Vec<f64> = r.iter().map(|s: &f64| 3.0 * s.powi(3)).collect();
        match fit_exponent(&r, &nu) {
            ExponentFit::Finite { exponent, half_width } => {
                assert!((exponent - 3.0).abs() < 1e-12 && half_width < 1e-12)
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(fit_exponent(&r, &[1.0, 0.0, 0.0]), ExponentFit::Infinite { vanishing_below: 0.2 });
        let bad = carleson_window(&HoloMap::identity_disk(), &Exhaustion::log_abs(ModelDomain::UnitDisk), 0.0, C64::new(0.5, 0.0), &[0.1], &CarlesonOptions::default());
        assert!(bad.is_err());
    }
}
