use crate::error::{Error, Result};
use crate::geometry::{Exhaustion, ExhaustionKind, Holomorphic, SpaceParams, C64};
use crate::measures::{level_integral, Budget};
use crate::quad::gauss_legendre;
use crate::special::radial_weight;
use serde::Serialize;
use statrs::function::gamma::{gamma, gamma_ur};

/// Controls for [`hardy_norm`] and [`bergman_norm`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormOptions {
    pub budget: Budget,
    /// Last dyadic level `r_J = −2^{−J}` of the Hardy limit.
    pub levels: usize,
    /// Relative tolerance on the extrapolated Hardy limit.
    pub tol: f64,
    /// Dyadic radial panels on `t ∈ [2^{−K}, 1]` for Bergman integrals.
    pub dyadic_panels: usize,
    /// Radial truncation `t ≤ t_max`.
    pub t_max: f64,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self {
            budget: Budget::default(),
            levels: 20,
            tol: 1e-7,
            dyadic_panels: 20,
            t_max: 40.0,
        }
    }
}

impl NormOptions {
    pub fn with_budget(budget: Budget) -> Self {
        Self { budget, ..Self::default() }
    }
}

/// A Hardy or weighted Bergman norm together with its diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct NormResult {
    /// `‖f‖`.
    pub value: f64,
    /// `‖f‖^p`.
    pub value_p: f64,
    pub p: f64,
    pub alpha: f64,
    pub radial_budget: String,
    /// Error estimate of `‖f‖^p`.
    pub error_estimate: f64,
    /// `(r, μ_{u,r}(|f|^p))` in increasing `r`.
    #[serde(rename = "trace")]
    pub monotone_trace: Vec<(f64, f64)>,
    pub converged: bool,
    pub monotone: bool,
    /// Bound on the discarded radial tail `t > t_max`.
    pub tail_bound: f64,
}

impl NormResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("norm result serialises")
    }
}

fn check_mono(trace: &[(f64, f64)]) -> bool {
    trace
        .windows(2)
        .all(|w| w[1].1 >= w[0].1 - 1e-9 * w[0].1.abs().max(w[1].1.abs()) - 1e-300)
}

fn abs_pow(z: C64, p: f64) -> f64 {
    if p == 2.0 {
        z.norm_sqr()
    } else {
        z.norm().powf(p)
    }
}

fn check_dims(f: &dyn Holomorphic, u: &Exhaustion) -> Result<()> {
    if f.vars() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), got: f.vars() });
    }
    Ok(())
}

/// Hardy norm `(lim_{r→0⁻} μ_{u,r}(|f|^p))^{1/p}`.
///
/// The trace is sampled on `r_j = −2^{−j}` and the limit is taken from a
/// Richardson table in the step `2^{−j}`. The result is flagged unconverged
/// when the last two extrapolants differ by more than `opts.tol` relative.
pub fn hardy_norm(f: &dyn Holomorphic, u: &Exhaustion, p: f64, opts: &NormOptions) -> Result<NormResult> {
    SpaceParams::hardy(p)?;
    check_dims(f, u)?;
    let j_max = opts.levels.max(2);
    let mut trace = Vec::with_capacity(j_max + 1);
    let mut quad_err: f64 = 0.0;
    for j in 0..=j_max {
        let r = -(0.5f64).powi(j as i32);
        let m = level_integral(u, r, &opts.budget, |z| abs_pow(f.value(z.coords()), p))?;
        quad_err = m.error_estimate;
        trace.push((r, m.value));
    }
    // Richardson table, depth ≤ 4 to limit noise amplification.
    let depth = 4.min(j_max);
    let mut prev: Vec<f64> = trace.iter().map(|t| t.1).collect();
    for k in 1..=depth {
        let fac = 2f64.powi(k as i32);
        prev = prev.windows(2).map(|w| (fac * w[1] - w[0]) / (fac - 1.0)).collect();
    }
    let n = prev.len();
    let value_p = prev[n - 1].max(0.0);
    let diff = (prev[n - 1] - prev[n - 2]).abs();
    let scale = value_p.abs().max(trace.iter().map(|t| t.1.abs()).fold(0.0, f64::max));
    let converged = diff <= opts.tol * scale || scale == 0.0;
    let monotone = check_mono(&trace);
    Ok(NormResult {
        value: value_p.powf(1.0 / p),
        value_p,
        p,
        alpha: -1.0,
        radial_budget: format!("dyadic r_j = -2^-j, j = 0..{j_max}, Richardson depth {depth}"),
        error_estimate: diff + quad_err,
        monotone_trace: trace,
        converged,
        monotone,
        tail_bound: 0.0,
    })
}

/// Radial panels in `t = −r`: `[0, 2^{−K}]`, dyadic panels up to 1, then
/// `[1,2], [2,4], …` up to `t_max`.
pub fn radial_panels(dyadic: usize, t_max: f64) -> Vec<(f64, f64)> {
    let mut cuts = vec![0.0];
    for k in (0..=dyadic).rev() {
        cuts.push(0.5f64.powi(k as i32));
    }
    let mut t = 1.0;
    while t < t_max {
        t = (2.0 * t).min(t_max);
        cuts.push(t);
    }
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Result of [`weighted_radial_integral`].
#[derive(Debug, Clone)]
pub struct RadialIntegral {
    pub value: f64,
    pub error_estimate: f64,
    pub trace: Vec<(f64, f64)>,
    pub converged: bool,
}

/// `∫_0^{t_max} t^α e^{−t} m(−t) dt` for `α > −1` by panel Gauss–Legendre;
/// the first panel uses `y = t^{α+1}` to absorb the endpoint singularity.
/// The error estimate compares against half the nodes per panel.
pub fn weighted_radial_integral<M>(alpha: f64, nodes: usize, dyadic: usize, t_max: f64, m: M) -> Result<RadialIntegral>
where
    M: Fn(f64) -> Result<(f64, f64, bool)> + Sync + Send,
{
    let panels = radial_panels(dyadic, t_max);
    let run = |n: usize, record: bool| -> Result<(f64, f64, Vec<(f64, f64)>, bool)> {
        let rule = gauss_legendre(n);
        let mut pts: Vec<(f64, f64)> = vec![]; // (t, weight incl. radial factor)
        for (i, &(a, b)) in panels.iter().enumerate() {
            if i == 0 {
                let e = alpha + 1.0;
                let yb = b.powf(e);
                for (y, w) in rule.on(0.0, yb) {
                    let t = y.powf(1.0 / e);
                    pts.push((t, w / e * (-t).exp()));
                }
            } else {
                for (t, w) in rule.on(a, b) {
                    pts.push((t, w * radial_weight(-t, alpha)));
                }
            }
        }
        let vals: Vec<Result<(f64, f64, bool)>> = crate::exec::map_slice(&pts, |&(t, _)| m(-t));
        let mut acc = crate::exec::KahanSum::new();
        let mut err = 0.0;
        let mut ok = true;
        let mut trace = vec![];
        for (&(t, w), v) in pts.iter().zip(vals) {
            let (val, e, conv) = v?;
            acc.add(w * val);
            err += w.abs() * e;
            ok &= conv;
            if record {
                trace.push((-t, val));
            }
        }
        trace.reverse();
        Ok((acc.value(), err, trace, ok))
    };
    let (fine, ferr, trace, ok) = run(nodes, true)?;
    let (coarse, _, _, ok2) = run((nodes / 2).max(2), false)?;
    Ok(RadialIntegral {
        value: fine,
        error_estimate: ferr + (fine - coarse).abs(),
        trace,
        converged: ok && ok2,
    })
}

/// Weighted Bergman norm `(∫_{−∞}^0 |r|^α e^r μ_{u,r}(|f|^p) dr)^{1/p}`;
/// `α = −1` dispatches to [`hardy_norm`].
pub fn bergman_norm(f: &dyn Holomorphic, u: &Exhaustion, params: SpaceParams, opts: &NormOptions) -> Result<NormResult> {
    let params = SpaceParams::new(params.p, params.alpha)?;
    if params.is_hardy() {
        return hardy_norm(f, u, params.p, opts);
    }
    check_dims(f, u)?;
    let p = params.p;
    let alpha = params.alpha;
    let ri = weighted_radial_integral(alpha, opts.budget.radial_nodes, opts.dyadic_panels, opts.t_max, |r| {
        let m = level_integral(u, r, &opts.budget, |z| abs_pow(f.value(z.coords()), p))?;
        Ok((m.value, m.error_estimate, m.converged))
    })?;
    let sup = ri.trace.iter().map(|t| t.1).fold(0.0, f64::max);
    let tail_bound = gamma_ur(alpha + 1.0, opts.t_max) * gamma(alpha + 1.0) * sup;
    let value_p = ri.value.max(0.0);
    let monotone = check_mono(&ri.trace);
    Ok(NormResult {
        value: value_p.powf(1.0 / p),
        value_p,
        p,
        alpha,
        radial_budget: format!(
            "{} Gauss nodes on {} radial panels, t <= {}",
            opts.budget.radial_nodes,
            radial_panels(opts.dyadic_panels, opts.t_max).len(),
            opts.t_max
        ),
        error_estimate: ri.error_estimate,
        monotone_trace: ri.trace,
        converged: ri.converged,
        monotone,
        tail_bound,
    })
}

/// The point-evaluation estimate `(2π)^n |f(w)|^p ≤ μ_{u,r}(|f|^p)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PointEvalBound {
    pub lhs: f64,
    pub rhs: f64,
    pub error_estimate: f64,
    pub holds: bool,
}

/// Both sides of the point-evaluation estimate at the pole `w` of a Green
/// exhaustion `u`.
pub fn point_eval_bound(f: &dyn Holomorphic, p: f64, u: &Exhaustion, r: f64, budget: &Budget) -> Result<PointEvalBound> {
    check_dims(f, u)?;
    let pole = match u.kind() {
        ExhaustionKind::GreenPole { pole } => *pole,
        ExhaustionKind::LogAbs | ExhaustionKind::LogMaxAbs => u.base_pole().expect("pole"),
        _ => return Err(Error::Unsupported(format!("point evaluation bound for {}", u.describe()))),
    };
    let n = u.dim() as i32;
    let lhs = std::f64::consts::TAU.powi(n) * abs_pow(f.value(pole.coords()), p);
    let m = level_integral(u, r, budget, |z| abs_pow(f.value(z.coords()), p))?;
    let tol = 1e-12 * lhs.abs().max(m.value.abs()) + m.error_estimate;
    Ok(PointEvalBound {
        lhs,
        rhs: m.value,
        error_estimate: m.error_estimate,
        holds: lhs <= m.value + tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ModelDomain, Polynomial};
    use std::f64::consts::{PI, TAU};

    fn zk(k: u32) -> Polynomial {
        Polynomial::var(1, 0).pow(k).unwrap()
    }

    #[test]
    fn hardy_disk_powers() {
        let u = Exhaustion::log_abs(ModelDomain::UnitDisk);
        for k in 1..=3 {
            let r = hardy_norm(&zk(k), &u, 2.0, &NormOptions::default()).unwrap();
            assert!(r.converged && r.monotone);
            assert!((r.value_p - TAU).abs() < 1e-9 * TAU, "{}", r.value_p);
        }
    }

    #[test]
    fn hardy_ball_and_bidisk() {
        let f = Polynomial::var(2, 0);
        let r = hardy_norm(&f, &Exhaustion::log_abs(ModelDomain::UnitBall2), 2.0, &NormOptions::default()).unwrap();
        assert!((r.value_p - 2.0 * PI * PI).abs() < 1e-8, "{}", r.value_p);
        let r = hardy_norm(&f, &Exhaustion::log_max_abs(), 2.0, &NormOptions::default()).unwrap();
        assert!((r.value_p - 4.0 * PI * PI).abs() < 1e-8, "{}", r.value_p);
    }

    #[test]
    fn bergman_disk_closed_forms() {
        let u = Exhaustion::log_abs(ModelDomain::UnitDisk);
        let r = bergman_norm(&zk(1), &u, SpaceParams::new(2.0, 0.0).unwrap(), &NormOptions::default()).unwrap();
        assert!((r.value_p - TAU / 3.0).abs() < 1e-10, "{}", r.value_p);
        for alpha in [-0.5, 0.7, 2.0] {
            let r = bergman_norm(&zk(2), &u, SpaceParams::new(2.0, alpha).unwrap(), &NormOptions::default()).unwrap();
            let exact = TAU * gamma(alpha + 1.0) / 5f64.powf(alpha + 1.0);
            assert!((r.value_p - exact).abs() < 1e-9 * exact, "alpha={alpha} {} vs {exact}", r.value_p);
        }
        let c = Polynomial::constant(1, C64::new(0.0, 1.5));
        let r = bergman_norm(&c, &Exhaustion::disk_green(C64::new(0.3, 0.0)).unwrap(), SpaceParams::new(3.0, 1.0).unwrap(), &NormOptions::default()).unwrap();
        assert!((r.value_p - TAU * 1.5f64.powi(3)).abs() < 1e-9 * r.value_p);
    }

    #[test]
    fn zero_function() {
        let u = Exhaustion::log_abs(ModelDomain::UnitDisk);
        let r = hardy_norm(&Polynomial::zero(1), &u, 2.0, &NormOptions::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn point_eval_examples() {
        let u = Exhaustion::disk_green(C64::new(0.5, 0.0)).unwrap();
        let b = point_eval_bound(&zk(1), 2.0, &u, -0.01, &Budget::default()).unwrap();
        assert!((b.lhs - TAU * 0.25).abs() < 1e-14);
        assert!(b.holds && b.rhs > b.lhs);
        let c = Polynomial::constant(1, C64::new(0.3, 0.0));
        let b = point_eval_bound(&c, 1.0, &u, -0.5, &Budget::default()).unwrap();
        assert!((b.lhs - b.rhs).abs() < 1e-13);
    }

    #[test]
    fn panels_cover_range() {
        let p = radial_panels(20, 40.0);
        assert_eq!(p[0].0, 0.0);
        assert_eq!(p.last().unwrap().1, 40.0);
        assert!(p.windows(2).all(|w| w[0].1 == w[1].0));
    }
}
