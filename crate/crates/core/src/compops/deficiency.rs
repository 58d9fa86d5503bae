use crate::counting::{counting_for_map, CountingOutcome, FiberOptions};
use crate::error::{Error, Result};
use crate::exec::map_range;
use crate::geometry::{Exhaustion, HoloMap, C64};
use crate::special::gamma_unchecked;
use serde::Serialize;
use std::f64::consts::TAU;
use std::fmt;

/// Radii of the default boundedness diagnostic.
pub const DIAGNOSTIC_RADII: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    BoundedConsistent,
    CompactConsistent,
    UnboundedConsistent,
    Inconclusive,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::BoundedConsistent => "bounded-consistent",
            Classification::CompactConsistent => "compact-consistent",
            Classification::UnboundedConsistent => "unbounded-consistent",
            Classification::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DiagnosticOptions {
    /// Rays `arg z = 2π(j + ½)/rays`.
    pub rays: usize,
    pub fiber: FiberOptions,
}

impl Default for DiagnosticOptions {
    fn default() -> Self {
        Self { rays: 8, fiber: FiberOptions::default() }
    }
}

/// `R(z) = N_{F,β}(z)/γ_α(log|z|)` at one sample point.
#[derive(Debug, Clone, Serialize)]
pub struct RatioSample {
    pub radius: f64,
    pub angle: f64,
    pub counting: f64,
    pub gamma: f64,
    pub ratio: f64,
    pub error: f64,
}

/// A sample dropped because its counting function failed or is infinite.
#[derive(Debug, Clone, Serialize)]
pub struct ExcludedSample {
    pub radius: f64,
    pub angle: f64,
    pub reason: String,
}

/// Linear fit of the per-radius supremum of `R` against `log(1 − |z|)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Trend {
    pub intercept: f64,
    pub slope: f64,
    /// The fit one decade beyond the last radius, clamped at zero.
    pub fitted_limit: f64,
    pub max_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeficiencyReport {
    pub alpha: f64,
    pub beta: f64,
    pub r_grid: Vec<f64>,
    /// `δ(r)`: supremum of `R` over the samples with `log|z| > r`.
    pub delta: Vec<f64>,
    pub delta_error: Vec<f64>,
    /// `δ` nonincreasing up to twice the sampling error.
    pub monotone: bool,
    pub radii: Vec<f64>,
    /// Supremum of `R` over the rays at each radius.
    pub sup_by_radius: Vec<f64>,
    /// Supremum of `R` over `|z| ≤ radius`.
    pub running_sup: Vec<f64>,
    pub trend: Trend,
    pub classification: Classification,
    pub samples: Vec<RatioSample>,
    pub excluded: Vec<ExcludedSample>,
}

impl DeficiencyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("deficiency report serialises")
    }
}

/// `N_{F,β}` at `rays` points on each circle `|z| = radius`.
pub(crate) struct CountSamples {
    pub radii: Vec<f64>,
    pub rows: Vec<(f64, f64, C64, f64, f64)>,
    pub excluded: Vec<ExcludedSample>,
}

pub(crate) fn sample_counting(
    f: &HoloMap,
    u: &Exhaustion,
    beta: f64,
    radii: &[f64],
    opts: &DiagnosticOptions,
) -> Result<CountSamples> {
    if f.scalar().is_none() {
        return Err(Error::Unsupported("deficiency needs a scalar map into the unit disk".into()));
    }
    if !(beta >= -1.0) {
        return Err(Error::param("beta", "beta must be ≥ -1"));
    }
    if opts.rays == 0 {
        return Err(Error::param("rays", "at least one ray is needed"));
    }
    if let Some(&r) = radii.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::param("radii", format!("radius {r} is outside (0, 1)")));
    }
    let m = opts.rays;
    let out = map_range(radii.len() * m, |i| {
        let (rho, th) = (radii[i / m], TAU * ((i % m) as f64 + 0.5) / m as f64);
        let z = C64::from_polar(rho, th);
        (rho, th, z, counting_for_map(f, u, z, beta, &opts.fiber))
    });
    let mut rows = vec![];
    let mut excluded = vec![];
    for (radius, angle, z, o) in out {
        match o {
            Ok(CountingOutcome::Finite(s)) => rows.push((radius, angle, z, s.n_alpha, s.n_alpha_error)),
            Ok(CountingOutcome::Infinite { pole, .. }) => {
                excluded.push(ExcludedSample { radius, angle, reason: format!("infinite counting: fiber meets the pole {pole}") })
            }
            Err(e) => excluded.push(ExcludedSample { radius, angle, reason: e.to_string() }),
        }
    }
    Ok(CountSamples { radii: radii.to_vec(), rows, excluded })
}

fn classify(radii: &[f64], sup: &[f64], excluded_all: bool) -> (Trend, Classification) {
    let pts: Vec<(f64, f64)> = radii
        .iter()
        .zip(sup)
        .filter(|(_, s)| s.is_finite())
        .map(|(&r, &s)| ((1.0 - r).ln(), s))
        .collect();
    let max_ratio = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    if pts.len() < 2 || excluded_all {
        let t = Trend { intercept: f64::NAN, slope: f64::NAN, fitted_limit: f64::NAN, max_ratio };
        return (t, Classification::Inconclusive);
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
    let (a, b) = crate::fit::linear_fit(&xs, &ys);
    let x_ext = xs[xs.len() - 1] - std::f64::consts::LN_10;
    let fitted_limit = (a + b * x_ext).max(0.0);
    let trend = Trend { intercept: a, slope: b, fitted_limit, max_ratio };
    if max_ratio == 0.0 || fitted_limit <= 0.05 * max_ratio {
        return (trend, Classification::CompactConsistent);
    }
    let mut run = vec![];
    let mut m = 0.0f64;
    for &y in &ys {
        m = m.max(y);
        run.push(m);
    }
    let (last, prev) = (run[run.len() - 1], run[run.len() - 2]);
    let class = if last <= 1.1 * prev {
        Classification::BoundedConsistent
    } else if last > 1.1 * prev {
        Classification::UnboundedConsistent
    } else {
        Classification::Inconclusive
    };
    (trend, class)
}

pub(crate) fn build_report(alpha: f64, beta: f64, r_grid: &[f64], s: &CountSamples) -> Result<DeficiencyReport> {
    if !(alpha >= -1.0) {
        return Err(Error::param("alpha", "alpha must be ≥ -1"));
    }
    let samples: Vec<RatioSample> = s
        .rows
        .iter()
        .map(|&(radius, angle, z, n, e)| {
            let gamma = gamma_unchecked(z.norm().ln(), alpha);
            RatioSample { radius, angle, counting: n, gamma, ratio: n / gamma, error: e / gamma }
        })
        .collect();
    let sup_of = |keep: &dyn Fn(&RatioSample) -> bool| -> (f64, f64) {
        samples.iter().filter(|x| keep(x)).fold((f64::NAN, 0.0), |(m, e), x| {
            if m.is_nan() || x.ratio > m {
                (x.ratio, x.error)
            } else {
                (m, e)
            }
        })
    };
    let sup_by_radius: Vec<f64> = s.radii.iter().map(|&r| sup_of(&|x: &RatioSample| x.radius == r).0).collect();
    let mut running_sup = vec![];
    let mut m = f64::NAN;
    for &v in &sup_by_radius {
        m = if m.is_nan() { v } else { m.max(v) };
        running_sup.push(m);
    }
    let (delta, delta_error): (Vec<f64>, Vec<f64>) = r_grid
        .iter()
        .map(|&r| {
            let (d, e) = sup_of(&|x: &RatioSample| x.radius.ln() > r);
            if d.is_nan() {
                (0.0, 0.0)
            } else {
                (d, e)
            }
        })
        .unzip();
    let monotone = delta
        .windows(2)
        .zip(delta_error.windows(2))
        .all(|(d, e)| d[1] <= d[0] + 2.0 * e[0].max(e[1]) + 1e-12 * d[0].abs());
    let last = s.radii.last().copied().unwrap_or(0.0);
    let excluded_all = !samples.iter().any(|x| x.radius == last);
    let (trend, classification) = classify(&s.radii, &sup_by_radius, excluded_all);
    Ok(DeficiencyReport {
        alpha,
        beta,
        r_grid: r_grid.to_vec(),
        delta,
        delta_error,
        monotone,
        radii: s.radii.clone(),
        sup_by_radius,
        running_sup,
        trend,
        classification,
        samples,
        excluded: s.excluded.clone(),
    })
}

/// Tabulates `R(z) = N_{F,β}(z)/γ_α(log|z|)` on rays at the given radii and
/// classifies the trend as `|z| → 1`: compact-consistent when the fitted
/// limit is at most 5% of the largest ratio, bounded-consistent when the
/// running supremum grows by at most 10% over the last radius,
/// unbounded-consistent otherwise.
pub fn boundedness_diagnostic(
    f: &HoloMap,
    u: &Exhaustion,
    alpha: f64,
    beta: f64,
    radii: &[f64],
    opts: &DiagnosticOptions,
) -> Result<DeficiencyReport> {
    let s = sample_counting(f, u, beta, radii, opts)?;
    let r_grid: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    // δ(log ρ_k) over the closed set |z| ≥ ρ_k of sampled radii.
    let r_grid: Vec<f64> = r_grid.iter().map(|r| r - 1e-12 * r.abs().max(1e-300)).collect();
    build_report(alpha, beta, &r_grid, &s)
}

/// `δ(r) = sup_{log|z| > r} N_{F,β}(z)/γ_α(log|z|)` on `r_grid`, sampled on
/// rays at radii with `1 − |z|` log-spaced (six per decade) from
/// `1 − e^{min r}` down to `1e-4`.
pub fn deficiency_profile(
    f: &HoloMap,
    u: &Exhaustion,
    alpha: f64,
    beta: f64,
    r_grid: &[f64],
    opts: &DiagnosticOptions,
) -> Result<DeficiencyReport> {
    if r_grid.is_empty() {
        return Err(Error::param("r_grid", "empty level grid"));
    }
    if let Some(&r) = r_grid.iter().find(|&&r| !(r < 0.0 && r.is_finite())) {
        return Err(Error::param("r_grid", format!("level {r} must be finite and < 0")));
    }
    let r_min = r_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let d_max = 1.0 - r_min.exp();
    let mut radii = vec![];
    let mut j = 0;
    loop {
        let d = d_max * 10f64.powf(-(j as f64) / 6.0);
        if d < 1e-4 * (1.0 - 1e-9) {
            break;
        }
        radii.push(1.0 - d);
        j += 1;
    }
    if radii.len() < 2 {
        radii.push(1.0 - 1e-4);
    }
    let s = sample_counting(f, u, beta, &radii, opts)?;
    build_report(alpha, beta, r_grid, &s)
}
