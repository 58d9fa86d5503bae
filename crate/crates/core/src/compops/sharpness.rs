use super::deficiency::{build_report, sample_counting, Classification, DiagnosticOptions, DIAGNOSTIC_RADII};
use crate::counting::{fiber_quadrature_2d, CountingOutcome, FiberOptions};
use crate::error::{Error, Result};
use crate::exec::map_slice;
use crate::fit::loo_slope;
use crate::geometry::{Exhaustion, HoloMap, ModelDomain, Polynomial, C64};
use serde::Serialize;
use std::io::Write;

/// Target radii `|w|` of the default sweep.
pub const SHARPNESS_RADII: [f64; 4] = [0.9, 0.95, 0.975, 0.99];

#[derive(Debug, Clone, Serialize)]
pub struct SharpnessOptions {
    /// Offsets of `r` above the fiber threshold `r* = |w| − 1`, in units of `1 − |w|`.
    pub offsets: Vec<f64>,
    /// Radii of the boundedness diagnostics; empty skips them.
    pub diagnostic_radii: Vec<f64>,
    pub rays: usize,
    pub fiber: FiberOptions,
}

impl Default for SharpnessOptions {
    fn default() -> Self {
        Self {
            offsets: vec![1.0 / 16.0, 1.0 / 8.0, 0.25, 0.5],
            diagnostic_radii: DIAGNOSTIC_RADII.to_vec(),
            rays: 2,
            fiber: FiberOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExponentEstimate {
    pub exponent: f64,
    /// Largest leave-one-out deviation (plus the spread across targets for
    /// pooled estimates).
    pub half_width: f64,
}

/// Counting data at one target `w = |w|`.
#[derive(Debug, Clone, Serialize)]
pub struct SharpnessRow {
    pub w_abs: f64,
    pub delta: f64,
    pub threshold: f64,
    pub r: Vec<f64>,
    pub n: Vec<f64>,
    pub n_error: Vec<f64>,
    pub n_beta: f64,
    pub n_beta_error: f64,
    /// Local exponent of `n(w, r)` in `r − r*`.
    pub n_exponent: ExponentEstimate,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdCheck {
    pub alpha: f64,
    pub expected: Classification,
    pub classification: Classification,
    pub sup_by_radius: Vec<f64>,
    pub fitted_limit: f64,
    pub max_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SharpnessTable {
    pub beta: f64,
    pub rows: Vec<SharpnessRow>,
    pub excluded: Vec<String>,
    pub n_exponent: Option<ExponentEstimate>,
    /// Exponent of `N_β(w)` in `1 − |w|`.
    pub n_beta_exponent: Option<ExponentEstimate>,
    pub threshold_checks: Vec<ThresholdCheck>,
}

impl SharpnessTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sharpness table serialises")
    }
}

fn quadric() -> Polynomial {
    let z1 = Polynomial::var(2, 0);
    let z2 = Polynomial::var(2, 1);
    z1.mul(&z1).and_then(|a| Ok(a.add(&z2.mul(&z2)?))).expect("two-variable polynomials")
}

/// Counting functions of `F = z₁² + z₂²` on the unit ball with
/// `u = |z|² − 1` on real targets `w = |w|`: `n(w, r)` just above the
/// threshold `r* = |w| − 1` below which the fiber misses `{u < r}`, and
/// `N_β(w)`; fitted exponents of `n` in `r − r*` and of `N_β` in `1 − |w|`.
/// The boundedness diagnostic is run at `α = β + ½` (expected
/// bounded-consistent) and `α = β` (expected compact-consistent).
pub fn quadratic_sharpness_sweep(beta: f64, radii: &[f64], opts: &SharpnessOptions) -> Result<SharpnessTable> {
    if !(beta >= -1.0) {
        return Err(Error::param("beta", "beta must be ≥ -1"));
    }
    if let Some(&m) = radii.iter().find(|&&m| !(m > 0.0 && m < 1.0)) {
        return Err(Error::param("radii", format!("|w| = {m} is outside (0, 1)")));
    }
    if let Some(&c) = opts.offsets.iter().find(|&&c| !(c > 0.0 && c < 1.0)) {
        return Err(Error::param("offsets", format!("offset {c} is outside (0, 1)")));
    }
    let u = Exhaustion::smooth_square();
    let f = quadric();
    let out = map_slice(radii, |&m| -> Result<SharpnessRow> {
        let delta = 1.0 - m;
        let threshold = u.profile(0.5 * m.ln());
        let r: Vec<f64> = opts.offsets.iter().map(|c| threshold + c * delta).collect();
        let o = fiber_quadrature_2d(&f, &u, C64::new(m, 0.0), &r, beta, &opts.fiber)?;
        let CountingOutcome::Finite(s) = o else {
            return Err(Error::Precondition(format!("infinite counting at |w| = {m}")));
        };
        let xs: Vec<f64> = opts.offsets.iter().map(|c| (c * delta).ln()).collect();
        let ys: Vec<f64> = s.n_of_r.iter().map(|v| v.ln()).collect();
        let (e, hw) = if ys.iter().all(|y| y.is_finite()) && xs.len() >= 2 {
            loo_slope(&xs, &ys)
        } else {
            (f64::NAN, f64::NAN)
        };
        Ok(SharpnessRow {
            w_abs: m,
            delta,
            threshold,
            r,
            n: s.n_of_r,
            n_error: s.n_of_r_error,
            n_beta: s.n_alpha,
            n_beta_error: s.n_alpha_error,
            n_exponent: ExponentEstimate { exponent: e, half_width: hw },
        })
    });
    let mut rows = vec![];
    let mut excluded = vec![];
    for (m, o) in radii.iter().zip(out) {
        match o {
            Ok(row) => rows.push(row),
            Err(e) => excluded.push(format!("|w| = {m}: {e}")),
        }
    }
    let local: Vec<f64> = rows.iter().map(|r| r.n_exponent.exponent).filter(|e| e.is_finite()).collect();
    let n_exponent = (!local.is_empty()).then(|| {
        let mean = local.iter().sum::<f64>() / local.len() as f64;
        let hw = rows
            .iter()
            .filter(|r| r.n_exponent.exponent.is_finite())
            .map(|r| r.n_exponent.half_width + (r.n_exponent.exponent - mean).abs())
            .fold(0.0, f64::max);
        ExponentEstimate { exponent: mean, half_width: hw }
    });
    let pts: Vec<(f64, f64)> =
        rows.iter().filter(|r| r.n_beta > 0.0).map(|r| (r.delta.ln(), r.n_beta.ln())).collect();
    let n_beta_exponent = (pts.len() >= 2).then(|| {
        let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        let (e, hw) = loo_slope(&xs, &ys);
        ExponentEstimate { exponent: e, half_width: hw }
    });
    let mut threshold_checks = vec![];
    if !opts.diagnostic_radii.is_empty() {
        let map = HoloMap::to_disk(f, ModelDomain::UnitBall2)?;
        let dopts = DiagnosticOptions { rays: opts.rays, fiber: opts.fiber };
        let s = sample_counting(&map, &u, beta, &opts.diagnostic_radii, &dopts)?;
        let r_grid: Vec<f64> = opts.diagnostic_radii.iter().map(|r| r.ln() * (1.0 + 1e-12)).collect();
        for (alpha, expected) in
            [(beta + 0.5, Classification::BoundedConsistent), (beta, Classification::CompactConsistent)]
        {
            let rep = build_report(alpha, beta, &r_grid, &s)?;
            threshold_checks.push(ThresholdCheck {
                alpha,
                expected,
                classification: rep.classification,
                sup_by_radius: rep.sup_by_radius,
                fitted_limit: rep.trend.fitted_limit,
                max_ratio: rep.trend.max_ratio,
            });
        }
        excluded.extend(s.excluded.iter().map(|e| format!("|z| = {} arg {}: {}", e.radius, e.angle, e.reason)));
    }
    Ok(SharpnessTable { beta, rows, excluded, n_exponent, n_beta_exponent, threshold_checks })
}

/// CSV with columns `quantity, w_abs, delta, r, value, error, exponent,
/// half_width`; exponent rows leave the sample columns empty.
pub fn write_sharpness_csv<W: Write>(out: W, t: &SharpnessTable) -> Result<()> {
    let mut wr = csv::Writer::from_writer(out);
    wr.write_record(["quantity", "w_abs", "delta", "r", "value", "error", "exponent", "half_width"])?;
    let s = |x: f64| x.to_string();
    for row in &t.rows {
        for k in 0..row.r.len() {
            wr.write_record([
                "n".into(),
                s(row.w_abs),
                s(row.delta),
                s(row.r[k]),
                s(row.n[k]),
                s(row.n_error[k]),
                s(row.n_exponent.exponent),
                s(row.n_exponent.half_width),
            ])?;
        }
        wr.write_record([
            "N_beta".into(),
            s(row.w_abs),
            s(row.delta),
            String::new(),
            s(row.n_beta),
            s(row.n_beta_error),
            String::new(),
            String::new(),
        ])?;
    }
    for (name, e) in [("exponent_n", t.n_exponent), ("exponent_N_beta", t.n_beta_exponent)] {
        let (a, b) = e.map_or((f64::NAN, f64::NAN), |e| (e.exponent, e.half_width));
        wr.write_record([name.into(), String::new(), String::new(), String::new(), String::new(), String::new(), s(a), s(b)])?;
    }
    wr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn n_matches_closed_form() {
        let opts = SharpnessOptions { diagnostic_radii: vec![], ..Default::default() };
        let t = quadratic_sharpness_sweep(0.0, &[0.9, 0.95], &opts).unwrap();
        for row in &t.rows {
            let m = row.w_abs;
            for (r, n) in row.r.iter().zip(&row.n) {
                let q = 1.0 + r;
                let e = 8.0 * PI * ((q - m) * (q + m)).sqrt();
                assert!((n - e).abs() < 1e-3 * e, "m {m} r {r}: {n} vs {e}");
            }
        }
        let e = t.n_exponent.unwrap();
        assert!((e.exponent - 0.5).abs() < 0.05, "{e:?}");
    }
}
