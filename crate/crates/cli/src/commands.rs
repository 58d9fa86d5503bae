//! Command implementations. Each returns the bytes to emit and an exit code.

use crate::config::*;
use plurinorm::compops::{
    boundedness_diagnostic, deficiency_profile, quadratic_sharpness_sweep, write_sharpness_csv, DiagnosticOptions,
    SharpnessOptions,
};
use plurinorm::counting::{counting_sweep, write_counting_csv, CountingOutcome};
use plurinorm::identities::*;
use plurinorm::random::{random_disk_map, random_polynomial, rng};
use plurinorm::spaces::{bergman_norm, NormOptions};
use plurinorm::{CPoint, Error, Exhaustion, HoloMap, ModelDomain, Polynomial, SpaceParams, C64};
use serde::Serialize;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNCONVERGED: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

/// Bytes for the output stream plus a one-line summary for stderr.
pub struct Output {
    pub body: Vec<u8>,
    pub summary: String,
    pub code: i32,
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config_hash: String,
    seed: u64,
    config: &'a C,
    result: R,
}

fn json<C: Serialize, R: Serialize>(command: &str, seed: u64, config: &C, result: R) -> Vec<u8> {
    let env = Envelope {
        tool: "plurinorm",
        version: VERSION,
        command,
        config_hash: config_hash(command, config),
        seed,
        config,
        result,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("envelopes serialise");
    s.push('\n');
    s.into_bytes()
}

/// Appends `config_hash` and `version` columns to every row of a CSV table.
fn stamp_csv(raw: &[u8], hash: &str) -> Result<Vec<u8>, Error> {
    let mut rd = csv::Reader::from_reader(raw);
    let mut wr = csv::Writer::from_writer(vec![]);
    let mut header = rd.headers()?.clone();
    header.push_field("config_hash");
    header.push_field("version");
    wr.write_record(&header)?;
    for rec in rd.records() {
        let mut rec = rec?;
        rec.push_field(hash);
        rec.push_field(VERSION);
        wr.write_record(&rec)?;
    }
    wr.into_inner().map_err(|e| Error::Io(e.to_string()))
}

fn input(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn norm(cfg: &NormConfig) -> Result<Output, String> {
    let d = domain(&cfg.domain)?;
    let u = exhaustion(d, &cfg.exhaustion, cfg.pole.as_deref())?;
    let f = polynomial("f", cfg.f.as_deref(), d)?;
    let params = SpaceParams::new(cfg.p, cfg.alpha).map_err(input)?;
    if !(cfg.tol > 0.0) {
        return Err("field `tol` must be positive".into());
    }
    let b = budgets(&cfg.budget)?;
    let opts = NormOptions { levels: cfg.levels, tol: cfg.tol, ..NormOptions::with_budget(b.measure) };
    let r = bergman_norm(&f, &u, params, &opts).map_err(input)?;
    let code = if r.converged { EXIT_OK } else { EXIT_UNCONVERGED };
    let summary = format!("norm^p = {} (error {:e}, converged {})", r.value_p, r.error_estimate, r.converged);
    Ok(Output { body: json("norm", cfg.seed, cfg, &r), summary, code })
}

pub fn counting(cfg: &CountingConfig) -> Result<Output, String> {
    let d = domain(&cfg.domain)?;
    let u = exhaustion(d, &cfg.exhaustion, cfg.pole.as_deref())?;
    let f = disk_map(cfg.map.as_deref(), d).map_err(input)?;
    SpaceParams::new(1.0, cfg.alpha).map_err(input)?;
    if cfg.r_grid.is_empty() || cfg.r_grid.iter().any(|&r| !(r <= 0.0)) {
        return Err("field `r_grid`: levels must be ≤ 0 and at least one is needed".into());
    }
    let targets = w_grid(&cfg.w_grid, cfg.w_count)?;
    if let Some(w) = targets.iter().find(|w| !(w.norm() < 1.0)) {
        return Err(format!("field `w_grid`: target {w} is outside the unit disk"));
    }
    let b = budgets(&cfg.budget)?;
    let rows = counting_sweep(&f, &u, &targets, cfg.alpha, &cfg.r_grid, &b.fiber)
        .into_iter()
        .collect::<Result<Vec<CountingOutcome>, Error>>()
        .map_err(input)?;
    let flagged = rows.iter().filter(|r| r.sample().is_some_and(|s| s.flagged)).count();
    let infinite = rows.iter().filter(|r| r.is_infinite()).count();
    let body = match cfg.format.as_str() {
        "csv" => {
            let mut raw = vec![];
            write_counting_csv(&mut raw, &rows, &cfg.r_grid).map_err(input)?;
            stamp_csv(&raw, &config_hash("counting", cfg)).map_err(input)?
        }
        "json" => json("counting", cfg.seed, cfg, &rows),
        other => return Err(format!("field `format`: unknown format `{other}` (csv, json)")),
    };
    let code = if flagged > 0 { EXIT_UNCONVERGED } else { EXIT_OK };
    let summary = format!("{} targets, {infinite} infinite, {flagged} unconverged", rows.len());
    Ok(Output { body, summary, code })
}

pub const IDENTITIES: [&str; 7] = [
    "lelong-jensen",
    "littlewood-paley",
    "change-of-variables",
    "subordination",
    "log-bound",
    "mean-value",
    "proper-pushforward",
];

fn var(n: usize, i: usize) -> Polynomial {
    Polynomial::var(n, i)
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn suite(name: &str, b: &Budgets, tol: f64, seed: u64) -> Result<Vec<IdentityReport>, Error> {
    let disk = ModelDomain::UnitDisk;
    let ball = ModelDomain::UnitBall2;
    let z = var(1, 0);
    let z2 = z.pow(2)?;
    let mut g = rng(seed);
    let mut out = vec![];
    match name {
        "lelong-jensen" => {
            let green = Exhaustion::disk_green(c(0.3, 0.1))?;
            let h = z2.add(&Polynomial::constant(1, c(0.5, 0.0)));
            for p in [1.0, 2.0, 4.0] {
                out.push(verify_lelong_jensen(&green, &h, p, -0.5, b, tol)?);
            }
            out.push(verify_lelong_jensen(&Exhaustion::smooth_square(), &var(2, 0), 2.0, -0.5, b, tol)?);
            let q = var(2, 0).add(&var(2, 1).pow(2)?.scale(c(0.5, 0.0)));
            out.push(verify_lelong_jensen(&Exhaustion::log_abs(ball), &q, 2.0, -0.3, b, tol)?);
            for _ in 0..2 {
                let p = random_polynomial(&mut g, 1, 3);
                out.push(verify_lelong_jensen(&Exhaustion::log_abs(disk), &p, 2.0, -0.4, b, tol)?);
            }
        }
        "littlewood-paley" => {
            out.push(verify_littlewood_paley(&z2, disk, CPoint::origin(1), SpaceParams::hardy(2.0)?, b, tol)?);
            out.push(verify_littlewood_paley(&z, disk, CPoint::origin(1), SpaceParams::new(2.0, 0.0)?, b, tol)?);
            out.push(verify_littlewood_paley(&var(2, 0), ball, CPoint::origin(2), SpaceParams::hardy(2.0)?, b, tol)?);
        }
        "change-of-variables" => {
            out.push(verify_change_of_variables(&z2, &Exhaustion::log_abs(disk), 2.0, -0.3, b, tol)?);
            out.push(verify_change_of_variables(&var(2, 0), &Exhaustion::log_abs(ball), 2.0, -0.2, b, tol)?);
        }
        "subordination" => {
            let r_grid = [-1.0, -0.5, -0.1];
            for d in [disk, ball] {
                let f = random_disk_map(&mut g, d, 2)?;
                out.push(verify_subordination(&f, CPoint::origin(d.dim()), &z, 2.0, &r_grid, b)?);
            }
        }
        "log-bound" => {
            let grid: Vec<C64> = (0..8).map(|k| C64::from_polar(0.5 + 0.49 * k as f64 / 7.0, 0.3)).collect();
            out.push(verify_log_bound(&HoloMap::to_disk(var(2, 0), ball)?, CPoint::origin(2), &grid, b)?);
            out.push(verify_log_bound(&HoloMap::to_disk(z2.clone(), disk)?, CPoint::origin(1), &grid, b)?);
        }
        "mean-value" => {
            out.push(verify_mean_value(&z2, &Exhaustion::log_abs(disk), 0.0, c(0.5, 0.0), 0.3, b)?);
        }
        "proper-pushforward" => {
            let phi = |w: C64| w.norm_sqr() + w.re;
            out.push(verify_proper_pushforward(2, &phi, -0.5, b, tol.min(1e-10))?);
        }
        _ => return Err(Error::Parameter { name: "name", reason: format!("unknown identity `{name}`") }),
    }
    Ok(out)
}

pub fn verify(cfg: &VerifyConfig) -> Result<Output, String> {
    let names: Vec<&str> = if cfg.name == "all" {
        IDENTITIES.to_vec()
    } else if IDENTITIES.contains(&cfg.name.as_str()) {
        vec![cfg.name.as_str()]
    } else {
        return Err(format!("field `name`: unknown identity `{}` (all, {})", cfg.name, IDENTITIES.join(", ")));
    };
    if !(cfg.tol > 0.0) {
        return Err("field `tol` must be positive".into());
    }
    let b = budgets(&cfg.budget)?;
    let mut reports = vec![];
    for n in names {
        reports.extend(suite(n, &b, cfg.tol, cfg.seed).map_err(input)?);
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    let hash = config_hash("verify", cfg);
    let body = match cfg.format.as_str() {
        "table" => format!("# plurinorm {VERSION} config {hash} seed {}\n{}", cfg.seed, format_table(&reports)).into_bytes(),
        "csv" => {
            let mut raw = vec![];
            write_reports_csv(&mut raw, &reports).map_err(input)?;
            stamp_csv(&raw, &hash).map_err(input)?
        }
        "json" => json("verify", cfg.seed, cfg, &reports),
        other => return Err(format!("field `format`: unknown format `{other}` (table, csv, json)")),
    };
    let summary = if failed.is_empty() {
        format!("{} reports, all pass", reports.len())
    } else {
        format!("{} of {} reports fail: {}", failed.len(), reports.len(), failed.join(", "))
    };
    let code = if failed.is_empty() { EXIT_OK } else { EXIT_FAILED };
    Ok(Output { body, summary, code })
}

pub fn diagnose(cfg: &DiagnoseConfig) -> Result<Output, String> {
    let d = domain(&cfg.domain)?;
    let u = exhaustion(d, &cfg.exhaustion, cfg.pole.as_deref())?;
    let f = disk_map(cfg.map.as_deref(), d).map_err(input)?;
    let b = budgets(&cfg.budget)?;
    let opts = DiagnosticOptions { rays: cfg.rays, fiber: b.fiber };
    let rep = if cfg.r_grid.is_empty() {
        boundedness_diagnostic(&f, &u, cfg.alpha, cfg.beta, &cfg.radii, &opts)
    } else {
        deficiency_profile(&f, &u, cfg.alpha, cfg.beta, &cfg.r_grid, &opts)
    }
    .map_err(input)?;
    let summary = format!(
        "classification {}; max ratio {}, fitted limit {}; {} samples excluded",
        rep.classification,
        rep.trend.max_ratio,
        rep.trend.fitted_limit,
        rep.excluded.len()
    );
    Ok(Output { body: json("compop-diagnose", cfg.seed, cfg, &rep), summary, code: EXIT_OK })
}

pub fn sweep(cfg: &SweepConfig) -> Result<Output, String> {
    let b = budgets(&cfg.budget)?;
    let opts = SharpnessOptions { diagnostic_radii: cfg.diagnostic_radii.clone(), fiber: b.fiber, ..Default::default() };
    let t = quadratic_sharpness_sweep(cfg.beta, &cfg.radii, &opts).map_err(input)?;
    let body = match cfg.format.as_str() {
        "csv" => {
            let mut raw = vec![];
            write_sharpness_csv(&mut raw, &t).map_err(input)?;
            stamp_csv(&raw, &config_hash("compop-sweep-quadratic", cfg)).map_err(input)?
        }
        "json" => json("compop-sweep-quadratic", cfg.seed, cfg, &t),
        other => return Err(format!("field `format`: unknown format `{other}` (csv, json)")),
    };
    let fmt = |e: Option<plurinorm::compops::ExponentEstimate>| {
        e.map_or("undefined".to_string(), |e| format!("{:.4} ± {:.4}", e.exponent, e.half_width))
    };
    let mut summary = format!("n exponent {}, N_beta exponent {}", fmt(t.n_exponent), fmt(t.n_beta_exponent));
    for c in &t.threshold_checks {
        summary.push_str(&format!("; alpha {}: {}", c.alpha, c.classification));
    }
    let code = if t.n_exponent.is_some() && t.n_beta_exponent.is_some() { EXIT_OK } else { EXIT_UNCONVERGED };
    Ok(Output { body, summary, code })
}
