use crate::counting::{counting_for_map, roots_1d, CountingOutcome};
use crate::error::{Error, Result};
use crate::geometry::{Exhaustion, ExhaustionKind, HoloFunction, HoloMap, Holomorphic, ModelDomain, SpaceParams, TestKernel, C64};
use crate::identities::Budgets;
use crate::measures::level_quadrature;
use crate::spaces::{bergman_norm, NormOptions};
use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct NecessityOptions {
    /// Window factor: `|w|` must exceed `a · max_K|f∘F|`.
    pub a: f64,
    /// Level `k` of the compact `K = {u₁ ≤ k}`; `None` picks a level whose
    /// sublevel set carries `(dd^c u₁)^n`.
    pub k_level: Option<f64>,
    pub budgets: Budgets,
}

impl Default for NecessityOptions {
    fn default() -> Self {
        Self { a: 2.0, k_level: None, budgets: Budgets::default() }
    }
}

/// `ν(w, f) = |w|^p N_{u₁,f∘F,β}(w) / ‖f‖^p_{A^p_{u₂,α}}`.
#[derive(Debug, Clone, Serialize)]
pub struct NecessityRatio {
    #[serde(serialize_with = "ser_c64")]
    pub w: C64,
    pub f: HoloFunction,
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `N_{u₁,f∘F,β}(w)`.
    pub counting: f64,
    pub counting_error: f64,
    /// `‖f‖^p`.
    pub norm_p: f64,
    pub norm_error: f64,
    pub ratio: f64,
    /// `max_K|f∘F|` on the level set bounding `K`.
    pub k_max: f64,
    pub k_level: f64,
}

fn ser_c64<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    (z.re, z.im).serialize(s)
}

fn default_k_level(u: &Exhaustion) -> f64 {
    match u.kind() {
        ExhaustionKind::LogAbs | ExhaustionKind::LogMaxAbs | ExhaustionKind::GreenPole { .. } => -1.0,
        ExhaustionKind::SmoothSquare => -1e-9,
        ExhaustionKind::Scaled { factor, inner } => factor * default_k_level(inner),
        ExhaustionKind::Truncated { level, .. } => 0.5 * level,
    }
}

/// The necessity ratio of `F` at `w` for a test function `f` on the disk.
///
/// `N_{f∘F,β}(w) = Σ m_i N_{F,β}(ξ_i)` over the roots `ξ_i` of `f = w` in
/// the disk, with multiplicities `m_i`.
#[allow(clippy::too_many_arguments)]
pub fn necessity_ratio(
    f_map: &HoloMap,
    f: &HoloFunction,
    u1: &Exhaustion,
    u2: &Exhaustion,
    params: SpaceParams,
    beta: f64,
    w: C64,
    opts: &NecessityOptions,
) -> Result<NecessityRatio> {
    let params = SpaceParams::new(params.p, params.alpha)?;
    let g = f_map
        .scalar()
        .ok_or_else(|| Error::Unsupported("necessity ratios need a scalar map into the unit disk".into()))?;
    if f_map.source() != u1.domain() {
        return Err(Error::param("u1", format!("exhaustion lives on {}, map on {}", u1.domain(), f_map.source())));
    }
    if u2.domain() != ModelDomain::UnitDisk || f.vars() != 1 {
        return Err(Error::param("u2", "the target space lives on the unit disk"));
    }
    if !(opts.a > 1.0) {
        return Err(Error::param("a", format!("window factor must be > 1, got {}", opts.a)));
    }
    let k_level = opts.k_level.unwrap_or_else(|| default_k_level(u1));
    let k = level_quadrature(u1, k_level, 256)?;
    let k_max = k
        .nodes
        .iter()
        .map(|(z, _)| f.value(&[g.eval(z.coords())]).norm())
        .fold(0.0, f64::max);
    if w.norm() <= opts.a * k_max {
        return Err(Error::Precondition(format!(
            "|w| = {} does not exceed a·max_K|f∘F| = {} · {k_max} (K = {{u1 ≤ {k_level}}})",
            w.norm(),
            opts.a
        )));
    }
    let (counting, counting_error) = if f.is_constant() {
        let c = f.value(&[C64::new(0.0, 0.0)]);
        if (c - w).norm() > 1e-12 * w.norm().max(1.0) {
            (0.0, 0.0)
        } else {
            (f64::INFINITY, 0.0)
        }
    } else {
        let mut total = (0.0, 0.0);
        for xi in roots_1d(f, w, ModelDomain::UnitDisk)? {
            let m = xi.multiplicity as f64;
            match counting_for_map(f_map, u1, xi.location[0], beta, &opts.budgets.fiber)? {
                CountingOutcome::Finite(s) => {
                    total.0 += m * s.n_alpha;
                    total.1 += m * s.n_alpha_error;
                }
                CountingOutcome::Infinite { .. } => total.0 = f64::INFINITY,
            }
        }
        total
    };
    let norm = bergman_norm(f, u2, params, &NormOptions::with_budget(opts.budgets.measure))?;
    if norm.value_p <= 0.0 {
        return Err(Error::Precondition("the test function has zero norm".into()));
    }
    let wp = w.norm().powf(params.p);
    Ok(NecessityRatio {
        w,
        f: f.clone(),
        p: params.p,
        alpha: params.alpha,
        beta,
        counting,
        counting_error,
        norm_p: norm.value_p,
        norm_error: norm.error_estimate,
        ratio: wp * counting / norm.value_p,
        k_max,
        k_level,
    })
}

/// Ratios along the kernel family `f_j = TestKernel{z_j, (α+2)/p}`,
/// `w_j = f_j(z_j) = (1 − |z_j|²)^{−(α+2)/p}`, with `u₂ = log|z|`.
pub fn necessity_family(
    f_map: &HoloMap,
    u1: &Exhaustion,
    params: SpaceParams,
    beta: f64,
    points: &[C64],
    opts: &NecessityOptions,
) -> Result<Vec<Result<NecessityRatio>>> {
    let params = SpaceParams::new(params.p, params.alpha)?;
    let u2 = Exhaustion::log_abs(ModelDomain::UnitDisk);
    let s = (params.alpha + 2.0) / params.p;
    Ok(points
        .iter()
        .map(|&z| {
            let k = TestKernel::new(z, s)?;
            let w = C64::new((1.0 - z.norm_sqr()).powf(-s), 0.0);
            necessity_ratio(f_map, &k.into(), u1, &u2, params, beta, w, opts)
        })
        .collect())
}
