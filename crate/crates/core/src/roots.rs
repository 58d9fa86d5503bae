//! Univariate polynomial roots with multiplicity clustering.

use crate::geometry::C64;
use nalgebra::DMatrix;

/// A root together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub z: C64,
    pub multiplicity: usize,
}

fn trim(coeffs: &[C64]) -> &[C64] {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut d = coeffs.len();
    while d > 0 && coeffs[d - 1].norm() <= 1e-15 * scale {
        d -= 1;
    }
    &coeffs[..d]
}

fn eval_with_derivs(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn quadratic(c: C64, b: C64, a: C64) -> [C64; 2] {
    let disc = (b * b - 4.0 * a * c).sqrt();
    let sgn = if (b.conj() * disc).re >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (b + sgn * disc);
    if q.norm_sqr() == 0.0 {
        return [C64::new(0.0, 0.0); 2];
    }
    [q / a, c / q]
}

fn newton_polish(coeffs: &[C64], z: C64) -> C64 {
    let mut z = z;
    let (mut p, _) = eval_with_derivs(coeffs, z);
    for _ in 0..8 {
        let (_, dp) = eval_with_derivs(coeffs, z);
        if dp.norm_sqr() == 0.0 {
            break;
        }
        let next = z - p / dp;
        let (pn, _) = eval_with_derivs(coeffs, next);
        if !(pn.norm() < p.norm()) {
            break;
        }
        z = next;
        p = pn;
        if p.norm_sqr() == 0.0 {
            break;
        }
    }
    z
}

/// Eigenvalues of the companion matrix of a polynomial with nonzero
/// leading and constant coefficients.
fn companion_roots(c: &[C64]) -> Vec<C64> {
    let d = c.len() - 1;
    let lead = c[d];
    let mut m = DMatrix::<C64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / lead;
    }
    match m.clone().eigenvalues() {
        Some(ev) => ev.iter().copied().collect(),
        None => aberth(c).unwrap_or_default(),
    }
}

/// Aberth–Ehrlich iteration; `None` if it fails to settle.
fn aberth(c: &[C64]) -> Option<Vec<C64>> {
    let d = c.len() - 1;
    let lead = c[d].norm();
    // Cauchy bound for the initial circle.
    let bound = 1.0 + c[..d].iter().map(|x| x.norm() / lead).fold(0.0, f64::max);
    let rad = bound.min(
        (c[0].norm() / lead).powf(1.0 / d as f64).max(1e-3),
    );
    let mut z: Vec<C64> = (0..d)
        .map(|k| C64::from_polar(rad, std::f64::consts::TAU * (k as f64 + 0.25) / d as f64 + 0.4))
        .collect();
    for _ in 0..200 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (p, dp) = eval_with_derivs(c, z[i]);
            if p.norm_sqr() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = C64::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    s += C64::new(1.0, 0.0) / (z[i] - z[j]);
                }
            }
            let w = ratio / (C64::new(1.0, 0.0) - ratio * s);
            if !(w.re.is_finite() && w.im.is_finite()) {
                return None;
            }
            z[i] -= w;
            moved = moved.max(w.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-15 {
            return Some(z);
        }
    }
    None
}

/// All roots of `Σ c_k z^k` (with repetition), via companion-matrix
/// eigenvalues and Newton polishing.
pub fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
    roots_impl(coeffs, false)
}

/// Same as [`poly_roots`] but prefers the Aberth iteration for degree ≥ 3,
/// falling back to the companion matrix; used in inner quadrature loops.
pub fn poly_roots_fast(coeffs: &[C64]) -> Vec<C64> {
    roots_impl(coeffs, true)
}

fn roots_impl(coeffs: &[C64], fast: bool) -> Vec<C64> {
    let c = trim(coeffs);
    if c.len() <= 1 {
        return vec![];
    }
    // Exact zero roots.
    let zeros = c.iter().take_while(|x| x.norm_sqr() == 0.0).count();
    let c = &c[zeros..];
    let mut out = vec![C64::new(0.0, 0.0); zeros];
    let d = c.len() - 1;
    match d {
        0 => {}
        1 => out.push(-c[0] / c[1]),
        2 => out.extend(quadratic(c[0], c[1], c[2])),
        _ => {
            let raw = if fast {
                aberth(c).unwrap_or_else(|| companion_roots(c))
            } else {
                companion_roots(c)
            };
            out.extend(raw.into_iter().map(|z| newton_polish(c, z)));
        }
    }
    out
}

/// Taylor coefficients `p^{(j)}(z)/j!`, `j = 0..=deg`.
fn taylor_at(coeffs: &[C64], z: C64) -> Vec<C64> {
    let mut a = coeffs.to_vec();
    let n = a.len();
    // Repeated synthetic division.
    for j in 0..n {
        for k in (j..n - 1).rev() {
            let next = a[k + 1];
            a[k] += z * next;
        }
    }
    a
}

/// Groups nearby roots into clusters.
///
/// Roots within `rel_radius · max(1, |z|)` of each other are merged. Pairs up
/// to `1e-5` apart are merged as well when the Taylor coefficients of the
/// polynomial at the cluster mean confirm a multiple root.
pub fn cluster_roots(coeffs: &[C64], roots: &[C64], rel_radius: f64) -> Vec<Root> {
    let c = trim(coeffs);
    let mut clusters: Vec<(C64, Vec<C64>)> = vec![];
    for &z in roots {
        let hit = clusters
            .iter_mut()
            .find(|(m, _)| (z - *m).norm() <= rel_radius * z.norm().max(1.0));
        match hit {
            Some((m, members)) => {
                members.push(z);
                *m = members.iter().sum::<C64>() / members.len() as f64;
            }
            None => clusters.push((z, vec![z])),
        }
    }
    let scale: f64 = c.iter().map(|x| x.norm()).sum::<f64>().max(1e-300);
    loop {
        let mut merged = false;
        'outer: for i in 0..clusters.len() {
            for j in (i + 1)..clusters.len() {
                let (a, b) = (clusters[i].0, clusters[j].0);
                if (a - b).norm() > 1e-5 * a.norm().max(1.0) {
                    continue;
                }
                let k = clusters[i].1.len() + clusters[j].1.len();
                let all: Vec<C64> = clusters[i].1.iter().chain(&clusters[j].1).copied().collect();
                let mean = all.iter().sum::<C64>() / k as f64;
                let t = taylor_at(c, mean);
                let ok = t.iter().take(k).all(|x| x.norm() <= 1e-9 * scale);
                if ok {
                    clusters[i] = (mean, all);
                    clusters.remove(j);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    clusters
        .into_iter()
        .map(|(z, m)| Root { z, multiplicity: m.len() })
        .collect()
}

/// Roots with multiplicities (clustering radius `1e-8`).
pub fn roots_with_multiplicity(coeffs: &[C64]) -> Vec<Root> {
    let r = poly_roots(coeffs);
    cluster_roots(coeffs, &r, 1e-8)
}

/// Number of zeros of `p` inside `|z| = radius` by the argument principle
/// (winding number of `p` along the circle, `m` samples).
pub fn argument_principle_count(coeffs: &[C64], radius: f64, m: usize) -> i64 {
    let mut total = 0.0;
    let mut prev = crate::geometry::polynomial_value(coeffs, C64::new(radius, 0.0));
    for k in 1..=m {
        let z = C64::from_polar(radius, std::f64::consts::TAU * k as f64 / m as f64);
        let cur = crate::geometry::polynomial_value(coeffs, z);
        total += (cur / prev).arg();
        prev = cur;
    }
    (total / std::f64::consts::TAU).round() as i64
}
