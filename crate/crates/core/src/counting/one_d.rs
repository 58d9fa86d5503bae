use super::{pole_hit, CountingMethod, CountingOutcome, CountingSample};
use crate::error::{Error, Result};
use crate::geometry::{CPoint, Exhaustion, HoloFunction, ModelDomain, C64};
use crate::roots::{cluster_roots, poly_roots};
use crate::special::gamma_unchecked;
use serde::Serialize;

/// A point of the fiber `{f = w}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiberPoint {
    pub location: CPoint,
    pub multiplicity: usize,
    pub u_value: f64,
    /// Set when `|z|` is within `1e-10` of the unit circle.
    pub near_boundary: bool,
}

/// Preimages of `w` in the unit disk with multiplicities; `u_value` is
/// `log|z|`.
pub fn roots_1d(f: &HoloFunction, w: C64, domain: ModelDomain) -> Result<Vec<FiberPoint>> {
    if domain != ModelDomain::UnitDisk || f.vars() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: f.vars().max(domain.dim()) });
    }
    if f.is_constant() {
        return Err(Error::param("f", "roots need a non-constant function"));
    }
    let pts: Vec<(C64, usize)> = match f {
        HoloFunction::Polynomial(p) => {
            let mut c = p.dense_coeffs();
            c[0] -= w;
            let r = poly_roots(&c);
            cluster_roots(&c, &r, 1e-8).into_iter().map(|r| (r.z, r.multiplicity)).collect()
        }
        HoloFunction::TestKernel(k) => k.preimages(w).into_iter().map(|z| (z, 1)).collect(),
    };
    Ok(pts
        .into_iter()
        .filter(|(z, _)| z.norm() < 1.0)
        .map(|(z, m)| FiberPoint {
            location: CPoint::one(z),
            multiplicity: m,
            u_value: z.norm().ln(),
            near_boundary: 1.0 - z.norm() < 1e-10,
        })
        .collect())
}

/// Counting functions of `f` on the disk by root sums:
/// `n(w,r) = #{u < r}`, `N(w,r) = Σ (r − u(z_i))₊`, `N_α(w) = Σ γ_α(u(z_i))`.
pub fn counting_1d(f: &HoloFunction, u: &Exhaustion, w: C64, alpha: f64, r_grid: &[f64]) -> Result<CountingOutcome> {
    if u.domain() != ModelDomain::UnitDisk {
        return Err(Error::param("u", "root counting needs an exhaustion on the unit disk"));
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
    let mut warnings = vec![];
    let roots = if f.is_constant() { vec![] } else { roots_1d(f, w, ModelDomain::UnitDisk)? };
    let mut us = vec![];
    for fp in &roots {
        if fp.near_boundary {
            warnings.push(format!("root {} lies within 1e-10 of the unit circle", fp.location));
        }
        us.push((u.value(fp.location.coords()), fp.multiplicity as f64));
    }
    let n_of_r: Vec<f64> = r_grid.iter().map(|&r| us.iter().filter(|(v, _)| *v < r).map(|(_, m)| m).sum()).collect();
    let big_n_of_r: Vec<f64> = r_grid.iter().map(|&r| us.iter().map(|(v, m)| m * (r - v).max(0.0)).sum()).collect();
    let n_alpha = us.iter().map(|(v, m)| m * gamma_unchecked(*v, alpha)).sum();
    Ok(CountingOutcome::Finite(CountingSample {
        w,
        alpha,
        r_grid: r_grid.to_vec(),
        n_of_r_error: vec![0.0; r_grid.len()],
        n_of_r,
        big_n_of_r,
        n_alpha,
        error_estimate: 0.0,
        n_alpha_error: 0.0,
        method: CountingMethod::Roots1d,
        chart: "roots".into(),
        flagged: false,
        warnings,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Polynomial, TestKernel};
    use crate::roots::argument_principle_count;
    use crate::special::gamma_alpha;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn zk(k: u32) -> HoloFunction {
        Polynomial::var(1, 0).pow(k).unwrap().into()
    }

    #[test]
    fn root_examples() {
        let r = roots_1d(&zk(2), c(0.25), ModelDomain::UnitDisk).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|p| p.multiplicity == 1 && (p.location[0].norm() - 0.5).abs() < 1e-15));
        let r = roots_1d(&zk(2), c(0.0), ModelDomain::UnitDisk).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 2);
        let f = Polynomial::univariate(&[c(0.0), c(-0.3), c(0.0), c(1.0)]);
        let r = roots_1d(&f.clone().into(), c(0.1), ModelDomain::UnitDisk).unwrap();
        let total: usize = r.iter().map(|p| p.multiplicity).sum();
        let mut co = f.dense_coeffs();
        co[0] -= c(0.1);
        assert_eq!(total as i64, argument_principle_count(&co, 1.0 - 1e-6, 4096));
        assert_eq!(total, 3);
    }

    #[test]
    fn counting_examples() {
        let u = Exhaustion::log_abs(ModelDomain::UnitDisk);
        let w = C64::new(0.2, 0.3);
        for k in 1..=4 {
            let s = counting_1d(&zk(k), &u, w, -1.0, &[0.0]).unwrap();
            let s = s.sample().unwrap();
            assert!((s.n_alpha + w.norm().ln()).abs() < 1e-13);
            assert!((s.big_n_of_r[0] - s.n_alpha).abs() < 1e-13);
            assert_eq!(s.n_of_r[0], k as f64);
        }
        let g = Exhaustion::disk_green(C64::new(-0.4, 0.1)).unwrap();
        for alpha in [-1.0, 0.0, 1.5] {
            let s = counting_1d(&zk(1), &g, w, alpha, &[-0.5]).unwrap();
            let e = gamma_alpha(g.value(&[w]), alpha).unwrap();
            assert!((s.n_alpha() - e).abs() < 1e-14);
        }
        assert!(counting_1d(&zk(2), &u, c(0.0), 0.0, &[0.0]).unwrap().is_infinite());
    }

    #[test]
    fn kernel_fibers() {
        let k = TestKernel::new(C64::new(0.9, 0.0), 1.0).unwrap();
        let w = k.eval(C64::new(0.9, 0.0));
        let r = roots_1d(&k.into(), w, ModelDomain::UnitDisk).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].location[0] - c(0.9)).norm() < 1e-12);
    }
}
