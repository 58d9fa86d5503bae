use super::{Budget, Pairing};
use crate::error::{Error, Result};
use crate::exec::try_sum_range;
use crate::geometry::{CPoint, Exhaustion, LevelShape, C64};
use crate::quad::{gauss_legendre, GaussRule};
use std::f64::consts::TAU;
use std::io::Write;
use std::sync::Arc;

/// Index-addressable node set for one level shape at one resolution.
#[derive(Debug, Clone)]
pub struct LevelRule {
    shape: LevelShape,
    resolution: usize,
    s_rule: Option<Arc<GaussRule>>,
}

impl LevelRule {
    pub fn new(shape: LevelShape, resolution: usize) -> Result<Self> {
        if resolution < 4 {
            return Err(Error::param("resolution", format!("resolution must be ≥ 4, got {resolution}")));
        }
        let s_rule = match shape {
            LevelShape::Sphere { .. } => Some(gauss_legendre((resolution / 4).max(2))),
            _ => None,
        };
        Ok(Self { shape, resolution, s_rule })
    }

    pub fn shape(&self) -> LevelShape {
        self.shape
    }

    pub fn len(&self) -> usize {
        let n = self.resolution;
        match self.shape {
            LevelShape::Empty => 0,
            LevelShape::Circle { .. } => n,
            LevelShape::Torus { .. } => n * n,
            LevelShape::Sphere { .. } => n * n * self.s_rule.as_ref().map_or(0, |r| r.len()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node `i` and its weight.
    pub fn node(&self, i: usize) -> (CPoint, f64) {
        let n = self.resolution;
        let nf = n as f64;
        match self.shape {
            LevelShape::Empty => unreachable!("empty level has no nodes"),
            LevelShape::Circle { center, radius, mass } => {
                let zeta = C64::from_polar(radius, TAU * i as f64 / nf);
                let z = if center.norm_sqr() == 0.0 {
                    zeta
                } else {
                    (zeta + center) / (C64::new(1.0, 0.0) + center.conj() * zeta)
                };
                (CPoint::one(z), mass / nf)
            }
            LevelShape::Torus { radius, mass } => {
                let (a, b) = (i / n, i % n);
                let z1 = C64::from_polar(radius, TAU * a as f64 / nf);
                let z2 = C64::from_polar(radius, TAU * b as f64 / nf);
                (CPoint::two(z1, z2), mass / (nf * nf))
            }
            LevelShape::Sphere { radius, mass } => {
                let rule = self.s_rule.as_ref().expect("sphere rule");
                let per = n * n;
                let (k, rest) = (i / per, i % per);
                let (a, b) = (rest / n, rest % n);
                let s = 0.5 * (1.0 + rule.nodes[k]);
                let ws = 0.5 * rule.weights[k];
                let z1 = C64::from_polar(radius * (1.0 - s).sqrt(), TAU * a as f64 / nf);
                let z2 = C64::from_polar(radius * s.sqrt(), TAU * b as f64 / nf);
                (CPoint::two(z1, z2), mass * ws / (nf * nf))
            }
        }
    }

    /// `Σ w φ(node)` with deterministic compensated summation.
    pub fn integrate<F>(&self, phi: F) -> Result<f64>
    where
        F: Fn(&CPoint) -> f64 + Sync + Send,
    {
        try_sum_range(self.len(), |i| {
            let (z, w) = self.node(i);
            let v = phi(&z);
            if v.is_finite() {
                Ok(w * v)
            } else {
                Err(Error::Evaluation { node: z.to_string(), value: v })
            }
        })
    }

    /// The rule at half resolution, used for error estimates.
    pub fn coarse(&self) -> Result<Self> {
        Self::new(self.shape, (self.resolution / 2).max(4))
    }
}

/// Materialised node set approximating `μ_{u,r}`.
#[derive(Debug, Clone)]
pub struct LevelQuadrature {
    pub level: f64,
    pub nodes: Vec<(CPoint, f64)>,
    pub total_mass: f64,
    pub resolution: usize,
    pub exhaustion: Exhaustion,
    rule: LevelRule,
}

/// Builds the node set of the level measure `μ_{u,r}`.
pub fn level_quadrature(u: &Exhaustion, r: f64, resolution: usize) -> Result<LevelQuadrature> {
    let shape = u.level_shape(r)?;
    if matches!(u.domain(), crate::geometry::ModelDomain::Bidisk) && !matches!(shape, LevelShape::Torus { .. } | LevelShape::Empty) {
        return Err(Error::Unsupported(format!("level measure of {}", u.describe())));
    }
    let rule = LevelRule::new(shape, resolution)?;
    let nodes: Vec<(CPoint, f64)> = crate::exec::map_range(rule.len(), |i| rule.node(i));
    Ok(LevelQuadrature {
        level: r,
        nodes,
        total_mass: shape.mass(),
        resolution,
        exhaustion: u.clone(),
        rule,
    })
}

impl LevelQuadrature {
    pub fn shape(&self) -> LevelShape {
        self.rule.shape()
    }

    /// Sum of node weights.
    pub fn weight_sum(&self) -> f64 {
        crate::exec::sum_slice(&self.nodes, |(_, w)| *w)
    }

    /// Writes `re₁, im₁, [re₂, im₂,] weight` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let dim = self.exhaustion.dim();
        if dim == 1 {
            w.write_record(["re1", "im1", "weight"])?;
        } else {
            w.write_record(["re1", "im1", "re2", "im2", "weight"])?;
        }
        for (z, wt) in &self.nodes {
            let mut rec: Vec<String> = z.coords().iter().flat_map(|c| [c.re.to_string(), c.im.to_string()]).collect();
            rec.push(wt.to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `μ_{u,r}(φ) = Σ w φ(node)` with a coarse-resolution error estimate.
pub fn pair_level<F>(q: &LevelQuadrature, phi: F) -> Result<Pairing>
where
    F: Fn(&CPoint) -> f64 + Sync + Send,
{
    let value = try_sum_range(q.nodes.len(), |i| {
        let (z, w) = &q.nodes[i];
        let v = phi(z);
        if v.is_finite() {
            Ok(w * v)
        } else {
            Err(Error::Evaluation { node: z.to_string(), value: v })
        }
    })?;
    let coarse = if q.rule.is_empty() { 0.0 } else { q.rule.coarse()?.integrate(&phi)? };
    Ok(Pairing {
        value,
        error_estimate: (value - coarse).abs(),
        evaluations: q.nodes.len(),
        converged: true,
        warnings: vec![],
    })
}

/// Streaming version of `pair_level(level_quadrature(u, r, ·), φ)` at the
/// resolution selected by `budget`.
pub fn level_integral<F>(u: &Exhaustion, r: f64, budget: &Budget, phi: F) -> Result<Pairing>
where
    F: Fn(&CPoint) -> f64 + Sync + Send,
{
    let shape = u.level_shape(r)?;
    if shape == LevelShape::Empty {
        return Ok(Pairing::exact(0.0));
    }
    let rule = LevelRule::new(shape, budget.level_resolution(&shape))?;
    let value = rule.integrate(&phi)?;
    let coarse = rule.coarse()?.integrate(&phi)?;
    Ok(Pairing {
        value,
        error_estimate: (value - coarse).abs(),
        evaluations: rule.len() + rule.coarse()?.len(),
        converged: true,
        warnings: vec![],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ModelDomain;

    #[test]
    fn masses() {
        for (u, m) in [
            (Exhaustion::log_abs(ModelDomain::UnitDisk), TAU),
            (Exhaustion::log_abs(ModelDomain::UnitBall2), TAU * TAU),
            (Exhaustion::log_max_abs(), TAU * TAU),
            (Exhaustion::disk_green(C64::new(0.3, -0.4)).unwrap(), TAU),
        ] {
            for r in [-3.0, -0.5, -1e-3] {
                let q = level_quadrature(&u, r, 32).unwrap();
                assert!((q.weight_sum() - m).abs() < 1e-12 * m);
                assert!((q.total_mass - m).abs() < 1e-15 * m);
                for (z, _) in q.nodes.iter().step_by(7) {
                    assert!((u.value(z.coords()) - r).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn circle_and_sphere_examples() {
        let u = Exhaustion::log_abs(ModelDomain::UnitDisk);
        let q = level_quadrature(&u, -0.3, 64).unwrap();
        let v = pair_level(&q, |z| z[0].norm_sqr()).unwrap();
        assert!((v.value - TAU * (-0.6f64).exp()).abs() < 1e-13);
        let u = Exhaustion::log_abs(ModelDomain::UnitBall2);
        let q = level_quadrature(&u, -1e-12, 16).unwrap();
        let v = pair_level(&q, |z| z[0].norm_sqr()).unwrap();
        assert!((v.value - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-9);
    }

    #[test]
    fn non_finite_integrand_reports_node() {
        let u = Exhaustion::log_abs(ModelDomain::UnitDisk);
        let q = level_quadrature(&u, -0.5, 8).unwrap();
        let err = pair_level(&q, |z| if z[0].re > 0.0 { f64::NAN } else { 1.0 }).unwrap_err();
        assert!(matches!(err, Error::Evaluation { .. }));
    }

    #[test]
    fn csv_export() {
        let u = Exhaustion::log_abs(ModelDomain::UnitBall2);
        let q = level_quadrature(&u, -0.5, 4).unwrap();
        let mut buf = vec![];
        q.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("re1,im1,re2,im2,weight\n"));
        assert_eq!(s.lines().count(), 1 + q.nodes.len());
    }
}
