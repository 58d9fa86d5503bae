use super::domain::{mobius_log_abs, ModelDomain};
use super::point::{CPoint, C64};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Membership flag: compactly supported Monge–Ampère mass (`E0`), the wider
/// class `E`, or a smooth defining function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExhaustionClass {
    E0,
    E,
    Smooth,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExhaustionKind {
    /// `log|z|` on the disk or the ball.
    LogAbs,
    /// `log max(|z₁|, |z₂|)` on the bidisk.
    LogMaxAbs,
    /// Green function with a logarithmic pole (origin only in `C²`).
    GreenPole { pole: CPoint },
    /// `|z|² − 1` on the ball.
    SmoothSquare,
    /// `factor · inner`.
    Scaled { factor: f64, inner: Box<Exhaustion> },
    /// `max(inner, level)`.
    Truncated { level: f64, inner: Box<Exhaustion> },
}

/// Geometry of the level set `{u = r}` carrying the level measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevelShape {
    /// The measure vanishes.
    Empty,
    /// Image of the circle `|ζ| = radius` under `ζ ↦ (ζ + a)/(1 + āζ)`.
    Circle { center: C64, radius: f64, mass: f64 },
    /// Sphere `|z| = radius` in `C²`.
    Sphere { radius: f64, mass: f64 },
    /// Torus `|z₁| = |z₂| = radius`.
    Torus { radius: f64, mass: f64 },
}

impl LevelShape {
    pub fn mass(&self) -> f64 {
        match *self {
            LevelShape::Empty => 0.0,
            LevelShape::Circle { mass, .. } | LevelShape::Sphere { mass, .. } | LevelShape::Torus { mass, .. } => mass,
        }
    }

    fn scale_mass(self, k: f64) -> Self {
        match self {
            LevelShape::Empty => LevelShape::Empty,
            LevelShape::Circle { center, radius, mass } => LevelShape::Circle { center, radius, mass: mass * k },
            LevelShape::Sphere { radius, mass } => LevelShape::Sphere { radius, mass: mass * k },
            LevelShape::Torus { radius, mass } => LevelShape::Torus { radius, mass: mass * k },
        }
    }
}

/// A plurisubharmonic exhaustion `u < 0` of a model domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Exhaustion {
    domain: ModelDomain,
    kind: ExhaustionKind,
    poles: Vec<CPoint>,
    class: ExhaustionClass,
}

impl Exhaustion {
    /// `log|z|` on the disk or ball, `log max|z_j|` on the bidisk.
    pub fn log_abs(domain: ModelDomain) -> Self {
        let kind = match domain {
            ModelDomain::Bidisk => ExhaustionKind::LogMaxAbs,
            _ => ExhaustionKind::LogAbs,
        };
        Self {
            domain,
            kind,
            poles: vec![CPoint::origin(domain.dim())],
            class: ExhaustionClass::E0,
        }
    }

    pub fn log_max_abs() -> Self {
        Self::log_abs(ModelDomain::Bidisk)
    }

    pub fn green_pole(domain: ModelDomain, pole: CPoint) -> Result<Self> {
        domain.check(&pole)?;
        if domain.dim() == 2 && !pole.is_origin() {
            return Err(Error::Unsupported(format!(
                "Green pole {pole} in the {domain}: only the origin is supported in C^2"
            )));
        }
        Ok(Self {
            domain,
            kind: ExhaustionKind::GreenPole { pole },
            poles: vec![pole],
            class: ExhaustionClass::E0,
        })
    }

    pub fn disk_green(a: C64) -> Result<Self> {
        Self::green_pole(ModelDomain::UnitDisk, CPoint::one(a))
    }

    pub fn smooth_square() -> Self {
        Self {
            domain: ModelDomain::UnitBall2,
            kind: ExhaustionKind::SmoothSquare,
            poles: vec![],
            class: ExhaustionClass::Smooth,
        }
    }

    pub fn scaled(factor: f64, inner: Exhaustion) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::param("factor", format!("scale factor must be > 0, got {factor}")));
        }
        Ok(Self {
            domain: inner.domain,
            poles: inner.poles.clone(),
            class: inner.class,
            kind: ExhaustionKind::Scaled { factor, inner: Box::new(inner) },
        })
    }

    pub fn truncated(level: f64, inner: Exhaustion) -> Result<Self> {
        if !(level < 0.0) || !level.is_finite() {
            return Err(Error::param("level", format!("truncation level must be < 0, got {level}")));
        }
        Ok(Self {
            domain: inner.domain,
            poles: vec![],
            class: ExhaustionClass::E0,
            kind: ExhaustionKind::Truncated { level, inner: Box::new(inner) },
        })
    }

    pub fn domain(&self) -> ModelDomain {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn kind(&self) -> &ExhaustionKind {
        &self.kind
    }

    /// The infinite locus `L(u)`.
    pub fn poles(&self) -> &[CPoint] {
        &self.poles
    }

    pub fn class(&self) -> ExhaustionClass {
        self.class
    }

    /// Checked evaluation `u(z)`; `−∞` exactly at the poles.
    pub fn eval(&self, z: &CPoint) -> Result<f64> {
        self.domain.check(z)?;
        Ok(self.value(z.coords()))
    }

    /// Unchecked evaluation.
    pub fn value(&self, z: &[C64]) -> f64 {
        match &self.kind {
            ExhaustionKind::LogAbs => match self.dim() {
                1 => z[0].norm().ln(),
                _ => 0.5 * (z[0].norm_sqr() + z[1].norm_sqr()).ln(),
            },
            ExhaustionKind::LogMaxAbs => z[0].norm().max(z[1].norm()).ln(),
            ExhaustionKind::GreenPole { pole } => match self.domain {
                ModelDomain::UnitDisk => mobius_log_abs(z[0], pole[0]),
                ModelDomain::UnitBall2 => 0.5 * (z[0].norm_sqr() + z[1].norm_sqr()).ln(),
                ModelDomain::Bidisk => z[0].norm().max(z[1].norm()).ln(),
            },
            ExhaustionKind::SmoothSquare => z[0].norm_sqr() + z[1].norm_sqr() - 1.0,
            ExhaustionKind::Scaled { factor, inner } => factor * inner.value(z),
            ExhaustionKind::Truncated { level, inner } => inner.value(z).max(*level),
        }
    }

    /// Pole of the underlying Green function when `u` is built from one
    /// (`None` for the smooth exhaustion).
    pub fn base_pole(&self) -> Option<CPoint> {
        match &self.kind {
            ExhaustionKind::LogAbs | ExhaustionKind::LogMaxAbs => Some(CPoint::origin(self.dim())),
            ExhaustionKind::GreenPole { pole } => Some(*pole),
            ExhaustionKind::SmoothSquare => None,
            ExhaustionKind::Scaled { inner, .. } | ExhaustionKind::Truncated { inner, .. } => inner.base_pole(),
        }
    }

    /// Every supported exhaustion is `ψ(t)` of a radial variable `t`: the
    /// logarithm of `|φ_a(z)|` (disk), `|z|` (ball) or `max|z_j|` (bidisk).
    /// Returns `ψ(t)`.
    pub fn profile(&self, t: f64) -> f64 {
        match &self.kind {
            ExhaustionKind::SmoothSquare => (2.0 * t).exp() - 1.0,
            ExhaustionKind::Scaled { factor, inner } => factor * inner.profile(t),
            ExhaustionKind::Truncated { level, inner } => inner.profile(t).max(*level),
            _ => t,
        }
    }

    /// `sup{t : ψ(t) < r}` (so `{u < r} = {t < t_max}`), `None` if empty.
    pub fn profile_sublevel(&self, r: f64) -> Option<f64> {
        match &self.kind {
            ExhaustionKind::SmoothSquare => (r > -1.0).then(|| 0.5 * (1.0 + r).ln()),
            ExhaustionKind::Scaled { factor, inner } => inner.profile_sublevel(r / factor),
            ExhaustionKind::Truncated { level, inner } => {
                if r <= *level {
                    None
                } else {
                    inner.profile_sublevel(r)
                }
            }
            _ => Some(r.min(0.0)),
        }
    }

    /// Complex Hessian `(∂²u/∂z_i∂z̄_j)` at a smooth point (zero matrix
    /// where `u` is pluriharmonic; the `[0][0]` entry is used when `n = 1`).
    pub fn hessian(&self, z: &[C64]) -> [[C64; 2]; 2] {
        let zero = [[C64::new(0.0, 0.0); 2]; 2];
        match &self.kind {
            ExhaustionKind::LogAbs | ExhaustionKind::GreenPole { .. } if self.domain == ModelDomain::UnitBall2 => {
                let n2 = z[0].norm_sqr() + z[1].norm_sqr();
                let mut h = zero;
                for i in 0..2 {
                    for j in 0..2 {
                        let delta = if i == j { 1.0 / n2 } else { 0.0 };
                        h[i][j] = 0.5 * (C64::new(delta, 0.0) - z[i].conj() * z[j] / (n2 * n2));
                    }
                }
                h
            }
            ExhaustionKind::SmoothSquare => {
                let mut h = zero;
                h[0][0] = C64::new(1.0, 0.0);
                h[1][1] = C64::new(1.0, 0.0);
                h
            }
            ExhaustionKind::Scaled { factor, inner } => {
                let mut h = inner.hessian(z);
                for row in h.iter_mut() {
                    for x in row.iter_mut() {
                        *x *= *factor;
                    }
                }
                h
            }
            ExhaustionKind::Truncated { level, inner } => {
                if inner.value(z) > *level {
                    inner.hessian(z)
                } else {
                    zero
                }
            }
            _ => zero,
        }
    }

    /// Point masses of `(dd^c u)^n`.
    pub fn atoms(&self) -> Vec<(CPoint, f64)> {
        let n = self.dim() as i32;
        match &self.kind {
            ExhaustionKind::LogAbs | ExhaustionKind::LogMaxAbs | ExhaustionKind::GreenPole { .. } => {
                vec![(self.base_pole().expect("green"), TAU.powi(n))]
            }
            ExhaustionKind::Scaled { factor, inner } => inner
                .atoms()
                .into_iter()
                .map(|(p, m)| (p, m * factor.powi(n)))
                .collect(),
            _ => vec![],
        }
    }

    /// Lebesgue density of the absolutely continuous part of `(dd^c u)^n`
    /// at `z` (`(dd^c|z|²)² = 32 dV`).
    pub fn ma_density(&self, z: &[C64]) -> f64 {
        match &self.kind {
            ExhaustionKind::SmoothSquare => 32.0,
            ExhaustionKind::Scaled { factor, inner } => factor.powi(self.dim() as i32) * inner.ma_density(z),
            ExhaustionKind::Truncated { level, inner } => {
                if inner.value(z) > *level {
                    inner.ma_density(z)
                } else {
                    0.0
                }
            }
            _ => 0.0,
        }
    }

    /// Whether `(dd^c u)^n` has a singular part that is not a point mass.
    pub fn has_diffuse_singular_part(&self) -> bool {
        match &self.kind {
            ExhaustionKind::Truncated { .. } => true,
            ExhaustionKind::Scaled { inner, .. } => inner.has_diffuse_singular_part(),
            _ => false,
        }
    }

    /// Support and total mass of the level measure `μ_{u,r}`.
    pub fn level_shape(&self, r: f64) -> Result<LevelShape> {
        if !(r < 0.0) {
            return Err(Error::param("r", format!("level must be < 0, got {r}")));
        }
        let n = self.dim() as i32;
        Ok(match &self.kind {
            ExhaustionKind::LogAbs | ExhaustionKind::LogMaxAbs | ExhaustionKind::GreenPole { .. } => {
                let radius = r.exp();
                let mass = TAU.powi(n);
                match self.domain {
                    ModelDomain::UnitDisk => LevelShape::Circle {
                        center: self.base_pole().expect("green")[0],
                        radius,
                        mass,
                    },
                    ModelDomain::UnitBall2 => LevelShape::Sphere { radius, mass },
                    ModelDomain::Bidisk => LevelShape::Torus { radius, mass },
                }
            }
            ExhaustionKind::SmoothSquare => {
                if r <= -1.0 {
                    LevelShape::Empty
                } else {
                    let pi2 = std::f64::consts::PI.powi(2);
                    LevelShape::Sphere {
                        radius: (1.0 + r).sqrt(),
                        mass: 16.0 * pi2 * (1.0 + r).powi(2),
                    }
                }
            }
            ExhaustionKind::Scaled { factor, inner } => inner.level_shape(r / factor)?.scale_mass(factor.powi(n)),
            ExhaustionKind::Truncated { level, inner } => {
                if r <= *level {
                    LevelShape::Empty
                } else {
                    inner.level_shape(r)?
                }
            }
        })
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match &self.kind {
            ExhaustionKind::LogAbs => format!("log|z| on the {}", self.domain),
            ExhaustionKind::LogMaxAbs => "log max|z_j| on the bidisk".into(),
            ExhaustionKind::GreenPole { pole } => format!("Green function with pole {pole} on the {}", self.domain),
            ExhaustionKind::SmoothSquare => "|z|^2 - 1 on the unit ball of C^2".into(),
            ExhaustionKind::Scaled { factor, inner } => format!("{factor} * ({})", inner.describe()),
            ExhaustionKind::Truncated { level, inner } => format!("max({}, {level})", inner.describe()),
        }
    }
}

/// Central-difference complex Hessian of `u` at `z` with step `h`.
pub fn discrete_complex_hessian(u: &Exhaustion, z: &[C64], h: f64) -> [[C64; 2]; 2] {
    let n = u.dim();
    // Real coordinates x_0, y_0, x_1, y_1.
    let m = 2 * n;
    let base: Vec<f64> = z.iter().take(n).flat_map(|c| [c.re, c.im]).collect();
    let f = |x: &[f64]| {
        let zs: Vec<C64> = x.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
        u.value(&zs)
    };
    let mut d2 = vec![vec![0.0; m]; m];
    let f0 = f(&base);
    for a in 0..m {
        for b in a..m {
            let v = if a == b {
                let mut p = base.clone();
                p[a] += h;
                let fp = f(&p);
                p[a] -= 2.0 * h;
                let fm = f(&p);
                (fp - 2.0 * f0 + fm) / (h * h)
            } else {
                let mut acc = 0.0;
                for (sa, sb, sg) in [(1.0, 1.0, 1.0), (1.0, -1.0, -1.0), (-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0)] {
                    let mut p = base.clone();
                    p[a] += sa * h;
                    p[b] += sb * h;
                    acc += sg * f(&p);
                }
                acc / (4.0 * h * h)
            };
            d2[a][b] = v;
            d2[b][a] = v;
        }
    }
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for j in 0..n {
        for k in 0..n {
            let (xj, yj, xk, yk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
            out[j][k] = 0.25
                * C64::new(d2[xj][xk] + d2[yj][yk], d2[xj][yk] - d2[yj][xk]);
        }
    }
    out
}

/// Smallest eigenvalue of a Hermitian 1×1 or 2×2 matrix.
pub fn min_hermitian_eigenvalue(h: &[[C64; 2]; 2], n: usize) -> f64 {
    if n == 1 {
        return h[0][0].re;
    }
    let a = h[0][0].re;
    let d = h[1][1].re;
    let b = 0.5 * (h[0][1] + h[1][0].conj());
    0.5 * (a + d) - ((0.5 * (a - d)).powi(2) + b.norm_sqr()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let u = Exhaustion::log_abs(ModelDomain::UnitBall2);
        let z = CPoint::two(c(0.5, 0.0), c(0.0, 0.0));
        assert!((u.eval(&z).unwrap() - 0.5f64.ln()).abs() < 1e-15);
        let g = Exhaustion::disk_green(c(0.5, 0.0)).unwrap();
        assert_eq!(g.eval(&CPoint::real1(0.5)).unwrap(), f64::NEG_INFINITY);
        assert!((g.eval(&CPoint::real1(0.0)).unwrap() - 0.5f64.ln()).abs() < 1e-15);
        assert!(u.eval(&CPoint::two(c(1.0, 0.0), c(0.1, 0.0))).is_err());
    }

    #[test]
    fn analytic_hessian_matches_differences() {
        let z = [c(0.3, -0.2), c(0.1, 0.4)];
        for u in [
            Exhaustion::log_abs(ModelDomain::UnitBall2),
            Exhaustion::smooth_square(),
            Exhaustion::scaled(0.7, Exhaustion::smooth_square()).unwrap(),
        ] {
            let a = u.hessian(&z);
            let d = discrete_complex_hessian(&u, &z, 1e-4);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((a[i][j] - d[i][j]).norm() < 1e-6, "{} {i}{j}", u.describe());
                }
            }
        }
    }

    #[test]
    fn level_masses() {
        let u = Exhaustion::smooth_square();
        let m = u.level_shape(-0.5).unwrap().mass();
        assert!((m - 16.0 * std::f64::consts::PI.powi(2) * 0.25).abs() < 1e-12);
        assert_eq!(u.level_shape(-1.5).unwrap(), LevelShape::Empty);
        let v = Exhaustion::scaled(0.5, Exhaustion::log_abs(ModelDomain::UnitDisk)).unwrap();
        match v.level_shape(-0.2).unwrap() {
            LevelShape::Circle { radius, mass, .. } => {
                assert!((radius - (-0.4f64).exp()).abs() < 1e-15);
                assert!((mass - 0.5 * TAU).abs() < 1e-15);
            }
            s => panic!("{s:?}"),
        }
        assert!(u.level_shape(0.0).is_err());
    }

    #[test]
    fn profile_consistency() {
        let u = Exhaustion::truncated(-0.8, Exhaustion::scaled(2.0, Exhaustion::log_abs(ModelDomain::UnitBall2)).unwrap()).unwrap();
        let z = [c(0.3, 0.1), c(-0.2, 0.5)];
        let t = 0.5 * (z[0].norm_sqr() + z[1].norm_sqr()).ln();
        assert!((u.value(&z) - u.profile(t)).abs() < 1e-15);
        assert_eq!(u.profile_sublevel(-0.9), None);
        assert!((u.profile_sublevel(-0.4).unwrap() + 0.2).abs() < 1e-15);
    }
}
