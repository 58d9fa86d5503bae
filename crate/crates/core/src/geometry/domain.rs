use super::point::{CPoint, C64};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The three supported hyperconvex model domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelDomain {
    UnitDisk,
    UnitBall2,
    Bidisk,
}

impl ModelDomain {
    pub fn dim(&self) -> usize {
        match self {
            ModelDomain::UnitDisk => 1,
            _ => 2,
        }
    }

    pub fn contains(&self, z: &CPoint) -> bool {
        if z.dim() != self.dim() || !z.is_finite() {
            return false;
        }
        match self {
            ModelDomain::UnitDisk | ModelDomain::UnitBall2 => z.norm_sqr() < 1.0,
            ModelDomain::Bidisk => z.max_abs() < 1.0,
        }
    }

    /// Euclidean distance to the boundary (0 outside).
    pub fn boundary_distance(&self, z: &CPoint) -> f64 {
        let d = match self {
            ModelDomain::UnitDisk | ModelDomain::UnitBall2 => 1.0 - z.norm(),
            ModelDomain::Bidisk => 1.0 - z.max_abs(),
        };
        d.max(0.0)
    }

    pub fn check(&self, z: &CPoint) -> Result<()> {
        if z.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: z.dim(),
            });
        }
        if !self.contains(z) {
            return Err(Error::DomainMismatch {
                domain: self.to_string(),
                point: z.to_string(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for ModelDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelDomain::UnitDisk => "unit disk",
            ModelDomain::UnitBall2 => "unit ball of C^2",
            ModelDomain::Bidisk => "bidisk",
        })
    }
}

/// `log|(z − a)/(1 − āz)|`, accurate near the unit circle.
pub fn mobius_log_abs(z: C64, a: C64) -> f64 {
    if a.norm_sqr() == 0.0 {
        return z.norm().ln();
    }
    let den = (C64::new(1.0, 0.0) - a.conj() * z).norm_sqr();
    let q = (1.0 - a.norm_sqr()) * (1.0 - z.norm_sqr()) / den;
    if q < 0.5 {
        0.5 * (-q).ln_1p()
    } else {
        ((z - a).norm_sqr() / den).ln() * 0.5
    }
}

/// Pluricomplex Green function `g_D(z, pole)`.
///
/// The ball and the bidisk only support the pole at the origin.
pub fn green_function(domain: ModelDomain, pole: &CPoint, z: &CPoint) -> Result<f64> {
    domain.check(pole)?;
    domain.check(z)?;
    match domain {
        ModelDomain::UnitDisk => Ok(mobius_log_abs(z[0], pole[0])),
        _ if !pole.is_origin() => Err(Error::Unsupported(format!(
            "Green function of the {domain} with pole {pole}: only the origin is supported in C^2"
        ))),
        ModelDomain::UnitBall2 => Ok(z.norm().ln()),
        ModelDomain::Bidisk => Ok(z.max_abs().ln()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1(x: f64) -> CPoint {
        CPoint::real1(x)
    }

    #[test]
    fn green_examples() {
        let d = ModelDomain::UnitDisk;
        assert!((green_function(d, &p1(0.0), &p1(0.3)).unwrap() - 0.3f64.ln()).abs() < 1e-15);
        let g = green_function(d, &p1(0.5), &p1(0.9)).unwrap();
        assert!((g - (0.4f64 / 0.55).ln()).abs() < 1e-15);
        assert!((g + 0.3185).abs() < 1e-4);
        let b = ModelDomain::Bidisk;
        let z = CPoint::two(C64::new(0.2, 0.0), C64::new(0.7, 0.0));
        assert!((green_function(b, &CPoint::origin(2), &z).unwrap() - 0.7f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn nonzero_ball_pole_is_explicitly_unsupported() {
        let pole = CPoint::two(C64::new(0.1, 0.0), C64::new(0.0, 0.0));
        let err = green_function(ModelDomain::UnitBall2, &pole, &CPoint::origin(2)).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn mobius_log_near_boundary() {
        let a = C64::new(0.3, -0.2);
        let z = C64::new(0.999_999, 0.0);
        let direct = ((z - a) / (C64::new(1.0, 0.0) - a.conj() * z)).norm().ln();
        assert!((mobius_log_abs(z, a) - direct).abs() < 1e-9);
    }

    #[test]
    fn boundary_distance_and_membership() {
        let b = ModelDomain::UnitBall2;
        let z = CPoint::two(C64::new(0.6, 0.0), C64::new(0.0, 0.6));
        assert!(b.contains(&z));
        assert!(!ModelDomain::UnitDisk.contains(&z));
        assert!((b.boundary_distance(&z) - (1.0 - 0.72f64.sqrt())).abs() < 1e-15);
        assert!((ModelDomain::Bidisk.boundary_distance(&z) - 0.4).abs() < 1e-15);
    }
}
