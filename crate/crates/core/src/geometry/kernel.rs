use super::point::C64;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// `k(z) = scale · (1 − |z₀|²)^s / (1 − z̄₀ z)^{2s}` on the unit disk
/// (principal branch; `Re(1 − z̄₀z) > 0` there).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestKernel {
    pub z0: C64,
    pub s: f64,
    pub scale: C64,
}

impl TestKernel {
    pub fn new(z0: C64, s: f64) -> Result<Self> {
        Self::scaled(z0, s, C64::new(1.0, 0.0))
    }

    pub fn scaled(z0: C64, s: f64, scale: C64) -> Result<Self> {
        if !(z0.norm() < 1.0) {
            return Err(Error::param("z0", "kernel base point must lie in the unit disk"));
        }
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::param("s", format!("kernel exponent must be > 0, got {s}")));
        }
        Ok(Self { z0, s, scale })
    }

    fn amplitude(&self) -> f64 {
        (1.0 - self.z0.norm_sqr()).powf(self.s)
    }

    pub fn eval(&self, z: C64) -> C64 {
        let xi = C64::new(1.0, 0.0) - self.z0.conj() * z;
        self.scale * self.amplitude() * xi.powf(-2.0 * self.s)
    }

    pub fn derivative(&self, z: C64) -> C64 {
        let xi = C64::new(1.0, 0.0) - self.z0.conj() * z;
        self.eval(z) * (2.0 * self.s) * self.z0.conj() / xi
    }

    pub fn is_constant(&self) -> bool {
        self.z0.norm_sqr() == 0.0 || self.scale.norm_sqr() == 0.0
    }

    /// All `z` in the unit disk with `k(z) = w`; each is a simple preimage.
    pub fn preimages(&self, w: C64) -> Vec<C64> {
        if self.is_constant() || w.norm_sqr() == 0.0 {
            return vec![];
        }
        let q = self.scale * self.amplitude() / w;
        let two_s = 2.0 * self.s;
        let lq = q.ln();
        // Log ξ = (Log q + 2πim)/(2s) with |Im Log ξ| < π/2.
        let lo = ((-PI * self.s - lq.im) / (2.0 * PI)).ceil() as i64;
        let hi = ((PI * self.s - lq.im) / (2.0 * PI)).floor() as i64;
        let c = self.z0.conj();
        let mut out = vec![];
        for m in lo..=hi {
            let l = (lq + C64::new(0.0, 2.0 * PI * m as f64)) / two_s;
            if l.im.abs() >= PI / 2.0 {
                continue;
            }
            let xi = l.exp();
            let z = (C64::new(1.0, 0.0) - xi) / c;
            if z.norm() < 1.0 {
                out.push(z);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let k = TestKernel::new(C64::new(0.0, 0.0), 1.0).unwrap();
        assert_eq!(k.eval(C64::new(0.5, 0.0)), C64::new(1.0, 0.0));
        let k = TestKernel::new(C64::new(0.8, 0.0), 1.0).unwrap();
        let v = k.eval(C64::new(0.8, 0.0));
        assert!((v.re - 1.0 / 0.36).abs() < 1e-13 && v.im.abs() < 1e-15);
    }

    #[test]
    fn preimages_solve_the_equation() {
        for &(z0, s) in &[(C64::new(0.9, 0.0), 1.0), (C64::new(0.3, 0.5), 2.5), (C64::new(-0.6, 0.1), 0.25)] {
            let k = TestKernel::new(z0, s).unwrap();
            for &z in &[C64::new(0.1, 0.2), C64::new(-0.5, 0.3), C64::new(0.7, -0.6)] {
                let w = k.eval(z);
                let pre = k.preimages(w);
                assert!(pre.iter().any(|p| (p - z).norm() < 1e-10), "z0={z0} s={s} z={z} pre={pre:?}");
                for p in pre {
                    assert!((k.eval(p) - w).norm() < 1e-9 * w.norm());
                }
            }
        }
    }

    #[test]
    fn derivative_by_difference() {
        let k = TestKernel::new(C64::new(0.4, -0.3), 1.5).unwrap();
        let z = C64::new(0.2, 0.1);
        let h = 1e-6;
        let fd = (k.eval(z + h) - k.eval(z - h)) / (2.0 * h);
        assert!((fd - k.derivative(z)).norm() < 1e-8);
    }
}
