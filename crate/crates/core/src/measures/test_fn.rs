use crate::geometry::{Holomorphic, C64};

/// A plurisubharmonic test function with an explicit complex Hessian.
pub trait TestFunction: Sync + Send {
    fn dim(&self) -> usize;
    fn value(&self, z: &[C64]) -> f64;
    /// `(∂²φ/∂z_i∂z̄_j)`; only `[0][0]` is used when `n = 1`.
    fn hessian(&self, z: &[C64]) -> [[C64; 2]; 2];
    /// Whether the function can be singular (for `p < 2` at zeros of `g`).
    fn singular_at(&self, _z: &[C64]) -> bool {
        false
    }
    /// Whether `dd^cφ` may fail to be locally integrable (`|g|^p`, `p < 1`).
    fn may_be_nonintegrable(&self) -> bool {
        false
    }
    /// Whether `φ` is real-analytic, so that slice integrals need no
    /// singularity handling.
    fn is_smooth(&self) -> bool {
        false
    }
}

/// `φ = |g|^p` for holomorphic `g`.
pub struct ModulusPower<'a> {
    pub g: &'a dyn Holomorphic,
    pub p: f64,
}

impl TestFunction for ModulusPower<'_> {
    fn dim(&self) -> usize {
        self.g.vars()
    }

    fn value(&self, z: &[C64]) -> f64 {
        let a = self.g.value(z).norm();
        if self.p == 2.0 {
            a * a
        } else {
            a.powf(self.p)
        }
    }

    fn hessian(&self, z: &[C64]) -> [[C64; 2]; 2] {
        // (p²/4)|g|^{p−2} ∂_i g conj(∂_j g)
        let gv = self.g.value(z);
        let a2 = gv.norm_sqr();
        let mut h = [[C64::new(0.0, 0.0); 2]; 2];
        let amp = if self.p == 2.0 {
            1.0
        } else if a2 == 0.0 {
            return h;
        } else {
            a2.powf(0.5 * self.p - 1.0)
        };
        let d = self.g.gradient(z);
        let k = 0.25 * self.p * self.p * amp;
        for i in 0..2 {
            for j in 0..2 {
                h[i][j] = k * d[i] * d[j].conj();
            }
        }
        h
    }

    fn singular_at(&self, z: &[C64]) -> bool {
        self.p < 2.0 && self.g.value(z).norm_sqr() == 0.0
    }

    fn may_be_nonintegrable(&self) -> bool {
        self.p < 1.0
    }

    fn is_smooth(&self) -> bool {
        self.p > 0.0 && self.p % 2.0 == 0.0
    }
}

/// A user-supplied smooth function with its complex Hessian.
pub struct SmoothTestFunction<V, H>
where
    V: Fn(&[C64]) -> f64 + Sync + Send,
    H: Fn(&[C64]) -> [[C64; 2]; 2] + Sync + Send,
{
    pub dim: usize,
    pub value: V,
    pub hessian: H,
}

impl<V, H> TestFunction for SmoothTestFunction<V, H>
where
    V: Fn(&[C64]) -> f64 + Sync + Send,
    H: Fn(&[C64]) -> [[C64; 2]; 2] + Sync + Send,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, z: &[C64]) -> f64 {
        (self.value)(z)
    }
    fn hessian(&self, z: &[C64]) -> [[C64; 2]; 2] {
        (self.hessian)(z)
    }
    fn is_smooth(&self) -> bool {
        true
    }
}

/// Density of `dd^cφ ∧ dd^cψ` against `dV` in `C²` from the complex
/// Hessians `A` of φ and `B` of ψ.
pub fn mixed_density(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> f64 {
    let m = a[0][0] * b[1][1] + a[1][1] * b[0][0] - a[0][1] * b[1][0] - a[1][0] * b[0][1];
    16.0 * m.re
}
