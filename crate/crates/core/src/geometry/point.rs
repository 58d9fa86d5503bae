use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;
use std::ops::Index;

pub type C64 = Complex64;

/// A point of `C^n`, `n ∈ {1, 2}`.
#[derive(Clone, Copy, PartialEq)]
pub struct CPoint {
    n: usize,
    c: [C64; 2],
}

impl CPoint {
    pub fn one(z: C64) -> Self {
        Self {
            n: 1,
            c: [z, C64::new(0.0, 0.0)],
        }
    }

    pub fn two(z1: C64, z2: C64) -> Self {
        Self { n: 2, c: [z1, z2] }
    }

    pub fn real1(x: f64) -> Self {
        Self::one(C64::new(x, 0.0))
    }

    pub fn origin(n: usize) -> Self {
        Self {
            n,
            c: [C64::new(0.0, 0.0); 2],
        }
    }

    pub fn from_slice(z: &[C64]) -> Result<Self> {
        match z.len() {
            1 => Ok(Self::one(z[0])),
            2 => Ok(Self::two(z[0], z[1])),
            k => Err(Error::DimensionMismatch { expected: 2, got: k }),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[C64] {
        &self.c[..self.n]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coords().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_origin(&self) -> bool {
        self.coords().iter().all(|z| z.norm_sqr() == 0.0)
    }
}

impl Index<usize> for CPoint {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.coords()[i]
    }
}

impl fmt::Debug for CPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, z) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}{:+}i", z.re, z.im)?;
        }
        write!(f, ")")
    }
}

impl serde::Serialize for CPoint {
    /// Serialised as `[[re, im], …]`.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.n))?;
        for z in self.coords() {
            seq.serialize_element(&[z.re, z.im])?;
        }
        seq.end()
    }
}
