use super::point::C64;
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Largest exponent allowed per variable.
pub const MAX_DEGREE: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub exp: [u32; 2],
    pub coef: C64,
}

/// Sparse polynomial in one or two complex variables.
///
/// Terms are kept sorted by exponent with zero coefficients removed.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    vars: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn new(vars: usize, terms: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        if vars != 1 && vars != 2 {
            return Err(Error::param("vars", format!("polynomials need 1 or 2 variables, got {vars}")));
        }
        let mut map: BTreeMap<[u32; 2], C64> = BTreeMap::new();
        for t in terms {
            if vars == 1 && t.exp[1] != 0 {
                return Err(Error::param("exp", "second exponent must be 0 for one variable"));
            }
            if t.exp.iter().any(|&e| e > MAX_DEGREE) {
                return Err(Error::param("exp", format!("degree exceeds {MAX_DEGREE} per variable")));
            }
            if !(t.coef.re.is_finite() && t.coef.im.is_finite()) {
                return Err(Error::param("coef", "coefficients must be finite"));
            }
            *map.entry(t.exp).or_insert(C64::new(0.0, 0.0)) += t.coef;
        }
        Ok(Self::from_map(vars, map))
    }

    fn from_map(vars: usize, map: BTreeMap<[u32; 2], C64>) -> Self {
        let terms = map
            .into_iter()
            .filter(|(_, c)| c.norm_sqr() != 0.0)
            .map(|(exp, coef)| Monomial { exp, coef })
            .collect();
        Self { vars, terms }
    }

    pub fn zero(vars: usize) -> Self {
        Self { vars, terms: vec![] }
    }

    pub fn constant(vars: usize, c: C64) -> Self {
        Self::from_map(vars, BTreeMap::from([([0, 0], c)]))
    }

    /// The coordinate function `z_{i+1}`.
    pub fn var(vars: usize, i: usize) -> Self {
        let mut exp = [0, 0];
        exp[i] = 1;
        Self::from_map(vars, BTreeMap::from([(exp, C64::new(1.0, 0.0))]))
    }

    /// Dense univariate polynomial `Σ c_k z^k`.
    pub fn univariate(coeffs: &[C64]) -> Self {
        let map = coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| ([k as u32, 0], c))
            .collect();
        Self::from_map(1, map)
    }

    pub fn monomial(vars: usize, exp: [u32; 2], coef: C64) -> Result<Self> {
        Self::new(vars, [Monomial { exp, coef }])
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.exp == [0, 0])
    }

    pub fn constant_term(&self) -> C64 {
        self.terms
            .iter()
            .find(|t| t.exp == [0, 0])
            .map(|t| t.coef)
            .unwrap_or_default()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|t| t.exp[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.exp[0] + t.exp[1]).max().unwrap_or(0)
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for t in &self.terms {
            let mut v = t.coef;
            if t.exp[0] > 0 {
                v *= z[0].powu(t.exp[0]);
            }
            if t.exp[1] > 0 {
                v *= z[1].powu(t.exp[1]);
            }
            acc += v;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut map = BTreeMap::new();
        for t in &self.terms {
            if t.exp[var] > 0 {
                let mut e = t.exp;
                e[var] -= 1;
                *map.entry(e).or_insert(C64::new(0.0, 0.0)) += t.coef * t.exp[var] as f64;
            }
        }
        Self::from_map(self.vars, map)
    }

    /// `(∂f/∂z₁, ∂f/∂z₂)` at `z` (second entry 0 for one variable).
    pub fn grad(&self, z: &[C64]) -> [C64; 2] {
        let mut g = [C64::new(0.0, 0.0); 2];
        for t in &self.terms {
            for v in 0..self.vars {
                let e = t.exp[v];
                if e == 0 {
                    continue;
                }
                let mut x = t.coef * e as f64;
                for w in 0..self.vars {
                    let k = if w == v { e - 1 } else { t.exp[w] };
                    if k > 0 {
                        x *= z[w].powu(k);
                    }
                }
                g[v] += x;
            }
        }
        g
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut map: BTreeMap<[u32; 2], C64> = BTreeMap::new();
        for t in self.terms.iter().chain(&o.terms) {
            *map.entry(t.exp).or_insert(C64::new(0.0, 0.0)) += t.coef;
        }
        Self::from_map(self.vars.max(o.vars), map)
    }

    pub fn scale(&self, c: C64) -> Self {
        let map = self.terms.iter().map(|t| (t.exp, t.coef * c)).collect();
        Self::from_map(self.vars, map)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(C64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let mut map: BTreeMap<[u32; 2], C64> = BTreeMap::new();
        for a in &self.terms {
            for b in &o.terms {
                let e = [a.exp[0] + b.exp[0], a.exp[1] + b.exp[1]];
                if e.iter().any(|&k| k > MAX_DEGREE) {
                    return Err(Error::param("exp", format!("degree exceeds {MAX_DEGREE} per variable")));
                }
                *map.entry(e).or_insert(C64::new(0.0, 0.0)) += a.coef * b.coef;
            }
        }
        Ok(Self::from_map(self.vars.max(o.vars), map))
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::constant(self.vars, C64::new(1.0, 0.0));
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// `outer ∘ self` for a univariate `outer`.
    pub fn compose_into(&self, outer: &Polynomial) -> Result<Self> {
        if outer.vars != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: outer.vars });
        }
        let coeffs = outer.dense_coeffs();
        // Horner in polynomial arithmetic.
        let mut acc = Self::zero(self.vars);
        for &c in coeffs.iter().rev() {
            acc = acc.mul(self)?.add(&Self::constant(self.vars, c));
        }
        Ok(acc)
    }

    /// Dense coefficients `[c_0, …, c_d]` of a univariate polynomial
    /// (the second exponent is ignored).
    pub fn dense_coeffs(&self) -> Vec<C64> {
        let d = self.degree_in(0) as usize;
        let mut out = vec![C64::new(0.0, 0.0); d + 1];
        for t in &self.terms {
            out[t.exp[0] as usize] += t.coef;
        }
        out
    }

    /// Writes `f(z₁, z₂) = Σ_k c_k(z_other) z_var^k` and returns the dense
    /// coefficient lists of the `c_k` in the other variable.
    pub fn split_in(&self, var: usize) -> Vec<Vec<C64>> {
        let other = 1 - var;
        let dv = self.degree_in(var) as usize;
        let dother = self.degree_in(other) as usize;
        let mut out = vec![vec![C64::new(0.0, 0.0); dother + 1]; dv + 1];
        for t in &self.terms {
            out[t.exp[var] as usize][t.exp[other] as usize] += t.coef;
        }
        out
    }

    /// Swaps `z₁` and `z₂`.
    pub fn swapped(&self) -> Self {
        let map = self
            .terms
            .iter()
            .map(|t| ([t.exp[1], t.exp[0]], t.coef))
            .collect();
        Self::from_map(self.vars, map)
    }

    /// `Σ |c|`, an upper bound for `sup |f|` on the closed polydisk.
    pub fn coefficient_l1(&self) -> f64 {
        self.terms.iter().map(|t| t.coef.norm()).sum()
    }
}

/// Horner evaluation of dense coefficients.
#[inline]
pub fn polynomial_value(coeffs: &[C64], z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn quadric_example() {
        let f = Polynomial::new(
            2,
            [
                Monomial { exp: [2, 0], coef: c(1.0, 0.0) },
                Monomial { exp: [0, 2], coef: c(1.0, 0.0) },
            ],
        )
        .unwrap();
        let v = f.eval(&[c(0.3, 0.0), c(0.0, 0.4)]);
        assert!((v - c(-0.07, 0.0)).norm() < 1e-16);
        let g = f.grad(&[c(0.3, 0.0), c(0.0, 0.4)]);
        assert!((g[0] - c(0.6, 0.0)).norm() < 1e-16);
        assert!((g[1] - c(0.0, 0.8)).norm() < 1e-16);
    }

    #[test]
    fn composition_matches_pointwise() {
        let inner = Polynomial::var(2, 0).add(&Polynomial::var(2, 1)).scale(c(0.5, 0.0));
        let outer = Polynomial::univariate(&[c(0.1, 0.0), c(0.0, 1.0), c(2.0, 0.0)]);
        let comp = inner.compose_into(&outer).unwrap();
        let z = [c(0.2, -0.1), c(0.3, 0.4)];
        let w = inner.eval(&z);
        let expect = polynomial_value(&outer.dense_coeffs(), w);
        assert!((comp.eval(&z) - expect).norm() < 1e-15);
    }

    #[test]
    fn rejects_excess_degree() {
        assert!(Polynomial::monomial(1, [33, 0], c(1.0, 0.0)).is_err());
        let z = Polynomial::var(1, 0);
        assert!(z.pow(32).is_ok());
        assert!(z.pow(33).is_err());
    }

    #[test]
    fn split_in_second_variable() {
        // z1^2 z2 + 3 z2^2
        let f = Polynomial::new(
            2,
            [
                Monomial { exp: [2, 1], coef: c(1.0, 0.0) },
                Monomial { exp: [0, 2], coef: c(3.0, 0.0) },
            ],
        )
        .unwrap();
        let s = f.split_in(0);
        assert_eq!(s.len(), 3);
        assert_eq!(s[2][1], c(1.0, 0.0));
        assert_eq!(s[0][2], c(3.0, 0.0));
    }
}
