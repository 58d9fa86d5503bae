use super::domain::ModelDomain;
use super::kernel::TestKernel;
use super::point::{CPoint, C64};
use super::polynomial::{Monomial, Polynomial};
use crate::error::{Error, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::f64::consts::TAU;

/// Something that can be evaluated and differentiated as a holomorphic
/// function of one or two variables.
pub trait Holomorphic: Sync + Send {
    fn vars(&self) -> usize;
    fn value(&self, z: &[C64]) -> C64;
    fn gradient(&self, z: &[C64]) -> [C64; 2];
}

/// A polynomial or a disk test kernel.
#[derive(Debug, Clone, PartialEq)]
pub enum HoloFunction {
    Polynomial(Polynomial),
    TestKernel(TestKernel),
}

impl HoloFunction {
    pub fn vars(&self) -> usize {
        match self {
            HoloFunction::Polynomial(p) => p.vars(),
            HoloFunction::TestKernel(_) => 1,
        }
    }

    /// Checked evaluation at a point.
    pub fn eval(&self, z: &CPoint) -> Result<C64> {
        if z.dim() != self.vars() {
            return Err(Error::DimensionMismatch {
                expected: self.vars(),
                got: z.dim(),
            });
        }
        Ok(self.value(z.coords()))
    }

    pub fn is_constant(&self) -> bool {
        match self {
            HoloFunction::Polynomial(p) => p.is_constant(),
            HoloFunction::TestKernel(k) => k.is_constant(),
        }
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match self {
            HoloFunction::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    pub fn scaled(&self, c: C64) -> HoloFunction {
        match self {
            HoloFunction::Polynomial(p) => HoloFunction::Polynomial(p.scale(c)),
            HoloFunction::TestKernel(k) => HoloFunction::TestKernel(TestKernel { scale: k.scale * c, ..*k }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("holomorphic function serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Expression(e.to_string()))
    }
}

impl From<Polynomial> for HoloFunction {
    fn from(p: Polynomial) -> Self {
        HoloFunction::Polynomial(p)
    }
}

impl From<TestKernel> for HoloFunction {
    fn from(k: TestKernel) -> Self {
        HoloFunction::TestKernel(k)
    }
}

impl Holomorphic for HoloFunction {
    fn vars(&self) -> usize {
        HoloFunction::vars(self)
    }

    fn value(&self, z: &[C64]) -> C64 {
        match self {
            HoloFunction::Polynomial(p) => p.eval(z),
            HoloFunction::TestKernel(k) => k.eval(z[0]),
        }
    }

    fn gradient(&self, z: &[C64]) -> [C64; 2] {
        match self {
            HoloFunction::Polynomial(p) => p.grad(z),
            HoloFunction::TestKernel(k) => [k.derivative(z[0]), C64::new(0.0, 0.0)],
        }
    }
}

impl Holomorphic for Polynomial {
    fn vars(&self) -> usize {
        Polynomial::vars(self)
    }
    fn value(&self, z: &[C64]) -> C64 {
        self.eval(z)
    }
    fn gradient(&self, z: &[C64]) -> [C64; 2] {
        self.grad(z)
    }
}

/// `outer ∘ inner` for a univariate `outer`.
pub struct Composition<'a> {
    pub outer: &'a dyn Holomorphic,
    pub inner: &'a dyn Holomorphic,
}

impl Holomorphic for Composition<'_> {
    fn vars(&self) -> usize {
        self.inner.vars()
    }
    fn value(&self, z: &[C64]) -> C64 {
        self.outer.value(&[self.inner.value(z)])
    }
    fn gradient(&self, z: &[C64]) -> [C64; 2] {
        let d = self.outer.gradient(&[self.inner.value(z)])[0];
        let g = self.inner.gradient(z);
        [d * g[0], d * g[1]]
    }
}

// JSON layout: {"poly": {"vars": n, "terms": [{"exp": [..], "re": x, "im": y}]}}
// or {"kernel": {"z0_re": x, "z0_im": y, "s": s}}.
#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Repr {
    Poly { vars: usize, terms: Vec<TermRepr> },
    Kernel {
        z0_re: f64,
        z0_im: f64,
        s: f64,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        scale_re: f64,
        #[serde(default, skip_serializing_if = "is_zero")]
        scale_im: f64,
    },
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    re: f64,
    im: f64,
}

fn one() -> f64 {
    1.0
}
fn is_one(x: &f64) -> bool {
    *x == 1.0
}
fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

impl Serialize for HoloFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            HoloFunction::Polynomial(p) => Repr::Poly {
                vars: p.vars(),
                terms: p
                    .terms()
                    .iter()
                    .map(|t| TermRepr {
                        exp: t.exp[..p.vars()].to_vec(),
                        re: t.coef.re,
                        im: t.coef.im,
                    })
                    .collect(),
            },
            HoloFunction::TestKernel(k) => Repr::Kernel {
                z0_re: k.z0.re,
                z0_im: k.z0.im,
                s: k.s,
                scale_re: k.scale.re,
                scale_im: k.scale.im,
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HoloFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match Repr::deserialize(d)? {
            Repr::Poly { vars, terms } => {
                let mut ms = Vec::with_capacity(terms.len());
                for t in terms {
                    if t.exp.len() != vars {
                        return Err(D::Error::custom(format!(
                            "term exponent has {} entries, expected {vars}",
                            t.exp.len()
                        )));
                    }
                    let mut exp = [0, 0];
                    exp[..vars].copy_from_slice(&t.exp);
                    ms.push(Monomial { exp, coef: C64::new(t.re, t.im) });
                }
                Polynomial::new(vars, ms)
                    .map(HoloFunction::Polynomial)
                    .map_err(D::Error::custom)
            }
            Repr::Kernel { z0_re, z0_im, s, scale_re, scale_im } => {
                TestKernel::scaled(C64::new(z0_re, z0_im), s, C64::new(scale_re, scale_im))
                    .map(HoloFunction::TestKernel)
                    .map_err(D::Error::custom)
            }
        }
    }
}

/// Sample points used for the image-containment check: a polar grid on the
/// disk, Hopf-coordinate shells in the ball and a polar product grid in the
/// bidisk, all strictly inside and reaching to within `1e-6` of the boundary.
fn containment_grid(domain: ModelDomain) -> Vec<CPoint> {
    let radii: Vec<f64> = (1..=24)
        .map(|k| (1.0 - 1e-6) * (1.0 - (1.0 - k as f64 / 24.0).powi(2)))
        .chain([1.0 - 1e-6])
        .collect();
    let mut pts = vec![CPoint::origin(domain.dim())];
    match domain {
        ModelDomain::UnitDisk => {
            for &r in &radii {
                for k in 0..256 {
                    let t = TAU * k as f64 / 256.0;
                    pts.push(CPoint::one(C64::from_polar(r, t)));
                }
            }
        }
        ModelDomain::UnitBall2 => {
            for &r in &radii {
                for i in 0..=12 {
                    let s = i as f64 / 12.0;
                    for a in 0..32 {
                        for b in 0..32 {
                            let (t1, t2) = (TAU * a as f64 / 32.0, TAU * b as f64 / 32.0);
                            pts.push(CPoint::two(
                                C64::from_polar(r * (1.0 - s).sqrt(), t1),
                                C64::from_polar(r * s.sqrt(), t2),
                            ));
                        }
                    }
                }
            }
        }
        ModelDomain::Bidisk => {
            let rs: Vec<f64> = radii.iter().step_by(2).copied().chain([1.0 - 1e-6]).collect();
            for &r1 in &rs {
                for &r2 in &rs {
                    for a in 0..24 {
                        for b in 0..24 {
                            let (t1, t2) = (TAU * a as f64 / 24.0, TAU * b as f64 / 24.0);
                            pts.push(CPoint::two(C64::from_polar(r1, t1), C64::from_polar(r2, t2)));
                        }
                    }
                }
            }
        }
    }
    pts
}

/// Checks `F(source) ⊂ target` on a dense interior grid, reporting the first
/// violating sample.
pub fn verify_containment(
    components: &[&dyn Holomorphic],
    source: ModelDomain,
    target: ModelDomain,
) -> Result<()> {
    if components.len() != target.dim() {
        return Err(Error::DimensionMismatch {
            expected: target.dim(),
            got: components.len(),
        });
    }
    for c in components {
        if c.vars() != source.dim() {
            return Err(Error::DimensionMismatch {
                expected: source.dim(),
                got: c.vars(),
            });
        }
    }
    let grid = containment_grid(source);
    let images = crate::exec::map_slice(&grid, |z| {
        let w: Vec<C64> = components.iter().map(|c| c.value(z.coords())).collect();
        CPoint::from_slice(&w).expect("1 or 2 components")
    });
    for (z, w) in grid.iter().zip(&images) {
        if !target.contains(w) {
            return Err(Error::Containment {
                witness: z.to_string(),
                image: w.to_string(),
                target: target.to_string(),
            });
        }
    }
    Ok(())
}

/// Polynomial map between model domains with sampled image containment.
#[derive(Debug, Clone)]
pub struct HoloMap {
    components: Vec<Polynomial>,
    source: ModelDomain,
    target: ModelDomain,
}

impl HoloMap {
    pub fn new(components: Vec<Polynomial>, source: ModelDomain, target: ModelDomain) -> Result<Self> {
        let refs: Vec<&dyn Holomorphic> = components.iter().map(|p| p as &dyn Holomorphic).collect();
        verify_containment(&refs, source, target)?;
        Ok(Self { components, source, target })
    }

    /// Scalar map into the unit disk.
    pub fn to_disk(f: Polynomial, source: ModelDomain) -> Result<Self> {
        Self::new(vec![f], source, ModelDomain::UnitDisk)
    }

    pub fn identity_disk() -> Self {
        Self {
            components: vec![Polynomial::var(1, 0)],
            source: ModelDomain::UnitDisk,
            target: ModelDomain::UnitDisk,
        }
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn source(&self) -> ModelDomain {
        self.source
    }

    pub fn target(&self) -> ModelDomain {
        self.target
    }

    /// The scalar component of a map into the disk.
    pub fn scalar(&self) -> Option<&Polynomial> {
        (self.target == ModelDomain::UnitDisk).then(|| &self.components[0])
    }

    pub fn eval(&self, z: &CPoint) -> Result<CPoint> {
        self.source.check(z)?;
        let w: Vec<C64> = self.components.iter().map(|c| c.eval(z.coords())).collect();
        CPoint::from_slice(&w)
    }
}
