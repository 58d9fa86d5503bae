//! Seeded generators for random test polynomials and maps.

use crate::error::Result;
use crate::geometry::{HoloMap, ModelDomain, Monomial, Polynomial, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The generator used throughout: ChaCha8 from a `u64` seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coef<R: Rng>(r: &mut R) -> C64 {
    C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

/// Random polynomial in `vars` variables of total degree `≤ degree`, every
/// monomial present with a uniform coefficient in the unit square.
pub fn random_polynomial<R: Rng>(r: &mut R, vars: usize, degree: u32) -> Polynomial {
    let mut terms = vec![];
    for a in 0..=degree {
        for b in 0..=(if vars == 2 { degree - a } else { 0 }) {
            terms.push(Monomial { exp: [a, b], coef: coef(r) });
        }
    }
    Polynomial::new(vars, terms).expect("valid random polynomial")
}

/// Random non-constant polynomial map of `source` into the unit disk.
///
/// The coefficient `ℓ¹` norm is scaled to a value in `[0.3, 0.95)`, which
/// bounds `sup |f|` on the closed polydisk and hence on every model domain.
pub fn random_disk_map<R: Rng>(r: &mut R, source: ModelDomain, degree: u32) -> Result<HoloMap> {
    let p = random_polynomial(r, source.dim(), degree.max(1));
    let target = r.gen_range(0.3..0.95);
    let p = p.scale(C64::new(target / p.coefficient_l1(), 0.0));
    HoloMap::to_disk(p, source)
}

/// Uniform point of the open unit disk with `|z| ≤ rmax`.
pub fn random_disk_point<R: Rng>(r: &mut R, rmax: f64) -> C64 {
    let rad = rmax * r.gen_range(0.0f64..1.0).sqrt();
    C64::from_polar(rad, r.gen_range(0.0..std::f64::consts::TAU))
}
