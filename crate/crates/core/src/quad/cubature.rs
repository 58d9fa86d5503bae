use crate::exec::{map_slice, KahanSum};

/// Stopping rule for [`cubature`]. Component `k` is accepted once its error
/// estimate is below `max(abs_tol, rel_tol·|I_k|)`.
#[derive(Debug, Clone, Copy)]
pub struct CubatureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
}

impl Default for CubatureOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-9,
            max_evals: 2_000_000,
        }
    }
}

/// Output of [`cubature`] for a vector-valued integrand.
#[derive(Debug, Clone)]
pub struct Cubature {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub evals: usize,
    pub regions: usize,
    pub converged: bool,
}

/// Axis-aligned box `[lo, hi]`.
#[derive(Debug, Clone, Copy)]
pub struct Region<const D: usize> {
    pub lo: [f64; D],
    pub hi: [f64; D],
}

impl<const D: usize> Region<D> {
    pub fn new(lo: [f64; D], hi: [f64; D]) -> Self {
        Self { lo, hi }
    }

    /// Splits the box into a tensor grid with `parts[i]` cells along axis `i`.
    pub fn grid(&self, parts: [usize; D]) -> Vec<Region<D>> {
        let mut out = vec![*self];
        for ax in 0..D {
            let k = parts[ax].max(1);
            let mut next = Vec::with_capacity(out.len() * k);
            for r in &out {
                let w = (r.hi[ax] - r.lo[ax]) / k as f64;
                for j in 0..k {
                    let mut c = *r;
                    c.lo[ax] = r.lo[ax] + w * j as f64;
                    c.hi[ax] = if j + 1 == k { r.hi[ax] } else { r.lo[ax] + w * (j + 1) as f64 };
                    next.push(c);
                }
            }
            out = next;
        }
        out
    }
}

struct Cell<const D: usize> {
    region: Region<D>,
    value: Vec<f64>,
    error: Vec<f64>,
    axis: usize,
}

const L2: f64 = 0.358_568_582_800_318_1; // sqrt(9/70)
const L4: f64 = 0.948_683_298_050_513_8; // sqrt(9/10)
const L5: f64 = 0.688_247_201_611_685_3; // sqrt(9/19)

fn rule_points(d: usize) -> usize {
    1 + 4 * d + 2 * d * (d - 1) + (1 << d)
}

/// Degree-7/5 embedded Genz–Malik rule on one box.
fn apply_rule<const D: usize, F>(f: &F, reg: &Region<D>, m: usize) -> Cell<D>
where
    F: Fn(&[f64; D], &mut [f64]),
{
    let dn = D as f64;
    let mut c = [0.0; D];
    let mut h = [0.0; D];
    let mut vol = 1.0;
    for i in 0..D {
        c[i] = 0.5 * (reg.lo[i] + reg.hi[i]);
        h[i] = 0.5 * (reg.hi[i] - reg.lo[i]);
        vol *= 2.0 * h[i];
    }
    let mut buf = vec![0.0; m];
    let eval = |x: &[f64; D], out: &mut [f64]| {
        f(x, out);
    };

    let mut f1 = vec![0.0; m];
    eval(&c, &mut f1);
    let mut s2 = vec![0.0; m];
    let mut s3 = vec![0.0; m];
    let mut s4 = vec![0.0; m];
    let mut s5 = vec![0.0; m];
    let mut diffs = [0.0; D];
    let ratio = (L2 * L2) / (L4 * L4);
    for i in 0..D {
        let mut a2 = vec![0.0; m];
        let mut a3 = vec![0.0; m];
        for (lam, acc) in [(L2, &mut a2), (L4, &mut a3)] {
            for sgn in [-1.0, 1.0] {
                let mut x = c;
                x[i] += sgn * lam * h[i];
                eval(&x, &mut buf);
                for k in 0..m {
                    acc[k] += buf[k];
                }
            }
        }
        let mut d = 0.0;
        for k in 0..m {
            s2[k] += a2[k];
            s3[k] += a3[k];
            d += ((a2[k] - 2.0 * f1[k]) - ratio * (a3[k] - 2.0 * f1[k])).abs();
        }
        diffs[i] = d;
    }
    for i in 0..D {
        for j in (i + 1)..D {
            for si in [-1.0, 1.0] {
                for sj in [-1.0, 1.0] {
                    let mut x = c;
                    x[i] += si * L4 * h[i];
                    x[j] += sj * L4 * h[j];
                    eval(&x, &mut buf);
                    for k in 0..m {
                        s4[k] += buf[k];
                    }
                }
            }
        }
    }
    for mask in 0..(1usize << D) {
        let mut x = c;
        for i in 0..D {
            let s = if mask & (1 << i) != 0 { 1.0 } else { -1.0 };
            x[i] += s * L5 * h[i];
        }
        eval(&x, &mut buf);
        for k in 0..m {
            s5[k] += buf[k];
        }
    }

    let w1 = (12824.0 - 9120.0 * dn + 400.0 * dn * dn) / 19683.0;
    let w2 = 980.0 / 6561.0;
    let w3 = (1820.0 - 400.0 * dn) / 19683.0;
    let w4 = 200.0 / 19683.0;
    let w5 = 6859.0 / 19683.0 / (1u64 << D) as f64;
    let v1 = (729.0 - 950.0 * dn + 50.0 * dn * dn) / 729.0;
    let v2 = 245.0 / 486.0;
    let v3 = (265.0 - 100.0 * dn) / 1458.0;
    let v4 = 25.0 / 729.0;

    let mut value = vec![0.0; m];
    let mut error = vec![0.0; m];
    for k in 0..m {
        let i7 = w1 * f1[k] + w2 * s2[k] + w3 * s3[k] + w4 * s4[k] + w5 * s5[k];
        let i5 = v1 * f1[k] + v2 * s2[k] + v3 * s3[k] + v4 * s4[k];
        value[k] = vol * i7;
        error[k] = (vol * (i7 - i5)).abs();
    }

    // Split along the roughest axis; ties go to the widest one.
    let mut axis = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..D {
        let score = diffs[i];
        let better = score > best * (1.0 + 1e-12)
            || ((score - best).abs() <= 1e-12 * best.abs() && h[i] > h[axis]);
        if better {
            best = score;
            axis = i;
        }
    }
    if best <= 0.0 {
        axis = (0..D).max_by(|&a, &b| h[a].total_cmp(&h[b])).unwrap_or(0);
    }
    Cell {
        region: *reg,
        value,
        error,
        axis,
    }
}

/// Adaptive Genz–Malik cubature of an `m`-component integrand over a union of
/// boxes (dimension `D ≥ 2`).
///
/// Each round bisects the cells carrying the largest share of the normalised
/// error. Cells are kept in a deterministic order and totals are recomputed
/// with compensated summation, so the result does not depend on the thread
/// count.
pub fn cubature<const D: usize, F>(
    f: F,
    initial: &[Region<D>],
    m: usize,
    opts: &CubatureOptions,
) -> Cubature
where
    F: Fn(&[f64; D], &mut [f64]) + Sync + Send,
{
    assert!(D >= 2, "use integrate_1d for one-dimensional integrals");
    let per = rule_points(D);
    let mut cells: Vec<Cell<D>> = map_slice(initial, |r| apply_rule(&f, r, m));
    let mut evals = per * cells.len();
    loop {
        let (values, errors) = totals(&cells, m);
        let tol: Vec<f64> = values
            .iter()
            .map(|v| opts.abs_tol.max(opts.rel_tol * v.abs()))
            .collect();
        let done = errors.iter().zip(&tol).all(|(e, t)| e <= t);
        if done || evals + 2 * per > opts.max_evals {
            return Cubature {
                values,
                errors,
                evals,
                regions: cells.len(),
                converged: done,
            };
        }
        let scores: Vec<f64> = cells
            .iter()
            .map(|c| {
                c.error
                    .iter()
                    .zip(&tol)
                    .map(|(e, t)| e / t)
                    .fold(0.0, f64::max)
            })
            .collect();
        let total: f64 = scores.iter().sum();
        let mut order: Vec<usize> = (0..cells.len()).collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        let budget_cells = ((opts.max_evals - evals) / (2 * per)).max(1);
        let mut chosen = vec![false; cells.len()];
        let mut acc = 0.0;
        let mut count = 0;
        for &i in &order {
            if count >= budget_cells || (count > 0 && acc >= 0.5 * total) {
                break;
            }
            chosen[i] = true;
            acc += scores[i];
            count += 1;
        }
        let mut children = Vec::with_capacity(2 * count);
        let mut kept = Vec::with_capacity(cells.len());
        for (i, c) in cells.into_iter().enumerate() {
            if chosen[i] {
                let ax = c.axis;
                let mid = 0.5 * (c.region.lo[ax] + c.region.hi[ax]);
                let mut a = c.region;
                let mut b = c.region;
                a.hi[ax] = mid;
                b.lo[ax] = mid;
                children.push(a);
                children.push(b);
            } else {
                kept.push(c);
            }
        }
        let fresh = map_slice(&children, |r| apply_rule(&f, r, m));
        evals += per * fresh.len();
        kept.extend(fresh);
        cells = kept;
    }
}

fn totals<const D: usize>(cells: &[Cell<D>], m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![KahanSum::new(); m];
    let mut e = vec![KahanSum::new(); m];
    for c in cells {
        for k in 0..m {
            v[k].add(c.value[k]);
            e[k].add(c.error[k]);
        }
    }
    (
        v.iter().map(|s| s.value()).collect(),
        e.iter().map(|s| s.value()).collect(),
    )
}
