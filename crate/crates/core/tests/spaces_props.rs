use plurinorm::identities::{verify_subordination, Budgets};
use plurinorm::random::{random_disk_map, random_polynomial, rng};
use plurinorm::spaces::{bergman_norm, hardy_norm, NormOptions};
use plurinorm::special::gamma_fn;
use plurinorm::{CPoint, Exhaustion, ModelDomain, Polynomial, SpaceParams, C64};
use proptest::prelude::*;
use std::f64::consts::TAU;

fn disk() -> Exhaustion {
    Exhaustion::log_abs(ModelDomain::UnitDisk)
}

fn norm(f: &Polynomial, u: &Exhaustion, p: f64, alpha: f64) -> f64 {
    let opts = NormOptions::default();
    if alpha == -1.0 {
        hardy_norm(f, u, p, &opts).unwrap().value
    } else {
        bergman_norm(f, u, SpaceParams::new(p, alpha).unwrap(), &opts).unwrap().value
    }
}

fn poly(vars: usize) -> impl Strategy<Value = Polynomial> {
    any::<u64>().prop_map(move |s| random_polynomial(&mut rng(s), vars, 3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn triangle_inequality_disk(f in poly(1), g in poly(1), p in 1.0f64..4.0, alpha in prop::sample::select(vec![-1.0, 0.0, 1.5])) {
        let u = disk();
        let lhs = norm(&f.add(&g), &u, p, alpha);
        prop_assert!(lhs <= norm(&f, &u, p, alpha) + norm(&g, &u, p, alpha) + 1e-8);
    }

    #[test]
    fn scaling_homogeneity(f in poly(1), re in -3.0f64..3.0, im in -3.0f64..3.0, p in 1.0f64..4.0, alpha in prop::sample::select(vec![-1.0, 0.0, 2.0])) {
        let c = C64::new(re, im);
        prop_assume!(c.norm() > 1e-3);
        let u = disk();
        let a = norm(&f.scale(c), &u, p, alpha);
        let b = c.norm() * norm(&f, &u, p, alpha);
        prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300), "{} vs {}", a, b);
    }

    #[test]
    fn normalized_norms_decrease_with_weight(f in poly(1), p in 1.0f64..4.0) {
        let u = disk();
        let mut prev = norm(&f, &u, p, -1.0).powf(p);
        for alpha in [0.0, 1.0, 2.0] {
            let v = norm(&f, &u, p, alpha).powf(p) / gamma_fn(alpha + 1.0);
            prop_assert!(v <= prev * (1.0 + 1e-9), "alpha={} {} > {}", alpha, v, prev);
            prev = v;
        }
    }
}

#[test]
fn disk_monomial_norms_match_closed_form() {
    let u = disk();
    for k in 1..=3u32 {
        let f = Polynomial::var(1, 0).pow(k).unwrap();
        for p in [1.0, 2.0, 3.0] {
            for alpha in [0.0, 1.0, 2.0] {
                let exact = TAU * gamma_fn(alpha + 1.0) / (1.0 + k as f64 * p).powf(alpha + 1.0);
                let got = norm(&f, &u, p, alpha).powf(p);
                assert!(got.is_finite());
                assert!((got - exact).abs() < 1e-9 * exact, "k={k} p={p} alpha={alpha}: {got} vs {exact}");
            }
        }
    }
}

#[test]
fn subordination_on_random_ball_maps() {
    let mut g = rng(31);
    let b = Budgets::default();
    for _ in 0..20 {
        let f = random_disk_map(&mut g, ModelDomain::UnitBall2, 3).unwrap();
        let phi = random_polynomial(&mut g, 1, 3);
        let rep = verify_subordination(&f, CPoint::origin(2), &phi, 2.0, &[-2.0, -0.7, -0.2, -0.02], &b).unwrap();
        assert!(rep.pass, "{:?}", rep.points);
    }
}
