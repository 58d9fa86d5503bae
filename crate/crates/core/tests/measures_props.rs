use plurinorm::measures::{interior_ma_integral, level_integral, level_quadrature, pair_level, Budget};
use plurinorm::random::{random_disk_point, random_polynomial, rng};
use plurinorm::{Exhaustion, ModelDomain, Polynomial, C64};
use proptest::prelude::*;
use std::f64::consts::TAU;

fn greens() -> Vec<Exhaustion> {
    vec![
        Exhaustion::log_abs(ModelDomain::UnitDisk),
        Exhaustion::disk_green(C64::new(-0.5, 0.2)).unwrap(),
        Exhaustion::log_abs(ModelDomain::UnitBall2),
        Exhaustion::log_max_abs(),
    ]
}

#[test]
fn unit_test_function_balances_level_and_interior_mass() {
    let b = Budget::default();
    for u in greens() {
        for r in [-4.0, -1.0, -0.3, -0.01] {
            let q = level_quadrature(&u, r, 64).unwrap();
            let level = pair_level(&q, |_| 1.0).unwrap().value;
            let interior = interior_ma_integral(&u, |_| 1.0, &|_| 1.0, Some(r), &b).unwrap().value;
            let full = TAU.powi(u.dim() as i32);
            assert!((level - interior).abs() < 1e-8 * full, "{} r={r}: {level} vs {interior}", u.describe());
        }
    }
}

fn poly_strategy(vars: usize) -> impl Strategy<Value = Polynomial> {
    any::<u64>().prop_map(move |s| random_polynomial(&mut rng(s), vars, 4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn level_pairing_nondecreasing_disk(g in poly_strategy(1), p in 0.5f64..4.0, seed in any::<u64>()) {
        let a = random_disk_point(&mut rng(seed), 0.8);
        let u = Exhaustion::disk_green(a).unwrap();
        let b = Budget::default();
        let mut prev = 0.0;
        for k in 0..30 {
            let r = -4.0 + 4.0 * k as f64 / 30.0;
            let v = level_integral(&u, r, &b, |z| g.eval(z.coords()).norm().powf(p)).unwrap().value;
            prop_assert!(v >= prev * (1.0 - 1e-9), "r={} {} < {}", r, v, prev);
            prev = v;
        }
    }

    #[test]
    fn level_pairing_nondecreasing_c2(g in poly_strategy(2), p in 0.5f64..4.0, which in 0usize..3) {
        let u = [
            Exhaustion::log_abs(ModelDomain::UnitBall2),
            Exhaustion::log_max_abs(),
            Exhaustion::smooth_square(),
        ][which].clone();
        let b = Budget::low();
        let mut prev = 0.0;
        for k in 0..12 {
            let r = -0.99 + 0.98 * k as f64 / 12.0;
            let v = level_integral(&u, r, &b, |z| g.eval(z.coords()).norm().powf(p)).unwrap().value;
            prop_assert!(v >= prev * (1.0 - 1e-9), "{} r={} {} < {}", u.describe(), r, v, prev);
            prev = v;
        }
    }

    #[test]
    fn resolution_doubling_is_stable(seed in any::<u64>(), r in -2.0f64..-0.05, which in 0usize..3) {
        let (u, vars) = [
            (Exhaustion::log_abs(ModelDomain::UnitDisk), 1),
            (Exhaustion::log_max_abs(), 2),
            (Exhaustion::log_abs(ModelDomain::UnitBall2), 2),
        ][which].clone();
        let res = if which == 2 { 128 } else { 256 };
        let g = random_polynomial(&mut rng(seed), vars, 4);
        let phi = |z: &plurinorm::CPoint| g.eval(z.coords()).norm_sqr();
        let a = pair_level(&level_quadrature(&u, r, res).unwrap(), phi).unwrap().value;
        let b = pair_level(&level_quadrature(&u, r, 2 * res).unwrap(), phi).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-8 * b.abs(), "{} vs {}", a, b);
    }
}

#[test]
fn comparable_exhaustions_bound_level_measures() {
    let u = Exhaustion::log_abs(ModelDomain::UnitDisk);
    let v = Exhaustion::scaled(0.5, u.clone()).unwrap();
    let (c, a) = (2.0, 0.25);
    let b = Budget::default();
    let mut g = rng(21);
    for _ in 0..20 {
        let f = random_polynomial(&mut g, 1, 5);
        let phi = |z: &plurinorm::CPoint| f.eval(z.coords()).norm_sqr();
        for r in [-3.0, -1.0, -0.4, -0.1] {
            let lhs = level_integral(&u, r, &b, phi).unwrap().value;
            let rhs = c * level_integral(&v, a * r, &b, phi).unwrap().value;
            assert!(lhs <= rhs * (1.0 + 1e-12), "r={r}: {lhs} > {rhs}");
        }
    }
}
