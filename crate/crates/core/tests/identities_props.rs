use plurinorm::identities::{
    verify_change_of_variables, verify_littlewood_paley, verify_mean_value, verify_proper_pushforward, Budgets,
};
use plurinorm::{CPoint, Exhaustion, ModelDomain, Polynomial, SpaceParams, C64};
use std::f64::consts::{PI, TAU};

#[test]
fn constant_function_pins_the_normalization() {
    let one = |n| Polynomial::constant(n, C64::new(1.0, 0.0));
    let params = SpaceParams::new(2.0, 0.0).unwrap();
    for (d, n) in [(ModelDomain::UnitDisk, 1), (ModelDomain::UnitBall2, 2)] {
        let r = verify_littlewood_paley(&one(n), d, CPoint::origin(n), params, &Budgets::default(), 1e-10).unwrap();
        let exact = TAU.powi(n as i32);
        assert!((r.lhs - exact).abs() <= 1e-10 * exact, "{}", r.lhs);
        assert!((r.rhs - exact).abs() <= 1e-12 * exact, "{}", r.rhs);
    }
}

#[test]
fn pushforward_examples() {
    let b = Budgets::default();
    let r = verify_proper_pushforward(2, &|w: C64| w.norm_sqr(), -0.4, &b, 1e-12).unwrap();
    let exact = 4.0 * PI * (-0.8f64).exp();
    assert!((r.lhs - exact).abs() < 1e-12 * exact && (r.rhs - exact).abs() < 1e-12 * exact);
    let r = verify_proper_pushforward(3, &|_| 1.0, -1.3, &b, 1e-12).unwrap();
    assert!((r.lhs - 6.0 * PI).abs() < 1e-12 && r.pass);
    let r = verify_proper_pushforward(1, &|w: C64| w.re.exp(), -0.7, &b, 1e-14).unwrap();
    assert!(r.pass);
}

#[test]
fn change_of_variables_converges_under_doubling() {
    let b = Budgets::low();
    let f = Polynomial::var(1, 0).pow(3).unwrap().add(&Polynomial::constant(1, C64::new(0.2, -0.1)));
    let u = Exhaustion::log_abs(ModelDomain::UnitDisk);
    let lo = verify_change_of_variables(&f, &u, 2.0, -0.4, &b, 1e-3).unwrap();
    let hi = verify_change_of_variables(&f, &u, 2.0, -0.4, &b.doubled(), 1e-3).unwrap();
    assert!(lo.pass && hi.pass, "{} {}", lo.rel_err, hi.rel_err);
    assert!(hi.rel_err <= (lo.rel_err / 4.0).max(1e-10), "{} -> {}", lo.rel_err, hi.rel_err);
}

#[test]
fn mean_value_inequality_on_disk() {
    let f = Polynomial::var(1, 0).pow(2).unwrap();
    let u = Exhaustion::log_abs(ModelDomain::UnitDisk);
    for (alpha, w0, rho) in [(0.0, C64::new(0.5, 0.0), 0.3), (-1.0, C64::new(0.2, 0.3), 0.2), (1.0, C64::new(-0.4, 0.1), 0.35)] {
        let r = verify_mean_value(&f, &u, alpha, w0, rho, &Budgets::low()).unwrap();
        assert!(r.pass, "{:?}", r.points);
    }
    assert!(verify_mean_value(&f, &u, 0.0, C64::new(0.1, 0.0), 0.3, &Budgets::low()).is_err());
}
