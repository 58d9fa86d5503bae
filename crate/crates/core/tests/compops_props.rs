use plurinorm::compops::{
    boundedness_diagnostic, compfnorm_via_counting, deficiency_profile, necessity_ratio, DiagnosticOptions,
    NecessityOptions, DIAGNOSTIC_RADII,
};
use plurinorm::identities::Budgets;
use plurinorm::random::{random_disk_map, random_polynomial, rng};
use plurinorm::{Exhaustion, HoloFunction, HoloMap, Holomorphic, ModelDomain, Polynomial, SpaceParams, TestKernel, C64};
use proptest::prelude::*;

fn disk() -> Exhaustion {
    Exhaustion::log_abs(ModelDomain::UnitDisk)
}

#[test]
fn deficiency_is_nonincreasing() {
    let mut g = rng(51);
    let r_grid = [-1.0, -0.5, -0.2, -0.1, -0.05, -0.02, -0.01];
    let opts = DiagnosticOptions::default();
    for k in 0..6 {
        let f = random_disk_map(&mut g, ModelDomain::UnitDisk, 1 + k % 3).unwrap();
        let (alpha, beta) = [(-1.0, -1.0), (0.0, -1.0), (1.0, 0.5)][k as usize % 3];
        let rep = deficiency_profile(&f, &disk(), alpha, beta, &r_grid, &opts).unwrap();
        assert!(rep.monotone);
        for i in 1..rep.delta.len() {
            let slack = 2.0 * (rep.delta_error[i] + rep.delta_error[i - 1]);
            assert!(rep.delta[i] <= rep.delta[i - 1] + slack, "{:?}", rep.delta);
        }
    }
}

#[test]
fn identity_ratio_is_exactly_one() {
    let opts = DiagnosticOptions::default();
    for ab in [-1.0, -0.5, 0.0, 1.0, 3.0] {
        let rep = boundedness_diagnostic(&HoloMap::identity_disk(), &disk(), ab, ab, &DIAGNOSTIC_RADII, &opts).unwrap();
        assert!(!rep.samples.is_empty());
        assert!(rep.samples.iter().all(|s| s.ratio == 1.0), "alpha=beta={ab}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn necessity_ratio_is_scale_invariant(
        re in -5.0f64..5.0,
        im in -5.0f64..5.0,
        zr in 0.0f64..0.7,
        zt in 0.0f64..6.28,
        alpha in prop::sample::select(vec![-1.0, 0.0, 1.0]),
    ) {
        let c = C64::new(re, im);
        prop_assume!(c.norm() > 1e-2);
        let params = SpaceParams::new(2.0, alpha).unwrap();
        let f: HoloFunction = TestKernel::new(C64::new(0.3, 0.4), (alpha + 2.0) / 2.0).unwrap().into();
        let f_map = HoloMap::to_disk(
            Polynomial::var(1, 0).pow(2).unwrap().scale(C64::new(0.8, 0.0)),
            ModelDomain::UnitDisk,
        )
        .unwrap();
        let w = f.value(&[C64::new(0.3, 0.4) + C64::from_polar(zr, zt) * 0.3]);
        let opts = NecessityOptions { a: 1.5, ..Default::default() };
        let base = necessity_ratio(&f_map, &f, &disk(), &disk(), params, 0.0, w, &opts);
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        let scaled = necessity_ratio(&f_map, &f.scaled(c), &disk(), &disk(), params, 0.0, c * w, &opts).unwrap();
        prop_assert!((scaled.ratio - base.ratio).abs() <= 1e-12 * base.ratio.abs().max(1e-300), "{} vs {}", scaled.ratio, base.ratio);
    }
}

#[test]
fn composition_norm_agrees_with_direct_norm() {
    let mut g = rng(53);
    let budgets = Budgets::default();
    for k in 0..20usize {
        let (source, budgets) = if k % 5 == 4 {
            (ModelDomain::UnitBall2, Budgets::low())
        } else {
            (ModelDomain::UnitDisk, budgets)
        };
        let f_map = random_disk_map(&mut g, source, 1 + (k % 3) as u32).unwrap();
        let f: HoloFunction = random_polynomial(&mut g, 1, 2).into();
        let params = SpaceParams::new([2.0, 4.0][k % 2], [-1.0, 0.0, 1.0][k % 3]).unwrap();
        let u = Exhaustion::log_abs(source);
        let r = compfnorm_via_counting(&f_map, &f, &u, params, &budgets, 1e-3).unwrap();
        assert!(r.pass, "pair {k}: rel_err {} ({:?})", r.rel_err, r.notes);
    }
}
