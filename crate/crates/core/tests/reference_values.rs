//! Closed-form reference values checked through the public API.

use std::f64::consts::{E, LN_2, PI};

use hcube_core::cube::{
    boundary_profile, influences, point_stats, point_weight, statistics, BiasedMeasure,
    BooleanFunction, RealFunction,
};
use hcube_core::gaussian::{halfspace_stats, smoothed_gradient_oracle, Halfspace};
use hcube_core::hypercontract::{hypercontractive_time, lp_norm, lsi_check, psi, psi2};
use hcube_core::inequalities::{
    numerical_fact_fn, proof_chain_trace, search_extremal, Branch, SearchSpace,
};
use hcube_core::isoperimetry::{
    bobkov_gotze_check, gaussian_profile, local_bobkov_discrete, profile_lower_bounds,
    verify_variance_drop,
};
use hcube_core::normal;
use hcube_core::report::{Law, Tolerance};
use hcube_core::semigroup::{martingale_decompose, noise, theta, variance_decay_report};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn half() -> BiasedMeasure {
    BiasedMeasure::uniform()
}

fn single_point() -> BooleanFunction {
    "n:2 hex:8".parse().unwrap()
}

#[test]
fn cube_values() {
    assert_eq!(point_weight(0, &half(), 1).unwrap(), 0.5);
    let m = BiasedMeasure::new(0.3).unwrap();
    assert!(close(point_weight(3, &m, 2).unwrap(), 0.09, 1e-15));

    let parity = BooleanFunction::parity(2).unwrap();
    let s = point_stats(&parity, 1).unwrap();
    assert_eq!(s.sensitivity, 2);
    assert!(close(s.gradient_norm, 2f64.sqrt(), 1e-15));
    let s = point_stats(&single_point(), 3).unwrap();
    assert_eq!((s.sensitivity, s.boundary_count), (2, 2));

    let st = statistics(&single_point(), &half());
    assert!(close(st.a, 0.25, 1e-15) && close(st.variance, 0.75, 1e-15));
    let b = boundary_profile(&single_point(), &half());
    assert!(close(b.e_grad, (2.0 + 2f64.sqrt()) / 4.0, 1e-15));
    assert!(close(b.e_sqrt_hf, 2f64.sqrt() / 4.0, 1e-15));

    let dict = BooleanFunction::dictator(1, 0).unwrap();
    for p in [0.1, 0.37, 0.5] {
        let m = BiasedMeasure::new(p).unwrap();
        assert!(close(
            influences(&dict, &m).inf[0],
            4.0 * p * (1.0 - p),
            1e-15
        ));
    }
    assert!(close(influences(&parity, &half()).w, 2.0, 1e-15));
}

#[test]
fn semigroup_values() {
    let dict = BooleanFunction::dictator(1, 0).unwrap().to_real();
    let g = noise(&dict, 0.5, &half()).unwrap();
    assert!(close(g.variance(&half()), (-1f64).exp(), 1e-15));
    let f = RealFunction::new(2, vec![0.1, -3.0, 2.0, 5.5]).unwrap();
    let m = BiasedMeasure::new(0.8).unwrap();
    let far = noise(&f, 50.0, &m).unwrap();
    assert!(far.values().iter().all(|v| close(*v, f.mean(&m), 1e-12)));

    assert_eq!(theta(0.0, &m), 0.0);
    assert!(close(theta(1e6, &m), 1.0, 1e-12));
    assert!(close(theta(LN_2 / 2.0, &half()), 1.0 / 3.0, 1e-15));

    let d = martingale_decompose(&BooleanFunction::parity(2).unwrap().to_real(), &half());
    let inc = d.increments(&half());
    assert!(close(inc.iter().sum::<f64>(), 1.0, 1e-12));

    let r = variance_decay_report(&dict, &half(), 0.5, Tolerance::default()).unwrap();
    assert!(close(r.lhs, (-1f64).exp(), 1e-15) && close(r.rhs_unit, 1.0, 1e-15) && r.pass);
}

#[test]
fn hypercontract_values() {
    let f = RealFunction::new(1, vec![2.0, 0.0]).unwrap();
    assert!(close(
        lp_norm(&f, &half(), 2.0).unwrap(),
        2f64.sqrt(),
        1e-15
    ));
    assert!(close(
        hypercontractive_time(1.5, &half()).unwrap(),
        0.5 * LN_2,
        1e-15
    ));
    let m = BiasedMeasure::new(0.1).unwrap();
    assert!(close(
        hypercontractive_time(1.5, &m).unwrap(),
        0.18 * LN_2,
        1e-15
    ));
    let one = RealFunction::constant(2, 1.0).unwrap();
    let l = lsi_check(&one, &m).unwrap();
    assert_eq!((l.entropy, l.dirichlet), (0.0, 0.0));
    assert_eq!(psi(0.0, 0.3), 0.0);
    let h = 1e-5;
    let fd = (psi(0.5 + h, 0.5) - 2.0 * psi(0.5, 0.5) + psi(0.5 - h, 0.5)) / (h * h);
    assert!(close(fd, psi2(0.5, 0.5), 1e-5 * psi2(0.5, 0.5).abs()));
}

#[test]
fn isoperimetry_values() {
    let tol = Tolerance::default();
    assert!(close(
        gaussian_profile(0.5).unwrap(),
        1.0 / (2.0 * PI).sqrt(),
        1e-16
    ));
    assert!(close(
        gaussian_profile(normal::cdf(1.0)).unwrap(),
        0.241_970_7,
        1e-7
    ));
    let e = profile_lower_bounds(0.5).unwrap();
    assert!(close(e.lower_quadratic, e.value, 1e-15));

    let ind = BooleanFunction::dictator(1, 0).unwrap();
    let r = bobkov_gotze_check(&ind, &[half()], tol).unwrap();
    assert!(close(r.lhs, 0.398_942_3, 1e-7));
    assert!(close(r.rhs_unit, 2f64.sqrt() / 2.0, 1e-15));
    assert!(r.pass);

    let r = local_bobkov_discrete(&ind, &half(), 0.0, tol).unwrap();
    assert_eq!(r.lhs, 0.0);
    assert!(local_bobkov_discrete(&ind, &half(), 1.0, tol).unwrap().pass);

    let r = verify_variance_drop(&single_point(), &half(), f64::INFINITY, tol).unwrap();
    assert!(close(r.lhs, 0.75, 1e-15));
    assert!(close(
        r.rhs_unit,
        PI.sqrt() * (2.0 + 2f64.sqrt()) / 4.0,
        1e-12
    ));
    assert!(close(r.rhs_unit, 1.513, 1e-3));
}

#[test]
fn inequality_values() {
    assert!(close(
        numerical_fact_fn(1.0),
        (1.0 - (-1f64).exp()) / 2f64.sqrt(),
        1e-15
    ));
    let r = search_extremal(1, &half(), Law::EldanGross, SearchSpace::Exhaustive, true).unwrap();
    assert!(close(r.min_ratio, 1.0 / (1.0 + E).ln().sqrt(), 1e-15));
    assert_eq!(r.argmin.unwrap().to_string(), "n:1 hex:1");
    let tr = proof_chain_trace(&single_point(), &half(), Tolerance::default()).unwrap();
    assert_eq!(tr.branch, Branch::WLarge);
    assert!(close(tr.w, 0.5, 1e-15));
}

#[test]
fn gaussian_values() {
    let s = halfspace_stats(&Halfspace::new(1, 0, 0.0).unwrap());
    assert!(close(s.e_grad, 2.0 / (2.0 * PI).sqrt(), 1e-15));
    let h = Halfspace::new(1, 0, 2.0).unwrap();
    assert!(close(
        smoothed_gradient_oracle(&h, 1e-3).unwrap(),
        0.10799,
        1e-2
    ));
}
