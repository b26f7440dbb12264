use hopfrough::bseries::PolyVectorField;
use hopfrough::forests::{parse_forest, Enumerator};
use hopfrough::poly::Poly;
use hopfrough::roughpath::{
    check_chen, check_controlled, check_hoelder, lift, lift_records, measure_local_order, rde_step, Driver,
    SampledPath,
};

fn trig_lift(n: usize) -> hopfrough::roughpath::RoughLift {
    lift(SampledPath::from_driver(Driver::Trig(2), 1.0, 16).unwrap(), n, 1.0 / 64.0).unwrap()
}

#[test]
fn chen_holds_for_the_circle() {
    let l = trig_lift(3);
    for (s, u, t) in [(0.0, 0.37, 1.0), (0.1, 0.5, 0.9), (0.25, 0.26, 0.75)] {
        let r = check_chen(&l, s, u, t, 3, 1e-8);
        assert!(r.passed, "max error {:e}", r.max_error);
    }
}

#[test]
fn lift_is_multiplicative() {
    let l = trig_lift(4);
    let mut e = Enumerator::new(2);
    for f in e.forests_up_to(4) {
        let product: f64 = f.trees().iter().map(|t| l.eval(0.2, 0.8, &t.clone().into()).unwrap()).product();
        assert!((l.eval(0.2, 0.8, &f).unwrap() - product).abs() < 1e-15, "{}", f);
    }
}

#[test]
fn circle_increments_are_analytic() {
    let l = trig_lift(2);
    let x1 = l.eval(0.0, 1.0, &parse_forest("[1:]").unwrap()).unwrap();
    let x2 = l.eval(0.0, 1.0, &parse_forest("[2:]").unwrap()).unwrap();
    assert!((x1 - (1f64.cos() - 1.0)).abs() < 1e-12);
    assert!((x2 - 1f64.sin()).abs() < 1e-12);
    // ∫ (cos r − 1) d(sin r) over [0, 1]
    let area = l.eval(0.0, 1.0, &parse_forest("[2:[1:]]").unwrap()).unwrap();
    let exact = 0.5 + (2.0f64).sin() / 4.0 - 1f64.sin();
    assert!((area - exact).abs() < 1e-10);
}

#[test]
fn hoelder_ratio_of_the_ladder_is_one_half() {
    let l = lift(SampledPath::from_driver(Driver::Linear(1), 1.0, 8).unwrap(), 3, 0.05).unwrap();
    let rows = check_hoelder(&l, 1.0, 2, 8);
    let ladder = rows.iter().find(|r| r.forest == "[1:[1:]]").unwrap();
    assert!((ladder.sup_ratio - 0.5).abs() < 1e-12);
    let point = rows.iter().find(|r| r.forest == "[1:]").unwrap();
    assert!((point.sup_ratio - 1.0).abs() < 1e-12);
}

#[test]
fn linear_field_step_approximates_the_exponential() {
    let l = lift(SampledPath::from_driver(Driver::Linear(1), 1.0, 8).unwrap(), 4, 0.05).unwrap();
    let f = PolyVectorField::scalar(Poly::var(1, 0)).unwrap();
    let y = rde_step(&[1.5], &l, &f, 0.3, 0.35, 4);
    // truncation error is 1.5 h^5/5! ≈ 3.9e-9
    assert!((y[0] - 1.5 * 0.05f64.exp()).abs() < 5e-9);
}

#[test]
fn local_order_is_n_plus_one() {
    let l = lift(SampledPath::from_driver(Driver::Linear(1), 1.0, 8).unwrap(), 4, 1.0 / 64.0).unwrap();
    let f = PolyVectorField::scalar(Poly::var(1, 0)).unwrap();
    for n in [2, 3] {
        let r = measure_local_order(&l, &f, &[1.0], 0.0, n, &[0.2, 0.1, 0.05, 0.025]);
        assert!(r.slope >= n as f64 + 1.0 - 0.3, "order {} slope {}", n, r.slope);
    }
}

#[test]
fn solution_is_controlled_by_the_lift() {
    let l = lift(SampledPath::from_driver(Driver::Trig(1), 1.0, 16).unwrap(), 4, 1.0 / 256.0).unwrap();
    let y = Poly::var(1, 0);
    let f = PolyVectorField::scalar(&y * &y).unwrap();
    let report = check_controlled(&l, &f, &[0.5], 3, 0.3);
    assert!(report.passed, "{:?}", report.rows);
}

#[test]
fn records_cover_every_forest() {
    let l = trig_lift(2);
    let recs = lift_records(&l, &[(0.0, 0.5), (0.5, 1.0)], 2);
    let per_pair = Enumerator::new(2).forests_up_to(2).len();
    assert_eq!(recs.len(), 2 * per_pair);
    assert!(recs.iter().any(|r| r.forest == "1" && r.value == 1.0));
}
