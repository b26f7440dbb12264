use std::collections::BTreeMap;

use hopfrough::algebra::{GradedVector, Rational};
use hopfrough::cocycle::{certificate, cocycle_solve, verify_cocycle, BckHopf, DegreeReport, GradedHopf, MindexHopf};
use hopfrough::poly::random_rational;
use hopfrough::{Forest, MultiIndexForest};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Every point of the returned family must satisfy the cocycle identity on
/// the inputs it was solved for.
fn family_points_are_cocycles<H: GradedHopf>(h: &H, max_degree: usize) {
    let sol = cocycle_solve(h, max_degree);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let theta: Vec<Rational> = (0..sol.family.num_params).map(|_| random_rational(&mut rng)).collect();
        let values: BTreeMap<H::B, GradedVector<H::B>> = sol.family.instantiate(&theta);
        let l = |x: &H::B| values.get(x).cloned().unwrap_or_else(GradedVector::zero);
        let check = verify_cocycle(h, &l, max_degree - 1);
        assert!(check.holds, "{} fails at {:?}", h.name(), check.counterexample.map(|c| c.0.to_string()));
    }
}

fn new_parameters(reports: &[DegreeReport]) -> Vec<usize> {
    let mut prev = 0;
    reports
        .iter()
        .map(|r| {
            let n = r.solution_dim - prev;
            prev = r.solution_dim;
            n
        })
        .collect()
}

#[test]
fn sampled_solutions_satisfy_the_equation() {
    family_points_are_cocycles(&MindexHopf, 4);
    family_points_are_cocycles(&BckHopf { alphabet: 1 }, 4);
    family_points_are_cocycles(&BckHopf { alphabet: 2 }, 3);
}

#[test]
fn low_degree_shapes() {
    let sol = cocycle_solve(&MindexHopf, 2);
    let reports = sol.reports();
    assert_eq!(new_parameters(&reports), vec![1, 1]);
    assert_eq!(reports[0].num_unknowns, 1);
    assert!(sol.unit_survives);
}

#[test]
fn solver_is_deterministic() {
    let a = certificate(&cocycle_solve(&MindexHopf, 4));
    let b = certificate(&cocycle_solve(&MindexHopf, 4));
    assert_eq!(a, b);
}

#[test]
fn obstruction_comes_with_a_checkable_witness() {
    let sol = cocycle_solve(&MindexHopf, 5);
    assert!(!sol.unit_survives);
    let step = sol.obstruction_step().expect("obstruction by degree 5");
    let w = sol.witness.as_ref().unwrap();
    assert_eq!(w.degree, step.report.degree);
    assert!(w.verify(step));
    assert!(step.report.unit_coeff_forced_zero);
    assert!(sol.family.unit_direction(&MultiIndexForest::unit()).is_none());
}

#[test]
fn bck_family_contains_bplus() {
    let sol = cocycle_solve(&BckHopf { alphabet: 1 }, 4);
    assert!(sol.unit_survives);
    let theta = sol.family.unit_direction(&Forest::unit()).unwrap();
    let values = sol.family.instantiate(&theta);
    assert!(!values[&Forest::unit()].is_zero());
}

#[test]
fn bplus_chain_gives_a_differential_homomorphism() {
    use hopfrough::bck::bplus;
    use hopfrough::bseries::{check_homomorphism, PolyVectorField};
    use hopfrough::cocycle::lambda_from_cocycle;
    use hopfrough::forests::parse_forest;
    use hopfrough::poly::Poly;

    let h = BckHopf { alphabet: 1 };
    let l = |a: u32, f: &Forest| GradedVector::basis(Forest::from(bplus(a, f)));
    let u = lambda_from_cocycle(&h, &l, &parse_forest("[1:[1:]] * [1:]").unwrap());
    let v = lambda_from_cocycle(&h, &l, &parse_forest("[1:[1:][1:]]").unwrap());
    let y = Poly::var(1, 0);
    let field = PolyVectorField::scalar(&(&y * &y) + &y).unwrap();
    assert!(check_homomorphism(&u, &v, &field, &[&y * &y]).unwrap());
}
