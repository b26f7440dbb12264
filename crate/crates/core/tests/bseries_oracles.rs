use hopfrough::algebra::{int, rat, Rational};
use hopfrough::bseries::{bseries, phi_push, Character, Differentials, PolyVectorField};
use hopfrough::forests::{Enumerator, Tree};
use hopfrough::mindex::{phi_tree, MultiIndex};
use hopfrough::poly::Poly;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `Υ[B⁺(τ₁..τ_k)] = f^{(k)} ∏ Υ[τ_i]` in the scalar case.
fn scalar_upsilon(t: &Tree, f: &Poly) -> Poly {
    let k = t.children().len() as u32;
    t.children().iter().fold(f.deriv_multi(&[k]), |acc, c| &acc * &scalar_upsilon(c, f))
}

fn tree_factorial(t: &Tree) -> BigInt {
    t.children().iter().fold(BigInt::from(t.size()), |acc, c| acc * tree_factorial(c))
}

#[test]
fn scalar_differentials_match_the_recursion() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let p = Poly::random(&mut rng, 1, 4);
        let field = PolyVectorField::scalar(p.clone()).unwrap();
        let mut diffs = Differentials::new(&field);
        for t in Enumerator::new(1).trees_up_to(5) {
            assert_eq!(diffs.tree(&t), vec![scalar_upsilon(&t, &p)], "{}", t);
        }
    }
}

#[test]
fn exact_flow_character_reproduces_the_taylor_series() {
    // y' = y², so y(h) = y/(1 − hy) = Σ y^{k+1} h^k.
    let y = Poly::var(1, 0);
    let field = PolyVectorField::scalar(&y * &y).unwrap();
    let h = rat(1, 3);
    let y0 = rat(2, 5);
    for n in 1..=5 {
        let z = Character {
            tree_values: Enumerator::new(1)
                .trees_up_to(n)
                .into_iter()
                .map(|t| {
                    let v = num_traits::pow(h.clone(), t.size()) / Rational::from_integer(tree_factorial(&t));
                    (t, v)
                })
                .collect(),
        };
        let got = bseries(&[y0.clone()], &z, &field, n).unwrap();
        let taylor: Rational = (0..=n).map(|k| num_traits::pow(y0.clone(), k + 1) * num_traits::pow(h.clone(), k)).sum();
        assert_eq!(got, vec![taylor], "order {}", n);
    }
}

#[test]
fn constant_field_only_sees_the_single_vertex() {
    let field = PolyVectorField::scalar(Poly::constant(1, int(3))).unwrap();
    let mut diffs = Differentials::new(&field);
    for t in Enumerator::new(1).trees_up_to(4) {
        let expected = if t.size() == 1 { Poly::constant(1, int(3)) } else { Poly::zero(1) };
        assert_eq!(diffs.tree(&t), vec![expected]);
    }
}

/// `Φ(B⁺(τ₁..τ_n)) = z_n ∏ Φ(τ_i)`, written with monomial products.
fn phi_oracle(t: &Tree) -> MultiIndex {
    t.children().iter().fold(MultiIndex::var(t.children().len()), |acc, c| acc.add(&phi_oracle(c)))
}

#[test]
fn phi_matches_the_grafting_recursion() {
    for t in Enumerator::new(1).trees_up_to(7) {
        assert_eq!(phi_tree(&t).unwrap(), phi_oracle(&t), "{}", t);
    }
    assert!(phi_tree(&Tree::leaf(2)).is_err());
}

#[test]
fn pushforward_of_the_counit_is_the_counit() {
    let x = Character::default();
    let m = phi_push(&x, 4).unwrap();
    assert!(m.values.values().all(Zero::is_zero));
}
