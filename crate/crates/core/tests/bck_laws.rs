mod oracles;

use hopfrough::algebra::{Rational, Tensor2};
use hopfrough::bck::{
    coproduct_forest, gl_product, gl_product_forest, graft, pairing, pairing_tensor, simultaneous_graft, sym,
    BckElement,
};
use hopfrough::forests::{parse_forest, Enumerator, Forest};
use num_bigint::BigInt;

fn elem(f: &Forest) -> BckElement {
    BckElement::basis(f.clone())
}

#[test]
fn coproduct_matches_admissible_cuts() {
    for d in [1, 2] {
        let n = if d == 1 { 5 } else { 4 };
        for f in Enumerator::new(d).forests_up_to(n) {
            assert_eq!(coproduct_forest(&f), oracles::admissible_cuts(&f), "{}", f);
        }
    }
}

#[test]
fn symmetry_factor_counts_automorphisms() {
    for f in Enumerator::new(1).forests_up_to(6) {
        assert_eq!(f.symmetry_factor(), BigInt::from(oracles::automorphisms(&f)), "{}", f);
    }
    for f in Enumerator::new(2).forests_up_to(4) {
        assert_eq!(f.symmetry_factor(), BigInt::from(oracles::automorphisms(&f)), "{}", f);
    }
}

#[test]
fn product_is_adjoint_to_coproduct() {
    let mut e = Enumerator::new(1);
    for n in 0..=6 {
        let targets = e.forests(n).to_vec();
        let coproducts: Vec<_> = targets.iter().map(coproduct_forest).collect();
        for k in 0..=n {
            for a in e.forests(k).to_vec() {
                for b in e.forests(n - k).to_vec() {
                    let prod = gl_product_forest(&a, &b);
                    for (c, dc) in targets.iter().zip(&coproducts) {
                        let lhs = prod.coeff(c) * sym(c);
                        let rhs = dc.coeff(&(a.clone(), b.clone())) * sym(&a) * sym(&b);
                        assert_eq!(lhs, rhs, "<{} * {}, {}>", a, b, c);
                    }
                }
            }
        }
    }
}

#[test]
fn pairing_is_compatible_on_two_letters() {
    let fs = Enumerator::new(2).forests_up_to(2);
    let cs = Enumerator::new(2).forests_up_to(4);
    for a in &fs {
        for b in &fs {
            let ab = gl_product(&elem(a), &elem(b));
            for c in &cs {
                let ta = Tensor2::basis((a.clone(), b.clone()));
                assert_eq!(pairing(&ab, &elem(c)), pairing_tensor(&ta, &coproduct_forest(c)));
            }
        }
    }
}

#[test]
fn gl_product_is_associative() {
    let fs = Enumerator::new(1).forests_up_to(4);
    for a in &fs {
        for b in &fs {
            for c in &fs {
                if a.size() + b.size() + c.size() > 6 {
                    continue;
                }
                let (x, y, z) = (elem(a), elem(b), elem(c));
                assert_eq!(gl_product(&gl_product(&x, &y), &z), gl_product(&x, &gl_product(&y, &z)));
            }
        }
    }
}

#[test]
fn grafting_mass_counts_attachment_points() {
    let mut e = Enumerator::new(2);
    for s in e.trees_up_to(2) {
        for t in e.trees_up_to(3) {
            assert_eq!(graft(&s, &t).mass(), Rational::from_integer(BigInt::from(t.size())));
        }
    }
    for f in e.forests_up_to(3) {
        for g in e.forests_up_to(3) {
            let expected = BigInt::from(g.size()).pow(f.num_trees() as u32);
            assert_eq!(simultaneous_graft(&f, &g).mass(), Rational::from_integer(expected), "{} onto {}", f, g);
        }
    }
}

#[test]
fn unit_laws() {
    let f = parse_forest("[1:[2:]] * [2:]").unwrap();
    let one = Forest::unit();
    assert_eq!(gl_product_forest(&one, &f), elem(&f));
    assert_eq!(gl_product_forest(&f, &one), elem(&f));
    assert_eq!(simultaneous_graft(&one, &f), elem(&f));
}
