//! Elementary differentials of polynomial vector fields, elementary vector
//! fields, B-series over trees and over multi-indices, and exact checks of
//! the identities relating them to the algebraic products.
//!
//! Everything is symbolic: `Υ[τ]` is computed as a vector of polynomials
//! and only evaluated at the end, so identities are compared as polynomial
//! identities.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;

use crate::algebra::{GradedVector, Rational};
use crate::bck::{coproduct_tree, gl_product, simultaneous_graft, unshuffle, BckElement};
use crate::error::{Error, Result};
use crate::forests::{Enumerator, Forest, Tree};
use crate::mindex::{
    coproduct_single, phi_tree, populated_of_degree, star_m, unshuffle_m, MElement, MultiIndex, MultiIndexForest,
};
use crate::poly::{random_rational, Jet, Poly, Series};

/// `f = (f_α)_{α ∈ 1..=d}`, each `f_α: ℝ^m → ℝ^m` polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVectorField {
    d: usize,
    m: usize,
    f: Vec<Vec<Poly>>,
}

impl PolyVectorField {
    /// `f[α - 1][b]` is the `b`-th component of `f_α`.
    pub fn new(f: Vec<Vec<Poly>>) -> Result<Self> {
        let d = f.len();
        let m = f.first().map_or(0, Vec::len);
        if d == 0 || m == 0 {
            return Err(Error::Dimension("empty vector field".into()));
        }
        for fa in &f {
            if fa.len() != m || fa.iter().any(|p| p.nvars() != m) {
                return Err(Error::Dimension(format!("every f_alpha needs {} components in {} variables", m, m)));
            }
        }
        Ok(PolyVectorField { d, m, f })
    }

    /// The scalar field `f: ℝ → ℝ`, `d = m = 1`.
    pub fn scalar(p: Poly) -> Result<Self> {
        PolyVectorField::new(vec![vec![p]])
    }

    /// Parses `f_1; f_2; …`, each `f_α` a comma-separated list of `m`
    /// polynomials in `y0..y{m-1}`.
    pub fn parse(text: &str) -> Result<Self> {
        let drivers: Vec<&str> = text.split(';').collect();
        let m = drivers[0].split(',').count();
        let f = drivers
            .iter()
            .map(|fa| fa.split(',').map(|c| crate::poly::parse_poly(c, m)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        PolyVectorField::new(f)
    }

    pub fn random<R: Rng>(rng: &mut R, d: usize, m: usize, max_degree: u32) -> Self {
        let f = (0..d).map(|_| (0..m).map(|_| Poly::random(rng, m, max_degree)).collect()).collect();
        PolyVectorField { d, m, f }
    }

    pub fn drivers(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn component(&self, alpha: u32) -> &[Poly] {
        &self.f[alpha as usize - 1]
    }

    fn check_point(&self, y: &[Rational]) -> Result<()> {
        if y.len() != self.m {
            return Err(Error::Dimension(format!("point with {} coordinates in dimension {}", y.len(), self.m)));
        }
        Ok(())
    }

    fn check_forest(&self, f: &Forest) -> Result<()> {
        f.check_alphabet(self.d as u32)
    }

    fn scalar_poly(&self) -> Result<&Poly> {
        if self.d != 1 || self.m != 1 {
            return Err(Error::Unsupported(format!(
                "multi-index differentials need d = m = 1, got d = {}, m = {}",
                self.d, self.m
            )));
        }
        Ok(&self.f[0][0])
    }
}

/// `Σ_b ∏_i v_i^{b_i} ∂_{b_1}⋯∂_{b_n} target`, componentwise in `target`.
pub fn apply_fields(fields: &[Vec<Poly>], target: &[Poly]) -> Vec<Poly> {
    let Some(m) = target.first().map(Poly::nvars) else {
        return Vec::new();
    };
    let mut orders: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
    orders.insert(vec![0; m], Poly::one(m));
    for v in fields {
        let mut next: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
        for (ord, coef) in &orders {
            for (b, vb) in v.iter().enumerate() {
                if vb.is_zero() {
                    continue;
                }
                let mut o = ord.clone();
                o[b] += 1;
                let term = coef * vb;
                let e = next.entry(o).or_insert_with(|| Poly::zero(m));
                *e = &*e + &term;
            }
        }
        orders = next;
    }
    target
        .iter()
        .map(|t| {
            orders
                .iter()
                .fold(Poly::zero(m), |acc, (ord, coef)| &acc + &(coef * &t.deriv_multi(ord)))
        })
        .collect()
}

fn add_vec(a: &mut [Poly], b: &[Poly], c: &Rational) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = &*x + &y.scale(c);
    }
}

/// Symbolic elementary differentials of one vector field, memoized by tree.
pub struct Differentials<'a> {
    field: &'a PolyVectorField,
    cache: BTreeMap<Tree, Vec<Poly>>,
}

impl<'a> Differentials<'a> {
    pub fn new(field: &'a PolyVectorField) -> Self {
        Differentials { field, cache: BTreeMap::new() }
    }

    fn zero_vec(&self) -> Vec<Poly> {
        vec![Poly::zero(self.field.m); self.field.m]
    }

    /// `Υ[τ]` as an `m`-vector of polynomials.
    pub fn tree(&mut self, t: &Tree) -> Vec<Poly> {
        if let Some(v) = self.cache.get(t) {
            return v.clone();
        }
        let children: Vec<Vec<Poly>> = t.children().iter().map(|c| self.tree(c)).collect();
        let v = apply_fields(&children, self.field.component(t.label()));
        self.cache.insert(t.clone(), v.clone());
        v
    }

    /// `Υ` on a forest: the tree value for single trees, zero otherwise.
    pub fn forest(&mut self, f: &Forest) -> Vec<Poly> {
        match f.trees() {
            [t] => self.tree(t),
            _ => self.zero_vec(),
        }
    }

    pub fn element(&mut self, x: &BckElement) -> Vec<Poly> {
        let mut out = self.zero_vec();
        for (f, c) in x.iter() {
            let v = self.forest(f);
            add_vec(&mut out, &v, c);
        }
        out
    }

    /// The elementary vector field `Υ[u]{ψ}`, with `Υ[1]{ψ} = ψ`.
    pub fn vector_field(&mut self, u: &Forest, psi: &[Poly]) -> Vec<Poly> {
        let fields: Vec<Vec<Poly>> = u.trees().iter().map(|t| self.tree(t)).collect();
        apply_fields(&fields, psi)
    }

    pub fn vector_field_element(&mut self, u: &BckElement, psi: &[Poly]) -> Vec<Poly> {
        let m = psi.first().map_or(self.field.m, Poly::nvars);
        let mut out = vec![Poly::zero(m); psi.len()];
        for (f, c) in u.iter() {
            let v = self.vector_field(f, psi);
            add_vec(&mut out, &v, c);
        }
        out
    }
}

fn eval_vec(v: &[Poly], y: &[Rational]) -> Result<Vec<Rational>> {
    v.iter().map(|p| p.eval(y)).collect()
}

/// `Υ_f[τ](y)`.
pub fn upsilon(tau: &Forest, f: &PolyVectorField, y: &[Rational]) -> Result<Vec<Rational>> {
    f.check_point(y)?;
    f.check_forest(tau)?;
    eval_vec(&Differentials::new(f).forest(tau), y)
}

/// `Υ_f[u]{ψ}(y)`.
pub fn upsilon_vf(u: &Forest, f: &PolyVectorField, psi: &[Poly], y: &[Rational]) -> Result<Vec<Rational>> {
    f.check_point(y)?;
    f.check_forest(u)?;
    if psi.iter().any(|p| p.nvars() != f.m) {
        return Err(Error::Dimension("test function in the wrong number of variables".into()));
    }
    eval_vec(&Differentials::new(f).vector_field(u, psi), y)
}

/// `Ῡ_f[z^β] = ∏_k (f^{(k)})^{β(k)}` as a polynomial; zero on forests
/// that are not a single multi-index.
pub fn upsilon_m_poly(x: &MultiIndexForest, f: &PolyVectorField) -> Result<Poly> {
    let p = f.scalar_poly()?;
    match x.entries() {
        [b] => Ok(upsilon_m_single(b, p)),
        _ => Ok(Poly::zero(1)),
    }
}

fn upsilon_m_single(b: &MultiIndex, p: &Poly) -> Poly {
    let mut out = Poly::one(1);
    let mut dk = p.clone();
    for (k, &e) in b.exponents().iter().enumerate() {
        if k > 0 {
            dk = dk.deriv(0);
        }
        if e > 0 {
            out = &out * &dk.pow(e);
        }
    }
    out
}

/// `Ῡ_f[x](y)` for scalar `f`.
pub fn upsilon_m(x: &MultiIndexForest, f: &PolyVectorField, y: &Rational) -> Result<Rational> {
    upsilon_m_poly(x, f)?.eval(std::slice::from_ref(y))
}

/// `Ῡ_f[x_1⋯x_n]{φ} = ∏ Ῡ_f[x_i] · φ^{(n)}`, with `Ῡ_f[1]{φ} = φ`.
pub fn upsilon_m_vf(x: &MultiIndexForest, f: &PolyVectorField, phi: &Poly) -> Result<Poly> {
    let p = f.scalar_poly()?;
    let mut out = phi.deriv_multi(&[x.num_components() as u32]);
    for b in x.entries() {
        out = &out * &upsilon_m_single(b, p);
    }
    Ok(out)
}

fn upsilon_m_vf_element(x: &MElement, f: &PolyVectorField, phi: &Poly) -> Result<Poly> {
    let mut out = Poly::zero(1);
    for (b, c) in x.iter() {
        out = &out + &upsilon_m_vf(b, f, phi)?.scale(c);
    }
    Ok(out)
}

/// A character on forests, given by its values on trees; unspecified
/// trees take the value zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Character {
    pub tree_values: BTreeMap<Tree, Rational>,
}

impl Character {
    pub fn value_tree(&self, t: &Tree) -> Rational {
        self.tree_values.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    /// Multiplicative extension, `1` on the empty forest.
    pub fn value(&self, f: &Forest) -> Rational {
        f.trees().iter().fold(Rational::one(), |acc, t| acc * self.value_tree(t))
    }

    /// Random values on all trees of size ≤ `max_size`.
    pub fn random<R: Rng>(rng: &mut R, alphabet: u32, max_size: usize) -> Self {
        let trees = Enumerator::new(alphabet).trees_up_to(max_size);
        Character { tree_values: trees.into_iter().map(|t| (t, random_rational(rng))).collect() }
    }

    /// `(self ⋆ other)(τ) = Σ self(τ') other(τ'')` over `Δτ = Σ τ' ⊗ τ''`.
    pub fn star(&self, other: &Character, alphabet: u32, max_size: usize) -> Character {
        let mut out = BTreeMap::new();
        for t in Enumerator::new(alphabet).trees_up_to(max_size) {
            let v = coproduct_tree(&t)
                .iter()
                .fold(Rational::zero(), |acc, ((l, r), c)| acc + c * self.value(l) * other.value(r));
            out.insert(t, v);
        }
        Character { tree_values: out }
    }
}

/// A character on forests of multi-indices, given on single multi-indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MCharacter {
    pub values: BTreeMap<MultiIndex, Rational>,
}

impl MCharacter {
    pub fn value_single(&self, b: &MultiIndex) -> Rational {
        self.values.get(b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn value(&self, x: &MultiIndexForest) -> Rational {
        x.entries().iter().fold(Rational::one(), |acc, b| acc * self.value_single(b))
    }

    pub fn random<R: Rng>(rng: &mut R, max_degree: usize) -> Self {
        let values = (1..=max_degree)
            .flat_map(populated_of_degree)
            .map(|b| (b, random_rational(rng)))
            .collect();
        MCharacter { values }
    }

    /// Convolution through `Δ^M`, on populated multi-indices of degree ≤ `max_degree`.
    pub fn star(&self, other: &MCharacter, max_degree: usize) -> Result<MCharacter> {
        let mut values = BTreeMap::new();
        for b in (1..=max_degree).flat_map(populated_of_degree) {
            let v = coproduct_single(&b)?
                .iter()
                .fold(Rational::zero(), |acc, ((l, r), c)| acc + c * self.value(l) * other.value(r));
            values.insert(b, v);
        }
        Ok(MCharacter { values })
    }
}

/// Pushforward along `Φ`: `(Φ_*X)(z^β) = S_M(β) Σ_{Φ(τ) = z^β} X(τ)/S(τ)`,
/// over trees of size ≤ `max_size` on one letter.
pub fn phi_push(x: &Character, max_size: usize) -> Result<MCharacter> {
    let mut values: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
    for t in Enumerator::new(1).trees_up_to(max_size) {
        let b = phi_tree(&t)?;
        let s = Rational::from_integer(t.symmetry_factor());
        *values.entry(b).or_insert_with(Rational::zero) += x.value_tree(&t) / s;
    }
    for (b, v) in values.iter_mut() {
        *v *= Rational::from_integer(b.symmetry());
    }
    Ok(MCharacter { values })
}

/// `B(y, Z) = y + Σ_{|τ| ≤ n} Υ[τ](y)/S(τ) ⟨Z, τ⟩`.
pub fn bseries(y: &[Rational], z: &Character, f: &PolyVectorField, n: usize) -> Result<Vec<Rational>> {
    f.check_point(y)?;
    let mut diffs = Differentials::new(f);
    let mut out = y.to_vec();
    for t in Enumerator::new(f.d as u32).trees_up_to(n) {
        let c = z.value_tree(&t);
        if c.is_zero() {
            continue;
        }
        let c = c / Rational::from_integer(t.symmetry_factor());
        for (o, v) in out.iter_mut().zip(eval_vec(&diffs.tree(&t), y)?) {
            *o += &c * v;
        }
    }
    Ok(out)
}

/// `B(y, Z_h)` with `⟨Z_h, τ⟩ = h^{|τ|}⟨Z, τ⟩`, as a jet of order `n` in `h`.
pub fn bseries_jet(y: &Jet, z: &Character, f: &PolyVectorField, n: usize) -> Result<Jet> {
    let mut diffs = Differentials::new(f);
    let mut out = y.clone();
    for t in Enumerator::new(f.d as u32).trees_up_to(n) {
        let c = z.value_tree(&t);
        if c.is_zero() {
            continue;
        }
        let c = c / Rational::from_integer(t.symmetry_factor());
        let scale = Series::monomial(y.order(), t.size(), c);
        for (o, p) in out.components.iter_mut().zip(diffs.tree(&t)) {
            *o = &*o + &(&scale * &p.eval_series(&y.components)?);
        }
    }
    Ok(out)
}

/// `B_M(y, Z) = y + Σ_{|β| ≤ n} Ῡ[z^β](y)/S_M(β) ⟨Z, z^β⟩`, scalar `f`.
pub fn bseries_m(y: &Rational, z: &MCharacter, f: &PolyVectorField, n: usize) -> Result<Rational> {
    let p = f.scalar_poly()?;
    let mut out = y.clone();
    for b in (1..=n).flat_map(populated_of_degree) {
        let c = z.value_single(&b);
        if !c.is_zero() {
            out += c / Rational::from_integer(b.symmetry()) * upsilon_m_single(&b, p).eval(std::slice::from_ref(y))?;
        }
    }
    Ok(out)
}

/// Jet version of [`bseries_m`].
pub fn bseries_m_jet(y: &Series, z: &MCharacter, f: &PolyVectorField, n: usize) -> Result<Series> {
    let p = f.scalar_poly()?;
    let mut out = y.clone();
    for b in (1..=n).flat_map(populated_of_degree) {
        let c = z.value_single(&b);
        if c.is_zero() {
            continue;
        }
        let c = c / Rational::from_integer(b.symmetry());
        let scale = Series::monomial(y.order(), b.size(), c);
        out = &out + &(&scale * &upsilon_m_single(&b, p).eval_series(std::slice::from_ref(y))?);
    }
    Ok(out)
}

/// `Υ[(∏σ_j) ⋆̄ τ] = Σ_b ∏Υ^{b_j}[σ_j] ∏∂_{b_j} Υ[τ]` as polynomials.
pub fn check_graft_morphism(sigma: &Forest, tau: &Tree, f: &PolyVectorField) -> Result<bool> {
    f.check_forest(sigma)?;
    f.check_forest(&Forest::from(tau.clone()))?;
    let mut diffs = Differentials::new(f);
    let lhs = diffs.element(&simultaneous_graft(sigma, &Forest::from(tau.clone())));
    let fields: Vec<Vec<Poly>> = sigma.trees().iter().map(|s| diffs.tree(s)).collect();
    let rhs = apply_fields(&fields, &diffs.tree(tau));
    Ok(lhs == rhs)
}

/// `B(B(y, Z¹), Z²) = B(y, Z¹ ⋆ Z²)` as jets of order `n`.
pub fn check_composition(
    z1: &Character,
    z2: &Character,
    f: &PolyVectorField,
    y: &[Rational],
    n: usize,
) -> Result<bool> {
    f.check_point(y)?;
    let y0 = Jet::constant(n, y);
    let lhs = bseries_jet(&bseries_jet(&y0, z1, f, n)?, z2, f, n)?;
    let rhs = bseries_jet(&y0, &z1.star(z2, f.d as u32, n), f, n)?;
    Ok(lhs == rhs)
}

/// The multi-index composition law under `⋆_M`, scalar `f`.
pub fn check_composition_m(
    z1: &MCharacter,
    z2: &MCharacter,
    f: &PolyVectorField,
    y: &Rational,
    n: usize,
) -> Result<bool> {
    let y0 = Series::constant(n, y.clone());
    let lhs = bseries_m_jet(&bseries_m_jet(&y0, z1, f, n)?, z2, f, n)?;
    let rhs = bseries_m_jet(&y0, &z1.star(z2, n)?, f, n)?;
    Ok(lhs == rhs)
}

/// `Υ[u ⋆ v]{ψ} = Υ[u]{Υ[v]{ψ}}`.
pub fn check_homomorphism(u: &BckElement, v: &BckElement, f: &PolyVectorField, psi: &[Poly]) -> Result<bool> {
    for x in u.keys().chain(v.keys()) {
        f.check_forest(x)?;
    }
    let mut diffs = Differentials::new(f);
    let lhs = diffs.vector_field_element(&gl_product(u, v), psi);
    let inner = diffs.vector_field_element(v, psi);
    let rhs = diffs.vector_field_element(u, &inner);
    Ok(lhs == rhs)
}

/// `Υ[Δ_⧢ u]{φ ⊗ ψ} = Υ[u]{φψ}` for scalar test functions.
pub fn check_leibniz(u: &BckElement, f: &PolyVectorField, phi: &Poly, psi: &Poly) -> Result<bool> {
    for x in u.keys() {
        f.check_forest(x)?;
    }
    let mut diffs = Differentials::new(f);
    let mut lhs = Poly::zero(f.m);
    for ((l, r), c) in unshuffle(u).iter() {
        let a = diffs.vector_field(l, std::slice::from_ref(phi)).remove(0);
        let b = diffs.vector_field(r, std::slice::from_ref(psi)).remove(0);
        lhs = &lhs + &(&a * &b).scale(c);
    }
    let rhs = diffs.vector_field_element(u, &[phi * psi]).remove(0);
    Ok(lhs == rhs)
}

/// Both transported identities on multi-indices: the `⋆_M` homomorphism
/// and the Leibniz rule for `Δ_μ`.
pub fn check_transported(
    u: &MElement,
    v: &MElement,
    f: &PolyVectorField,
    phi: &Poly,
    psi: &Poly,
) -> Result<(bool, bool)> {
    let lhs = upsilon_m_vf_element(&star_m(u, v)?, f, phi)?;
    let rhs = upsilon_m_vf_element(u, f, &upsilon_m_vf_element(v, f, phi)?)?;
    let mut leib = Poly::zero(1);
    for ((l, r), c) in unshuffle_m(u).iter() {
        leib = &leib + &(&upsilon_m_vf(l, f, phi)? * &upsilon_m_vf(r, f, psi)?).scale(c);
    }
    let leib_rhs = upsilon_m_vf_element(u, f, &(phi * psi))?;
    Ok((lhs == rhs, leib == leib_rhs))
}

/// `Ῡ[Φ(τ)] = Υ[τ]` for scalar `f`.
pub fn check_phi_upsilon(tau: &Tree, f: &PolyVectorField) -> Result<bool> {
    let x = MultiIndexForest::single(phi_tree(tau)?)?;
    let lhs = upsilon_m_poly(&x, f)?;
    let rhs = Differentials::new(f).tree(tau).remove(0);
    Ok(lhs == rhs)
}

/// Convenience: the element `1·f`.
pub fn forest_element(f: &Forest) -> BckElement {
    GradedVector::basis(f.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;
    use crate::forests::parse_forest;

    fn y() -> Poly {
        Poly::var(1, 0)
    }

    fn square() -> PolyVectorField {
        PolyVectorField::scalar(&y() * &y()).unwrap()
    }

    fn fo(s: &str) -> Forest {
        parse_forest(s).unwrap()
    }

    #[test]
    fn single_vertex_gives_the_field() {
        let f = square();
        assert_eq!(upsilon(&fo("[1:]"), &f, &[int(3)]).unwrap(), vec![int(9)]);
    }

    #[test]
    fn ladder_of_square() {
        let f = square();
        let d = Differentials::new(&f).tree(&Tree::ladder(1, 2));
        assert_eq!(d[0], Poly::monomial(1, vec![3], int(2)));
        assert_eq!(upsilon(&fo("[1:[1:]]"), &f, &[int(1)]).unwrap(), vec![int(2)]);
    }

    #[test]
    fn forests_vanish() {
        assert_eq!(upsilon(&fo("[1:] * [1:]"), &square(), &[int(2)]).unwrap(), vec![int(0)]);
        assert_eq!(upsilon(&Forest::unit(), &square(), &[int(2)]).unwrap(), vec![int(0)]);
    }

    #[test]
    fn vector_fields() {
        let f = square();
        let psi = (&y() * &y()).pow(2);
        assert_eq!(upsilon_vf(&Forest::unit(), &f, &[psi.clone()], &[int(2)]).unwrap(), vec![int(16)]);
        // f(y)² ψ''(y) at y = 2: 16 · 12 · 4
        assert_eq!(upsilon_vf(&fo("[1:] * [1:]"), &f, &[psi], &[int(2)]).unwrap(), vec![int(768)]);
        let id = vec![y()];
        let t = fo("[1:[1:][1:]]");
        assert_eq!(upsilon_vf(&t, &f, &id, &[int(3)]).unwrap(), upsilon(&t, &f, &[int(3)]).unwrap());
    }

    #[test]
    fn multi_index_differentials() {
        let f = square();
        let z0 = MultiIndexForest::single(MultiIndex::var(0)).unwrap();
        assert_eq!(upsilon_m(&z0, &f, &int(3)).unwrap(), int(9));
        let z1z0 = MultiIndexForest::single(MultiIndex::new(vec![1, 1])).unwrap();
        assert_eq!(upsilon_m(&z1z0, &f, &int(3)).unwrap(), int(54));
        assert!(upsilon_m(&z0, &PolyVectorField::random(&mut rand::thread_rng(), 2, 1, 1), &int(1)).is_err());
    }

    #[test]
    fn zero_character_is_identity() {
        let f = square();
        assert_eq!(bseries(&[int(5)], &Character::default(), &f, 4).unwrap(), vec![int(5)]);
    }

    #[test]
    fn grafting_single_vertices() {
        let f = square();
        assert!(check_graft_morphism(&fo("[1:]"), &Tree::leaf(1), &f).unwrap());
        assert!(check_graft_morphism(&Forest::unit(), &Tree::ladder(1, 3), &f).unwrap());
    }
}
