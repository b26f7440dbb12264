//! The Butcher–Connes–Kreimer Hopf algebra on forests and its graded dual.
//!
//! Elements of the dual are identified with forests through the pairing
//! `⟨f, g⟩ = δ_{f,g} S(g)`, so the Grossman–Larson product acts on the same
//! [`BckElement`] type as the coproduct.

use num_traits::{One, Zero};

use crate::algebra::{int, GradedVector, Rational, Tensor2};
use crate::error::{Error, Result};
use crate::forests::{Forest, Tree};

/// Linear combination of forests.
pub type BckElement = GradedVector<Forest>;

/// Grafts the roots of `f` onto a new root decorated `label`.
pub fn bplus(label: u32, f: &Forest) -> Tree {
    Tree::new(label, f.trees().to_vec())
}

/// `bplus` with the decoration checked against the alphabet.
pub fn bplus_checked(label: u32, f: &Forest, alphabet: u32) -> Result<Tree> {
    let t = bplus(label, f);
    t.check_alphabet(alphabet)?;
    Ok(t)
}

/// Componentwise forest product on both legs.
pub fn tensor_mul(a: &Tensor2<Forest, Forest>, b: &Tensor2<Forest, Forest>) -> Tensor2<Forest, Forest> {
    a.bilinear(b, |(l1, r1), (l2, r2)| Tensor2::basis((l1.mul(l2), r1.mul(r2))))
}

fn unit_tensor() -> Tensor2<Forest, Forest> {
    Tensor2::basis((Forest::unit(), Forest::unit()))
}

/// `Δ(B⁺_α u) = (id ⊗ B⁺_α)Δu + B⁺_α(u) ⊗ 1`.
pub fn coproduct_tree(t: &Tree) -> Tensor2<Forest, Forest> {
    let du = coproduct_forest(&t.branches());
    let mut out: Tensor2<Forest, Forest> = du
        .iter()
        .map(|((l, r), c)| ((l.clone(), Forest::from(bplus(t.label(), r))), c.clone()))
        .collect();
    out.add_term((Forest::from(t.clone()), Forest::unit()), Rational::one());
    out
}

/// Multiplicative extension of [`coproduct_tree`].
pub fn coproduct_forest(f: &Forest) -> Tensor2<Forest, Forest> {
    f.trees().iter().fold(unit_tensor(), |acc, t| tensor_mul(&acc, &coproduct_tree(t)))
}

pub fn coproduct_bck(x: &BckElement) -> Tensor2<Forest, Forest> {
    let mut out = Tensor2::zero();
    for (f, c) in x.iter() {
        out.add_scaled(&coproduct_forest(f), c);
    }
    out
}

/// Deconcatenation of tree positions: trees are primitive.
pub fn unshuffle_forest(f: &Forest) -> Tensor2<Forest, Forest> {
    let trees = f.trees();
    let k = trees.len();
    let mut out = Tensor2::zero();
    for mask in 0u32..(1 << k) {
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for (i, t) in trees.iter().enumerate() {
            if mask & (1 << i) != 0 {
                left.push(t.clone());
            } else {
                right.push(t.clone());
            }
        }
        out.add_term((Forest::new(left), Forest::new(right)), Rational::one());
    }
    out
}

pub fn unshuffle(x: &BckElement) -> Tensor2<Forest, Forest> {
    let mut out = Tensor2::zero();
    for (f, c) in x.iter() {
        out.add_scaled(&unshuffle_forest(f), c);
    }
    out
}

/// Vertex-addressable copy of a forest, in preorder.
struct Flat {
    labels: Vec<u32>,
    children: Vec<Vec<usize>>,
    roots: Vec<usize>,
}

impl Flat {
    fn new(f: &Forest) -> Flat {
        let mut flat = Flat { labels: Vec::new(), children: Vec::new(), roots: Vec::new() };
        for t in f.trees() {
            let r = flat.push(t);
            flat.roots.push(r);
        }
        flat
    }

    fn push(&mut self, t: &Tree) -> usize {
        let id = self.labels.len();
        self.labels.push(t.label());
        self.children.push(Vec::new());
        for c in t.children() {
            let cid = self.push(c);
            self.children[id].push(cid);
        }
        id
    }

    fn len(&self) -> usize {
        self.labels.len()
    }

    fn rebuild(&self, v: usize, attached: &[Vec<&Tree>]) -> Tree {
        let mut kids: Vec<Tree> = self.children[v].iter().map(|&c| self.rebuild(c, attached)).collect();
        kids.extend(attached[v].iter().map(|t| (*t).clone()));
        Tree::new(self.labels[v], kids)
    }

    /// The forest with `sources[i]` attached at `target[i]`; `None`
    /// leaves the tree aside as a new component.
    fn graft(&self, sources: &[Tree], target: &[Option<usize>]) -> Forest {
        let mut attached: Vec<Vec<&Tree>> = vec![Vec::new(); self.len()];
        let mut trees = Vec::new();
        for (s, v) in sources.iter().zip(target) {
            match v {
                Some(v) => attached[*v].push(s),
                None => trees.push(s.clone()),
            }
        }
        trees.extend(self.roots.iter().map(|&r| self.rebuild(r, &attached)));
        Forest::new(trees)
    }
}

/// Calls `visit` on every map from `k` sources to `0..n`, with `aside`
/// adding the extra value `None`.
fn for_each_assignment(k: usize, n: usize, aside: bool, mut visit: impl FnMut(&[Option<usize>])) {
    let choices: Vec<Option<usize>> = (0..n).map(Some).chain(aside.then_some(None)).collect();
    if k > 0 && choices.is_empty() {
        return;
    }
    let mut idx = vec![0usize; k];
    let mut cur: Vec<Option<usize>> = vec![None; k];
    loop {
        for i in 0..k {
            cur[i] = choices[idx[i]];
        }
        visit(&cur);
        let mut i = 0;
        loop {
            if i == k {
                return;
            }
            idx[i] += 1;
            if idx[i] < choices.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// `σ ▷ τ`: sum over vertices `v` of `τ` of `σ` grafted at `v`.
pub fn graft(sigma: &Tree, tau: &Tree) -> BckElement {
    simultaneous_graft(&Forest::from(sigma.clone()), &Forest::from(tau.clone()))
}

/// `f ⋆̄ g`: every root of `f` is attached to some vertex of `g`, summed
/// over all choices (vertices need not be distinct).
pub fn simultaneous_graft(f: &Forest, g: &Forest) -> BckElement {
    let flat = Flat::new(g);
    let mut out = BckElement::zero();
    for_each_assignment(f.num_trees(), flat.len(), false, |a| {
        out.add_term(flat.graft(f.trees(), a), Rational::one());
    });
    out
}

/// `f₁ ⋆ f₂ = Σ f₁' ⊙ (f₁'' ⋆̄ f₂)` over the unshuffle of `f₁`.
pub fn gl_product_forest(f1: &Forest, f2: &Forest) -> BckElement {
    let flat = Flat::new(f2);
    let mut out = BckElement::zero();
    for_each_assignment(f1.num_trees(), flat.len(), true, |a| {
        out.add_term(flat.graft(f1.trees(), a), Rational::one());
    });
    out
}

pub fn gl_product(a: &BckElement, b: &BckElement) -> BckElement {
    a.bilinear(b, gl_product_forest)
}

/// `⟨a, b⟩` with `⟨f, g⟩ = δ_{f,g} S(g)`.
pub fn pairing(a: &BckElement, b: &BckElement) -> Rational {
    let mut s = Rational::zero();
    for (f, c) in a.iter() {
        let d = b.coeff(f);
        if !d.is_zero() {
            s += c * d * Rational::from_integer(f.symmetry_factor());
        }
    }
    s
}

/// Pairing of a tensor with a tensor, leg by leg.
pub fn pairing_tensor(a: &Tensor2<Forest, Forest>, b: &Tensor2<Forest, Forest>) -> Rational {
    let mut s = Rational::zero();
    for ((l, r), c) in a.iter() {
        let d = b.coeff(&(l.clone(), r.clone()));
        if !d.is_zero() {
            s += c * d * Rational::from_integer(l.symmetry_factor() * r.symmetry_factor());
        }
    }
    s
}

/// Forest product extended bilinearly.
pub fn forest_product(a: &BckElement, b: &BckElement) -> BckElement {
    a.bilinear(b, |x, y| BckElement::basis(x.mul(y)))
}

/// The symmetry factor as a rational.
pub fn sym(f: &Forest) -> Rational {
    Rational::from_integer(f.symmetry_factor())
}

/// Convenience: a forest as a basis vector.
pub fn elem(f: &Forest) -> BckElement {
    BckElement::basis(f.clone())
}

/// `c·f` as a vector.
pub fn elem_c(f: &Forest, c: i64) -> BckElement {
    BckElement::term(f.clone(), int(c))
}

/// Parses a combination like `2 [1:[1:]] * [1:] - 1/2 [1:]`; a bare
/// coefficient denotes a multiple of the unit forest.
pub fn parse_element(text: &str) -> Result<BckElement> {
    let chunks = crate::mindex::signed_chunks(text);
    if chunks.is_empty() {
        return Err(Error::parse(0, "empty expression"));
    }
    let mut out = BckElement::zero();
    for (neg, chunk, pos) in chunks {
        let (num, rest, at) = match chunk.find('[') {
            Some(i) => (&chunk[..i], &chunk[i..], i),
            None => (chunk, "1", chunk.len()),
        };
        let coeff = if num.trim().is_empty() {
            Rational::one()
        } else {
            crate::algebra::parse_rational(num).ok_or_else(|| Error::parse(pos, "bad coefficient"))?
        };
        let f = crate::forests::parse_forest(rest).map_err(|e| match e {
            Error::Parse { pos: p, msg } => Error::Parse { pos: p + pos + at, msg },
            other => other,
        })?;
        out.add_term(f, if neg { -coeff } else { coeff });
    }
    Ok(out)
}
