//! Decorated non-planar rooted trees and forests.
//!
//! Trees are stored in canonical form: children are sorted, so two trees
//! that differ by a permutation of siblings are equal values. The order
//! compares decoration, then child count, then the children in turn.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::Basis;
use crate::error::{Error, Result};

/// A decorated rooted tree with canonically sorted children.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    label: u32,
    children: Vec<Tree>,
}

impl Ord for Tree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.label
            .cmp(&other.label)
            .then(self.children.len().cmp(&other.children.len()))
            .then_with(|| self.children.cmp(&other.children))
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Tree {
    /// Builds a tree from a root label and children in any order.
    pub fn new(label: u32, mut children: Vec<Tree>) -> Tree {
        children.sort();
        Tree { label, children }
    }

    pub fn leaf(label: u32) -> Tree {
        Tree { label, children: Vec::new() }
    }

    pub fn label(&self) -> u32 {
        self.label
    }

    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    /// The children as a forest.
    pub fn branches(&self) -> Forest {
        Forest { trees: self.children.clone() }
    }

    /// Number of vertices.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }

    pub fn max_label(&self) -> u32 {
        self.children.iter().map(Tree::max_label).fold(self.label, u32::max)
    }

    /// Checks every decoration lies in `1..=alphabet`.
    pub fn check_alphabet(&self, alphabet: u32) -> Result<()> {
        if self.label == 0 || self.label > alphabet {
            return Err(Error::Decoration { label: self.label, alphabet });
        }
        self.children.iter().try_for_each(|c| c.check_alphabet(alphabet))
    }

    /// `S(τ) = ∏ r_j! S(τ_j)^{r_j}` over classes of identical children.
    pub fn symmetry_factor(&self) -> BigInt {
        product_symmetry(&self.children)
    }

    /// The straight chain of `n` vertices with decoration `label`.
    pub fn ladder(label: u32, n: usize) -> Tree {
        assert!(n >= 1);
        let mut t = Tree::leaf(label);
        for _ in 1..n {
            t = Tree::new(label, vec![t]);
        }
        t
    }
}

fn product_symmetry(trees: &[Tree]) -> BigInt {
    let mut s = BigInt::one();
    let mut run = 0u32;
    for (i, t) in trees.iter().enumerate() {
        run = if i > 0 && trees[i - 1] == *t { run + 1 } else { 1 };
        s *= BigInt::from(run) * t.symmetry_factor();
    }
    s
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:", self.label)?;
        for c in &self.children {
            write!(f, "{}", c)?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Basis for Tree {
    fn degree(&self) -> usize {
        self.size()
    }
}

/// A sorted multiset of trees; the empty forest is the unit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Forest {
    trees: Vec<Tree>,
}

impl Forest {
    pub fn unit() -> Forest {
        Forest::default()
    }

    pub fn new(mut trees: Vec<Tree>) -> Forest {
        trees.sort();
        Forest { trees }
    }

    pub fn is_unit(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn into_trees(self) -> Vec<Tree> {
        self.trees
    }

    pub fn num_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn size(&self) -> usize {
        self.trees.iter().map(Tree::size).sum()
    }

    /// The forest product `⊙`.
    pub fn mul(&self, other: &Forest) -> Forest {
        let mut trees = Vec::with_capacity(self.trees.len() + other.trees.len());
        trees.extend_from_slice(&self.trees);
        trees.extend_from_slice(&other.trees);
        Forest::new(trees)
    }

    pub fn symmetry_factor(&self) -> BigInt {
        product_symmetry(&self.trees)
    }

    pub fn max_label(&self) -> u32 {
        self.trees.iter().map(Tree::max_label).max().unwrap_or(0)
    }

    pub fn check_alphabet(&self, alphabet: u32) -> Result<()> {
        self.trees.iter().try_for_each(|t| t.check_alphabet(alphabet))
    }

    /// Distinct trees with their multiplicities.
    pub fn multiplicities(&self) -> Vec<(Tree, usize)> {
        let mut m: BTreeMap<&Tree, usize> = BTreeMap::new();
        for t in &self.trees {
            *m.entry(t).or_default() += 1;
        }
        m.into_iter().map(|(t, k)| (t.clone(), k)).collect()
    }
}

impl From<Tree> for Forest {
    fn from(t: Tree) -> Forest {
        Forest { trees: vec![t] }
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.trees.is_empty() {
            return f.write_str("1");
        }
        for (i, t) in self.trees.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "{}", t)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Basis for Forest {
    fn degree(&self) -> usize {
        self.size()
    }
}

/// Symmetry factor of a forest.
pub fn symmetry_factor(f: &Forest) -> BigInt {
    f.symmetry_factor()
}

/// Canonical form of a tree given with children in arbitrary order.
pub fn canonicalize(label: u32, children: Vec<Tree>, alphabet: u32) -> Result<Tree> {
    let t = Tree::new(label, children);
    t.check_alphabet(alphabet)?;
    Ok(t)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(Error::parse(self.pos, format!("expected '{}', found '{}'", c as char, x as char))),
            None => Err(Error::parse(self.pos, format!("expected '{}', found end of input", c as char))),
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a decoration label"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::parse(start, "label out of range"))
    }

    fn tree(&mut self) -> Result<Tree> {
        self.expect(b'[')?;
        let at = self.pos;
        let label = self.number()?;
        if label == 0 {
            return Err(Error::parse(at, "decorations start at 1"));
        }
        self.expect(b':')?;
        let mut children = Vec::new();
        while self.peek() == Some(b'[') {
            children.push(self.tree()?);
        }
        self.expect(b']')?;
        Ok(Tree::new(label, children))
    }
}

/// Parses `tree ("*" tree)*`, or `1` for the empty forest.
pub fn parse_forest(text: &str) -> Result<Forest> {
    let mut c = Cursor { bytes: text.as_bytes(), pos: 0 };
    if c.peek() == Some(b'1') {
        c.pos += 1;
        if c.peek().is_some() {
            return Err(Error::parse(c.pos, "unexpected input after unit"));
        }
        return Ok(Forest::unit());
    }
    let mut trees = vec![c.tree()?];
    while c.peek() == Some(b'*') {
        c.pos += 1;
        trees.push(c.tree()?);
    }
    if let Some(x) = c.peek() {
        return Err(Error::parse(c.pos, format!("unexpected '{}'", x as char)));
    }
    Ok(Forest::new(trees))
}

/// Parses a forest and checks its decorations against the alphabet.
pub fn parse_forest_in(text: &str, alphabet: u32) -> Result<Forest> {
    let f = parse_forest(text)?;
    f.check_alphabet(alphabet)?;
    Ok(f)
}

/// Parses a single tree.
pub fn parse_tree(text: &str) -> Result<Tree> {
    let f = parse_forest(text)?;
    match f.num_trees() {
        1 => Ok(f.into_trees().pop().expect("one tree")),
        n => Err(Error::parse(0, format!("expected one tree, found {}", n))),
    }
}

pub fn format_forest(f: &Forest) -> String {
    f.to_string()
}

/// Enumerates canonical trees and forests by size over the alphabet `1..=d`.
pub struct Enumerator {
    alphabet: u32,
    trees: Vec<Vec<Tree>>,
    forests: Vec<Vec<Forest>>,
}

impl Enumerator {
    pub fn new(alphabet: u32) -> Self {
        Enumerator { alphabet, trees: vec![Vec::new()], forests: vec![vec![Forest::unit()]] }
    }

    fn extend_to(&mut self, n: usize) {
        while self.trees.len() <= n {
            let k = self.trees.len();
            let mut ts: Vec<Tree> = Vec::new();
            for label in 1..=self.alphabet {
                for f in &self.forests[k - 1] {
                    ts.push(Tree::new(label, f.trees.clone()));
                }
            }
            ts.sort();
            self.trees.push(ts);
            let all: Vec<&Tree> = self.trees[1..=k].iter().flatten().collect();
            let mut fs = Vec::new();
            let mut stack = Vec::new();
            multisets(&all, 0, k, &mut stack, &mut fs);
            fs.sort();
            self.forests.push(fs);
        }
    }

    /// Trees with exactly `n` vertices, sorted.
    pub fn trees(&mut self, n: usize) -> &[Tree] {
        self.extend_to(n);
        &self.trees[n]
    }

    /// Forests with exactly `n` vertices, sorted; size 0 is the unit.
    pub fn forests(&mut self, n: usize) -> &[Forest] {
        self.extend_to(n);
        &self.forests[n]
    }

    /// All forests with at most `n` vertices, by size.
    pub fn forests_up_to(&mut self, n: usize) -> Vec<Forest> {
        (0..=n).flat_map(|k| self.forests(k).to_vec()).collect()
    }

    /// All trees with at most `n` vertices, by size.
    pub fn trees_up_to(&mut self, n: usize) -> Vec<Tree> {
        (1..=n).flat_map(|k| self.trees(k).to_vec()).collect()
    }
}

fn multisets(all: &[&Tree], from: usize, remaining: usize, stack: &mut Vec<Tree>, out: &mut Vec<Forest>) {
    if remaining == 0 {
        out.push(Forest::new(stack.clone()));
        return;
    }
    for i in from..all.len() {
        let s = all[i].size();
        if s <= remaining {
            stack.push(all[i].clone());
            multisets(all, i, remaining - s, stack, out);
            stack.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tree {
        parse_tree(s).unwrap()
    }

    #[test]
    fn sibling_order_is_irrelevant() {
        assert_eq!(t("[1:[2:][3:]]"), t("[1: [3:] [2:]]"));
        assert_eq!(t("[1:[1:[1:]][1:]]"), t("[1:[1:][1:[1:]]]"));
        assert_eq!(t("[1:]"), Tree::leaf(1));
    }

    #[test]
    fn round_trip() {
        for s in ["[1:]", "[1:[2:][2:]]", "[1:] * [1:]", "1", "[2:[1:[1:]][1:]] * [1:]"] {
            let f = parse_forest(s).unwrap();
            assert_eq!(parse_forest(&f.to_string()).unwrap(), f);
        }
        assert_eq!(parse_forest("[1:] * [1:]").unwrap().num_trees(), 2);
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert!(matches!(parse_forest("[1:"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_forest("[0:]"), Err(Error::Parse { .. })));
        assert!(matches!(parse_forest_in("[3:]", 2), Err(Error::Decoration { label: 3, .. })));
        assert!(matches!(parse_forest("[1:] [1:]"), Err(Error::Parse { pos: 5, .. })));
    }

    #[test]
    fn symmetry_factors() {
        assert_eq!(t("[1:[1:[1:]][1:]]").symmetry_factor(), BigInt::from(1));
        let branch = "[1:[1:][1:][1:]]";
        let big = t(&format!("[1:{b}{b}]", b = branch));
        assert_eq!(big.symmetry_factor(), BigInt::from(72));
        let cherries = parse_forest("[1:[1:][1:]] * [1:[1:][1:]]").unwrap();
        assert_eq!(cherries.symmetry_factor(), BigInt::from(8));
        assert_eq!(Tree::leaf(1).symmetry_factor(), BigInt::from(1));
    }

    #[test]
    fn rooted_tree_counts() {
        let mut e = Enumerator::new(1);
        let counts: Vec<usize> = (1..=6).map(|n| e.trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20]);
        let fcounts: Vec<usize> = (0..=6).map(|n| e.forests(n).len()).collect();
        assert_eq!(fcounts, vec![1, 1, 2, 4, 9, 20, 48]);
        let mut e2 = Enumerator::new(2);
        assert_eq!(e2.trees(2).len(), 4);
    }
}
