//! Brute-force reference implementations used only by tests.
#![allow(dead_code)]

use hopfrough::algebra::{int, Tensor2};
use hopfrough::forests::{Forest, Tree};
use itertools::Itertools;

/// A forest with explicit vertices; `parent[v]` is `None` on roots.
pub struct Flat {
    pub labels: Vec<u32>,
    pub parent: Vec<Option<usize>>,
}

impl Flat {
    pub fn new(f: &Forest) -> Flat {
        let mut flat = Flat { labels: Vec::new(), parent: Vec::new() };
        for t in f.trees() {
            flat.push(t, None);
        }
        flat
    }

    fn push(&mut self, t: &Tree, parent: Option<usize>) {
        let id = self.labels.len();
        self.labels.push(t.label());
        self.parent.push(parent);
        for c in t.children() {
            self.push(c, Some(id));
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    fn is_ancestor(&self, a: usize, mut v: usize) -> bool {
        while let Some(p) = self.parent[v] {
            if p == a {
                return true;
            }
            v = p;
        }
        false
    }

    /// The subtree at `v`, leaving out every child in `skip`.
    fn subtree(&self, v: usize, skip: &[usize]) -> Tree {
        let children = (0..self.len())
            .filter(|&c| self.parent[c] == Some(v) && !skip.contains(&c))
            .map(|c| self.subtree(c, skip))
            .collect();
        Tree::new(self.labels[v], children)
    }

    fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.parent[v].is_none()).collect()
    }
}

/// `Σ_C P^C ⊗ R^C` over antichains `C` of vertices (roots included): the
/// pruned part collects the subtrees at `C`, the trunk keeps the rest.
pub fn admissible_cuts(f: &Forest) -> Tensor2<Forest, Forest> {
    let flat = Flat::new(f);
    let n = flat.len();
    let mut out = Tensor2::zero();
    for mask in 0u32..(1 << n) {
        let cut: Vec<usize> = (0..n).filter(|v| mask & (1 << v) != 0).collect();
        if cut.iter().any(|&a| cut.iter().any(|&b| a != b && flat.is_ancestor(a, b))) {
            continue;
        }
        let pruned = Forest::new(cut.iter().map(|&v| flat.subtree(v, &[])).collect());
        let trunk = Forest::new(
            flat.roots().into_iter().filter(|r| !cut.contains(r)).map(|r| flat.subtree(r, &cut)).collect(),
        );
        out.add_term((pruned, trunk), int(1));
    }
    out
}

/// Vertex permutations preserving decorations and the parent map.
pub fn automorphisms(f: &Forest) -> u64 {
    let flat = Flat::new(f);
    let n = flat.len();
    (0..n)
        .permutations(n)
        .filter(|p| {
            (0..n).all(|v| {
                flat.labels[p[v]] == flat.labels[v] && flat.parent[p[v]] == flat.parent[v].map(|q| p[q])
            })
        })
        .count() as u64
}
