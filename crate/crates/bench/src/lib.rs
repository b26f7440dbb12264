//! Shared inputs for the criterion benches.

use hopfrough::forests::{Enumerator, Forest};
use hopfrough::mindex::{basis_m, MultiIndexForest};

/// All forests over one letter with exactly `n` vertices.
pub fn forests(n: usize) -> Vec<Forest> {
    Enumerator::new(1).forests(n).to_vec()
}

/// The populated multi-index forests of degree `n`.
pub fn mforests(n: usize) -> Vec<MultiIndexForest> {
    basis_m(n)
}
