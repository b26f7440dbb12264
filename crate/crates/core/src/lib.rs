//! Hopf algebras of decorated rooted forests and of multi-indices, the
//! degree-by-degree 1-cocycle solver, elementary differentials with
//! B-series, and a floating-point layer for branched rough path lifts.

pub mod algebra;
pub mod bck;
pub mod bseries;
pub mod cocycle;
pub mod error;
pub mod forests;
pub mod linalg;
pub mod mindex;
pub mod poly;
pub mod props;
pub mod reference;
pub mod roughpath;

pub use algebra::{GradedVector, Rational, Tensor2};
pub use bck::BckElement;
pub use error::{Error, Result};
pub use forests::{Forest, Tree};
pub use mindex::{MElement, MultiIndex, MultiIndexForest};
