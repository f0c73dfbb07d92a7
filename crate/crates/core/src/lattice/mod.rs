//! Lattice paths: the classical operad of staircase paths between intervals,
//! its recursive generalization to level-tree colors, and the finite checks
//! built on top of them.

pub mod block;
pub mod closure;
pub mod functor;
pub mod generalized;
pub mod matching;
pub mod ordinal;
pub mod path;

pub use generalized::{
    block_membership, compose_generalized, count_generalized, enumerate_generalized,
    substitute_generalized, BlockBound, Fiber, GeneralizedLatticePath,
};
pub use ordinal::OrdinalMap;
pub use path::{compose_paths, count_paths, enumerate_paths, path_params, substitute, LatticePath};
