//! Exact combinatorics for the label systems of higher lattice path operads.
//!
//! The crate is organised bottom-up:
//!
//! * [`trees`]: level trees, pruned trees, leaf orders and tree morphisms.
//! * [`signatures`]: complete-graph poset elements and their bar-string form.
//! * [`vdgen`]: the elementary-move generator of canonical label lists.
//! * [`poset`] and [`topology`]: finite posets, order complexes, integer homology.
//! * [`conjectures`]: label systems and the exhaustive checkers built on them.
//! * [`lattice`]: lattice paths, their actions, composition and the finite
//!   checks (closure, matching maps, block homology).

pub mod budget;
pub mod conjectures;
pub mod error;
pub mod lattice;
pub mod poset;
pub mod signatures;
pub mod snf;
pub mod topology;
pub mod trees;
pub mod vdgen;

pub use error::{Error, Result};
