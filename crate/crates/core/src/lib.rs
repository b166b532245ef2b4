//! Solvable groups with derived length four and exactly four character degrees.
//!
//! The crate builds the p-groups `P` and acting groups `H` of several
//! construction families, checks the hypotheses of the key lemma on
//! `G = P ⋊ H` as a [`families::Certificate`], and cross-validates the
//! predicted derived length, Fitting height, and character-degree set with an
//! independent modular character-degree oracle whenever `G` is small enough to
//! enumerate.

pub mod act;
pub mod chardeg;
pub mod doc;
pub mod error;
pub mod families;
pub mod gf;
pub mod grp;
pub mod numth;
pub mod pgrp;
pub mod selftest;

pub use error::*;
