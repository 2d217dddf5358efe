//! Finite permutation groups, subgroup lattices and the subgroup-embedding
//! predicates used in hypercyclic-embedding criteria, together with a harness
//! that checks those criteria exhaustively on small groups.

pub mod arith;
pub mod corpus;
pub mod embeddings;
pub mod error;
pub mod harness;
pub mod lattice;
pub mod permgroup;
pub mod series;
pub mod sigma;

pub use error::{Error, Result};
