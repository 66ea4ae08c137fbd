//! Thompson's group F and the associativity of finite bracket algebras.
//!
//! Trees, tree pairs and the piecewise-linear model of F; finite magmas with
//! exhaustive and eventual law checking; rewriting in varieties presented by
//! strongly regular laws; and a zoo of example algebras.

pub mod error;
pub mod expansion;
pub mod magma;
pub mod pl;
pub mod rewrite;
pub mod thompson;
pub mod tree;
pub mod zoo;

pub use error::{Error, Result};
pub use expansion::{common_left_multiples, monoid_compose, ExpansionWord};
pub use magma::{assoc_status, AssocStatus, Law, Magma};
pub use pl::{Dyadic, PLMap};
pub use thompson::{generators, parse_word, reduce, AbelianImage, FElement, NormalSubgroupSpec};
pub use tree::{enumerate_trees, Side, Tree, VertexWord};
