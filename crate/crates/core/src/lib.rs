//! Induced directed-path densities in oriented graphs.
//!
//! The crate covers the computational side of the extremal problem for the
//! directed 4-path in oriented graphs without transitive triangles:
//!
//! * [`graph`], [`canon`], [`count`]: oriented graphs, canonical forms and
//!   induced-copy counting with exact rational densities;
//! * [`enumerate`]: isomorph-free generation by two independent backends;
//! * [`construct`]: blow-ups and iterated balanced blow-ups;
//! * [`search`]: exhaustive and clone/delete hill-climbing maximisation;
//! * [`grid`]: certified grid maximisation of the vertex-participation program;
//! * [`bounds`]: closed-form lower and upper bounds for every path length;
//! * [`flag`]: the flag-algebra semidefinite program on 6-vertex graphs, its
//!   sparse export and exact certificate verification.

pub mod bounds;
pub mod canon;
pub mod construct;
pub mod count;
pub mod enumerate;
pub mod error;
pub mod flag;
pub mod format;
pub mod graph;
pub mod grid;
pub mod rational;
pub mod search;
pub mod small;

pub use canon::{are_isomorphic, canonical_form, CanonicalForm};
pub use count::{count_induced, count_p4_through, density};
pub use enumerate::{enumerate_family, Constraint, GraphFamily};
pub use error::{Error, Result};
pub use graph::{OrientedGraph, PairState, VertexSet};
pub use rational::Rational;
