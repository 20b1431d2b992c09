//! Exact-arithmetic tools for the minimum multicut problem and the polyhedral
//! structure of its dominant.
// Matrix and permutation code indexes several arrays in lockstep.
#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod budget;
pub mod edgeset;
pub mod error;
pub mod graph;
pub mod hull;
pub mod inequality;
pub mod facet_lab;
pub mod instance;
pub mod lifting;
pub mod lp;
pub mod multicut;
pub mod random;
pub mod separation;
pub mod solver;
pub mod studies;

pub use arith::Rational;
pub use budget::Budget;
pub use edgeset::EdgeSet;
pub use error::{Error, Result};
pub use graph::{EdgeId, Graph, NodeId};
pub use inequality::{Family, LinearInequality};
pub use instance::MulticutInstance;
