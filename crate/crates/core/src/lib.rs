//! Polymer-cluster expansions for independent-set and matching counts in
//! regular graphs, with exact counting oracles and certified comparisons.

pub mod canonical;
pub mod catalog;
pub mod census;
pub mod corpus;
pub mod counting;
pub mod error;
pub mod graph;
pub mod grand;
pub mod graph6;
pub mod interval;
pub mod par;
pub mod verifier;

pub use error::{Error, Result};
pub use graph::{Graph, GraphSpec, GraphUnion, Girth};
