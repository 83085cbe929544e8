//! Finite-model toolkit for proximity spaces and hit-and-miss hyperspace
//! topologies.
//!
//! Subsets of an `n`-point ground set are bitmasks ([`space::Subset`]).
//! Everything here is exhaustive over finite models: axiom checks scan all
//! pairs or triples of subsets, witness searches scan all `2^n` candidates,
//! and hyperspace topologies are compared through their subbases.

pub mod cli;
pub mod error;
pub mod hyperspace;
pub mod model;
pub mod proximity;
pub mod report;
pub mod search;
pub mod space;
pub mod strong;

pub use error::{Error, Result};
pub use space::{Caps, GroundSpace, Subset};
