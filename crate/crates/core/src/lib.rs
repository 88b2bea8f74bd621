//! Linear-forest decompositions of regular graphs with large girth.
//!
//! Start with [`forest::decompose`] for the full pipeline and
//! [`verify::verify_certificate`] to re-check its output.

pub mod cli;
pub mod embed;
pub mod factorize;
pub mod flow;
pub mod forest;
pub mod generators;
pub mod graph;
pub mod sweep;
pub mod transversal;
pub mod verdict;
pub mod verify;
