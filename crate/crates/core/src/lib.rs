//! Degree-4 sum-of-squares pseudomoments over the hypercube `{±1}^N`.
//!
//! The crate builds and validates degree-4 pseudomoment matrices, converts them to and
//! from Gram-vector block witnesses, and certifies membership and non-membership results
//! for the degree-4 generalized elliptope `E₄ᴺ`: ETF pseudomoments, the Schläfli-graph
//! inequality certificate, Laurent's parity matrices, and numerical oracles for the cut
//! polytope `Cᴺ`, the elliptope `E₂ᴺ` and `E₄ᴺ`.
//!
//! All indices in the Rust API are 0-based. File formats use 1-based indices where noted.

pub mod certificates;
pub mod cli;
pub mod error;
pub mod frames;
pub mod io;
pub mod membership;
pub mod numkit;
pub mod pseudomoments;
pub mod separability;
pub mod witnesses;

pub use error::{Error, Result};
