//! Verification toolkit for the upper bound `i(3, ∞) ≤ 0.454` on the
//! independence ratio of cubic graphs of large girth.
//!
//! The crate is organised by the layers of the argument:
//!
//! * [`graph`]: configuration-model pairings, their projection to cubic
//!   multigraphs, girth, and survival statistics.
//! * [`mis`]: exact independence numbers, independent-set counting, MAI
//!   decompositions and the audits of their structural lemmas.
//! * [`counting`]: exact and log-domain evaluation of the first-moment
//!   count `q(x, n)`.
//! * [`exponent`] and [`certify`]: the exponent function `h(χ, ζ, ξ)` and a
//!   rigorous interval certificate that `max h ≤ 0.999983`.

pub mod certify;
pub mod counting;
mod error;
pub mod exponent;
pub mod graph;
pub mod interval;
pub mod mis;
pub mod special;

mod bitset;

pub use error::Error;
pub use interval::Interval;

/// Version string stamped into every emitted report.
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");
