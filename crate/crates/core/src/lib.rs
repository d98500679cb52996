//! Single-pass streaming tester for frequency profiles under the relative
//! Frechet distance, together with the exact (non-streaming) oracles used to
//! verify it: closeness certificates (couplings), farness certificates
//! (separating rectangles), structural predicates, SpaceSaving sketches,
//! level subsampling, and workload generators.

pub mod error;
pub mod generators;
pub mod io;
pub mod model;
pub mod rat;
pub mod sampling;
pub mod spacesaving;
pub mod tester;

pub use error::Error;
pub use rat::Rat;
