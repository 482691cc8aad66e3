//! greedylab: thresholding-greedy-algorithm experiments over finite
//! coefficient windows.
//!
//! The crate provides
//! - norm oracles for the model sequence spaces ([`spaces`]),
//! - greedy-set machinery for the TGA ([`tga`]),
//! - benchmark error functionals with brute-force oracles ([`functionals`]),
//! - seeded estimation of greedy-type constants ([`constants`]),
//! - executable counterexample constructions ([`constructions`]),
//! - the CSV report schema shared with the CLI ([`report`]).
//!
//! All evaluation is pure: oracles and functionals never mutate shared
//! state, so everything here can be driven from parallel workers, and every
//! estimator reduces in a fixed order so reports do not depend on the worker
//! count.

pub mod constants;
pub mod constructions;
pub mod error;
pub mod functionals;
pub mod report;
pub mod spaces;
pub mod tga;
pub mod util;
pub mod vector;

pub use error::{Error, Result};
pub use spaces::{Field, NormOracle, SpaceParams};
pub use vector::CoeffVector;
