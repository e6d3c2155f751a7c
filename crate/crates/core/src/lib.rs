//! Set-valued stochastic calculus on finite binomial scenario trees.
//!
//! The crate provides, bottom up:
//! - [`geometry`]: exact convex-body arithmetic in R^1 / R^2 (Minkowski sum,
//!   scalar multiples, support functions, Hausdorff metric, geometric and
//!   Hukuhara differences);
//! - [`tree`]: a binary scenario tree whose +-sqrt(dt) increments play the
//!   role of a one-dimensional Brownian motion, with vector-valued random
//!   variables, conditional expectations, discrete Ito integrals and exact
//!   martingale representation;
//! - [`set_random`]: set-valued random variables and processes on the tree
//!   (Aumann expectation, set-valued conditional expectation, selections,
//!   decomposable hulls);
//! - [`integrals`]: set-valued time and Ito integrals, generalized integrals
//!   of process families, and the extended integral over representer pairs;
//! - [`martingale`]: set-valued martingales, martingale selectors,
//!   representer construction and the reconstruction/time-consistency and
//!   inclusion checks;
//! - [`bsde`]: Picard iteration for set-valued BSDEs in conditional
//!   expectation form, the induced martingale form and the
//!   generalized-integral form, with contraction diagnostics;
//! - [`oracle`]: independent brute-force oracles (scalar endpoint recursion,
//!   selection enumeration, grid erosion) used by the verification suites;
//! - [`sampling`]: seeded random generators for bodies, set-valued random
//!   variables, processes and problems;
//! - [`checks`]: the named property/verification suites behind the CLI and
//!   the acceptance tests.

pub mod bsde;
pub mod checks;
pub mod error;
pub mod geometry;
pub mod integrals;
pub mod martingale;
pub mod oracle;
pub mod sampling;
pub mod set_random;
pub mod tree;

pub use error::{Error, Result};
pub use geometry::{weighted_minkowski_average, ConvexBody, Direction};
