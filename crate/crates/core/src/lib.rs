//! Extreme-value modelling of core arrivals to a remanufacturing facility,
//! and a capacity-constrained triage simulator.
//!
//! The pipeline mirrors a block-maxima analysis end to end:
//!
//! 1. [`blocking`] — aggregate day-indexed arrival counts into sub-period
//!    totals, partition them into blocks, extract block maxima, and
//!    summarize samples.
//! 2. [`estimation`] — fit the three-parameter extreme value law to the
//!    maxima by maximum likelihood or probability-weighted moments.
//! 3. [`analysis`] — return levels, empirical CDFs, comparison curves
//!    against Normal/Poisson baselines, and the chi-squared
//!    goodness-of-fit test.
//! 4. [`triage_sim`] — a seeded day-by-day simulation of a repair shop
//!    under extreme arrival shocks, comparing seven sorting policies.
//!
//! All randomness is derived from explicit seeds ([`rng`]); every function
//! here is a pure mapping from its inputs, so results are reproducible
//! bit for bit.

pub mod analysis;
pub mod blocking;
pub mod distributions;
pub mod error;
pub mod estimation;
pub mod optim;
pub mod rng;
pub mod special;
pub mod triage_sim;

pub use error::{Error, Result};
