#![forbid(unsafe_code)]

//! Exact tools for random permutations avoiding sets of length-3 patterns.
//!
//! The crate is organized bottom-up:
//!
//! - [`perm`]: permutations in one-line notation, occurrence counting
//!   `n_sigma(pi)`, the 8-element symmetry group, block decomposition.
//! - [`families`]: the ten nonequivalent avoidance families with their
//!   bijective codes, exact uniform samplers, enumerators, and fast
//!   polynomial-time occurrence counters.
//! - [`asymptotics`]: mean/variance parameters of the normal-limit families
//!   (Hoeffding projection variance, renewal variance, Delannoy numbers).
//! - [`limits`]: limit-law descriptors for every family, exact and
//!   real-order moments, densities, exact finite-n expectations, and limit
//!   variable sampling.
//! - [`verify`]: reproducible Monte Carlo + exhaustive verification harness
//!   and the acceptance suite.
//!
//! All counts are exact (big integers); all samplers are exactly uniform and
//! take explicit seeded random streams.

pub mod asymptotics;
pub mod families;
pub mod limits;
pub mod perm;
pub mod special;
pub mod verify;
