//! Core library for no-wait flowshop scheduling and its two-way connection
//! with the asymmetric traveling salesman problem.
//!
//! The crate is split along the natural seams of the problem:
//!
//! * [`flowshop`]: jobs, instances, the start-gap distance between
//!   consecutive jobs, makespan evaluation, and an independent
//!   discrete-event simulator used as a test oracle.
//! * [`graph`]: distance-matrix instances for ATSP/ATSPP, semimetric
//!   validation, tour/path costing, shortcutting, and the standard
//!   dummy-job reduction from flowshop to ATSP.
//! * [`transform`]: weight normalization, instance replication, and the
//!   cycle-to-path split, each with a solution back-map.
//! * [`embed`]: encodings of distance matrices as job sets, the gadget
//!   job family, and the end-to-end ATSP-to-flowshop reduction with its
//!   back-map.
//! * [`solve`]: min-cost cycle covers, the repeated-cycle-cover ATSP
//!   approximation, the log-of-machine-count flowshop approximation, and
//!   exact oracles (subset DP, permutation enumeration).
//!
//! All values are immutable after construction and all operations are pure
//! functions, so shared instances can be evaluated concurrently. The crate
//! is `no_std` (with `alloc`); IO, file formats, and the CLI live in the
//! companion `nowait-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod embed;
mod error;
pub mod flowshop;
pub mod graph;
pub mod solve;
pub mod transform;

pub use error::{Error, MetricViolation, Result};
