//! Radiation-pattern statistics and outage analysis for a reflecting surface
//! carried by a hovering drone.
//!
//! The pipeline runs from node placement ([`geometry`]) through the Gaussian
//! jitter model ([`fluctuation`]) to a discrete distribution of the pattern
//! gain ([`pattern`]), which is combined with Rician cascade moments
//! ([`channel`]) into closed-form outage probabilities ([`outage`]). The
//! [`montecarlo`] module is the ground-truth oracle for all of them and
//! [`optimizer`] picks the outage-minimizing element count.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod exec;
pub mod fluctuation;
pub mod geometry;
pub mod montecarlo;
pub mod optimizer;
pub mod outage;
pub mod pattern;
pub mod rng;
pub mod scenario;
pub mod specialfn;
pub mod stats;
pub mod units;
pub mod validation;

pub use error::{Error, Result};
pub use exec::Execution;
pub use optimizer::{optimal_elements, OptimizationResult};
pub use outage::{Method, TailMode};
pub use scenario::Scenario;
