//! Scanning-beam design optimization for non-interactive multi-user
//! millimeter-wave beam alignment under multipath channels.
//!
//! A base station probes the angular domain with `b` contiguous scanning
//! beams, collects per-beam ACK/NACK feedback from users whose channels
//! carry up to `p` resolvable paths, and decodes a transmission beam per
//! user. This crate models that pipeline end to end:
//!
//! - [`geometry`]: arc arithmetic on the circle and component-beam
//!   extraction from a beam design.
//! - [`pdf`]: angle-of-departure priors (uniform, truncated normal,
//!   piecewise, mixtures) with mass integration and sampling.
//! - [`policy`]: feedback generation and the SD / BF / 2-SD / 2-BF
//!   decoding policies.
//! - [`objective`]: feedback-set probabilities by inclusion-exclusion and
//!   the expected transmission beamwidth `lambda_bar`.
//! - [`tulip`]: the tulip parametrization of overlapping designs, its
//!   validity constraints, and feedback-distinguishability counting.
//! - [`optimizer`]: greedy window-sliding search over a discretized
//!   boundary grid, with restarts and a brute-force oracle.
//! - [`tradeoff`]: the scanning-beam vs transmission-beam width trade-off
//!   for single-path channels.
//! - [`simulation`]: Monte Carlo validation of the analytic objective.
//!
//! Angles are radians in `[0, 2*pi)` throughout, and beams are indexed
//! from zero.

pub mod error;
pub mod geometry;
mod index_set;
pub mod objective;
pub mod optimizer;
pub mod pdf;
pub mod policy;
pub mod tulip;

pub use error::{Error, Result};
pub use index_set::IndexSet;
