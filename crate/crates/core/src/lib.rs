//! Certification of the null space condition for l1 sparse recovery.
//!
//! A sensing matrix `A` recovers every `k`-sparse signal by l1 minimization
//! exactly when the proportion parameter `alpha_k` (the largest share of
//! l1 mass any `k` coordinates can hold in a null-space vector) is below
//! one half. This crate computes `alpha_k` and bounds on it:
//!
//! - [`bounds`]: polynomial-time upper bounds from subset scores (pick-l,
//!   optimized pick-l, the LP baseline) and recoverable-sparsity bounds.
//! - [`tsa`]: best-first branch and bound returning the exact value or a
//!   certified interval.
//! - [`exhaustive`]: full enumeration, the ground-truth oracle.
//! - [`tomography`]: routing matrices for network tomography instances.

pub mod alpha;
pub mod bounds;
pub mod error;
pub mod exhaustive;
pub mod lp;
pub mod matrix;
pub mod report;
pub mod subsets;
pub mod tomography;
pub mod tsa;

pub use error::{Error, Result};
