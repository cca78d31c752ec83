//! Conditional ε-smooth Rényi entropy of order α ∈ (0,1) and its two
//! operational settings: guessing with a give-up option, and variable-length
//! prefix coding with common side information that may declare an error.
//!
//! Everything here is exact arithmetic over finite joint pmfs. The crate is
//! `no_std` (with `alloc`) so the numerical core can be embedded anywhere;
//! file formats and the command-line front end live in the companion crate.
//!
//! All logarithms are natural; quantities are reported in nats.
//!
//! ```
//! use smooth_renyi_core::dist::JointDistribution;
//! use smooth_renyi_core::entropy::{smooth_conditional_entropy, EntropyQuery};
//!
//! // X uniform on two symbols, no side information.
//! let joint = JointDistribution::validate(&[vec![0.5], vec![0.5]]).unwrap();
//! let q = EntropyQuery::new(0.5, 0.5).unwrap();
//! let h = smooth_conditional_entropy(&joint, q);
//! assert!((h.value + core::f64::consts::LN_2).abs() < 1e-12);
//! ```
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod asymptotics;
pub mod coding;
pub mod dist;
pub mod entropy;
mod error;
pub mod guessing;
pub(crate) mod math;
#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};

/// Default cap on dense block cells, `(|X||Y|)^n ≤ 2^22`.
pub const DEFAULT_MAX_CELLS: usize = 1 << 22;
