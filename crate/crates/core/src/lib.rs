//! Sample sizes, achieved precisions and confidence intervals for pilot
//! studies: standard deviations, means and paired differences, proportions
//! (central, rare and one-sided), correlations and exponential lifetimes.
//!
//! ```
//! use pilotsize::intervals::stddev_sample_size;
//! use pilotsize::types::ConfidenceLevel;
//!
//! let level = ConfidenceLevel::new(0.95).unwrap();
//! let design = stddev_sample_size(0.10, level).unwrap();
//! assert_eq!(design.size, 234);
//! assert!(design.achieved <= 0.10);
//! ```
//!
//! The [`dist`] module carries the normal, χ², Student t and F
//! distributions the designs are built on; [`table`] regenerates the design
//! tables; [`api`], [`cli`] and [`service`] expose everything through one
//! request schema.

pub mod api;
pub mod cli;
pub mod dist;
pub mod error;
pub mod intervals;
pub mod proportion;
pub mod search;
pub mod service;
pub mod table;
pub mod types;

pub use error::{Error, Result};
pub use types::{ConfidenceInterval, ConfidenceLevel, DesignResult, Flag, Method, Probability, Sidedness};
