//! Coherent-state dynamics under a one-dimensional point interaction, the
//! matching singular classical transport, and semiclassical error estimates.

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod comparator;
pub mod error;
pub mod numerics;
pub mod oracle;
pub mod quantum;
pub mod states;

pub use error::{Error, Result};
