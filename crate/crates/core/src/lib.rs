//! Nonorthogonality as a computable quantity.
//!
//! The crate is layered bottom-up:
//!
//! - [`qstate`]: two-dimensional complex states, bases and 2×2 density matrices.
//! - [`measures`]: the linear (`n0`), entropic (`n1`) and minimum-selective-information
//!   (`n2`) nonorthogonality measures, plus Schmidt entropy for bipartite states.
//! - [`hidden`]: two-state nonorthogonal decompositions of a diagonal qubit density
//!   matrix, their pair and ensemble nonorthogonality, and the extremal cases.
//! - [`unlock`]: classical information needed to unlock hidden nonorthogonality and
//!   the grid sweep that probes the bits-per-nbit bounds.
//! - [`crypto`]: generalized BB84 and B92 intercept-resend detection probabilities,
//!   by closed form, exact branch enumeration and seeded Monte Carlo.
//! - [`cli`]: the `nonortho` command-line front end.

pub mod cli;
pub mod crypto;
mod error;
pub mod fmt;
pub mod hidden;
pub mod measures;
pub mod qstate;
pub mod unlock;

pub use error::{Error, Result};
pub use num_complex::Complex64;
