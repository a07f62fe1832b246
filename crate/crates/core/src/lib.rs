//! Exact stationary solutions for step, barrier and Coulomb tunneling, their
//! Madelung (density/phase) decompositions, and diagnostics for multi-branch
//! classical-action reconstructions of the same wave functions.
//!
//! Every closed-form path has an independent counterpart in [`oracle`]
//! (transfer matrices, Numerov, Taylor-series radial integration) that shares
//! no code with it, so agreement between the two is evidence rather than
//! tautology.

// `!(x > 0.0)` rejects NaN along with nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod branches;
pub mod coulomb;
pub mod error;
pub mod format;
pub mod golden;
pub mod gridfield;
pub mod ksmap;
pub mod madelung;
mod ode;
pub mod oracle;
pub mod phases;
pub mod scattering1d;
pub mod units;
pub mod validate;

pub use error::{Error, Result};
pub use num_complex::Complex64;
