//! Desk-scale numerics for rearrangement-invariant function spaces.
//!
//! - [`stepfun`]: exact step functions on (0,∞), rearrangements f* and f**.
//! - [`lorentz`]: Lorentz norms, power-space norms and K-functionals.
//! - [`calderon`]: the operator `R_{p,q}`, its boundedness classifier and
//!   unboundedness witnesses.
//! - [`euclid`]: dyadic grids and shifted lattices, fractional maximal
//!   functions and Riesz potentials with respect to cell-weighted measures.
//! - [`choquet`]: dyadic Hausdorff content, Choquet integrals and trace
//!   experiments.
//!
//! With the default `parallel` feature, per-leaf and per-experiment work is
//! spread over the rayon pool; results are identical without it.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calderon;
pub mod choquet;
pub mod error;
pub mod euclid;
pub mod families;
pub mod lorentz;
pub mod numeric;
pub mod par;
pub mod report;
pub mod sampled;
pub mod stepfun;

pub use error::{Error, Result};
pub use stepfun::StepFunction;
