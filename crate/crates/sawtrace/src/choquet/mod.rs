//! Dyadic Hausdorff content, Choquet integrals with respect to it, and the
//! trace experiments comparing `∫ |I_α f|^p dH^{n−αp}` with norms of `f`.
//!
//! Content is unnormalized and uses the dyadic subcubes of the base cube
//! down to the grid depth: `H^s(E) = inf Σ ℓ(Qᵢ)^s` over such covers.

mod content;
pub mod enumeration;
mod trace;

pub use crate::euclid::CellSet;
pub use content::{choquet_integral, dyadic_content, ContentParams, ContentTree};
pub use trace::{
    trace_ratio, trace_ratio_function, trace_ratio_with, two_measure_trace_ratio, two_measure_trace_ratio_with,
    HypothesisCaps, TraceReport, TwoMeasureReport,
};
