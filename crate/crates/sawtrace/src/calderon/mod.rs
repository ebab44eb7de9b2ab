//! The governing operator `R_{p,q} g(t) = ((1/t)∫₀^{t^r} g*^p)^{1/p}`,
//! `r = q/(q−p)`, together with the tail supremum, the exact classification
//! of its boundedness between Lorentz spaces, witness search for the
//! unbounded cases, the extremal-operator profile and the pointwise
//! sawyerability check.

mod classify;
mod operator;
mod params;
pub mod witness;

pub use classify::{classify_r_lorentz, BoundednessVerdict, Condition, Verdict};
pub use operator::{apply_r, extremal_profile, sawyer_pointwise_check, tail_sup, RProfile};
pub use params::SawyerParams;
pub use witness::{characteristic_ratio, witness_search, WitnessFunction, WitnessOutcome};
