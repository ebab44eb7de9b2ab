use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lorentz::Exponent;

/// Validated `(p, q)` with `1 < p < q < ∞` and `r = q/(q−p)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SawyerParams {
    p: Exponent,
    q: Exponent,
    r: f64,
}

impl SawyerParams {
    pub fn new(p: impl Into<Exponent>, q: impl Into<Exponent>) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        let (pv, qv) = (p.value(), q.value());
        if !(pv > 1.0 && pv < qv && qv.is_finite()) {
            return Err(Error::Range(format!("need 1 < p < q < ∞, got p = {p}, q = {q}")));
        }
        Ok(SawyerParams {
            p,
            q,
            r: qv / (qv - pv),
        })
    }

    pub fn p(&self) -> f64 {
        self.p.value()
    }

    pub fn q(&self) -> f64 {
        self.q.value()
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn p_exponent(&self) -> Exponent {
        self.p
    }

    pub fn q_exponent(&self) -> Exponent {
        self.q
    }

    /// `r` as an exact rational when `p` and `q` are rational.
    pub fn r_exact(&self) -> Option<Ratio<i128>> {
        let (p, q) = (self.p.exact()?, self.q.exact()?);
        Some(q / (q - p))
    }

    /// The pair `(αp, αq)`, which has the same `r`.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        SawyerParams::new(alpha * self.p(), alpha * self.q())
    }
}

impl fmt::Display for SawyerParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p,q) = ({}, {})", self.p, self.q)
    }
}
