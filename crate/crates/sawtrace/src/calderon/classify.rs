use std::fmt;

use num_rational::Ratio;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::lorentz::{Exponent, LorentzParams};

use super::SawyerParams;

/// Absolute tolerance for the floating-point classifier path.
pub const FLOAT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Bounded,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "balance-i")]
    BalanceI,
    #[serde(rename = "endpoint-ii")]
    EndpointII,
    #[serde(rename = "endpoint-iii")]
    EndpointIII,
    #[serde(rename = "none")]
    None,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::BalanceI => "balance-i",
            Condition::EndpointII => "endpoint-ii",
            Condition::EndpointIII => "endpoint-iii",
            Condition::None => "none",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundednessVerdict {
    pub verdict: Verdict,
    pub matched_condition: Condition,
}

impl BoundednessVerdict {
    fn from_condition(c: Condition) -> Self {
        BoundednessVerdict {
            verdict: if c == Condition::None {
                Verdict::Unbounded
            } else {
                Verdict::Bounded
            },
            matched_condition: c,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.verdict == Verdict::Bounded
    }
}

/// Decides whether `R_{p,q} : L^{r₁,s₁} → L^{r₂,s₂}` is bounded.
///
/// Bounded exactly when
/// (i) `r₁ ∈ (p,q)`, `s₁ ≤ s₂` and `1/q + 1/(r·r₂) = 1/r₁`; or
/// (ii) `r₁ = r₂ = p`, `s₁ ≤ p`, `s₂ = ∞`; or
/// (iii) `r₁ = q`, `r₂ = ∞`, `s₂ = ∞`.
/// Uses exact rational arithmetic when every exponent is rational (or ∞).
pub fn classify_r_lorentz(sp: &SawyerParams, input: &LorentzParams, output: &LorentzParams) -> BoundednessVerdict {
    let cond = classify_exact(sp, input, output).unwrap_or_else(|| classify_float(sp, input, output));
    BoundednessVerdict::from_condition(cond)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Ext {
    Fin(Ratio<i128>),
    Inf,
}

fn ext(e: Exponent) -> Option<Ext> {
    match e {
        Exponent::Infinity => Some(Ext::Inf),
        _ => e.exact().map(Ext::Fin),
    }
}

fn classify_exact(sp: &SawyerParams, input: &LorentzParams, output: &LorentzParams) -> Option<Condition> {
    let p = sp.p_exponent().exact()?;
    let q = sp.q_exponent().exact()?;
    let r = sp.r_exact()?;
    let (r1, s1) = (ext(input.r())?, ext(input.s())?);
    let (r2, s2) = (ext(output.r())?, ext(output.s())?);
    let (pe, qe) = (Ext::Fin(p), Ext::Fin(q));
    let recip = |x: Ext| match x {
        Ext::Fin(v) => Ratio::one() / v,
        Ext::Inf => Ratio::from_integer(0),
    };
    if r1 > pe && r1 < qe && s1 <= s2 && recip(qe) + recip(r2) / r == recip(r1) {
        return Some(Condition::BalanceI);
    }
    if r1 == pe && r2 == pe && s1 <= pe && s2 == Ext::Inf {
        return Some(Condition::EndpointII);
    }
    if r1 == qe && r2 == Ext::Inf && s2 == Ext::Inf {
        return Some(Condition::EndpointIII);
    }
    Some(Condition::None)
}

fn classify_float(sp: &SawyerParams, input: &LorentzParams, output: &LorentzParams) -> Condition {
    let (p, q, r) = (sp.p(), sp.q(), sp.r());
    let (r1, s1) = (input.r().value(), input.s().value());
    let (r2, s2) = (output.r().value(), output.s().value());
    let eq = |a: f64, b: f64| a == b || (a - b).abs() <= FLOAT_TOL;
    let le = |a: f64, b: f64| a <= b || eq(a, b);
    let inv = |x: f64| if x == f64::INFINITY { 0.0 } else { 1.0 / x };
    if r1 > p + FLOAT_TOL && r1 < q - FLOAT_TOL && le(s1, s2) && (1.0 / q + inv(r2) / r - inv(r1)).abs() <= FLOAT_TOL {
        return Condition::BalanceI;
    }
    if eq(r1, p) && eq(r2, p) && le(s1, p) && s2 == f64::INFINITY {
        return Condition::EndpointII;
    }
    if eq(r1, q) && r2 == f64::INFINITY && s2 == f64::INFINITY {
        return Condition::EndpointIII;
    }
    Condition::None
}
