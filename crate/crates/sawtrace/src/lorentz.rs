//! Lorentz quasinorms `‖t^{1/r−1/s} f*(t)‖_{L^s}`, the power-space norm
//! `‖((|f|^p)**)^{1/p}‖`, and K-functionals for the pair `(L^p, L^{q,∞})`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::calderon::SawyerParams;
use crate::error::{Error, Result};
use crate::numeric::{integrate, pow_diff};
use crate::stepfun::{CumulativePower, StepFunction};

/// Relative tolerance for per-piece quadrature in [`power_space_norm`].
pub const QUAD_REL_TOL: f64 = 1e-8;
/// Subdivision budget per piece in [`power_space_norm`].
pub const QUAD_BUDGET: usize = 400;

/// An exponent in `(0,∞]`, kept as an exact rational when it came from one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Rational(Ratio<i64>),
    Real(f64),
    Infinity,
}

impl Exponent {
    pub fn ratio(num: i64, den: i64) -> Self {
        Exponent::Rational(Ratio::new(num, den))
    }

    pub fn value(&self) -> f64 {
        match *self {
            Exponent::Rational(q) => *q.numer() as f64 / *q.denom() as f64,
            Exponent::Real(x) => x,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity) || self.value() == f64::INFINITY
    }

    /// Exact value as a wide rational; `None` for real or infinite exponents.
    pub fn exact(&self) -> Option<Ratio<i128>> {
        match *self {
            Exponent::Rational(q) => Some(Ratio::new(*q.numer() as i128, *q.denom() as i128)),
            _ => None,
        }
    }

    /// Exact reciprocal, with `1/∞ = 0`.
    pub fn exact_recip(&self) -> Option<Ratio<i128>> {
        match self {
            Exponent::Infinity => Some(Ratio::zero()),
            _ => self.exact().map(|q| Ratio::one() / q),
        }
    }

    pub fn recip(&self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.value()
        }
    }
}

impl From<f64> for Exponent {
    fn from(x: f64) -> Self {
        if x == f64::INFINITY {
            Exponent::Infinity
        } else {
            Exponent::Real(x)
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts `inf`, integers, `a/b` fractions and decimals; the latter three
    /// are kept exact.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Format(format!("cannot parse exponent {s:?}"));
        match s {
            "inf" | "Inf" | "infinity" | "∞" => return Ok(Exponent::Infinity),
            _ => {}
        }
        if let Some((a, b)) = s.split_once('/') {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            return Ok(Exponent::Rational(Ratio::new(a, b)));
        }
        if let Ok(k) = s.parse::<i64>() {
            return Ok(Exponent::Rational(Ratio::from_integer(k)));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let digits = frac.len() as u32;
            if digits <= 12 && frac.bytes().all(|c| c.is_ascii_digit()) {
                let whole = format!("{int}{frac}");
                if let Ok(n) = whole.parse::<i64>() {
                    return Ok(Exponent::Rational(Ratio::new(n, 10i64.pow(digits))));
                }
            }
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        Ok(Exponent::from(x))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Rational(q) if *q.denom() == 1 => write!(f, "{}", q.numer()),
            Exponent::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Exponent::Real(x) => write!(f, "{x}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(Exponent::from(x)),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// An admissible Lorentz pair `(r, s)`: `r = s = 1`, or `1 < r < ∞` with
/// `s ∈ [1,∞]`, or `r = s = ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LorentzParams {
    r: Exponent,
    s: Exponent,
}

impl LorentzParams {
    pub fn new(r: impl Into<Exponent>, s: impl Into<Exponent>) -> Result<Self> {
        let (r, s) = (r.into(), s.into());
        let (rv, sv) = (r.value(), s.value());
        let ok = (rv == 1.0 && sv == 1.0)
            || (rv > 1.0 && rv.is_finite() && sv >= 1.0)
            || (rv == f64::INFINITY && sv == f64::INFINITY);
        if !ok || rv.is_nan() || sv.is_nan() {
            return Err(Error::Range(format!("Lorentz pair ({r}, {s}) is not admissible")));
        }
        Ok(LorentzParams { r, s })
    }

    /// `L^p = L^{p,p}`.
    pub fn lebesgue(p: f64) -> Result<Self> {
        Self::new(p, p)
    }

    /// `L^{p,∞}`.
    pub fn weak(p: f64) -> Result<Self> {
        Self::new(p, f64::INFINITY)
    }

    /// The Λ endpoint `L^{r,1}`.
    pub fn lambda(r: f64) -> Result<Self> {
        Self::new(r, 1.0)
    }

    pub fn infinity() -> Self {
        LorentzParams {
            r: Exponent::Infinity,
            s: Exponent::Infinity,
        }
    }

    pub fn r(&self) -> Exponent {
        self.r
    }

    pub fn s(&self) -> Exponent {
        self.s
    }
}

impl FromStr for LorentzParams {
    type Err = Error;

    /// `"r,s"`.
    fn from_str(text: &str) -> Result<Self> {
        let (r, s) = text
            .split_once(',')
            .ok_or_else(|| Error::Format(format!("expected \"r,s\", got {text:?}")))?;
        LorentzParams::new(r.parse::<Exponent>()?, s.parse::<Exponent>()?)
    }
}

impl fmt::Display for LorentzParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.r, self.s)
    }
}

/// Lorentz quasinorm of a function already in nonincreasing form.
pub(crate) fn lorentz_norm_of_rearranged(fstar: &StepFunction, lp: LorentzParams) -> f64 {
    let (r, s) = (lp.r.value(), lp.s.value());
    if fstar.is_zero() {
        return 0.0;
    }
    if r == f64::INFINITY {
        return fstar.values()[0];
    }
    if s == f64::INFINITY {
        return fstar.pieces().map(|(_, b, v)| v * b.powf(1.0 / r)).fold(0.0, f64::max);
    }
    let e = s / r;
    let sum: f64 = fstar
        .pieces()
        .map(|(a, b, v)| v.powf(s) * (r / s) * pow_diff(a, b, e))
        .sum();
    sum.powf(1.0 / s)
}

/// `‖f‖_{L^{r,s}}` computed in closed form from the pieces of `f*`.
pub fn lorentz_norm(f: &StepFunction, lp: LorentzParams) -> f64 {
    lorentz_norm_of_rearranged(&f.rearrange(), lp)
}

/// `‖((|f|^p)**)^{1/p}‖` in the base Lorentz norm, i.e. the norm of `f` in
/// the power space `X^⟨p⟩` over `X = L^{base}`.
///
/// On each piece of `h = (|f|^p)*` the running average is `w + c/t`; beyond
/// the support it is `C/t`. Suprema use the critical point of
/// `c·t^{a−1} + w·t^a` (`a = p/r`); integrals are closed form where `w` or
/// `c` vanishes and adaptive quadrature in `ln t` otherwise. Returns `+∞`
/// when the tail makes the norm diverge (`r ≤ p` with `s < ∞`, or `r < p`).
pub fn power_space_norm(f: &StepFunction, base: LorentzParams, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Range(format!("power p = {p} must satisfy 1 ≤ p < ∞")));
    }
    let fstar = f.rearrange();
    if fstar.is_zero() {
        return Ok(0.0);
    }
    let (r, s) = (base.r.value(), base.s.value());
    if r == f64::INFINITY {
        return Ok(fstar.values()[0]);
    }
    let cum = CumulativePower::new(&fstar, p);
    // (lo, hi, w, c) with h**(t) = w + c/t on (lo, hi]
    let mut segments = Vec::with_capacity(fstar.num_pieces() + 1);
    let mut prev_c = 0.0;
    let mut lo = 0.0;
    for (i, (&b, &v)) in fstar.breakpoints().iter().zip(fstar.values()).enumerate() {
        let w = v.powf(p);
        let c = if i == 0 { 0.0 } else { (prev_c - w * lo).max(0.0) };
        segments.push((lo, b, w, c));
        prev_c = cum.at_breakpoints()[i];
        lo = b;
    }
    segments.push((lo, f64::INFINITY, 0.0, prev_c));

    if s == f64::INFINITY {
        let a = p / r;
        let phi = |t: f64, w: f64, c: f64| w * t.powf(a) + c * t.powf(a - 1.0);
        let mut best: f64 = 0.0;
        for &(lo, hi, w, c) in &segments {
            if hi == f64::INFINITY {
                if c > 0.0 {
                    if a > 1.0 {
                        return Ok(f64::INFINITY);
                    }
                    best = best.max(phi(lo, 0.0, c));
                }
                continue;
            }
            best = best.max(phi(hi, w, c));
            if lo > 0.0 {
                best = best.max(phi(lo, w, c));
            }
            if a < 1.0 && w > 0.0 && c > 0.0 {
                let crit = (1.0 - a) * c / (a * w);
                if crit > lo && crit < hi {
                    best = best.max(phi(crit, w, c));
                }
            }
        }
        return Ok(best.powf(1.0 / p));
    }

    let sigma = s / r;
    let kappa = s / p;
    let mut total = 0.0;
    for &(lo, hi, w, c) in &segments {
        if hi == f64::INFINITY {
            if c > 0.0 {
                if sigma >= kappa {
                    return Ok(f64::INFINITY);
                }
                total += c.powf(kappa) * lo.powf(sigma - kappa) / (kappa - sigma);
            }
        } else if c == 0.0 {
            total += w.powf(kappa) * pow_diff(lo, hi, sigma) / sigma;
        } else {
            let integrand = |u: f64| (sigma * u).exp() * (w + c * (-u).exp()).powf(kappa);
            total += integrate(integrand, lo.ln(), hi.ln(), QUAD_REL_TOL, QUAD_BUDGET)?;
        }
    }
    Ok(total.powf(1.0 / s))
}

/// Holmstedt's formula for `K(f, t; L^p, L^{q,∞})`:
/// `(∫₀^{t^{pr}} f*^p)^{1/p} + t·ess sup_{s > t^{pr}} s^{1/q} f*(s)`.
pub fn k_holmstedt(f: &StepFunction, t: f64, sp: &SawyerParams) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Range(format!("t = {t} must be positive")));
    }
    let (p, q, r) = (sp.p(), sp.q(), sp.r());
    let fstar = f.rearrange();
    let x = t.powf(p * r);
    let head = CumulativePower::new(&fstar, p).at(x).powf(1.0 / p);
    let tail = fstar
        .pieces()
        .filter(|&(_, b, _)| b > x)
        .map(|(_, b, v)| v * b.powf(1.0 / q))
        .fold(0.0, f64::max);
    Ok(head + t * tail)
}

/// Number of refinement levels inserted between consecutive values of `f*`
/// in [`k_bruteforce`].
pub const K_REFINEMENT: usize = 32;

/// Minimum of `‖g‖_p + t‖h‖_{q,∞}` over truncations `h = min(|f|, c)`,
/// `g = (|f| − c)₊` with `c` running over the values of `f*` and
/// [`K_REFINEMENT`] levels between consecutive values (and below the least).
pub fn k_bruteforce(f: &StepFunction, t: f64, sp: &SawyerParams) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Range(format!("t = {t} must be positive")));
    }
    let fstar = f.rearrange();
    if fstar.is_zero() {
        return Ok(0.0);
    }
    let (p, q) = (sp.p(), sp.q());
    let vals = fstar.values();
    let mut levels = vec![0.0];
    for i in 0..vals.len() {
        let lower = if i + 1 < vals.len() { vals[i + 1] } else { 0.0 };
        let upper = vals[i];
        for j in 1..=K_REFINEMENT {
            levels.push(lower + (upper - lower) * j as f64 / (K_REFINEMENT + 1) as f64);
        }
        levels.push(upper);
    }
    let cost = |c: f64| {
        let mut g = 0.0;
        let mut h: f64 = 0.0;
        for (a, b, v) in fstar.pieces() {
            if v > c {
                g += (v - c).powf(p) * (b - a);
            }
            h = h.max(v.min(c) * b.powf(1.0 / q));
        }
        g.powf(1.0 / p) + t * h
    };
    Ok(levels.into_iter().map(cost).fold(f64::INFINITY, f64::min))
}
