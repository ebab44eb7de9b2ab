//! Piecewise-constant functions on (0,∞).
//!
//! A [`StepFunction`] is given by breakpoints `0 = b₀ < b₁ < … < b_m` and values
//! `v₁, …, v_m`, with value `vᵢ` on `(b_{i−1}, bᵢ]` and zero beyond `b_m`. Values
//! may be signed; every rearrangement or norm acts on `|f|`.
//!
//! Lengths of unions of pieces are formed with a correctly rounded sum of the
//! exact differences `bᵢ − b_{i−1}`, so the measure of a level set is the
//! same floating-point number however the pieces are ordered. This is what
//! makes `distribution(f, λ) == distribution(f*, λ)` hold bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::ExactSum;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStepFunction", into = "RawStepFunction")]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawStepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<RawStepFunction> for StepFunction {
    type Error = Error;
    fn try_from(raw: RawStepFunction) -> Result<Self> {
        StepFunction::new(raw.breakpoints, raw.values)
    }
}

impl From<StepFunction> for RawStepFunction {
    fn from(f: StepFunction) -> Self {
        RawStepFunction {
            breakpoints: f.breakpoints,
            values: f.values,
        }
    }
}

impl StepFunction {
    /// Validates and canonicalizes (merges equal neighbours, drops trailing zeros).
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::InvalidStepFunction(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        let mut prev = 0.0;
        for (i, &b) in breakpoints.iter().enumerate() {
            if !b.is_finite() || b <= prev {
                return Err(Error::InvalidStepFunction(format!(
                    "breakpoint {i} = {b} is not finite and greater than {prev}"
                )));
            }
            prev = b;
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidStepFunction(format!(
                "value {i} = {} is not finite",
                values[i]
            )));
        }
        Ok(Self::canonical(breakpoints, values))
    }

    fn canonical(breakpoints: Vec<f64>, values: Vec<f64>) -> Self {
        let mut bs: Vec<f64> = Vec::with_capacity(breakpoints.len());
        let mut vs: Vec<f64> = Vec::with_capacity(values.len());
        for (b, v) in breakpoints.into_iter().zip(values) {
            let v = if v == 0.0 { 0.0 } else { v };
            match vs.last() {
                Some(&last) if last == v => *bs.last_mut().unwrap() = b,
                _ => {
                    bs.push(b);
                    vs.push(v);
                }
            }
        }
        while vs.last() == Some(&0.0) {
            vs.pop();
            bs.pop();
        }
        StepFunction {
            breakpoints: bs,
            values: vs,
        }
    }

    pub fn zero() -> Self {
        StepFunction {
            breakpoints: Vec::new(),
            values: Vec::new(),
        }
    }

    /// χ_(0,a).
    pub fn indicator(a: f64) -> Result<Self> {
        Self::new(vec![a], vec![1.0])
    }

    /// Builds a function from consecutive `(length, value)` pieces starting at
    /// 0. Zero-length pieces are skipped; breakpoints are correctly rounded
    /// prefix sums of the lengths.
    pub fn from_lengths(pieces: &[(f64, f64)]) -> Result<Self> {
        let mut acc = ExactSum::new();
        let mut bs = Vec::with_capacity(pieces.len());
        let mut vs = Vec::with_capacity(pieces.len());
        for &(len, v) in pieces {
            if !(len >= 0.0) || !len.is_finite() {
                return Err(Error::InvalidStepFunction(format!(
                    "piece length {len} is not a finite nonnegative number"
                )));
            }
            if len == 0.0 {
                continue;
            }
            acc.add(len);
            bs.push(acc.value());
            vs.push(v);
        }
        Self::new(bs, vs)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn num_pieces(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Right end of the support (0 for the zero function).
    pub fn support(&self) -> f64 {
        self.breakpoints.last().copied().unwrap_or(0.0)
    }

    /// `(left, right, value)` for every piece.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints
            .iter()
            .zip(&self.values)
            .enumerate()
            .map(move |(i, (&b, &v))| {
                let a = if i == 0 { 0.0 } else { self.breakpoints[i - 1] };
                (a, b, v)
            })
    }

    /// Value at `t` with the `(b_{i−1}, bᵢ]` convention.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let i = self.breakpoints.partition_point(|&b| b < t);
        self.values.get(i).copied().unwrap_or(0.0)
    }

    pub fn abs(&self) -> Self {
        Self::canonical(self.breakpoints.clone(), self.values.iter().map(|v| v.abs()).collect())
    }

    /// `c·f`.
    pub fn scale(&self, c: f64) -> Result<Self> {
        Self::new(self.breakpoints.clone(), self.values.iter().map(|v| c * v).collect())
    }

    /// `t ↦ |f(t)|^α`.
    pub fn abs_pow(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::Range(format!("power {alpha} must be positive")));
        }
        Self::new(
            self.breakpoints.clone(),
            self.values.iter().map(|v| v.abs().powf(alpha)).collect(),
        )
    }

    /// `t ↦ f(c·t)`.
    pub fn dilate(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Range(format!("dilation factor {c} must be positive")));
        }
        Self::new(self.breakpoints.iter().map(|b| b / c).collect(), self.values.clone())
    }

    /// Pointwise sum.
    pub fn add(&self, other: &StepFunction) -> Self {
        let mut bs: Vec<f64> = self.breakpoints.iter().chain(&other.breakpoints).copied().collect();
        bs.sort_by(f64::total_cmp);
        bs.dedup();
        let vs = bs.iter().map(|&b| self.eval(b) + other.eval(b)).collect();
        Self::canonical(bs, vs)
    }

    fn exact_length(acc: &mut ExactSum, a: f64, b: f64) {
        acc.add(b);
        acc.add(-a);
    }

    /// The nonincreasing rearrangement f*.
    ///
    /// Pieces of `|f|` are sorted by value, largest first (stable, so ties keep
    /// their original order) and laid end to end from 0.
    pub fn rearrange(&self) -> StepFunction {
        let mut order: Vec<usize> = (0..self.values.len()).filter(|&i| self.values[i] != 0.0).collect();
        order.sort_by(|&i, &j| self.values[j].abs().total_cmp(&self.values[i].abs()));
        let mut acc = ExactSum::new();
        let mut bs = Vec::with_capacity(order.len());
        let mut vs = Vec::with_capacity(order.len());
        for i in order {
            let a = if i == 0 { 0.0 } else { self.breakpoints[i - 1] };
            Self::exact_length(&mut acc, a, self.breakpoints[i]);
            bs.push(acc.value());
            vs.push(self.values[i].abs());
        }
        Self::canonical(bs, vs)
    }

    /// `|{t : |f(t)| > λ}|`.
    pub fn distribution(&self, lambda: f64) -> Result<f64> {
        if !(lambda > 0.0) {
            return Err(Error::Range(format!("level {lambda} must be positive")));
        }
        let mut acc = ExactSum::new();
        for (a, b, v) in self.pieces() {
            if v.abs() > lambda {
                Self::exact_length(&mut acc, a, b);
            }
        }
        Ok(acc.value())
    }

    /// `∫ₐᵇ |f|^p`; `b` may be `+∞`.
    pub fn integrate_power(&self, p: f64, a: f64, b: f64) -> Result<f64> {
        if !(p > 0.0) {
            return Err(Error::Range(format!("power {p} must be positive")));
        }
        if !(a >= 0.0) || !(a <= b) {
            return Err(Error::Range(format!(
                "integration limits must satisfy 0 ≤ a ≤ b, got [{a}, {b}]"
            )));
        }
        Ok(self
            .pieces()
            .map(|(l, r, v)| {
                let len = r.min(b) - l.max(a);
                if len > 0.0 {
                    v.abs().powf(p) * len
                } else {
                    0.0
                }
            })
            .sum())
    }

    /// f**(t) = (1/t)∫₀ᵗ f*.
    pub fn maximal_avg(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Range(format!("t = {t} must be positive")));
        }
        Ok(CumulativePower::new(&self.rearrange(), 1.0).at(t) / t)
    }
}

/// Running integral `x ↦ ∫₀ˣ |f|^p` of a fixed step function, for repeated
/// evaluation. Build it on `f.rearrange()` to get integrals of `(f*)^p`.
#[derive(Clone, Debug)]
pub struct CumulativePower {
    breakpoints: Vec<f64>,
    powers: Vec<f64>,
    cum: Vec<f64>,
}

impl CumulativePower {
    pub fn new(f: &StepFunction, p: f64) -> Self {
        let powers: Vec<f64> = f.values.iter().map(|v| v.abs().powf(p)).collect();
        let mut cum = Vec::with_capacity(powers.len());
        let mut total = 0.0;
        for (a, b, _) in f.pieces() {
            total += powers[cum.len()] * (b - a);
            cum.push(total);
        }
        CumulativePower {
            breakpoints: f.breakpoints.clone(),
            powers,
            cum,
        }
    }

    pub fn at(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let i = self.breakpoints.partition_point(|&b| b < x);
        if i >= self.breakpoints.len() {
            return self.total();
        }
        let (a, c0) = if i == 0 {
            (0.0, 0.0)
        } else {
            (self.breakpoints[i - 1], self.cum[i - 1])
        };
        c0 + self.powers[i] * (x - a)
    }

    pub fn total(&self) -> f64 {
        self.cum.last().copied().unwrap_or(0.0)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// `∫₀^{bᵢ} |f|^p` for every breakpoint.
    pub fn at_breakpoints(&self) -> &[f64] {
        &self.cum
    }
}
