//! Functions sampled on logarithmic grids, with empirical rearrangement and
//! Lorentz norms computed in the log domain.
//!
//! A sample set `F(t₀), …, F(t_{n−1})` is turned into the lower step envelope:
//! on the cell `(t_k, t_{k+1}]` the value is `min(F(t_k), F(t_{k+1}))` and the
//! function vanishes outside `[t₀, t_{n−1}]`. For a function that is monotone
//! on each cell this envelope lies below `F`, so every norm computed from it
//! is a lower bound for the norm of `F`.
//!
//! Everything is stored as logarithms (`ln t`, `ln F`), which allows grids
//! such as `[2^{−10⁶}, 2^{10⁶}]` that are far outside the range of `f64`.

use crate::error::{Error, Result};
use crate::lorentz::LorentzParams;
use crate::numeric::{ln_pow_diff, logaddexp, logsumexp};
use crate::par;
use crate::stepfun::StepFunction;

/// `len` points, equally spaced in `ln t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogGrid {
    ln_start: f64,
    step: f64,
    len: usize,
}

impl LogGrid {
    /// Points `lo = t₀ < … < t_{len−1} = hi`.
    pub fn new(lo: f64, hi: f64, len: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::Range(format!("log grid needs 0 < lo < hi, got [{lo}, {hi}]")));
        }
        Self::from_ln(lo.ln(), hi.ln(), len)
    }

    pub fn from_ln(ln_lo: f64, ln_hi: f64, len: usize) -> Result<Self> {
        if len < 2 || !(ln_hi > ln_lo) || !ln_lo.is_finite() || !ln_hi.is_finite() {
            return Err(Error::Range(format!(
                "log grid needs at least 2 points on a nonempty range, got {len} on [{ln_lo}, {ln_hi}]"
            )));
        }
        Ok(LogGrid {
            ln_start: ln_lo,
            step: (ln_hi - ln_lo) / (len - 1) as f64,
            len,
        })
    }

    /// 512 points on `[2^{−30}, 2^{30}]`.
    pub fn standard() -> Self {
        let h = 30.0 * std::f64::consts::LN_2;
        LogGrid::from_ln(-h, h, 512).expect("valid standard grid")
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ln_step(&self) -> f64 {
        self.step
    }

    pub fn ln_t(&self, k: usize) -> f64 {
        self.ln_start + self.step * k as f64
    }

    pub fn t(&self, k: usize) -> f64 {
        self.ln_t(k).exp()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|k| self.t(k)).collect()
    }

    /// The same grid multiplied by `e^{shift}`.
    pub fn shifted(&self, ln_shift: f64) -> Self {
        LogGrid {
            ln_start: self.ln_start + ln_shift,
            ..*self
        }
    }
}

/// Samples `ln F(t_k)` of a nonnegative function on a [`LogGrid`]
/// (`-∞` encodes `F = 0`).
#[derive(Clone, Debug)]
pub struct SampledProfile {
    grid: LogGrid,
    ln_values: Vec<f64>,
}

impl SampledProfile {
    /// From a function of `ln t` returning `ln F`.
    pub fn from_ln_fn<F>(grid: LogGrid, ln_f: F) -> Self
    where
        F: Fn(f64) -> f64 + Sync + Send,
    {
        let ln_values = par::map_range(grid.len(), |k| ln_f(grid.ln_t(k)));
        SampledProfile { grid, ln_values }
    }

    /// From a function of `t` returning `F(t) ≥ 0`.
    pub fn from_fn<F>(grid: LogGrid, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Sync + Send,
    {
        Self::from_ln_fn(grid, |u| f(u.exp()).ln())
    }

    pub fn grid(&self) -> &LogGrid {
        &self.grid
    }

    pub fn ln_values(&self) -> &[f64] {
        &self.ln_values
    }

    /// `(ln length, ln value)` of the envelope cells with nonzero value.
    fn cells(&self) -> Vec<(f64, f64)> {
        let ln_gap = self.grid.step.exp_m1().ln();
        (0..self.grid.len - 1)
            .filter_map(|k| {
                let v = self.ln_values[k].min(self.ln_values[k + 1]);
                if v == f64::NEG_INFINITY || v.is_nan() {
                    None
                } else {
                    Some((self.grid.ln_t(k) + ln_gap, v))
                }
            })
            .collect()
    }

    /// `ln` of the Lorentz norm of the envelope.
    pub fn ln_lorentz_norm(&self, lp: LorentzParams) -> f64 {
        let mut cells = self.cells();
        if cells.is_empty() {
            return f64::NEG_INFINITY;
        }
        let (r, s) = (lp.r().value(), lp.s().value());
        if r == f64::INFINITY {
            return cells.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
        }
        par::sort_by(&mut cells, |a, b| b.1.total_cmp(&a.1));
        let mut ln_b = f64::NEG_INFINITY;
        if s == f64::INFINITY {
            let mut best = f64::NEG_INFINITY;
            for &(ln_len, ln_v) in &cells {
                ln_b = logaddexp(ln_b, ln_len);
                best = best.max(ln_v + ln_b / r);
            }
            return best;
        }
        let e = s / r;
        let ln_coef = (r / s).ln();
        let mut terms = Vec::with_capacity(cells.len());
        for &(ln_len, ln_v) in &cells {
            let prev = ln_b;
            ln_b = logaddexp(ln_b, ln_len);
            terms.push(s * ln_v + ln_coef + ln_pow_diff(prev, ln_b, e));
        }
        logsumexp(&terms) / s
    }

    pub fn lorentz_norm(&self, lp: LorentzParams) -> f64 {
        self.ln_lorentz_norm(lp).exp()
    }

    /// The envelope as an ordinary step function (grid must fit in `f64`).
    pub fn to_step_function(&self) -> Result<StepFunction> {
        let n = self.grid.len;
        let mut bs = Vec::with_capacity(n);
        let mut vs = Vec::with_capacity(n);
        bs.push(self.grid.t(0));
        vs.push(0.0);
        for k in 0..n - 1 {
            bs.push(self.grid.t(k + 1));
            vs.push(self.ln_values[k].min(self.ln_values[k + 1]).exp());
        }
        StepFunction::new(bs, vs)
    }
}
