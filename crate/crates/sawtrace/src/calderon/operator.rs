use crate::error::{Error, Result};
use crate::stepfun::{CumulativePower, StepFunction};

use super::SawyerParams;

/// `R_{p,q}` and its companions for one fixed `g`, prepared for evaluation
/// at many `t`: `R g(t) = ((1/t)∫₀^{t^r} g*^p)^{1/p}`.
#[derive(Clone, Debug)]
pub struct RProfile {
    sp: SawyerParams,
    gstar: StepFunction,
    pow_cum: CumulativePower,
    lin_cum: CumulativePower,
    // suffix maxima of vᵢ·bᵢ^{1/q}
    tail: Vec<f64>,
}

impl RProfile {
    pub fn new(g: &StepFunction, sp: SawyerParams) -> Self {
        let gstar = g.rearrange();
        let pow_cum = CumulativePower::new(&gstar, sp.p());
        let lin_cum = CumulativePower::new(&gstar, 1.0);
        let inv_q = 1.0 / sp.q();
        let mut tail: Vec<f64> = gstar.pieces().map(|(_, b, v)| v * b.powf(inv_q)).collect();
        for i in (0..tail.len().saturating_sub(1)).rev() {
            tail[i] = tail[i].max(tail[i + 1]);
        }
        RProfile {
            sp,
            gstar,
            pow_cum,
            lin_cum,
            tail,
        }
    }

    pub fn params(&self) -> &SawyerParams {
        &self.sp
    }

    pub fn rearranged(&self) -> &StepFunction {
        &self.gstar
    }

    /// `R g(t)` for `t > 0`.
    pub fn eval(&self, t: f64) -> f64 {
        let x = t.powf(self.sp.r());
        (self.pow_cum.at(x) / t).powf(1.0 / self.sp.p())
    }

    /// `sup_{s ≥ t^r} s^{1/q} g*(s)`, by the right-endpoint formula.
    pub fn tail_sup(&self, t: f64) -> f64 {
        let x = t.powf(self.sp.r());
        let i = self.gstar.breakpoints().partition_point(|&b| b < x);
        self.tail.get(i).copied().unwrap_or(0.0)
    }

    /// `g**(t^r)·t^{(r−1)/p}`.
    pub fn extremal(&self, t: f64) -> f64 {
        let r = self.sp.r();
        let x = t.powf(r);
        self.lin_cum.at(x) / x * t.powf((r - 1.0) / self.sp.p())
    }

    /// `sup_{t>0} R g(t)`, exactly.
    ///
    /// Between breakpoints `R g(t)^p = A/t + B t^{r−1}` with `A, B ≥ 0`, whose
    /// only critical point is a minimum, so the supremum is attained at some
    /// `t = bᵢ^{1/r}`.
    pub fn sup(&self) -> f64 {
        let r = self.sp.r();
        self.pow_cum
            .breakpoints()
            .iter()
            .zip(self.pow_cum.at_breakpoints())
            .map(|(&b, &c)| c / b.powf(1.0 / r))
            .fold(0.0, f64::max)
            .powf(1.0 / self.sp.p())
    }
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Range(format!("t = {t} must be positive and finite")))
    }
}

/// `R_{p,q} g(t)`.
pub fn apply_r(g: &StepFunction, sp: &SawyerParams, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(RProfile::new(g, *sp).eval(t))
}

/// `sup_{s ∈ [t^r, ∞)} s^{1/q} g*(s)`; 0 past the support.
pub fn tail_sup(g: &StepFunction, sp: &SawyerParams, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(RProfile::new(g, *sp).tail_sup(t))
}

/// `g**(t^r)·t^{(r−1)/p}`, the rearranged output of the extremal
/// `(p,q)`-sawyerable operator.
pub fn extremal_profile(g: &StepFunction, sp: &SawyerParams, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(RProfile::new(g, *sp).extremal(t))
}

/// Smallest `C` with `((|Tf|^p)**(t))^{1/p} ≤ C·(R f(t) + tail_sup(f, t))`
/// over the grid, 0/0 counted as 0.
pub fn sawyer_pointwise_check(tf: &StepFunction, f: &StepFunction, sp: &SawyerParams, t_grid: &[f64]) -> Result<f64> {
    if t_grid.is_empty() {
        return Err(Error::Range("empty t grid".into()));
    }
    let p = sp.p();
    let tf_cum = CumulativePower::new(&tf.rearrange(), p);
    let prof = RProfile::new(f, *sp);
    let mut worst: f64 = 0.0;
    for &t in t_grid {
        check_t(t)?;
        let num = (tf_cum.at(t) / t).powf(1.0 / p);
        let den = prof.eval(t) + prof.tail_sup(t);
        if den == 0.0 {
            if num != 0.0 {
                return Err(Error::ZeroDenominator {
                    at: format!("t = {t:e}"),
                    numerator: num,
                });
            }
            continue;
        }
        worst = worst.max(num / den);
    }
    Ok(worst)
}
