use serde::Serialize;

use crate::error::{Error, Result};
use crate::euclid::{
    growth_constant, rearrange_wrt_measure, riesz_potential_with, two_weight_constant, CellSet, DyadicLatticeSet,
    DyadicMeasure, GridFunction, RieszKernel,
};
use crate::lorentz::{lorentz_norm, LorentzParams};

use super::content::{choquet_integral, ContentParams};

/// `lhs / rhs` with `0/0 = 0`.
fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceReport {
    pub alpha: f64,
    pub p: f64,
    /// Content exponent `n − αp`.
    pub s: f64,
    pub depth: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

fn check_trace_params(n: usize, alpha: f64, p: f64) -> Result<()> {
    if !(alpha > 0.0 && p > 1.0 && alpha * p < n as f64) {
        return Err(Error::Range(format!(
            "need α > 0, p > 1 and αp < n = {n}, got α = {alpha}, p = {p}"
        )));
    }
    Ok(())
}

/// `∫ |I_α χ_E|^p dH^{n−αp}` against `|E|`, with Lebesgue leaf weights.
pub fn trace_ratio(e: &CellSet, alpha: f64, p: f64) -> Result<TraceReport> {
    let grid = e.grid();
    check_trace_params(grid.n(), alpha, p)?;
    let kernel = RieszKernel::new(grid, alpha, grid.n() as f64)?;
    trace_ratio_with(&kernel, e, alpha, p)
}

/// [`trace_ratio`] with a prebuilt kernel (order `α`, `d = n`).
pub fn trace_ratio_with(kernel: &RieszKernel, e: &CellSet, alpha: f64, p: f64) -> Result<TraceReport> {
    check_trace_params(e.grid().n(), alpha, p)?;
    if e.is_empty() {
        return Err(Error::Range("trace experiment needs a nonempty set".into()));
    }
    let mut report = trace_lhs(kernel, &e.indicator(), alpha, p)?;
    report.rhs = e.volume();
    report.ratio = ratio(report.lhs, report.rhs);
    Ok(report)
}

/// `∫ |I_α f|^p dH^{n−αp}` against `‖f*‖_{L^{p,1}}^p`, with Lebesgue leaf
/// weights.
pub fn trace_ratio_function(f: &GridFunction, alpha: f64, p: f64) -> Result<TraceReport> {
    let grid = f.grid();
    check_trace_params(grid.n(), alpha, p)?;
    let kernel = RieszKernel::new(grid, alpha, grid.n() as f64)?;
    let mut report = trace_lhs(&kernel, f, alpha, p)?;
    let fs = rearrange_wrt_measure(f, &DyadicMeasure::lebesgue(grid.clone()))?;
    report.rhs = lorentz_norm(&fs, LorentzParams::new(p, 1.0)?).powf(p);
    report.ratio = ratio(report.lhs, report.rhs);
    Ok(report)
}

fn trace_lhs(kernel: &RieszKernel, f: &GridFunction, alpha: f64, p: f64) -> Result<TraceReport> {
    let grid = f.grid();
    let n = grid.n() as f64;
    let s = n - alpha * p;
    let pot = riesz_potential_with(kernel, f, &DyadicMeasure::lebesgue(grid.clone()))?;
    let g = GridFunction::new(grid.clone(), pot.values().iter().map(|v| v.abs().powf(p)).collect())?;
    let lhs = choquet_integral(&g, ContentParams::new(s)?)?;
    Ok(TraceReport {
        alpha,
        p,
        s,
        depth: grid.depth(),
        lhs,
        rhs: 0.0,
        ratio: 0.0,
    })
}

/// Caps above which the hypothesis constants of a two-measure experiment
/// are flagged.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HypothesisCaps {
    pub growth: f64,
    pub two_weight: f64,
}

impl Default for HypothesisCaps {
    fn default() -> Self {
        HypothesisCaps {
            growth: f64::INFINITY,
            two_weight: f64::INFINITY,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoMeasureReport {
    pub alpha: f64,
    pub p: f64,
    pub d: f64,
    pub depth: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub growth_constant: f64,
    pub two_weight_constant: f64,
    pub exceeds_cap: bool,
    /// Cubes over which both constants are maximized.
    pub cube_class: &'static str,
}

/// `Σ |I^μ_α f|^p ν(cell)` against `‖f*_μ‖_{L^{p,1}(μ)}^p`, with the growth
/// and two-weight constants of `(μ, ν)`.
#[allow(clippy::too_many_arguments)]
pub fn two_measure_trace_ratio(
    f: &GridFunction,
    mu: &DyadicMeasure,
    nu: &DyadicMeasure,
    alpha: f64,
    p: f64,
    d: f64,
    lats: &DyadicLatticeSet,
    caps: HypothesisCaps,
) -> Result<TwoMeasureReport> {
    let kernel = RieszKernel::new(mu.grid(), alpha, d)?;
    two_measure_trace_ratio_with(&kernel, f, mu, nu, alpha, p, d, lats, caps)
}

/// [`two_measure_trace_ratio`] with a prebuilt kernel.
#[allow(clippy::too_many_arguments)]
pub fn two_measure_trace_ratio_with(
    kernel: &RieszKernel,
    f: &GridFunction,
    mu: &DyadicMeasure,
    nu: &DyadicMeasure,
    alpha: f64,
    p: f64,
    d: f64,
    lats: &DyadicLatticeSet,
    caps: HypothesisCaps,
) -> Result<TwoMeasureReport> {
    let grid = mu.grid();
    if !(d > 0.0 && d <= grid.n() as f64 && alpha > 0.0 && alpha < d && p > 1.0 && p < d / alpha) {
        return Err(Error::Range(format!(
            "need 0 < d ≤ n, 0 < α < d, 1 < p < d/α; got d = {d}, α = {alpha}, p = {p}"
        )));
    }
    grid.check_same(nu.grid())?;
    let pot = riesz_potential_with(kernel, f, mu)?;
    let lhs = crate::numeric::fsum(pot.values().iter().zip(nu.weights()).map(|(v, w)| v.abs().powf(p) * w));
    let rhs = lorentz_norm(&rearrange_wrt_measure(f, mu)?, LorentzParams::new(p, 1.0)?).powf(p);
    let growth = growth_constant(mu, d, lats)?;
    let two_weight = two_weight_constant(mu, nu, alpha, p, d, lats)?;
    Ok(TwoMeasureReport {
        alpha,
        p,
        d,
        depth: grid.depth(),
        lhs,
        rhs,
        ratio: ratio(lhs, rhs),
        growth_constant: growth,
        two_weight_constant: two_weight,
        exceeds_cap: growth > caps.growth || two_weight > caps.two_weight,
        cube_class: "dyadic-translates",
    })
}
