use serde::Serialize;

use crate::calderon::{sawyer_pointwise_check, SawyerParams};
use crate::error::{Error, Result};
use crate::par;

use super::constants::rearrange_wrt_measure;
use super::grid::{CellSet, DyadicMeasure, GridFunction};
use super::lattice::DyadicLatticeSet;
use super::maximal::{frac_maximal_best, g_operator};
use super::potential::{riesz_potential_with, RieszKernel};

/// Exponents of a potential estimate: `0 < d ≤ n`, `0 < α < d`,
/// `1 < p < d/α` and an auxiliary `δ ∈ (α, αp)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PotentialParams {
    pub d: f64,
    pub alpha: f64,
    pub p: f64,
    pub delta: f64,
}

impl PotentialParams {
    pub fn new(n: usize, d: f64, alpha: f64, p: f64, delta: f64) -> Result<Self> {
        if !(d > 0.0 && d <= n as f64) {
            return Err(Error::Range(format!("need 0 < d ≤ {n}, got d = {d}")));
        }
        if !(alpha > 0.0 && alpha < d) {
            return Err(Error::Range(format!("need 0 < α < d, got α = {alpha}")));
        }
        if !(p > 1.0 && p < d / alpha) {
            return Err(Error::Range(format!("need 1 < p < d/α = {}, got p = {p}", d / alpha)));
        }
        if !(delta > alpha && delta < alpha * p) {
            return Err(Error::Range(format!(
                "need α < δ < αp = {}, got δ = {delta}",
                alpha * p
            )));
        }
        Ok(PotentialParams { d, alpha, p, delta })
    }

    /// `θ = α/δ ∈ (0,1)`.
    pub fn theta(&self) -> f64 {
        self.alpha / self.delta
    }

    /// `β = δ`.
    pub fn beta(&self) -> f64 {
        self.delta
    }

    /// `(αp/δ, d/δ)`: the exponents for which `G` is sawyerable.
    pub fn sawyer_params(&self) -> Result<SawyerParams> {
        SawyerParams::new(self.alpha * self.p / self.delta, self.d / self.delta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DominationReport {
    pub max_ratio: f64,
    /// Lowest leaf index attaining the maximum.
    pub argmax: usize,
    pub numerator: f64,
    pub denominator: f64,
}

/// `max_x |I^μ_{θβ} χ_E(x)| / (M_β χ_E(x)^θ · M_0 χ_E(x)^{1−θ})` over leaf
/// centres, each maximal function taking the best of the lattices at `x`.
/// `0/0` counts as 0; a vanishing denominator under a nonzero numerator is
/// an error.
pub fn domination_ratio(
    e: &CellSet,
    mu: &DyadicMeasure,
    pp: &PotentialParams,
    lats: &DyadicLatticeSet,
) -> Result<DominationReport> {
    let kernel = RieszKernel::new(mu.grid(), pp.alpha, pp.d)?;
    domination_ratio_with(&kernel, e, mu, pp, lats)
}

/// [`domination_ratio`] with a prebuilt kernel.
pub fn domination_ratio_with(
    kernel: &RieszKernel,
    e: &CellSet,
    mu: &DyadicMeasure,
    pp: &PotentialParams,
    lats: &DyadicLatticeSet,
) -> Result<DominationReport> {
    e.grid().check_same(mu.grid())?;
    let chi = e.indicator();
    let theta = pp.theta();
    let num = riesz_potential_with(kernel, &chi, mu)?;
    let mb = frac_maximal_best(&chi, mu, pp.beta(), pp.d, lats)?;
    let m0 = frac_maximal_best(&chi, mu, 0.0, pp.d, lats)?;
    let grid = mu.grid();
    let per_leaf = par::map_range(grid.num_cells(), |i| {
        let nv = num.get(i).abs();
        let dv = mb.get(i).powf(theta) * m0.get(i).powf(1.0 - theta);
        (nv, dv)
    });
    let mut report = DominationReport {
        max_ratio: 0.0,
        argmax: 0,
        numerator: 0.0,
        denominator: 0.0,
    };
    for (i, &(nv, dv)) in per_leaf.iter().enumerate() {
        if dv == 0.0 {
            if nv != 0.0 {
                let c = grid.coords(i);
                return Err(Error::ZeroDenominator {
                    at: format!("leaf {:?}", &c[..grid.n()]),
                    numerator: nv,
                });
            }
            continue;
        }
        let ratio = nv / dv;
        if ratio > report.max_ratio {
            report = DominationReport {
                max_ratio: ratio,
                argmax: i,
                numerator: nv,
                denominator: dv,
            };
        }
    }
    Ok(report)
}

/// The smallest `C` with `((|Gf|^λp)**(t))^{1/λp} ≤ C·(R f*(t) + tail)` on
/// `t_grid`, where `G` sums the `M_δ` over all lattices, `(Gf)*` is taken
/// with respect to `ν`, `f*` with respect to `μ`, and `R = R_{αp/δ, d/δ}`.
pub fn sawyer_g_constant(
    f: &GridFunction,
    mu: &DyadicMeasure,
    nu: &DyadicMeasure,
    pp: &PotentialParams,
    lats: &DyadicLatticeSet,
    t_grid: &[f64],
) -> Result<f64> {
    nu.grid().check_same(mu.grid())?;
    let gf = g_operator(f, mu, pp.delta, pp.d, lats)?;
    let tf = rearrange_wrt_measure(&gf, nu)?;
    let fs = rearrange_wrt_measure(f, mu)?;
    sawyer_pointwise_check(&tf, &fs, &pp.sawyer_params()?, t_grid)
}
