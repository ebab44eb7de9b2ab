use crate::error::{Error, Result};
use crate::par;
use crate::stepfun::StepFunction;

use super::grid::{DyadicMeasure, GridFunction};
use super::lattice::DyadicLatticeSet;

/// `max μ(Q)/ℓ(Q)^d` over every cube of every lattice and generation.
pub fn growth_constant(mu: &DyadicMeasure, d: f64, lats: &DyadicLatticeSet) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::Range(format!("growth exponent d = {d} must be positive")));
    }
    let grid = lats.grid();
    grid.check_same(mu.grid())?;
    let masses = cube_masses(mu, lats);
    Ok(lats.max_over_cubes(|j, k, c| {
        let side = grid.side() * 2f64.powi(-(k as i32));
        masses[slot(lats, j, k)][c] / side.powf(d)
    }))
}

/// `max ν(Q)/μ(Q)^{1−αp/d}` over the cubes of every lattice and generation
/// with `μ(Q) > 0` (0 for an empty family).
pub fn two_weight_constant(
    mu: &DyadicMeasure,
    nu: &DyadicMeasure,
    alpha: f64,
    p: f64,
    d: f64,
    lats: &DyadicLatticeSet,
) -> Result<f64> {
    if !(alpha > 0.0 && p > 0.0 && alpha * p < d) {
        return Err(Error::Range(format!(
            "need 0 < αp < d, got α = {alpha}, p = {p}, d = {d}"
        )));
    }
    lats.grid().check_same(mu.grid())?;
    lats.grid().check_same(nu.grid())?;
    let e = 1.0 - alpha * p / d;
    let mm = cube_masses(mu, lats);
    let nm = cube_masses(nu, lats);
    Ok(lats.max_over_cubes(|j, k, c| {
        let s = slot(lats, j, k);
        let m = mm[s][c];
        if m > 0.0 {
            nm[s][c] / m.powf(e)
        } else {
            0.0
        }
    }))
}

fn slot(lats: &DyadicLatticeSet, j: usize, k: u32) -> usize {
    j * (lats.grid().depth() as usize + 1) + k as usize
}

fn cube_masses(mu: &DyadicMeasure, lats: &DyadicLatticeSet) -> Vec<Vec<f64>> {
    let depth = lats.grid().depth();
    let jobs: Vec<(usize, u32)> = (0..lats.len()).flat_map(|j| (0..=depth).map(move |k| (j, k))).collect();
    par::map_slice(&jobs, |&(j, k)| lats.lattices()[j].cube_masses(mu, k))
}

/// `f*_μ`: the cells sorted by `|f|` in decreasing order (stable), laid end
/// to end with lengths equal to their weights; zero-weight cells are dropped.
pub fn rearrange_wrt_measure(f: &GridFunction, mu: &DyadicMeasure) -> Result<StepFunction> {
    f.grid().check_same(mu.grid())?;
    if !(mu.total() > 0.0) {
        return Err(Error::Range("measure has zero total mass".into()));
    }
    let mut pieces: Vec<(f64, f64)> = f
        .values()
        .iter()
        .zip(mu.weights())
        .filter(|(_, &w)| w > 0.0)
        .map(|(&v, &w)| (w, v.abs()))
        .collect();
    par::sort_by(&mut pieces, |a, b| b.1.total_cmp(&a.1));
    StepFunction::from_lengths(&pieces)
}
