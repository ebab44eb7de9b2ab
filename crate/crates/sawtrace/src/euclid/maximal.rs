use crate::error::{Error, Result};
use crate::par;

use super::grid::{DyadicMeasure, GridFunction};
use super::lattice::{DyadicLatticeSet, Lattice};

fn check_beta(beta: f64, d: f64) -> Result<()> {
    if !(d > 0.0 && beta >= 0.0 && beta < d) {
        return Err(Error::Range(format!("need 0 ≤ β < d, got β = {beta}, d = {d}")));
    }
    Ok(())
}

/// `sup_{Q ∋ x} μ(Q)^{β/d−1} ∫_Q |f| dμ` over the cubes of one lattice,
/// at every leaf centre `x`. Cubes with `μ(Q) = 0` contribute 0.
pub fn frac_maximal(f: &GridFunction, mu: &DyadicMeasure, beta: f64, d: f64, lat: &Lattice) -> Result<GridFunction> {
    check_beta(beta, d)?;
    let grid = mu.grid();
    grid.check_same(f.grid())?;
    let (w, v) = (mu.weights(), f.values());
    let e = beta / d - 1.0;
    let per_depth: Vec<Vec<f64>> = (0..=grid.depth())
        .map(|k| {
            let mass = lat.cube_masses(mu, k);
            let int = lat.cube_sums(grid, k, |leaf| v[leaf].abs() * w[leaf]);
            mass.iter()
                .zip(&int)
                .map(|(&m, &i)| {
                    if m == 0.0 {
                        0.0
                    } else if beta == 0.0 {
                        i / m
                    } else {
                        i * m.powf(e)
                    }
                })
                .collect()
        })
        .collect();
    let values = par::map_range(grid.num_cells(), |leaf| {
        (0..=grid.depth()).fold(0.0, |acc: f64, k| {
            acc.max(per_depth[k as usize][lat.cube_of_leaf(k, leaf)])
        })
    });
    GridFunction::new(grid.clone(), values)
}

/// Leafwise maximum of [`frac_maximal`] over all lattices of the set.
pub fn frac_maximal_best(
    f: &GridFunction,
    mu: &DyadicMeasure,
    beta: f64,
    d: f64,
    lats: &DyadicLatticeSet,
) -> Result<GridFunction> {
    combine(f, mu, beta, d, lats, f64::max)
}

/// `G f = Σ_j M^{μ,j}_δ f`, the sum over all lattices of the set.
pub fn g_operator(
    f: &GridFunction,
    mu: &DyadicMeasure,
    delta: f64,
    d: f64,
    lats: &DyadicLatticeSet,
) -> Result<GridFunction> {
    combine(f, mu, delta, d, lats, |a, b| a + b)
}

fn combine(
    f: &GridFunction,
    mu: &DyadicMeasure,
    beta: f64,
    d: f64,
    lats: &DyadicLatticeSet,
    op: fn(f64, f64) -> f64,
) -> Result<GridFunction> {
    lats.grid().check_same(mu.grid())?;
    let mut acc = vec![0.0; mu.grid().num_cells()];
    for lat in lats.lattices() {
        let m = frac_maximal(f, mu, beta, d, lat)?;
        for (a, &x) in acc.iter_mut().zip(m.values()) {
            *a = op(*a, x);
        }
    }
    GridFunction::new(mu.grid().clone(), acc)
}
