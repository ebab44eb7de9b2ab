use crate::error::{Error, Result};
use crate::par;

use super::grid::{DyadicMeasure, Grid, GridFunction};

/// `|x − y|^{α−d}` between leaf cells, tabulated by the per-axis index
/// offset `(|Δ₀|, |Δ₁|)`, which makes it exactly symmetric.
///
/// - offsets with centre distance `≥ 2` leaf sides: the point kernel;
/// - nearer distinct cells: the mean over the `3ⁿ × 3ⁿ` pairs of subcell
///   midpoints;
/// - the cell with itself: the same `3ⁿ × 3ⁿ` average, with the `3ⁿ`
///   coincident pairs replaced by the self term of the subcells, which is
///   `3^{d−α}` times that of the cell. Solving for it gives
///   `S = Σ_{a≠b} k(a,b) / (9ⁿ − 3^{n+d−α})`.
#[derive(Clone, Debug)]
pub struct RieszKernel {
    n: usize,
    per_axis: usize,
    table: Vec<f64>,
}

impl RieszKernel {
    pub fn new(grid: &Grid, alpha: f64, d: f64) -> Result<Self> {
        if !(d > 0.0 && alpha > 0.0 && alpha < d) {
            return Err(Error::Range(format!("need 0 < α < d, got α = {alpha}, d = {d}")));
        }
        let n = grid.n();
        let h = grid.leaf_side();
        let e = alpha - d;
        let m = grid.per_axis();
        let subs: Vec<[f64; 2]> = match n {
            1 => (0..3).map(|a| [(a as f64 - 1.0) / 3.0, 0.0]).collect(),
            _ => (0..9)
                .map(|a| [((a / 3) as f64 - 1.0) / 3.0, ((a % 3) as f64 - 1.0) / 3.0])
                .collect(),
        };
        let near = |off: [f64; 2], skip_diagonal: bool| -> f64 {
            let mut s = 0.0;
            for (i, x) in subs.iter().enumerate() {
                for (j, y) in subs.iter().enumerate() {
                    if skip_diagonal && i == j {
                        continue;
                    }
                    let r2 = (0..n).map(|a| (off[a] + y[a] - x[a]).powi(2)).sum::<f64>();
                    s += (h * r2.sqrt()).powf(e);
                }
            }
            s
        };
        let pairs = (subs.len() * subs.len()) as f64;
        let size = m.pow(n as u32);
        let table = par::map_range(size, |idx| {
            let off = if n == 1 {
                [idx as f64, 0.0]
            } else {
                [(idx / m) as f64, (idx % m) as f64]
            };
            let r2 = off[0] * off[0] + off[1] * off[1];
            if r2 >= 4.0 {
                (h * r2.sqrt()).powf(e)
            } else if r2 > 0.0 {
                near(off, false) / pairs
            } else {
                near(off, true) / (pairs - 3f64.powf(n as f64 + d - alpha))
            }
        });
        Ok(RieszKernel { n, per_axis: m, table })
    }

    /// Kernel between two leaves, given their per-axis indices.
    pub fn between(&self, a: [usize; 2], b: [usize; 2]) -> f64 {
        let d0 = a[0].abs_diff(b[0]);
        if self.n == 1 {
            self.table[d0]
        } else {
            self.table[d0 * self.per_axis + a[1].abs_diff(b[1])]
        }
    }

    /// Self term of a leaf.
    pub fn diagonal(&self) -> f64 {
        self.table[0]
    }
}

/// `I_α^μ f(x_i) = Σ_j f_j μ_j k(i, j)` at every leaf centre, with the
/// kernel of [`RieszKernel`].
pub fn riesz_potential(f: &GridFunction, mu: &DyadicMeasure, alpha: f64, d: f64) -> Result<GridFunction> {
    let kernel = RieszKernel::new(mu.grid(), alpha, d)?;
    riesz_potential_with(&kernel, f, mu)
}

/// [`riesz_potential`] with a prebuilt kernel.
pub fn riesz_potential_with(kernel: &RieszKernel, f: &GridFunction, mu: &DyadicMeasure) -> Result<GridFunction> {
    let grid = mu.grid();
    grid.check_same(f.grid())?;
    if kernel.n != grid.n() || kernel.per_axis != grid.per_axis() {
        return Err(Error::GridMismatch("kernel built for a different grid".into()));
    }
    let sources: Vec<([usize; 2], f64)> = f
        .values()
        .iter()
        .zip(mu.weights())
        .enumerate()
        .filter_map(|(j, (&v, &w))| {
            let c = v * w;
            (c != 0.0).then(|| (grid.coords(j), c))
        })
        .collect();
    let values = par::map_range(grid.num_cells(), |i| {
        let xi = grid.coords(i);
        sources.iter().map(|&(xj, c)| c * kernel.between(xi, xj)).sum()
    });
    GridFunction::new(grid.clone(), values)
}
