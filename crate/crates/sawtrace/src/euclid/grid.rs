use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::fsum;

/// Largest supported number of leaf cells.
pub const MAX_CELLS: usize = 1 << 24;

/// The uniform grid of `2^{nK}` leaf cells of a base cube `Q₀ ⊂ ℝⁿ`.
///
/// Leaves are numbered in row-major order with the first coordinate varying
/// slowest: in the plane, leaf `(i₀, i₁)` has index `i₀·2^K + i₁`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n: usize,
    corner: Vec<f64>,
    side: f64,
    depth: u32,
}

impl Grid {
    pub fn new(n: usize, corner: Vec<f64>, side: f64, depth: u32) -> Result<Self> {
        if n != 1 && n != 2 {
            return Err(Error::Range(format!("dimension {n} is not supported (use 1 or 2)")));
        }
        if corner.len() != n || corner.iter().any(|c| !c.is_finite()) {
            return Err(Error::Range(format!(
                "corner {corner:?} must have {n} finite coordinates"
            )));
        }
        if !(side > 0.0 && side.is_finite()) {
            return Err(Error::Range(format!("side {side} must be positive and finite")));
        }
        if (n as u64) * (depth as u64) > 24 {
            return Err(Error::Range(format!(
                "depth {depth} in dimension {n} exceeds {MAX_CELLS} cells"
            )));
        }
        Ok(Grid { n, corner, side, depth })
    }

    /// `[0,1)ⁿ` at depth `K`.
    pub fn unit(n: usize, depth: u32) -> Result<Self> {
        Self::new(n, vec![0.0; n], 1.0, depth)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn corner(&self) -> &[f64] {
        &self.corner
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `2^K`.
    pub fn per_axis(&self) -> usize {
        1 << self.depth
    }

    pub fn num_cells(&self) -> usize {
        1 << (self.n as u32 * self.depth)
    }

    pub fn leaf_side(&self) -> f64 {
        self.side * 2f64.powi(-(self.depth as i32))
    }

    /// Lebesgue measure of one leaf.
    pub fn leaf_volume(&self) -> f64 {
        self.leaf_side().powi(self.n as i32)
    }

    /// Per-axis indices of a leaf (second entry 0 when `n = 1`).
    pub fn coords(&self, leaf: usize) -> [usize; 2] {
        if self.n == 1 {
            [leaf, 0]
        } else {
            [leaf >> self.depth, leaf & (self.per_axis() - 1)]
        }
    }

    pub fn leaf_index(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.n || idx.iter().any(|&i| i >= self.per_axis()) {
            return Err(Error::Range(format!(
                "cell index {idx:?} outside a {}-dimensional grid with {} cells per axis",
                self.n,
                self.per_axis()
            )));
        }
        Ok(idx.iter().fold(0, |acc, &i| (acc << self.depth) | i))
    }

    pub fn center(&self, leaf: usize) -> [f64; 2] {
        let c = self.coords(leaf);
        let h = self.leaf_side();
        let mut x = [0.0; 2];
        for a in 0..self.n {
            x[a] = self.corner[a] + (c[a] as f64 + 0.5) * h;
        }
        x
    }

    /// The same cube at depth `K + levels`.
    pub fn refined(&self, levels: u32) -> Result<Self> {
        Self::new(self.n, self.corner.clone(), self.side, self.depth + levels)
    }

    /// For each leaf of `fine` (a refinement of `self`), the leaf of `self`
    /// containing it.
    pub fn parent_map(&self, fine: &Grid) -> Result<Vec<usize>> {
        if fine.n != self.n || fine.corner != self.corner || fine.side != self.side || fine.depth < self.depth {
            return Err(Error::GridMismatch(format!(
                "depth-{} grid is not a refinement of the depth-{} grid",
                fine.depth, self.depth
            )));
        }
        let shift = fine.depth - self.depth;
        Ok((0..fine.num_cells())
            .map(|leaf| {
                let c = fine.coords(leaf);
                let mut idx = 0;
                for &ci in &c[..self.n] {
                    idx = (idx << self.depth) | (ci >> shift);
                }
                idx
            })
            .collect())
    }

    pub(crate) fn check_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "n={}, depth={} vs n={}, depth={} (or different base cubes)",
                self.n, self.depth, other.n, other.depth
            )))
        }
    }
}

/// Sparse file layout shared by measures and grid functions: unlisted cells
/// are zero.
#[derive(Serialize, Deserialize)]
struct SparseGrid {
    n: usize,
    corner: Vec<f64>,
    side: f64,
    depth: u32,
    cells: Vec<serde_json::Value>,
}

fn to_sparse(grid: &Grid, values: &[f64]) -> SparseGrid {
    let cells = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(leaf, &v)| {
            let c = grid.coords(leaf);
            let mut row: Vec<serde_json::Value> = c[..grid.n].iter().map(|&i| i.into()).collect();
            row.push(v.into());
            serde_json::Value::Array(row)
        })
        .collect();
    SparseGrid {
        n: grid.n,
        corner: grid.corner.clone(),
        side: grid.side,
        depth: grid.depth,
        cells,
    }
}

fn from_sparse(s: SparseGrid) -> Result<(Grid, Vec<f64>)> {
    let grid = Grid::new(s.n, s.corner, s.side, s.depth)?;
    let mut values = vec![0.0; grid.num_cells()];
    for entry in &s.cells {
        let row = match entry.as_array() {
            Some(row) if row.len() == grid.n + 1 => row,
            _ => {
                return Err(Error::Format(format!(
                    "cell entry {entry} must hold {} indices and a value",
                    grid.n
                )))
            }
        };
        let mut idx = Vec::with_capacity(grid.n);
        for x in &row[..grid.n] {
            let i = x
                .as_u64()
                .ok_or_else(|| Error::Format(format!("cell index {x} is not a nonnegative integer")))?;
            idx.push(i as usize);
        }
        let v = row[grid.n]
            .as_f64()
            .ok_or_else(|| Error::Format(format!("cell value {} is not a number", row[grid.n])))?;
        values[grid.leaf_index(&idx)?] = v;
    }
    Ok((grid, values))
}

/// Nonnegative weights on the leaves of a [`Grid`]: an atomic stand-in for a
/// Radon measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SparseGrid", into = "SparseGrid")]
pub struct DyadicMeasure {
    grid: Grid,
    weights: Vec<f64>,
}

impl TryFrom<SparseGrid> for DyadicMeasure {
    type Error = Error;
    fn try_from(s: SparseGrid) -> Result<Self> {
        let (grid, w) = from_sparse(s)?;
        DyadicMeasure::new(grid, w)
    }
}

impl From<DyadicMeasure> for SparseGrid {
    fn from(m: DyadicMeasure) -> Self {
        to_sparse(&m.grid, &m.weights)
    }
}

impl DyadicMeasure {
    pub fn new(grid: Grid, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != grid.num_cells() {
            return Err(Error::GridMismatch(format!(
                "{} weights for {} cells",
                weights.len(),
                grid.num_cells()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::Range(format!("weight {w} is not finite and nonnegative")));
        }
        Ok(DyadicMeasure { grid, weights })
    }

    pub fn zero(grid: Grid) -> Self {
        let weights = vec![0.0; grid.num_cells()];
        DyadicMeasure { grid, weights }
    }

    /// Leaf weights equal to leaf volumes.
    pub fn lebesgue(grid: Grid) -> Self {
        let weights = vec![grid.leaf_volume(); grid.num_cells()];
        DyadicMeasure { grid, weights }
    }

    /// Equal weights with the given total.
    pub fn uniform(grid: Grid, total: f64) -> Result<Self> {
        let w = total / grid.num_cells() as f64;
        Self::new(grid.clone(), vec![w; grid.num_cells()])
    }

    pub fn point_mass(grid: Grid, leaf: usize, mass: f64) -> Result<Self> {
        let mut weights = vec![0.0; grid.num_cells()];
        *weights
            .get_mut(leaf)
            .ok_or_else(|| Error::Range(format!("leaf {leaf} out of range")))? = mass;
        Self::new(grid, weights)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total(&self) -> f64 {
        fsum(self.weights.iter().copied())
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        Self::new(self.grid.clone(), self.weights.iter().map(|w| w * c).collect())
    }

    /// The same measure on a finer grid, each leaf weight split evenly among
    /// its `2^{n·levels}` children.
    pub fn refined(&self, levels: u32) -> Result<Self> {
        let fine = self.grid.refined(levels)?;
        let parts = 2f64.powi((self.grid.n as u32 * levels) as i32);
        let weights = self
            .grid
            .parent_map(&fine)?
            .into_iter()
            .map(|p| self.weights[p] / parts)
            .collect();
        Self::new(fine, weights)
    }
}

/// One finite real value per leaf.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SparseGrid", into = "SparseGrid")]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl TryFrom<SparseGrid> for GridFunction {
    type Error = Error;
    fn try_from(s: SparseGrid) -> Result<Self> {
        let (grid, v) = from_sparse(s)?;
        GridFunction::new(grid, v)
    }
}

impl From<GridFunction> for SparseGrid {
    fn from(f: GridFunction) -> Self {
        to_sparse(&f.grid, &f.values)
    }
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.num_cells() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} cells",
                values.len(),
                grid.num_cells()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Range(format!("grid function value {v} is not finite")));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn zero(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        let values = vec![c; grid.num_cells()];
        GridFunction { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, leaf: usize) -> f64 {
        self.values[leaf]
    }

    /// Piecewise-constant extension to a finer grid.
    pub fn refined(&self, levels: u32) -> Result<Self> {
        let fine = self.grid.refined(levels)?;
        let values = self
            .grid
            .parent_map(&fine)?
            .into_iter()
            .map(|p| self.values[p])
            .collect();
        Self::new(fine, values)
    }

    /// Dense export: header `leaf,value`, one row per leaf in index order.
    pub fn to_dense_csv(&self) -> String {
        let mut out = String::from("leaf,value\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{i},{v:.16e}\n"));
        }
        out
    }
}

/// A set of leaf cells.
#[derive(Clone, Debug, PartialEq)]
pub struct CellSet {
    grid: Grid,
    members: Vec<bool>,
}

impl CellSet {
    pub fn new(grid: Grid, leaves: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members = vec![false; grid.num_cells()];
        for leaf in leaves {
            *members
                .get_mut(leaf)
                .ok_or_else(|| Error::Range(format!("leaf {leaf} out of range")))? = true;
        }
        Ok(CellSet { grid, members })
    }

    pub fn empty(grid: Grid) -> Self {
        let members = vec![false; grid.num_cells()];
        CellSet { grid, members }
    }

    pub fn from_mask(grid: Grid, members: Vec<bool>) -> Result<Self> {
        if members.len() != grid.num_cells() {
            return Err(Error::GridMismatch(format!(
                "mask of length {} for {} cells",
                members.len(),
                grid.num_cells()
            )));
        }
        Ok(CellSet { grid, members })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn mask(&self) -> &[bool] {
        &self.members
    }

    pub fn contains(&self, leaf: usize) -> bool {
        self.members[leaf]
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i)
    }

    /// Lebesgue measure of the union of member cells.
    pub fn volume(&self) -> f64 {
        self.len() as f64 * self.grid.leaf_volume()
    }

    pub fn indicator(&self) -> GridFunction {
        let values = self.members.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect();
        GridFunction {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn refined(&self, levels: u32) -> Result<Self> {
        let fine = self.grid.refined(levels)?;
        let members = self
            .grid
            .parent_map(&fine)?
            .into_iter()
            .map(|p| self.members[p])
            .collect();
        Ok(CellSet { grid: fine, members })
    }
}
