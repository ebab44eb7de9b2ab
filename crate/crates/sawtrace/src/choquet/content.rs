use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euclid::{CellSet, Grid, GridFunction};
use crate::numeric::fsum;

/// Exponent `s` of the content `H^s`; `0 < s ≤ n` is checked against the
/// grid when used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContentParams {
    pub s: f64,
}

impl ContentParams {
    pub fn new(s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Range(format!("content exponent s = {s} must be positive")));
        }
        Ok(ContentParams { s })
    }

    pub(crate) fn check(&self, grid: &Grid) -> Result<()> {
        if self.s > grid.n() as f64 {
            return Err(Error::Range(format!(
                "content exponent s = {} exceeds the dimension {}",
                self.s,
                grid.n()
            )));
        }
        Ok(())
    }
}

/// `ℓ_k^s` for `k = 0..=K`.
pub(crate) fn level_costs(grid: &Grid, s: f64) -> Vec<f64> {
    (0..=grid.depth())
        .map(|k| (grid.side() * 2f64.powi(-(k as i32))).powf(s))
        .collect()
}

/// The dyadic tree of a grid with, at every node, the least cost
/// `Σ ℓ(Q)^s` of a cover of the marked leaves below it by tree cubes.
///
/// A node's value is 0 when nothing below it is marked, `ℓ_K^s` for a marked
/// leaf and otherwise `min(ℓ(node)^s, Σ children)` with the children summed
/// in index order. Marking leaves one at a time recomputes only the path to
/// the root, with the same arithmetic as a full bottom-up pass.
#[derive(Clone, Debug)]
pub struct ContentTree {
    grid: Grid,
    costs: Vec<f64>,
    /// `levels[k]` holds the `2^{nk}` node values of generation `k`, laid
    /// out like the leaves of a depth-`k` grid.
    levels: Vec<Vec<f64>>,
    marked: Vec<bool>,
}

impl ContentTree {
    pub fn new(grid: &Grid, cp: ContentParams) -> Result<Self> {
        cp.check(grid)?;
        let levels = (0..=grid.depth())
            .map(|k| vec![0.0; 1usize << (grid.n() as u32 * k)])
            .collect();
        Ok(ContentTree {
            grid: grid.clone(),
            costs: level_costs(grid, cp.s),
            levels,
            marked: vec![false; grid.num_cells()],
        })
    }

    /// Tree for a given set, built bottom-up in one pass.
    pub fn from_set(e: &CellSet, cp: ContentParams) -> Result<Self> {
        let mut t = Self::new(e.grid(), cp)?;
        let depth = t.grid.depth() as usize;
        for (leaf, &m) in e.mask().iter().enumerate() {
            t.marked[leaf] = m;
            t.levels[depth][leaf] = if m { t.costs[depth] } else { 0.0 };
        }
        for k in (0..depth).rev() {
            for node in 0..t.levels[k].len() {
                t.levels[k][node] = t.combine(k, node);
            }
        }
        Ok(t)
    }

    fn children(&self, k: usize, node: usize) -> [usize; 4] {
        let k = k as u32;
        if self.grid.n() == 1 {
            [2 * node, 2 * node + 1, usize::MAX, usize::MAX]
        } else {
            let (i0, i1) = (node >> k, node & ((1 << k) - 1));
            let row = |a: usize| (2 * i0 + a) << (k + 1);
            [
                row(0) | (2 * i1),
                row(0) | (2 * i1 + 1),
                row(1) | (2 * i1),
                row(1) | (2 * i1 + 1),
            ]
        }
    }

    fn parent(&self, k: usize, node: usize) -> usize {
        if self.grid.n() == 1 {
            node / 2
        } else {
            let k = k as u32;
            let (i0, i1) = (node >> k, node & ((1 << k) - 1));
            ((i0 / 2) << (k - 1)) | (i1 / 2)
        }
    }

    fn combine(&self, k: usize, node: usize) -> f64 {
        let mut sum = 0.0;
        for c in self.children(k, node) {
            if c != usize::MAX {
                sum += self.levels[k + 1][c];
            }
        }
        if sum == 0.0 {
            0.0
        } else {
            self.costs[k].min(sum)
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Content of the marked set, as accumulated by the tree.
    pub fn content(&self) -> f64 {
        self.levels[0][0]
    }

    /// An optimal cover as `(generation, node)` pairs: a node is taken
    /// whole when its cost does not exceed the sum over its children.
    pub fn optimal_cover(&self) -> Vec<(u32, usize)> {
        let depth = self.grid.depth() as usize;
        let mut out = Vec::new();
        let mut stack = vec![(0usize, 0usize)];
        while let Some((k, node)) = stack.pop() {
            if self.levels[k][node] == 0.0 {
                continue;
            }
            if k == depth || self.levels[k][node] == self.costs[k] {
                out.push((k as u32, node));
                continue;
            }
            for c in self.children(k, node).into_iter().rev() {
                if c != usize::MAX {
                    stack.push((k + 1, c));
                }
            }
        }
        out
    }

    /// Cost of [`optimal_cover`](Self::optimal_cover), correctly rounded.
    pub fn cover_cost(&self) -> f64 {
        fsum(self.optimal_cover().into_iter().map(|(k, _)| self.costs[k as usize]))
    }

    pub fn is_marked(&self, leaf: usize) -> bool {
        self.marked[leaf]
    }

    /// Marks a leaf and updates its ancestors.
    pub fn mark(&mut self, leaf: usize) {
        if self.marked[leaf] {
            return;
        }
        self.marked[leaf] = true;
        let depth = self.grid.depth() as usize;
        self.levels[depth][leaf] = self.costs[depth];
        let mut node = leaf;
        for k in (0..depth).rev() {
            node = self.parent(k + 1, node);
            self.levels[k][node] = self.combine(k, node);
        }
    }
}

/// Least `Σ ℓ(Q)^s` over covers of the cells of `E` by dyadic subcubes of
/// `Q₀` of generation at most `K`, summed exactly over an optimal cover.
pub fn dyadic_content(e: &CellSet, cp: ContentParams) -> Result<f64> {
    Ok(ContentTree::from_set(e, cp)?.cover_cost())
}

/// Choquet integral `∫ g dH^s = Σ_k (t_k − t_{k−1})·H^s({g ≥ t_k})` over the
/// distinct positive values `t₁ < … < t_M` of `g` (`t₀ = 0`).
pub fn choquet_integral(g: &GridFunction, cp: ContentParams) -> Result<f64> {
    if let Some(v) = g.values().iter().find(|&&v| v < 0.0) {
        return Err(Error::Range(format!("Choquet integrand has negative value {v}")));
    }
    let mut order: Vec<usize> = (0..g.values().len()).filter(|&i| g.get(i) > 0.0).collect();
    order.sort_by(|&a, &b| g.get(b).total_cmp(&g.get(a)).then(a.cmp(&b)));
    let mut tree = ContentTree::new(g.grid(), cp)?;
    // (t_k, H^s({g ≥ t_k})) in decreasing t
    let mut layers: Vec<(f64, f64)> = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let t = g.get(order[i]);
        while i < order.len() && g.get(order[i]) == t {
            tree.mark(order[i]);
            i += 1;
        }
        layers.push((t, tree.content()));
    }
    let mut total = 0.0;
    let mut prev = 0.0;
    for &(t, c) in layers.iter().rev() {
        total += (t - prev) * c;
        prev = t;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(s: f64) -> ContentParams {
        ContentParams::new(s).unwrap()
    }

    #[test]
    fn single_leaf_and_full_grid() {
        for (n, k) in [(1, 5), (2, 3)] {
            let grid = Grid::unit(n, k).unwrap();
            for s in [0.5, 1.0, n as f64] {
                let one = CellSet::new(grid.clone(), [3]).unwrap();
                assert_eq!(dyadic_content(&one, cp(s)).unwrap(), 2f64.powf(-(k as f64) * s));
                let all = CellSet::new(grid.clone(), 0..grid.num_cells()).unwrap();
                assert_eq!(dyadic_content(&all, cp(s)).unwrap(), 1.0);
            }
        }
        assert!(dyadic_content(&CellSet::empty(Grid::unit(1, 2).unwrap()), cp(1.5)).is_err());
    }

    #[test]
    fn lebesgue_exponent_gives_volume() {
        let grid = Grid::unit(2, 4).unwrap();
        let e = CellSet::new(grid.clone(), (0..256).filter(|i| (i * 7) % 5 < 2)).unwrap();
        assert_eq!(dyadic_content(&e, cp(2.0)).unwrap(), e.volume());
    }

    #[test]
    fn incremental_tree_matches_full_pass() {
        let grid = Grid::unit(2, 4).unwrap();
        let mut tree = ContentTree::new(&grid, cp(1.3)).unwrap();
        let mut leaves = Vec::new();
        for step in 0..100 {
            let leaf = (step * 97 + 13) % 256;
            tree.mark(leaf);
            leaves.push(leaf);
            let full =
                ContentTree::from_set(&CellSet::new(grid.clone(), leaves.iter().copied()).unwrap(), cp(1.3)).unwrap();
            assert_eq!(tree.content().to_bits(), full.content().to_bits());
            assert!((tree.cover_cost() - tree.content()).abs() <= 1e-14 * tree.content());
        }
    }

    #[test]
    fn optimal_cover_covers_exactly_the_set() {
        let grid = Grid::unit(2, 3).unwrap();
        let e = CellSet::new(grid.clone(), [0, 1, 8, 9, 27, 63]).unwrap();
        let tree = ContentTree::from_set(&e, cp(1.0)).unwrap();
        let mut cover = tree.optimal_cover();
        cover.sort();
        // the 2×2 block at the corner, then two single leaves
        assert_eq!(cover, [(2, 0), (3, 27), (3, 63)]);
        assert_eq!(tree.cover_cost(), 0.25 + 0.125 + 0.125);
    }

    #[test]
    fn choquet_examples() {
        let grid = Grid::unit(2, 3).unwrap();
        let e1 = CellSet::new(grid.clone(), [0, 1, 9]).unwrap();
        let e2 = CellSet::new(grid.clone(), [0, 1, 9, 30, 31, 63]).unwrap();
        let c = cp(1.0);
        let g = GridFunction::new(grid.clone(), e1.indicator().values().iter().map(|v| 3.0 * v).collect()).unwrap();
        assert_eq!(choquet_integral(&g, c).unwrap(), 3.0 * dyadic_content(&e1, c).unwrap());
        let two: Vec<f64> = (0..64)
            .map(|i| {
                if e1.contains(i) {
                    2.0
                } else if e2.contains(i) {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        let g = GridFunction::new(grid.clone(), two).unwrap();
        let expect = dyadic_content(&e2, c).unwrap() + dyadic_content(&e1, c).unwrap();
        assert_eq!(choquet_integral(&g, c).unwrap(), expect);
        assert_eq!(choquet_integral(&GridFunction::zero(grid.clone()), c).unwrap(), 0.0);
        let neg = GridFunction::constant(grid, -1.0);
        assert!(choquet_integral(&neg, c).is_err());
    }
}
