//! Reference content by search over covers, independent of the tree DP.
//!
//! Every minimal cover of `E` by tree cubes is an antichain. The search walks
//! antichain covers depth first: the first pending cube (one that still
//! contains uncovered marked leaves) is either taken whole or replaced by its
//! children that contain marked leaves. Branches whose cost plus a lower
//! bound for the pending cubes cannot beat the best complete cover found so
//! far are cut. The bound for a cube of generation `k` holding `m` marked
//! leaves is `min_{j ≥ k} m·ℓ_j^s / 2^{n(K−j)}`, since a generation-`j` cube
//! covers at most `2^{n(K−j)}` leaves.
//!
//! Intended for grids with at most a few dozen leaves.

use crate::error::{Error, Result};
use crate::euclid::CellSet;
use crate::numeric::fsum;

use super::content::{level_costs, ContentParams};

/// Largest grid accepted by [`enumerate_content`].
pub const MAX_ENUMERATION_LEAVES: usize = 64;

struct Search<'a> {
    n: u32,
    depth: u32,
    costs: Vec<f64>,
    mask: &'a [bool],
    best: f64,
    taken: Vec<u32>,
    best_cover: Vec<u32>,
}

/// A cube of the tree: generation and per-axis position.
#[derive(Clone, Copy)]
struct Cube {
    k: u32,
    i: [usize; 2],
}

impl Search<'_> {
    /// Marked leaves inside a cube.
    fn marked(&self, c: Cube) -> usize {
        let span = 1usize << (self.depth - c.k);
        let per_axis = 1usize << self.depth;
        let mut count = 0;
        let rows = if self.n == 1 { 1 } else { span };
        for a in 0..span {
            for b in 0..rows {
                let leaf = if self.n == 1 {
                    c.i[0] * span + a
                } else {
                    (c.i[0] * span + a) * per_axis + c.i[1] * span + b
                };
                count += self.mask[leaf] as usize;
            }
        }
        count
    }

    fn lower_bound(&self, c: Cube, m: usize) -> f64 {
        (c.k..=self.depth)
            .map(|j| m as f64 * self.costs[j as usize] / 2f64.powi((self.n * (self.depth - j)) as i32))
            .fold(f64::INFINITY, f64::min)
    }

    fn children(&self, c: Cube) -> Vec<Cube> {
        let k = c.k + 1;
        let mut out = Vec::new();
        for a in 0..2 {
            if self.n == 1 {
                out.push(Cube {
                    k,
                    i: [2 * c.i[0] + a, 0],
                });
            } else {
                for b in 0..2 {
                    out.push(Cube {
                        k,
                        i: [2 * c.i[0] + a, 2 * c.i[1] + b],
                    });
                }
            }
        }
        out
    }

    /// `pending` holds cubes with their marked counts and bounds.
    fn run(&mut self, pending: &mut Vec<(Cube, usize, f64)>, cost: f64, bound: f64) {
        if cost + bound >= self.best {
            return;
        }
        let Some((cube, m, lb)) = pending.pop() else {
            self.best = cost;
            self.best_cover.clone_from(&self.taken);
            return;
        };
        // take the whole cube
        self.taken.push(cube.k);
        self.run(pending, cost + self.costs[cube.k as usize], bound - lb);
        self.taken.pop();
        // or cover its marked children separately
        if cube.k < self.depth {
            let kids: Vec<(Cube, usize, f64)> = self
                .children(cube)
                .into_iter()
                .filter_map(|c| {
                    let mc = self.marked(c);
                    (mc > 0).then(|| (c, mc, self.lower_bound(c, mc)))
                })
                .collect();
            let added: f64 = kids.iter().map(|k| k.2).sum();
            let len = pending.len();
            pending.extend(kids);
            self.run(pending, cost, bound - lb + added);
            pending.truncate(len);
        }
        pending.push((cube, m, lb));
    }
}

/// Minimum of `Σ ℓ(Q)^s` over all sets of tree cubes covering `E`, summed
/// exactly over the best cover found.
pub fn enumerate_content(e: &CellSet, cp: ContentParams) -> Result<f64> {
    let grid = e.grid();
    cp.check(grid)?;
    if grid.num_cells() > MAX_ENUMERATION_LEAVES {
        return Err(Error::Range(format!(
            "enumeration is limited to {MAX_ENUMERATION_LEAVES} leaves, grid has {}",
            grid.num_cells()
        )));
    }
    let mut search = Search {
        n: grid.n() as u32,
        depth: grid.depth(),
        costs: level_costs(grid, cp.s),
        mask: e.mask(),
        best: f64::INFINITY,
        taken: Vec::new(),
        best_cover: Vec::new(),
    };
    let root = Cube { k: 0, i: [0, 0] };
    let m = search.marked(root);
    if m == 0 {
        return Ok(0.0);
    }
    let lb = search.lower_bound(root, m);
    // first complete cover: the root itself
    search.best = search.costs[0] * (1.0 + 1e-9) + f64::MIN_POSITIVE;
    let mut pending = vec![(root, m, lb)];
    search.run(&mut pending, 0.0, lb);
    Ok(fsum(search.best_cover.iter().map(|&k| search.costs[k as usize])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choquet::dyadic_content;
    use crate::euclid::Grid;

    #[test]
    fn agrees_with_dp_on_small_grids() {
        for (n, k) in [(1, 6), (2, 3), (1, 3), (2, 1)] {
            let grid = Grid::unit(n, k).unwrap();
            for s in [0.3, 0.5, 1.0, n as f64] {
                let cp = ContentParams::new(s).unwrap();
                for seed in 0..20usize {
                    let e = CellSet::new(
                        grid.clone(),
                        (0..grid.num_cells()).filter(|&i| (i * 2654435761usize + seed * 40503) % 7 < 1 + seed % 5),
                    )
                    .unwrap();
                    let dp = dyadic_content(&e, cp).unwrap();
                    let en = enumerate_content(&e, cp).unwrap();
                    assert_eq!(dp, en, "n={n} k={k} s={s} seed={seed}");
                }
            }
        }
    }

    #[test]
    fn rejects_large_grids() {
        let grid = Grid::unit(2, 4).unwrap();
        assert!(enumerate_content(&CellSet::empty(grid), ContentParams::new(1.0).unwrap()).is_err());
    }
}
