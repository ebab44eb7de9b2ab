use crate::error::Result;
use crate::numeric::ExactSum;

use super::grid::{DyadicMeasure, Grid};

/// One translate `𝒟_τ(Q₀)`, restricted to generations `0..=K`.
///
/// Generation `k` consists of the cubes of side `ℓ_k = side(Q₀)·2^{−k}`
/// translated by `τ·ℓ_k/3`. Only cubes containing at least one leaf centre
/// are materialized; they are addressed by slot numbers
/// `Σ (m_a + 1)·(2^k + 1)^{n−1−a}`, where `m_a ≥ −1` is the integer
/// position of the cube along axis `a`.
#[derive(Clone, Debug)]
pub struct Lattice {
    tau: [u8; 2],
    cube_of: Vec<Vec<u32>>,
    occupied: Vec<Vec<u32>>,
}

impl Lattice {
    fn new(grid: &Grid, tau: [u8; 2]) -> Self {
        let depth = grid.depth();
        let n = grid.n();
        let mut cube_of = Vec::with_capacity(depth as usize + 1);
        let mut occupied = Vec::with_capacity(depth as usize + 1);
        for k in 0..=depth {
            let s = 1i64 << (depth - k);
            let width = (1u32 << k) + 1;
            // per-axis slot of every leaf index
            let axis_slot: Vec<Vec<u32>> = (0..n)
                .map(|a| {
                    (0..grid.per_axis() as i64)
                        .map(|i| {
                            let m = (3 * (2 * i + 1) - 2 * tau[a] as i64 * s).div_euclid(6 * s);
                            (m + 1) as u32
                        })
                        .collect()
                })
                .collect();
            let map: Vec<u32> = (0..grid.num_cells())
                .map(|leaf| {
                    let c = grid.coords(leaf);
                    (0..n).fold(0, |acc, a| acc * width + axis_slot[a][c[a]])
                })
                .collect();
            let mut seen = vec![false; width.pow(n as u32) as usize];
            for &c in &map {
                seen[c as usize] = true;
            }
            occupied.push((0..seen.len() as u32).filter(|&c| seen[c as usize]).collect());
            cube_of.push(map);
        }
        Lattice { tau, cube_of, occupied }
    }

    pub fn tau(&self) -> [u8; 2] {
        self.tau
    }

    /// Slot of the generation-`k` cube containing the centre of `leaf`.
    pub fn cube_of_leaf(&self, k: u32, leaf: usize) -> usize {
        self.cube_of[k as usize][leaf] as usize
    }

    /// Number of slots in generation `k` (occupied or not).
    pub fn num_slots(&self, grid: &Grid, k: u32) -> usize {
        ((1usize << k) + 1).pow(grid.n() as u32)
    }

    /// Materialized cubes of generation `k`.
    pub fn cubes(&self, k: u32) -> &[u32] {
        &self.occupied[k as usize]
    }

    pub fn num_cubes(&self, k: u32) -> usize {
        self.occupied[k as usize].len()
    }

    /// `[lo, hi)` along each axis for the cube in slot `cube` of generation `k`.
    pub fn cube_bounds(&self, grid: &Grid, k: u32, cube: usize) -> Vec<(f64, f64)> {
        let width = (1usize << k) + 1;
        let side = grid.side() * 2f64.powi(-(k as i32));
        let mut rest = cube;
        let mut out = vec![(0.0, 0.0); grid.n()];
        for a in (0..grid.n()).rev() {
            let m = (rest % width) as f64 - 1.0;
            rest /= width;
            let lo = grid.corner()[a] + (m + self.tau[a] as f64 / 3.0) * side;
            out[a] = (lo, lo + side);
        }
        out
    }

    /// Correctly rounded per-cube sums of `value(leaf)` for generation `k`.
    pub fn cube_sums<F: Fn(usize) -> f64>(&self, grid: &Grid, k: u32, value: F) -> Vec<f64> {
        let mut acc: Vec<ExactSum> = vec![ExactSum::new(); self.num_slots(grid, k)];
        for (leaf, &c) in self.cube_of[k as usize].iter().enumerate() {
            let v = value(leaf);
            if v != 0.0 {
                acc[c as usize].add(v);
            }
        }
        acc.iter().map(ExactSum::value).collect()
    }

    /// `μ(Q)` for every slot of generation `k`.
    pub fn cube_masses(&self, mu: &DyadicMeasure, k: u32) -> Vec<f64> {
        let w = mu.weights();
        self.cube_sums(mu.grid(), k, |leaf| w[leaf])
    }
}

/// The `3ⁿ` translates `𝒟_τ(Q₀)`, `τ ∈ {0,1,2}ⁿ`, over generations `0..=K`
/// of a grid; `τ` runs in row-major order, so index 0 is the untranslated
/// lattice.
#[derive(Clone, Debug)]
pub struct DyadicLatticeSet {
    grid: Grid,
    lattices: Vec<Lattice>,
}

impl DyadicLatticeSet {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn lattices(&self) -> &[Lattice] {
        &self.lattices
    }

    pub fn len(&self) -> usize {
        self.lattices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattices.is_empty()
    }

    /// `max_Q f(Q)` over every materialized cube of every lattice and
    /// generation, where `f` receives the lattice index, generation and slot.
    pub(crate) fn max_over_cubes<F>(&self, f: F) -> f64
    where
        F: Fn(usize, u32, usize) -> f64,
    {
        let mut best: f64 = 0.0;
        for (j, lat) in self.lattices.iter().enumerate() {
            for k in 0..=self.grid.depth() {
                for &c in lat.cubes(k) {
                    best = best.max(f(j, k, c as usize));
                }
            }
        }
        best
    }
}

/// Builds the `3ⁿ` translated lattices over generations `0..=K` of `grid`.
pub fn make_lattices(grid: &Grid) -> Result<DyadicLatticeSet> {
    let taus: Vec<[u8; 2]> = match grid.n() {
        1 => (0..3).map(|t| [t, 0]).collect(),
        _ => (0..9).map(|t| [t / 3, t % 3]).collect(),
    };
    let lattices = crate::par::map_slice(&taus, |&tau| Lattice::new(grid, tau));
    Ok(DyadicLatticeSet {
        grid: grid.clone(),
        lattices,
    })
}
