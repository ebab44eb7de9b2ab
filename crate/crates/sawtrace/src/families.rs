//! Seeded random families used by the experiment suites and tests.
//!
//! Every generator draws from `ChaCha8Rng::seed_from_u64(seed)` with the
//! stream set to the experiment index, so experiment `i` of seed `s` is the
//! same whatever else runs. The procedures below are part of the report
//! contract: changing them changes published numbers.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calderon::SawyerParams;
use crate::error::Result;
use crate::euclid::{CellSet, DyadicMeasure, Grid, GridFunction};
use crate::lorentz::{Exponent, LorentzParams};
use crate::stepfun::StepFunction;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

const TIE_VALUES: [f64; 8] = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0];

fn random_value<R: Rng>(rng: &mut R) -> f64 {
    match rng.gen_range(0..10) {
        0..=4 => *TIE_VALUES.choose(rng).expect("nonempty"),
        5 => 0.0,
        _ => rng.gen_range(-4.0..4.0),
    }
}

/// 1 to 32 pieces with lengths `2^U` (`U` uniform on `[−6, 6]`) and values
/// that are half the time drawn from a small set (ties, zeros, signs) and
/// otherwise uniform on `[−4, 4)`.
pub fn random_step_function<R: Rng>(rng: &mut R) -> StepFunction {
    let m = rng.gen_range(1..=32);
    let pieces: Vec<(f64, f64)> = (0..m)
        .map(|_| (2f64.powf(rng.gen_range(-6.0..6.0)), random_value(rng)))
        .collect();
    StepFunction::from_lengths(&pieces).expect("valid pieces")
}

/// As [`random_step_function`] but with lengths `2^k`, `k ∈ {−6, …, 6}`, so
/// every breakpoint is a dyadic rational and dilations by powers of two are
/// exact.
pub fn random_dyadic_step_function<R: Rng>(rng: &mut R) -> StepFunction {
    let m = rng.gen_range(1..=32);
    let pieces: Vec<(f64, f64)> = (0..m)
        .map(|_| (2f64.powi(rng.gen_range(-6..=6)), random_value(rng)))
        .collect();
    StepFunction::from_lengths(&pieces).expect("valid pieces")
}

/// Nonzero nonnegative variant of [`random_step_function`].
pub fn random_positive_step_function<R: Rng>(rng: &mut R) -> StepFunction {
    loop {
        let f = random_step_function(rng).abs();
        if !f.is_zero() {
            return f;
        }
    }
}

/// Each leaf independently with probability `density`.
pub fn random_cell_set<R: Rng>(rng: &mut R, grid: &Grid, density: f64) -> CellSet {
    let mask = (0..grid.num_cells()).map(|_| rng.gen_bool(density)).collect();
    CellSet::from_mask(grid.clone(), mask).expect("mask length matches")
}

/// Union of `4^u` distinct random cells of generation `k + u` (`u` uniform
/// in `{0, 1, 2}`, capped by the grid depth) in the plane, so that the
/// union has area `4^{−k}` for the unit square.
pub fn random_union_with_area<R: Rng>(rng: &mut R, grid: &Grid, k: u32) -> CellSet {
    assert!(grid.n() == 2 && k <= grid.depth());
    let u = rng.gen_range(0..=2).min(grid.depth() - k);
    let j = k + u;
    let cells_per_axis = 1usize << j;
    let mut all: Vec<usize> = (0..cells_per_axis * cells_per_axis).collect();
    all.shuffle(rng);
    let chosen = &all[..1usize << (2 * u)];
    let shift = grid.depth() - j;
    let mut mask = vec![false; grid.num_cells()];
    for &c in chosen {
        let (c0, c1) = (c / cells_per_axis, c % cells_per_axis);
        for a in 0..1usize << shift {
            for b in 0..1usize << shift {
                let leaf = grid
                    .leaf_index(&[(c0 << shift) + a, (c1 << shift) + b])
                    .expect("inside grid");
                mask[leaf] = true;
            }
        }
    }
    CellSet::from_mask(grid.clone(), mask).expect("mask length matches")
}

/// Resolution of [`CoarseConfig`].
pub const COARSE_DEPTH: u32 = 3;
const COARSE_CELLS: usize = 1 << (2 * COARSE_DEPTH);

#[derive(Clone, Debug, PartialEq)]
pub enum CoarseNu {
    /// Density with respect to area on each coarse cell.
    Density(Vec<f64>),
    /// Density with respect to length on the horizontal line `x₁ = height`,
    /// per coarse column.
    Line { height: f64, density: Vec<f64> },
}

/// A configuration `(μ, ν, f, E)` on the unit square described at
/// generation 3 and realizable at any finer depth.
///
/// - `μ` has a density on each coarse cell drawn from `[1/4, 4]`;
/// - `ν` is either a density (zero on about a quarter of the cells,
///   otherwise in `[1/4, 4]`) or a measure on a horizontal line at a height
///   in `[1/8, 7/8]` that is never a dyadic rational, with density in
///   `[1/4, 4]` per coarse column;
/// - `f` takes values from [`TIE_VALUES`]-style draws on each coarse cell;
/// - `E` is a nonempty union of coarse cells, each with probability 1/4.
#[derive(Clone, Debug, PartialEq)]
pub struct CoarseConfig {
    pub mu: Vec<f64>,
    pub nu: CoarseNu,
    pub f: Vec<f64>,
    pub e: Vec<bool>,
}

fn density<R: Rng>(rng: &mut R) -> f64 {
    2f64.powf(rng.gen_range(-2.0..2.0))
}

pub fn random_coarse_config<R: Rng>(rng: &mut R) -> CoarseConfig {
    let mu = (0..COARSE_CELLS).map(|_| density(rng)).collect();
    let nu = if rng.gen_bool(0.5) {
        CoarseNu::Density(
            (0..COARSE_CELLS)
                .map(|_| if rng.gen_bool(0.25) { 0.0 } else { density(rng) })
                .collect(),
        )
    } else {
        // 2^K·height is never an integer, so the line never lies on a cell boundary
        let height = (rng.gen_range(1..=7) as f64 + 1.0 / 3.0) / 8.0;
        let density = (0..1 << COARSE_DEPTH).map(|_| density(rng)).collect();
        CoarseNu::Line { height, density }
    };
    let f = (0..COARSE_CELLS).map(|_| random_value(rng)).collect();
    let mut e: Vec<bool> = (0..COARSE_CELLS).map(|_| rng.gen_bool(0.25)).collect();
    if !e.iter().any(|&x| x) {
        e[rng.gen_range(0..COARSE_CELLS)] = true;
    }
    CoarseConfig { mu, nu, f, e }
}

/// `(μ, ν, f, E)` realized at a given depth.
pub struct Realized {
    pub mu: DyadicMeasure,
    pub nu: DyadicMeasure,
    pub f: GridFunction,
    pub e: CellSet,
}

impl CoarseConfig {
    pub fn realize(&self, depth: u32) -> Result<Realized> {
        let coarse = Grid::unit(2, COARSE_DEPTH)?;
        let grid = coarse.refined(depth.saturating_sub(COARSE_DEPTH))?;
        let parent = coarse.parent_map(&grid)?;
        let vol = grid.leaf_volume();
        let mu = DyadicMeasure::new(grid.clone(), parent.iter().map(|&c| self.mu[c] * vol).collect())?;
        let nu_w: Vec<f64> = match &self.nu {
            CoarseNu::Density(d) => parent.iter().map(|&c| d[c] * vol).collect(),
            CoarseNu::Line { height, density } => {
                let h = grid.leaf_side();
                let row = (height / h).floor() as usize;
                (0..grid.num_cells())
                    .map(|leaf| {
                        let c = grid.coords(leaf);
                        if c[1] == row {
                            density[parent[leaf] >> COARSE_DEPTH] * h
                        } else {
                            0.0
                        }
                    })
                    .collect()
            }
        };
        let nu = DyadicMeasure::new(grid.clone(), nu_w)?;
        let f = GridFunction::new(grid.clone(), parent.iter().map(|&c| self.f[c]).collect())?;
        let e = CellSet::from_mask(grid.clone(), parent.iter().map(|&c| self.e[c]).collect())?;
        Ok(Realized { mu, nu, f, e })
    }
}

/// Exponents `(p, q)` and Lorentz pairs `(r₁, s₁)`, `(r₂, s₂)` satisfying
/// the balance condition `r₁ ∈ (p,q)`, `s₁ ≤ s₂`,
/// `1/q + 1/(r·r₂) = 1/r₁`, all rational (or ∞).
pub fn random_balanced_tuple<R: Rng>(rng: &mut R) -> Result<(SawyerParams, LorentzParams, LorentzParams)> {
    let r = |n: i64, d: i64| Ratio::new(n, d);
    let ps = [r(3, 2), r(2, 1), r(5, 2), r(3, 1), r(4, 3), r(7, 4)];
    let gaps = [r(1, 2), r(1, 1), r(2, 1), r(3, 1), r(5, 3)];
    let fracs = [r(1, 4), r(1, 3), r(1, 2), r(2, 3), r(3, 4)];
    let p = *ps.choose(rng).expect("nonempty");
    let q = p + *gaps.choose(rng).expect("nonempty");
    let r1 = p + (q - p) * *fracs.choose(rng).expect("nonempty");
    let rr = q / (q - p);
    let inv_r2 = rr * (r1.recip() - q.recip());
    let r2 = inv_r2.recip();
    let ss: [Option<Ratio<i64>>; 5] = [Some(r(1, 1)), Some(r(3, 2)), Some(r(2, 1)), Some(r(3, 1)), None];
    let i1 = rng.gen_range(0..ss.len());
    let i2 = rng.gen_range(i1..ss.len());
    let ex = |x: Ratio<i64>| Exponent::ratio(*x.numer(), *x.denom());
    let es = |x: Option<Ratio<i64>>| x.map_or(Exponent::Infinity, ex);
    Ok((
        SawyerParams::new(ex(p), ex(q))?,
        LorentzParams::new(ex(r1), es(ss[i1]))?,
        LorentzParams::new(ex(r2), es(ss[i2]))?,
    ))
}
