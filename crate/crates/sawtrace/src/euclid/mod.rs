//! Dyadic grids on `ℝⁿ` (`n ∈ {1, 2}`), the `3ⁿ` lattices translated by
//! `1/3`, cell-weighted measures, fractional maximal functions, Riesz
//! potentials, growth and two-weight constants, and the pointwise
//! domination of the potential by maximal functions.
//!
//! Measures live on the leaves of a uniform grid; a leaf's weight sits at its
//! centre, so the mass of any cube is an exact finite sum and every supremum
//! over cubes is a finite maximum.

mod constants;
mod grid;
mod lattice;
mod maximal;
mod pipeline;
mod potential;

pub use constants::{growth_constant, rearrange_wrt_measure, two_weight_constant};
pub use grid::{CellSet, DyadicMeasure, Grid, GridFunction, MAX_CELLS};
pub use lattice::{make_lattices, DyadicLatticeSet, Lattice};
pub use maximal::{frac_maximal, frac_maximal_best, g_operator};
pub use pipeline::{domination_ratio, domination_ratio_with, sawyer_g_constant, DominationReport, PotentialParams};
pub use potential::{riesz_potential, riesz_potential_with, RieszKernel};
