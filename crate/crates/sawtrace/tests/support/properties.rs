//! Property checks for the invariants of every module, each with a fixed
//! case budget. Shared by the `invariants` test target and the acceptance
//! run, which executes [`ALL`] under one seed.

#![allow(dead_code)]

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use sawtrace::calderon::{apply_r, characteristic_ratio, classify_r_lorentz, RProfile, SawyerParams};
use sawtrace::choquet::enumeration::enumerate_content;
use sawtrace::choquet::{choquet_integral, dyadic_content, ContentParams};
use sawtrace::euclid::{
    frac_maximal, make_lattices, rearrange_wrt_measure, riesz_potential, sawyer_g_constant, CellSet, DyadicMeasure,
    Grid, GridFunction, PotentialParams, RieszKernel,
};
use sawtrace::families;
use sawtrace::lorentz::{k_bruteforce, k_holmstedt, lorentz_norm, power_space_norm, LorentzParams};
use sawtrace::numeric::fsum;
use sawtrace::sampled::{LogGrid, SampledProfile};
use sawtrace::StepFunction;

pub struct Property {
    pub name: &'static str,
    pub cases: u32,
    check: fn(&mut TestRunner) -> Result<(), String>,
}

impl Property {
    pub fn run(&self, seed: u64) -> Result<(), String> {
        let mut bytes = [0u8; 32];
        bytes[..8].copy_from_slice(&seed.to_le_bytes());
        let config = Config {
            cases: self.cases,
            failure_persistence: None,
            ..Config::default()
        };
        let mut runner = TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &bytes));
        (self.check)(&mut runner)
    }
}

pub const SEED: u64 = 0x5a17;

macro_rules! property {
    ($name:ident, $cases:expr, $strategy:expr, $body:expr) => {
        Property {
            name: stringify!($name),
            cases: $cases,
            check: |runner| runner.run(&$strategy, $body).map_err(|e| e.to_string()),
        }
    };
}

pub const ALL: &[Property] = &[
    property!(equimeasurability, 100, step_fn(), equimeasurability),
    property!(lattice_property, 100, (step_fn(), step_fn()), lattice_property),
    property!(double_star_dominates, 80, step_fn(), double_star_dominates),
    property!(
        double_star_subadditive,
        80,
        (step_fn(), step_fn()),
        double_star_subadditive
    ),
    property!(hardy_littlewood, 80, (step_fn(), any::<u64>()), hardy_littlewood),
    property!(
        diagonal_lorentz_is_lebesgue,
        80,
        (step_fn(), 1.0f64..6.0),
        diagonal_lorentz_is_lebesgue
    ),
    property!(
        double_star_lorentz_bound,
        40,
        (step_fn(), 1.2f64..5.0, 1.0f64..8.0),
        double_star_lorentz_bound
    ),
    property!(
        lorentz_dilation,
        80,
        (dyadic_step_fn(), -8i32..=8, lorentz_pair()),
        lorentz_dilation
    ),
    property!(
        holmstedt_equivalence,
        40,
        (step_fn(), sawyer_pair()),
        holmstedt_equivalence
    ),
    property!(
        k_functional_monotone,
        40,
        (step_fn(), sawyer_pair()),
        k_functional_monotone
    ),
    property!(
        r_sublinear_homogeneous,
        80,
        (step_fn(), step_fn(), sawyer_pair(), -3.0f64..3.0),
        r_sublinear_homogeneous
    ),
    property!(
        r_endpoint_constants,
        40,
        (step_fn(), sawyer_pair()),
        r_endpoint_constants
    ),
    property!(
        r_dilation_identity,
        80,
        (step_fn(), -10i32..=10, sawyer_pair(), -20.0f64..20.0),
        r_dilation_identity
    ),
    property!(
        r_power_transfer,
        80,
        (step_fn(), sawyer_pair(), 0.6f64..3.0, -20.0f64..20.0),
        r_power_transfer
    ),
    property!(tail_sup_immaterial, 40, (step_fn(), 0usize..3), tail_sup_immaterial),
    property!(
        balance_dilation_invariance,
        20,
        any::<u64>(),
        balance_dilation_invariance
    ),
    property!(extremal_profile_domination, 40, step_fn(), extremal_profile_domination),
    property!(
        frac_maximal_monotone,
        60,
        (grid_fn(3), grid_fn(3), measure(3), 0.0f64..2.0),
        frac_maximal_monotone
    ),
    property!(
        m0_indicator_at_most_one,
        60,
        (cell_set(3), measure(3)),
        m0_indicator_at_most_one
    ),
    property!(
        riesz_linear_symmetric,
        40,
        (grid_fn(3), grid_fn(3), measure(3), -2.0f64..2.0),
        riesz_linear_symmetric
    ),
    property!(
        measure_rearrangement_equimeasurable,
        80,
        (grid_fn(4), measure(4)),
        measure_rearrangement_equimeasurable
    ),
    property!(g_pipeline_depth_stable, 12, any::<u64>(), g_pipeline_depth_stable),
    property!(
        content_monotone,
        80,
        (cell_set(4), cell_set(4), content_s()),
        content_monotone
    ),
    property!(
        choquet_monotone,
        60,
        (grid_fn(4), grid_fn(4), content_s()),
        choquet_monotone
    ),
    property!(
        content_subadditive,
        80,
        (cell_set(4), cell_set(4), content_s()),
        content_subadditive
    ),
    property!(content_bounds, 80, (cell_set(4), content_s()), content_bounds),
    property!(
        choquet_homogeneous,
        80,
        (grid_fn(4), content_s(), -6i32..=6, 0.1f64..10.0),
        choquet_homogeneous
    ),
    property!(
        full_dimension_content_is_volume,
        80,
        (cell_set(4), 1usize..=2),
        full_dimension_content_is_volume
    ),
    property!(
        content_matches_enumeration,
        188,
        (small_cell_set(), content_s()),
        content_matches_enumeration
    ),
];

// ---------------------------------------------------------------- strategies

fn value() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(1.0), Just(-1.0), Just(2.0), Just(0.5), -4.0f64..4.0,]
}

pub fn step_fn() -> impl Strategy<Value = StepFunction> {
    prop::collection::vec((-6.0f64..6.0, value()), 1..=32).prop_map(|v| {
        let pieces: Vec<(f64, f64)> = v.into_iter().map(|(e, x)| (2f64.powf(e), x)).collect();
        StepFunction::from_lengths(&pieces).expect("valid pieces")
    })
}

pub fn dyadic_step_fn() -> impl Strategy<Value = StepFunction> {
    prop::collection::vec((-6i32..=6, value()), 1..=32).prop_map(|v| {
        let pieces: Vec<(f64, f64)> = v.into_iter().map(|(e, x)| (2f64.powi(e), x)).collect();
        StepFunction::from_lengths(&pieces).expect("valid pieces")
    })
}

fn sawyer_pair() -> impl Strategy<Value = SawyerParams> {
    prop_oneof![Just((2.0, 4.0)), Just((1.5, 3.0)), Just((2.0, 8.0)), Just((3.0, 4.5))]
        .prop_map(|(p, q)| SawyerParams::new(p, q).expect("valid pair"))
}

fn lorentz_pair() -> impl Strategy<Value = LorentzParams> {
    prop_oneof![
        Just((2.0, 2.0)),
        Just((3.0, 1.0)),
        Just((1.5, f64::INFINITY)),
        Just((4.0, 2.5)),
        Just((1.0, 1.0)),
    ]
    .prop_map(|(r, s)| LorentzParams::new(r, s).expect("admissible"))
}

fn content_s() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(0.5), 0.1f64..2.0]
}

fn planar(depth: u32) -> Grid {
    Grid::unit(2, depth).expect("valid grid")
}

fn grid_fn(depth: u32) -> impl Strategy<Value = GridFunction> {
    prop::collection::vec(value(), 1usize << (2 * depth))
        .prop_map(move |v| GridFunction::new(planar(depth), v).expect("matching length"))
}

fn measure(depth: u32) -> impl Strategy<Value = DyadicMeasure> {
    prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..1.0], 1usize << (2 * depth))
        .prop_map(move |w| DyadicMeasure::new(planar(depth), w).expect("nonnegative weights"))
}

fn cell_set(depth: u32) -> impl Strategy<Value = CellSet> {
    prop::collection::vec(prop::bool::weighted(0.3), 1usize << (2 * depth))
        .prop_map(move |m| CellSet::from_mask(planar(depth), m).expect("matching length"))
}

/// Sets on grids with at most 64 leaves, in one or two dimensions.
fn small_cell_set() -> impl Strategy<Value = CellSet> {
    prop_oneof![Just((1usize, 6u32)), Just((1, 4)), Just((2, 3)), Just((2, 2))].prop_flat_map(|(n, k)| {
        let grid = Grid::unit(n, k).expect("valid grid");
        prop::collection::vec(prop::bool::weighted(0.4), grid.num_cells())
            .prop_map(move |m| CellSet::from_mask(grid.clone(), m).expect("matching length"))
    })
}

// ------------------------------------------------------------------ helpers

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) || a == b
}

fn t_grid() -> Vec<f64> {
    (-40..=40).map(|k| 2f64.powf(k as f64 / 4.0)).collect()
}

fn err(e: sawtrace::Error) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

// ----------------------------------------------------------- rearrangements

fn equimeasurability(f: StepFunction) -> Result<(), TestCaseError> {
    let fs = f.rearrange();
    let levels = f.values().iter().map(|v| v.abs()).filter(|&v| v > 0.0).chain(t_grid());
    for l in levels {
        let (a, b) = (f.distribution(l).map_err(err)?, fs.distribution(l).map_err(err)?);
        ensure(a == b, || format!("λ = {l}: {a} vs {b}"))?;
    }
    Ok(())
}

fn lattice_property((f, h): (StepFunction, StepFunction)) -> Result<(), TestCaseError> {
    // |f| ≤ |g| everywhere
    let g = f.abs().add(&h.abs());
    let (fs, gs) = (f.rearrange(), g.rearrange());
    for &b in fs.breakpoints().iter().chain(gs.breakpoints()) {
        ensure(fs.eval(b) <= gs.eval(b), || {
            format!("t = {b}: {} > {}", fs.eval(b), gs.eval(b))
        })?;
    }
    Ok(())
}

fn double_star_dominates(f: StepFunction) -> Result<(), TestCaseError> {
    let fs = f.rearrange();
    let mut prev = f64::INFINITY;
    for t in t_grid() {
        let m = f.maximal_avg(t).map_err(err)?;
        ensure(m >= fs.eval(t) * (1.0 - 1e-12), || {
            format!("f**({t}) = {m} < f*({t}) = {}", fs.eval(t))
        })?;
        ensure(m <= prev * (1.0 + 1e-12), || format!("f** increases at {t}"))?;
        prev = m;
    }
    Ok(())
}

fn double_star_subadditive((f, g): (StepFunction, StepFunction)) -> Result<(), TestCaseError> {
    let s = f.add(&g);
    for t in t_grid() {
        let lhs = s.maximal_avg(t).map_err(err)?;
        let rhs = f.maximal_avg(t).map_err(err)? + g.maximal_avg(t).map_err(err)?;
        ensure(lhs <= rhs * (1.0 + 1e-12), || format!("t = {t}: {lhs} > {rhs}"))?;
    }
    Ok(())
}

fn hardy_littlewood((f, bits): (StepFunction, u64)) -> Result<(), TestCaseError> {
    let chosen: Vec<(f64, f64, f64)> = f
        .pieces()
        .enumerate()
        .filter(|(i, _)| bits >> (i % 64) & 1 == 1)
        .map(|x| x.1)
        .collect();
    let measure = fsum(chosen.iter().map(|&(a, b, _)| b - a));
    let lhs = fsum(chosen.iter().map(|&(a, b, v)| v.abs() * (b - a)));
    let rhs = f.rearrange().integrate_power(1.0, 0.0, measure).map_err(err)?;
    ensure(lhs <= rhs * (1.0 + 1e-12), || {
        format!("∫_E |f| = {lhs} > ∫₀^|E| f* = {rhs}")
    })
}

// ------------------------------------------------------------------ lorentz

fn diagonal_lorentz_is_lebesgue((f, p): (StepFunction, f64)) -> Result<(), TestCaseError> {
    let a = lorentz_norm(&f, LorentzParams::new(p, p).map_err(err)?);
    let b = f.integrate_power(p, 0.0, f64::INFINITY).map_err(err)?.powf(1.0 / p);
    ensure(close(a, b, 1e-12), || format!("p = {p}: {a} vs {b}"))
}

fn double_star_lorentz_bound((f, p, q): (StepFunction, f64, f64)) -> Result<(), TestCaseError> {
    let lp = LorentzParams::new(p, q).map_err(err)?;
    let grid = LogGrid::standard();
    let fss = SampledProfile::from_fn(grid, |t| f.maximal_avg(t).unwrap_or(0.0));
    let lhs = fss.lorentz_norm(lp);
    let bound = p / (p - 1.0) * lorentz_norm(&f, lp) * 1.01;
    ensure(lhs <= bound, || format!("(p,q) = ({p},{q}): {lhs} > {bound}"))
}

fn lorentz_dilation((f, k, lp): (StepFunction, i32, LorentzParams)) -> Result<(), TestCaseError> {
    let c = 2f64.powi(k);
    let a = lorentz_norm(&f.dilate(c).map_err(err)?, lp);
    let b = c.powf(-lp.r().recip()) * lorentz_norm(&f, lp);
    ensure(close(a, b, 1e-13), || format!("c = {c}: {a} vs {b}"))
}

fn holmstedt_equivalence((f, sp): (StepFunction, SawyerParams)) -> Result<(), TestCaseError> {
    for k in -8..8 {
        let t = 2f64.powi(k);
        let (h, b) = (
            k_holmstedt(&f, t, &sp).map_err(err)?,
            k_bruteforce(&f, t, &sp).map_err(err)?,
        );
        if b == 0.0 {
            ensure(h == 0.0, || format!("t = {t}: {h} vs 0"))?;
            continue;
        }
        let ratio = h / b;
        ensure((0.125..=8.0).contains(&ratio), || format!("t = {t}: ratio {ratio}"))?;
    }
    Ok(())
}

fn k_functional_monotone((f, sp): (StepFunction, SawyerParams)) -> Result<(), TestCaseError> {
    let mut prev = (0.0, f64::INFINITY);
    for t in t_grid() {
        let k = k_bruteforce(&f, t, &sp).map_err(err)?;
        ensure(k >= prev.0 * (1.0 - 1e-12), || format!("K decreases at t = {t}"))?;
        ensure(k / t <= prev.1 * (1.0 + 1e-12), || format!("K/t increases at t = {t}"))?;
        prev = (k, k / t);
    }
    Ok(())
}

// ----------------------------------------------------------------- calderon

fn r_sublinear_homogeneous(
    (f, g, sp, c): (StepFunction, StepFunction, SawyerParams, f64),
) -> Result<(), TestCaseError> {
    let (pf, pg, ps) = (
        RProfile::new(&f, sp),
        RProfile::new(&g, sp),
        RProfile::new(&f.add(&g), sp),
    );
    let pc = RProfile::new(&f.scale(c).map_err(err)?, sp);
    for t in t_grid() {
        let (a, b) = (ps.eval(t), pf.eval(t) + pg.eval(t));
        ensure(a <= b * (1.0 + 1e-12), || format!("t = {t}: {a} > {b}"))?;
        let (x, y) = (pc.eval(t), c.abs() * pf.eval(t));
        ensure(close(x, y, 1e-12), || format!("t = {t}, c = {c}: {x} vs {y}"))?;
    }
    Ok(())
}

fn r_endpoint_constants((f, sp): (StepFunction, SawyerParams)) -> Result<(), TestCaseError> {
    let (p, q, r) = (sp.p(), sp.q(), sp.r());
    let prof = RProfile::new(&f, sp);
    let sampled = SampledProfile::from_fn(LogGrid::standard(), |t| prof.eval(t));
    let weak = sampled.lorentz_norm(LorentzParams::weak(p).map_err(err)?);
    let lp = f.integrate_power(p, 0.0, f64::INFINITY).map_err(err)?.powf(1.0 / p);
    ensure(weak <= lp * 1.01, || format!("‖Rf‖_(p,∞) = {weak} > ‖f‖_p = {lp}"))?;
    let sup = prof.sup();
    let bound = r.powf(1.0 / p) * lorentz_norm(&f, LorentzParams::weak(q).map_err(err)?) * (1.0 + 1e-9);
    ensure(sup <= bound, || format!("sup Rf = {sup} > {bound}"))
}

fn r_dilation_identity((g, k, sp, lt): (StepFunction, i32, SawyerParams, f64)) -> Result<(), TestCaseError> {
    let lambda = 2f64.powi(k);
    let t = 2f64.powf(lt);
    let a = apply_r(&g.dilate(lambda).map_err(err)?, &sp, t).map_err(err)?;
    let b = lambda.powf(-1.0 / sp.q()) * apply_r(&g, &sp, lambda.powf(1.0 / sp.r()) * t).map_err(err)?;
    ensure(close(a, b, 1e-12), || format!("λ = {lambda}, t = {t}: {a} vs {b}"))
}

fn r_power_transfer((f, sp, alpha, lt): (StepFunction, SawyerParams, f64, f64)) -> Result<(), TestCaseError> {
    if alpha * sp.p() <= 1.0 {
        return Ok(());
    }
    let t = 2f64.powf(lt);
    let scaled = sp.scaled(alpha).map_err(err)?;
    let a = apply_r(&f.abs_pow(alpha).map_err(err)?, &sp, t)
        .map_err(err)?
        .powf(1.0 / alpha);
    let b = apply_r(&f, &scaled, t).map_err(err)?;
    ensure(close(a, b, 1e-12), || format!("α = {alpha}, t = {t}: {a} vs {b}"))
}

fn norms_z() -> [LorentzParams; 3] {
    [
        LorentzParams::new(6.0, 2.0).expect("admissible"),
        LorentzParams::new(6.0, f64::INFINITY).expect("admissible"),
        LorentzParams::new(4.0, 1.0).expect("admissible"),
    ]
}

fn sp24() -> SawyerParams {
    SawyerParams::new(2.0, 4.0).expect("valid pair")
}

/// `‖tail_sup g‖_Z / ‖R g‖_Z`, both sampled on the standard grid.
pub fn tail_ratio(g: &StepFunction, z: LorentzParams) -> f64 {
    let prof = RProfile::new(g, sp24());
    let grid = LogGrid::standard();
    let tail = SampledProfile::from_fn(grid, |t| prof.tail_sup(t)).lorentz_norm(z);
    let main = SampledProfile::from_fn(grid, |t| prof.eval(t)).lorentz_norm(z);
    if tail == 0.0 {
        0.0
    } else {
        tail / main
    }
}

/// Largest ratio over the seed family `families::rng(0, i)`, `i < 64`.
fn calibrate<F: Fn(&StepFunction) -> f64>(ratio: F) -> f64 {
    (0..64)
        .map(|i| ratio(&families::random_positive_step_function(&mut families::rng(0, i))))
        .fold(0.0, f64::max)
}

fn tail_sup_immaterial((g, zi): (StepFunction, usize)) -> Result<(), TestCaseError> {
    if g.is_zero() {
        return Ok(());
    }
    static CAPS: OnceLock<Vec<f64>> = OnceLock::new();
    let z = norms_z()[zi];
    let cap = CAPS.get_or_init(|| norms_z().iter().map(|&z| calibrate(|h| tail_ratio(h, z))).collect())[zi];
    let r = tail_ratio(&g, z);
    ensure(cap.is_finite() && r <= 2.0 * cap, || {
        format!("Z = {z:?}: {r} > 2·{cap}")
    })
}

fn balance_dilation_invariance(seed: u64) -> Result<(), TestCaseError> {
    let (sp, lin, lout) = families::random_balanced_tuple(&mut families::rng(seed, 0)).map_err(err)?;
    ensure(classify_r_lorentz(&sp, &lin, &lout).is_bounded(), || {
        "not bounded".into()
    })?;
    let base = characteristic_ratio(&sp, &lin, &lout, 0).map_err(err)?;
    for k in -20..=20 {
        let x = characteristic_ratio(&sp, &lin, &lout, k).map_err(err)?;
        ensure(close(x, base, 1e-9), || format!("a = 2^{k}: {x} vs {base}"))?;
    }
    Ok(())
}

/// `‖R g‖_{(6,2)}` against the power-space norm of the extremal profile
/// over `L^{6,2}`, both from standard-grid samples.
pub fn extremal_ratio(g: &StepFunction) -> f64 {
    let out = LorentzParams::new(6.0, 2.0).expect("admissible");
    let prof = RProfile::new(g, sp24());
    let grid = LogGrid::standard();
    let rg = SampledProfile::from_fn(grid, |t| prof.eval(t)).lorentz_norm(out);
    let ext = SampledProfile::from_fn(grid, |t| prof.extremal(t))
        .to_step_function()
        .and_then(|h| power_space_norm(&h, out, 2.0))
        .unwrap_or(f64::NAN);
    if rg == 0.0 {
        0.0
    } else {
        rg / ext
    }
}

fn extremal_profile_domination(g: StepFunction) -> Result<(), TestCaseError> {
    static CAP: OnceLock<f64> = OnceLock::new();
    let cap = *CAP.get_or_init(|| calibrate(extremal_ratio));
    let r = extremal_ratio(&g);
    ensure(cap.is_finite() && r <= 2.0 * cap, || format!("{r} > 2·{cap}"))
}

// ------------------------------------------------------------------- euclid

fn frac_maximal_monotone(
    (f, h, mu, beta): (GridFunction, GridFunction, DyadicMeasure, f64),
) -> Result<(), TestCaseError> {
    let grid = f.grid().clone();
    let g = GridFunction::new(
        grid.clone(),
        f.values()
            .iter()
            .zip(h.values())
            .map(|(a, b)| a.abs() + b.abs())
            .collect(),
    )
    .map_err(err)?;
    let lats = make_lattices(&grid).map_err(err)?;
    for lat in lats.lattices() {
        let mf = frac_maximal(&f, &mu, beta, 2.0, lat).map_err(err)?;
        let mg = frac_maximal(&g, &mu, beta, 2.0, lat).map_err(err)?;
        for i in 0..grid.num_cells() {
            ensure(mf.get(i) <= mg.get(i), || {
                format!("leaf {i}: {} > {}", mf.get(i), mg.get(i))
            })?;
        }
    }
    Ok(())
}

fn m0_indicator_at_most_one((e, mu): (CellSet, DyadicMeasure)) -> Result<(), TestCaseError> {
    let lats = make_lattices(e.grid()).map_err(err)?;
    for lat in lats.lattices() {
        let m = frac_maximal(&e.indicator(), &mu, 0.0, 2.0, lat).map_err(err)?;
        ensure(m.values().iter().all(|&v| v <= 1.0), || "M₀χ_E exceeds 1".into())?;
    }
    Ok(())
}

fn riesz_linear_symmetric(
    (f, g, mu, c): (GridFunction, GridFunction, DyadicMeasure, f64),
) -> Result<(), TestCaseError> {
    let grid = f.grid().clone();
    let comb = GridFunction::new(
        grid.clone(),
        f.values().iter().zip(g.values()).map(|(a, b)| c * a + b).collect(),
    )
    .map_err(err)?;
    let (alpha, d) = (0.5, 2.0);
    let (pf, pg, pc) = (
        riesz_potential(&f, &mu, alpha, d).map_err(err)?,
        riesz_potential(&g, &mu, alpha, d).map_err(err)?,
        riesz_potential(&comb, &mu, alpha, d).map_err(err)?,
    );
    let absf = GridFunction::new(
        grid.clone(),
        f.values()
            .iter()
            .zip(g.values())
            .map(|(a, b)| c.abs() * a.abs() + b.abs())
            .collect(),
    )
    .map_err(err)?;
    let scale = riesz_potential(&absf, &mu, alpha, d).map_err(err)?;
    for i in 0..grid.num_cells() {
        let (a, b) = (pc.get(i), c * pf.get(i) + pg.get(i));
        ensure((a - b).abs() <= 1e-12 * scale.get(i).max(f64::MIN_POSITIVE), || {
            format!("leaf {i}: {a} vs {b}")
        })?;
    }
    let k = RieszKernel::new(&grid, alpha, d).map_err(err)?;
    for i in 0..grid.num_cells() {
        for j in 0..grid.num_cells() {
            let (x, y) = (grid.coords(i), grid.coords(j));
            ensure(k.between(x, y) == k.between(y, x), || {
                format!("kernel asymmetric at {i}, {j}")
            })?;
        }
    }
    Ok(())
}

fn measure_rearrangement_equimeasurable((f, mu): (GridFunction, DyadicMeasure)) -> Result<(), TestCaseError> {
    let fs = rearrange_wrt_measure(&f, &mu).map_err(err)?;
    for l in f.values().iter().map(|v| v.abs()).filter(|&v| v > 0.0) {
        let direct = fsum(
            f.values()
                .iter()
                .zip(mu.weights())
                .filter(|(v, _)| v.abs() > l)
                .map(|(_, &w)| w),
        );
        let via = fs.distribution(l).map_err(err)?;
        ensure(close(direct, via, 1e-15), || format!("λ = {l}: {direct} vs {via}"))?;
    }
    Ok(())
}

/// Constants of the `G` pipeline at depths 4, 5 and 6 for one coarse
/// configuration.
pub fn g_constants(seed: u64) -> sawtrace::Result<[f64; 3]> {
    let cfg = families::random_coarse_config(&mut families::rng(seed, 0));
    let pp = PotentialParams::new(2, 2.0, 0.5, 2.0, 0.75)?;
    let mut out = [0.0; 3];
    for (slot, depth) in out.iter_mut().zip(4..=6) {
        let c = cfg.realize(depth)?;
        let lats = make_lattices(c.mu.grid())?;
        let total = c.nu.total();
        let t_grid = LogGrid::new(total * 2f64.powi(-24), total, 64)?.points();
        *slot = sawyer_g_constant(&c.f, &c.mu, &c.nu, &pp, &lats, &t_grid)?;
    }
    Ok(out)
}

fn g_pipeline_depth_stable(seed: u64) -> Result<(), TestCaseError> {
    let cs = g_constants(seed).map_err(err)?;
    let (lo, hi) = (
        cs.iter().copied().fold(f64::INFINITY, f64::min),
        cs.iter().copied().fold(0.0, f64::max),
    );
    ensure(hi.is_finite() && hi <= 2.0 * lo, || format!("constants {cs:?}"))
}

// ------------------------------------------------------------------ choquet

fn content_monotone((e, f, s): (CellSet, CellSet, f64)) -> Result<(), TestCaseError> {
    let cp = ContentParams::new(s).map_err(err)?;
    let union = CellSet::new(e.grid().clone(), e.leaves().chain(f.leaves())).map_err(err)?;
    let (a, b) = (
        dyadic_content(&e, cp).map_err(err)?,
        dyadic_content(&union, cp).map_err(err)?,
    );
    ensure(a <= b, || format!("H(E) = {a} > H(E ∪ F) = {b}"))
}

fn choquet_monotone((g, h, s): (GridFunction, GridFunction, f64)) -> Result<(), TestCaseError> {
    let cp = ContentParams::new(s).map_err(err)?;
    let grid = g.grid().clone();
    let lo = GridFunction::new(grid.clone(), g.values().iter().map(|v| v.abs()).collect()).map_err(err)?;
    let hi = GridFunction::new(
        grid,
        g.values()
            .iter()
            .zip(h.values())
            .map(|(a, b)| a.abs() + b.abs())
            .collect(),
    )
    .map_err(err)?;
    let (a, b) = (
        choquet_integral(&lo, cp).map_err(err)?,
        choquet_integral(&hi, cp).map_err(err)?,
    );
    ensure(a <= b * (1.0 + 1e-12), || format!("{a} > {b}"))
}

fn content_subadditive((e, f, s): (CellSet, CellSet, f64)) -> Result<(), TestCaseError> {
    let cp = ContentParams::new(s).map_err(err)?;
    let union = CellSet::new(e.grid().clone(), e.leaves().chain(f.leaves())).map_err(err)?;
    let u = dyadic_content(&union, cp).map_err(err)?;
    let sum = dyadic_content(&e, cp).map_err(err)? + dyadic_content(&f, cp).map_err(err)?;
    ensure(u <= sum * (1.0 + 1e-12), || format!("H(E ∪ F) = {u} > {sum}"))
}

fn content_bounds((e, s): (CellSet, f64)) -> Result<(), TestCaseError> {
    let cp = ContentParams::new(s).map_err(err)?;
    let h = dyadic_content(&e, cp).map_err(err)?;
    let grid = e.grid();
    ensure(h <= grid.side().powf(s), || format!("{h} above the root cost"))?;
    let leaf = if e.is_empty() { 0.0 } else { grid.leaf_side().powf(s) };
    ensure(h >= leaf, || format!("{h} below a single leaf"))
}

fn choquet_homogeneous((g, s, k, c): (GridFunction, f64, i32, f64)) -> Result<(), TestCaseError> {
    let cp = ContentParams::new(s).map_err(err)?;
    let base = GridFunction::new(g.grid().clone(), g.values().iter().map(|v| v.abs()).collect()).map_err(err)?;
    let scaled = |c: f64| GridFunction::new(g.grid().clone(), base.values().iter().map(|v| c * v).collect());
    let i0 = choquet_integral(&base, cp).map_err(err)?;
    let two = 2f64.powi(k);
    let i2 = choquet_integral(&scaled(two).map_err(err)?, cp).map_err(err)?;
    ensure(i2 == two * i0, || format!("c = 2^{k}: {i2} vs {}", two * i0))?;
    let ic = choquet_integral(&scaled(c).map_err(err)?, cp).map_err(err)?;
    ensure(close(ic, c * i0, 1e-13), || format!("c = {c}: {ic} vs {}", c * i0))
}

fn full_dimension_content_is_volume((e, n): (CellSet, usize)) -> Result<(), TestCaseError> {
    let e = if n == 2 {
        e
    } else {
        let grid = Grid::unit(1, 8).map_err(err)?;
        CellSet::from_mask(grid, e.mask()[..256].to_vec()).map_err(err)?
    };
    let h = dyadic_content(&e, ContentParams::new(n as f64).map_err(err)?).map_err(err)?;
    ensure(h == e.volume(), || format!("{h} vs {}", e.volume()))
}

fn content_matches_enumeration((e, s): (CellSet, f64)) -> Result<(), TestCaseError> {
    let s = s.min(e.grid().n() as f64);
    let cp = ContentParams::new(s).map_err(err)?;
    let (dp, en) = (
        dyadic_content(&e, cp).map_err(err)?,
        enumerate_content(&e, cp).map_err(err)?,
    );
    ensure(dp == en, || format!("s = {s}: {dp} vs {en}"))
}
