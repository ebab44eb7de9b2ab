//! The experiment suites. Experiment `i` of a run with seed `s` draws from
//! `families::rng(s, i)`; rows are emitted in experiment order.
//!
//! | suite | per experiment |
//! |---|---|
//! | rearrange | `random_step_function`, rearranged |
//! | rnorm | `random_step_function` `f`; `‖R f‖_out` sampled on 512 points over `[2^−30, 2^30]` against `‖f‖_in` |
//! | classify, witness | single record, no randomness |
//! | sawyer | `random_coarse_config` at `depth`; smallest pointwise constant for `G` on 64 points in `[ν(Q₀)·2^−24, ν(Q₀)]` |
//! | domination | `random_coarse_config` `(E, μ)` at `depth` |
//! | trace | `random_union_with_area` with `|E| = 4^{−k}`, `k = 1 + i mod min(5, depth)` (`n = 2`); `random_cell_set` with density 1/4 (`n = 1`) |
//! | two-measure | `random_coarse_config` `(f, μ, ν)` at `depth` |

use sawtrace::calderon::{classify_r_lorentz, witness_search, RProfile, SawyerParams, WitnessFunction};
use sawtrace::choquet::{trace_ratio_with, two_measure_trace_ratio_with, HypothesisCaps};
use sawtrace::euclid::{
    domination_ratio_with, growth_constant, make_lattices, sawyer_g_constant, two_weight_constant, Grid,
    PotentialParams, RieszKernel,
};
use sawtrace::families::{self, random_coarse_config, random_step_function};
use sawtrace::lorentz::{lorentz_norm, Exponent, LorentzParams};
use sawtrace::par;
use sawtrace::report::{Table, Value};
use sawtrace::sampled::{LogGrid, SampledProfile};

use crate::config::{LorentzSpec, Params, Suite, SuiteConfig};
use crate::error::CliError;

type Row = Vec<Value>;

fn need<T: Clone>(x: &Option<T>, name: &str, suite: Suite) -> Result<T, CliError> {
    x.clone()
        .ok_or_else(|| CliError::Parse(format!("{suite} needs --{}", name.replace('_', "-"))))
}

fn ex(x: Exponent) -> Value {
    Value::Text(x.to_string())
}

fn lorentz_cols(lp: &LorentzParams) -> [Value; 2] {
    [ex(lp.r()), ex(lp.s())]
}

/// Runs experiments in parallel and collects their rows in order.
fn collect_rows<F>(table: &mut Table, experiments: usize, f: F) -> Result<(), CliError>
where
    F: Fn(usize) -> Result<Row, CliError> + Sync + Send,
{
    for row in par::map_range(experiments, f) {
        table.push(row?)?;
    }
    Ok(())
}

pub fn run(cfg: &SuiteConfig) -> Result<Table, CliError> {
    let p = &cfg.params;
    match cfg.suite {
        Suite::Rearrange => rearrange(p, cfg.seed),
        Suite::Rnorm => rnorm(p, cfg.seed),
        Suite::Classify => classify(p),
        Suite::Witness => witness(p),
        Suite::Sawyer => sawyer(p, cfg.seed),
        Suite::Domination => domination(p, cfg.seed),
        Suite::Trace => trace(p, cfg.seed),
        Suite::TwoMeasure => two_measure(p, cfg.seed),
    }
}

fn rearrange(p: &Params, seed: u64) -> Result<Table, CliError> {
    let mut t = Table::new([
        "experiment",
        "seed",
        "pieces",
        "rearranged_pieces",
        "support",
        "sup",
        "l1",
    ]);
    collect_rows(&mut t, p.experiments.unwrap_or(1000), |i| {
        let f = random_step_function(&mut families::rng(seed, i as u64));
        let fs = f.rearrange();
        Ok(vec![
            i.into(),
            seed.into(),
            f.num_pieces().into(),
            fs.num_pieces().into(),
            fs.support().into(),
            fs.values().first().copied().unwrap_or(0.0).into(),
            lorentz_norm(&f, LorentzParams::lebesgue(1.0)?).into(),
        ])
    })?;
    Ok(t)
}

fn sawyer_params(p: &Params, default: (i64, i64)) -> Result<SawyerParams, CliError> {
    let pe = p.p.unwrap_or(Exponent::ratio(default.0, 1));
    let qe = p.q.unwrap_or(Exponent::ratio(default.1, 1));
    Ok(SawyerParams::new(pe, qe)?)
}

fn rnorm(p: &Params, seed: u64) -> Result<Table, CliError> {
    let sp = sawyer_params(p, (2, 4))?;
    let lin = p.lorentz_in.clone().unwrap_or(LorentzSpec("3,1".into())).parse()?;
    let lout = p.lorentz_out.clone().unwrap_or(LorentzSpec("6,2".into())).parse()?;
    let mut t = Table::new([
        "experiment",
        "p",
        "q",
        "r_in",
        "s_in",
        "r_out",
        "s_out",
        "seed",
        "input_norm",
        "output_norm",
        "ratio",
    ]);
    collect_rows(&mut t, p.experiments.unwrap_or(100), |i| {
        let f = random_step_function(&mut families::rng(seed, i as u64));
        let prof = RProfile::new(&f, sp);
        let rf = SampledProfile::from_fn(LogGrid::standard(), |x| prof.eval(x));
        let a = lorentz_norm(&f, lin);
        let b = rf.lorentz_norm(lout);
        let ratio = if b == 0.0 { 0.0 } else { b / a };
        let mut row: Row = vec![i.into(), ex(sp.p_exponent()), ex(sp.q_exponent())];
        row.extend(lorentz_cols(&lin));
        row.extend(lorentz_cols(&lout));
        row.extend([seed.into(), a.into(), b.into(), ratio.into()]);
        Ok(row)
    })?;
    Ok(t)
}

fn tuple(p: &Params, suite: Suite) -> Result<(SawyerParams, LorentzParams, LorentzParams), CliError> {
    let sp = SawyerParams::new(need(&p.p, "p", suite)?, need(&p.q, "q", suite)?)?;
    let lin = need(&p.lorentz_in, "in", suite)?.parse()?;
    let lout = need(&p.lorentz_out, "out", suite)?.parse()?;
    Ok((sp, lin, lout))
}

fn tuple_cols(sp: &SawyerParams, lin: &LorentzParams, lout: &LorentzParams) -> Row {
    let mut row: Row = vec![ex(sp.p_exponent()), ex(sp.q_exponent())];
    row.extend(lorentz_cols(lin));
    row.extend(lorentz_cols(lout));
    row
}

fn text<T: serde::Serialize>(x: &T) -> Value {
    match serde_json::to_value(x) {
        Ok(serde_json::Value::String(s)) => Value::Text(s),
        Ok(v) => Value::Text(v.to_string()),
        Err(e) => Value::Text(e.to_string()),
    }
}

fn classify(p: &Params) -> Result<Table, CliError> {
    let (sp, lin, lout) = tuple(p, Suite::Classify)?;
    let v = classify_r_lorentz(&sp, &lin, &lout);
    let mut t = Table::new([
        "p",
        "q",
        "r_in",
        "s_in",
        "r_out",
        "s_out",
        "verdict",
        "matched_condition",
    ]);
    let mut row = tuple_cols(&sp, &lin, &lout);
    row.extend([text(&v.verdict), text(&v.matched_condition)]);
    t.push(row)?;
    Ok(t)
}

fn witness(p: &Params) -> Result<Table, CliError> {
    let (sp, lin, lout) = tuple(p, Suite::Witness)?;
    let target = p.target.unwrap_or(1e3);
    let w = witness_search(&sp, &lin, &lout, target)?;
    let mut t = Table::new([
        "p",
        "q",
        "r_in",
        "s_in",
        "r_out",
        "s_out",
        "verdict",
        "matched_condition",
        "family",
        "witness_log2",
        "sweep_index",
        "ratio",
        "log10_ratio",
        "target",
        "target_reached",
    ]);
    let log2 = match w.witness {
        WitnessFunction::TruncatedPower { log2_truncation, .. } => log2_truncation as i64,
        WitnessFunction::Characteristic { log2_a } => log2_a as i64,
    };
    let mut row = tuple_cols(&sp, &lin, &lout);
    row.extend([
        text(&w.verdict.verdict),
        text(&w.verdict.matched_condition),
        w.family.into(),
        log2.into(),
        w.sweep_index.into(),
        w.ratio.into(),
        w.log10_ratio.into(),
        target.into(),
        w.target_reached.into(),
    ]);
    t.push(row)?;
    Ok(t)
}

/// `(n, α, p, d, δ, depth)` for the planar suites.
struct Planar {
    alpha: f64,
    p: f64,
    d: f64,
    depth: u32,
    grid: Grid,
}

fn planar(p: &Params, suite: Suite, alpha: f64, pp: f64, depth: u32) -> Result<Planar, CliError> {
    let n = p.n.unwrap_or(2);
    if n != 2 {
        return Err(CliError::Range(format!(
            "{suite} runs in the plane only (n = 2), got n = {n}"
        )));
    }
    let depth = p.depth.unwrap_or(depth);
    if depth < families::COARSE_DEPTH {
        return Err(CliError::Range(format!(
            "{suite} needs depth ≥ {}, got {depth}",
            families::COARSE_DEPTH
        )));
    }
    Ok(Planar {
        alpha: p.alpha.unwrap_or(alpha),
        p: p.p.map_or(pp, |e| e.value()),
        d: p.d.unwrap_or(2.0),
        depth,
        grid: Grid::unit(2, depth)?,
    })
}

fn sawyer(p: &Params, seed: u64) -> Result<Table, CliError> {
    let pl = planar(p, Suite::Sawyer, 0.5, 2.0, 5)?;
    let delta = p.delta.unwrap_or(0.75);
    let pp = PotentialParams::new(2, pl.d, pl.alpha, pl.p, delta)?;
    let lats = make_lattices(&pl.grid)?;
    let mut t = Table::new([
        "experiment",
        "alpha",
        "p",
        "d",
        "delta",
        "depth",
        "seed",
        "growth_constant",
        "two_weight_constant",
        "constant",
    ]);
    collect_rows(&mut t, p.experiments.unwrap_or(20), |i| {
        let c = random_coarse_config(&mut families::rng(seed, i as u64)).realize(pl.depth)?;
        let total = c.nu.total();
        let t_grid = LogGrid::new(total * 2f64.powi(-24), total, 64)?.points();
        let constant = sawyer_g_constant(&c.f, &c.mu, &c.nu, &pp, &lats, &t_grid)?;
        Ok(vec![
            i.into(),
            pl.alpha.into(),
            pl.p.into(),
            pl.d.into(),
            delta.into(),
            pl.depth.into(),
            seed.into(),
            growth_constant(&c.mu, pl.d, &lats)?.into(),
            two_weight_constant(&c.mu, &c.nu, pl.alpha, pl.p, pl.d, &lats)?.into(),
            constant.into(),
        ])
    })?;
    Ok(t)
}

fn domination(p: &Params, seed: u64) -> Result<Table, CliError> {
    let pl = planar(p, Suite::Domination, 0.5, 3.0, 5)?;
    let delta = p.delta.unwrap_or(1.0);
    let pp = PotentialParams::new(2, pl.d, pl.alpha, pl.p, delta)?;
    let lats = make_lattices(&pl.grid)?;
    let kernel = RieszKernel::new(&pl.grid, pl.alpha, pl.d)?;
    let mut t = Table::new([
        "experiment",
        "theta",
        "beta",
        "d",
        "depth",
        "seed",
        "max_ratio",
        "argmax",
        "numerator",
        "denominator",
    ]);
    collect_rows(&mut t, p.experiments.unwrap_or(50), |i| {
        let c = random_coarse_config(&mut families::rng(seed, i as u64)).realize(pl.depth)?;
        let r = domination_ratio_with(&kernel, &c.e, &c.mu, &pp, &lats)?;
        Ok(vec![
            i.into(),
            pp.theta().into(),
            pp.beta().into(),
            pl.d.into(),
            pl.depth.into(),
            seed.into(),
            r.max_ratio.into(),
            r.argmax.into(),
            r.numerator.into(),
            r.denominator.into(),
        ])
    })?;
    Ok(t)
}

fn trace(p: &Params, seed: u64) -> Result<Table, CliError> {
    let n = p.n.unwrap_or(2);
    if !(n == 1 || n == 2) {
        return Err(CliError::Range(format!("trace needs n ∈ {{1, 2}}, got n = {n}")));
    }
    let alpha = p.alpha.unwrap_or(0.5);
    let pp = p.p.map_or(2.0, |e| e.value());
    let depth = p.depth.unwrap_or(6);
    let grid = Grid::unit(n, depth)?;
    let kernel = RieszKernel::new(&grid, alpha, n as f64)?;
    let mut t = Table::new(["experiment", "alpha", "p", "depth", "seed", "lhs", "rhs", "ratio"]);
    let kmax = depth.clamp(1, 5) as usize;
    collect_rows(&mut t, p.experiments.unwrap_or(20), |i| {
        let mut rng = families::rng(seed, i as u64);
        let e = if n == 2 && depth > 0 {
            families::random_union_with_area(&mut rng, &grid, 1 + (i % kmax) as u32)
        } else {
            let e = families::random_cell_set(&mut rng, &grid, 0.25);
            if e.is_empty() {
                sawtrace::euclid::CellSet::new(grid.clone(), [0])?
            } else {
                e
            }
        };
        let r = trace_ratio_with(&kernel, &e, alpha, pp)?;
        Ok(vec![
            i.into(),
            alpha.into(),
            pp.into(),
            depth.into(),
            seed.into(),
            r.lhs.into(),
            r.rhs.into(),
            r.ratio.into(),
        ])
    })?;
    Ok(t)
}

fn two_measure(p: &Params, seed: u64) -> Result<Table, CliError> {
    let pl = planar(p, Suite::TwoMeasure, 0.5, 2.0, 5)?;
    let lats = make_lattices(&pl.grid)?;
    let kernel = RieszKernel::new(&pl.grid, pl.alpha, pl.d)?;
    let caps = HypothesisCaps {
        growth: p.growth_cap.unwrap_or(f64::INFINITY),
        two_weight: p.two_weight_cap.unwrap_or(f64::INFINITY),
    };
    let mut t = Table::new([
        "experiment",
        "alpha",
        "p",
        "d",
        "depth",
        "seed",
        "lhs",
        "rhs",
        "ratio",
        "growth_constant",
        "two_weight_constant",
        "exceeds_cap",
    ]);
    collect_rows(&mut t, p.experiments.unwrap_or(20), |i| {
        let c = random_coarse_config(&mut families::rng(seed, i as u64)).realize(pl.depth)?;
        let r = two_measure_trace_ratio_with(&kernel, &c.f, &c.mu, &c.nu, pl.alpha, pl.p, pl.d, &lats, caps)?;
        Ok(vec![
            i.into(),
            pl.alpha.into(),
            pl.p.into(),
            pl.d.into(),
            pl.depth.into(),
            seed.into(),
            r.lhs.into(),
            r.rhs.into(),
            r.ratio.into(),
            r.growth_constant.into(),
            r.two_weight_constant.into(),
            r.exceeds_cap.into(),
        ])
    })?;
    Ok(t)
}
