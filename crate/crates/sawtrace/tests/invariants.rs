#[path = "support/properties.rs"]
mod properties;

use properties::{ALL, SEED};

fn run(name: &str) {
    let prop = ALL.iter().find(|p| p.name == name).expect("known property");
    if let Err(e) = prop.run(SEED) {
        panic!("{name}: {e}");
    }
}

macro_rules! invariant_tests {
    ($($name:ident),* $(,)?) => {
        $(#[test] fn $name() { run(stringify!($name)); })*

        #[test]
        fn every_property_has_a_test() {
            let listed = [$(stringify!($name)),*];
            for p in ALL {
                assert!(listed.contains(&p.name), "{} has no test", p.name);
            }
        }
    };
}

invariant_tests!(
    equimeasurability,
    lattice_property,
    double_star_dominates,
    double_star_subadditive,
    hardy_littlewood,
    diagonal_lorentz_is_lebesgue,
    double_star_lorentz_bound,
    lorentz_dilation,
    holmstedt_equivalence,
    k_functional_monotone,
    r_sublinear_homogeneous,
    r_endpoint_constants,
    r_dilation_identity,
    r_power_transfer,
    tail_sup_immaterial,
    balance_dilation_invariance,
    extremal_profile_domination,
    frac_maximal_monotone,
    m0_indicator_at_most_one,
    riesz_linear_symmetric,
    measure_rearrangement_equimeasurable,
    g_pipeline_depth_stable,
    content_monotone,
    choquet_monotone,
    content_subadditive,
    content_bounds,
    choquet_homogeneous,
    full_dimension_content_is_volume,
    content_matches_enumeration,
);

#[test]
fn case_budget_totals_two_thousand() {
    assert_eq!(ALL.iter().map(|p| p.cases).sum::<u32>(), 2000);
}
