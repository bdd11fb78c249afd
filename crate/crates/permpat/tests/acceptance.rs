//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line. Criteria 5 and 6 share their n = 5000 simulations
//! through a process-wide cache.

use std::sync::{LazyLock, Mutex};

use permpat::verify::acceptance::{run_single_criterion_with, AcceptanceConfig, SimCache};

static CACHE: LazyLock<Mutex<SimCache>> = LazyLock::new(|| Mutex::new(SimCache::default()));

fn run(index: u32) {
    let config = AcceptanceConfig::default();
    let result = {
        let mut cache = CACHE.lock().unwrap_or_else(|poison| poison.into_inner());
        run_single_criterion_with(index, &config, &mut cache).expect("criterion index is known")
    };
    println!("{}", result.line());
    assert!(result.passed, "{}", result.line());
}

#[test]
fn criterion_01_cardinality_formulas() {
    run(1);
}

#[test]
fn criterion_02_coded_counting_matches_direct_counting() {
    run(2);
}

#[test]
fn criterion_03_sampler_uniformity() {
    run(3);
}

#[test]
fn criterion_04_grid_expectation_identity() {
    run(4);
}

#[test]
fn criterion_05_scaled_moments_at_n_5000() {
    run(5);
}

#[test]
fn criterion_06_normality_of_inversion_counts() {
    run(6);
}

#[test]
fn criterion_07_line_family_inversion_statistics() {
    run(7);
}

#[test]
fn criterion_08_inversion_density_normalization() {
    run(8);
}

#[test]
fn criterion_09_delannoy_moment_identity() {
    run(9);
}

#[test]
fn criterion_10_cross_family_inversion_ratio() {
    run(10);
}

#[test]
fn criterion_11_structural_invariants() {
    run(11);
}
