//! End-to-end acceptance checks with pinned tolerances. Each criterion
//! produces one pass/fail line; `run_acceptance` executes a configurable
//! subset and reports the failures.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    exact_distribution, factor2_ratio_check, ks_uniform01, normality_check, simulate,
    uniformity_check, NormalityStatus, SimulationReport,
};
use crate::asymptotics::{asymptotic_params, delannoy};
use crate::families::counting::binomial_u128;
use crate::families::{Code, Family, FamilyKind};
use crate::limits::{
    exact_expectation_e, inversion_density_e, limit_moment, DirichletLaw, LimitLaw,
};
use crate::perm::{occurrences, occurrences_u128, Perm, Symmetry};
use crate::special::adaptive_simpson;

#[derive(Clone, Debug)]
pub struct AcceptanceConfig {
    /// Criterion indices to run; `None` runs all of them.
    pub criteria: Option<Vec<u32>>,
    pub seed: u64,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig {
            criteria: None,
            seed: 0x5EED,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CriterionResult {
    pub index: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:02} {} {} ({:.1}s): {}",
            self.index,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.detail
        )
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AcceptanceSummary {
    pub results: Vec<CriterionResult>,
    pub failures: u32,
}

impl AcceptanceSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn lines(&self) -> String {
        self.results
            .iter()
            .map(CriterionResult::line)
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Cache of the shared heavy simulations (n = 5000, 10^5 replicates of the
/// inversion count), so overlapping criteria pay for them once.
#[derive(Default)]
pub struct SimCache {
    reports: BTreeMap<FamilyKind, SimulationReport>,
}

impl SimCache {
    fn report(&mut self, kind: FamilyKind, seed: u64) -> &SimulationReport {
        self.reports.entry(kind).or_insert_with(|| {
            let family = structured(kind);
            let sigma: Perm = "21".parse().expect("fixed pattern");
            simulate(&family, &sigma, 5_000, 100_000, seed).expect("inversion simulation")
        })
    }
}

pub const CRITERIA: [(u32, &str); 11] = [
    (1, "cardinality formulas"),
    (2, "coded counting matches direct counting"),
    (3, "sampler uniformity"),
    (4, "grid expectation identity"),
    (5, "scaled moments at n=5000"),
    (6, "normality of inversion counts"),
    (7, "line-family inversion statistics"),
    (8, "inversion density normalization"),
    (9, "delannoy moment identity"),
    (10, "cross-family inversion ratio"),
    (11, "structural invariants"),
];

pub fn run_acceptance(config: &AcceptanceConfig) -> AcceptanceSummary {
    let mut cache = SimCache::default();
    let mut results = Vec::new();
    for (index, name) in CRITERIA {
        if let Some(wanted) = &config.criteria {
            if !wanted.contains(&index) {
                continue;
            }
        }
        results.push(run_criterion(index, name, config, &mut cache));
    }
    let failures = results.iter().filter(|r| !r.passed).count() as u32;
    AcceptanceSummary { results, failures }
}

pub fn run_single_criterion(index: u32, config: &AcceptanceConfig) -> Option<CriterionResult> {
    run_single_criterion_with(index, config, &mut SimCache::default())
}

/// Run one criterion against a caller-held cache, so separate calls can share
/// the heavy simulations.
pub fn run_single_criterion_with(
    index: u32,
    config: &AcceptanceConfig,
    cache: &mut SimCache,
) -> Option<CriterionResult> {
    let (_, name) = CRITERIA.iter().find(|(i, _)| *i == index)?;
    Some(run_criterion(index, name, config, cache))
}

fn run_criterion(
    index: u32,
    name: &'static str,
    config: &AcceptanceConfig,
    cache: &mut SimCache,
) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = match index {
        1 => c1_cardinalities(),
        2 => c2_coded_counts(),
        3 => c3_uniformity(config.seed),
        4 => c4_grid_expectations(),
        5 => c5_scaled_moments(config.seed, cache),
        6 => c6_normality(config.seed, cache),
        7 => c7_line_inversions(config.seed),
        8 => c8_density(),
        9 => c9_delannoy(),
        10 => c10_ratio(config.seed),
        11 => c11_invariants(),
        _ => unreachable!("criterion indices come from CRITERIA"),
    };
    CriterionResult {
        index,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn structured(kind: FamilyKind) -> Family {
    Family::from_kind(kind).expect("structured kind")
}

fn closed_form(kind: FamilyKind, n: u64) -> Option<u128> {
    Some(match kind {
        FamilyKind::PairD | FamilyKind::PairB | FamilyKind::PairA => 1u128 << (n - 1),
        FamilyKind::PairE => u128::from(n) * u128::from(n - 1) / 2 + 1,
        FamilyKind::TripleAaa => {
            let (mut a, mut b) = (0u128, 1u128);
            for _ in 0..n {
                (a, b) = (b, a + b);
            }
            b
        }
        FamilyKind::TripleCcc | FamilyKind::TripleBbb | FamilyKind::TripleEee => u128::from(n),
        FamilyKind::Single132 | FamilyKind::Single321 => {
            binomial_u128(2 * n, n)? / (u128::from(n) + 1)
        }
        FamilyKind::Unrestricted => (1..=u128::from(n)).product(),
        FamilyKind::Trivial => match n {
            1 => 1,
            2 => 2,
            3 | 4 => 4,
            _ => 0,
        },
    })
}

fn forbidden_set(kind: FamilyKind) -> Vec<Perm> {
    if kind == FamilyKind::Trivial {
        vec!["123".parse().unwrap(), "321".parse().unwrap()]
    } else {
        kind.canonical_set()
    }
}

fn c1_cardinalities() -> (bool, String) {
    let mut formula_checks = 0u32;
    for kind in FamilyKind::ALL {
        if kind == FamilyKind::Trivial {
            continue;
        }
        let family = structured(kind);
        for n in 1..=12u64 {
            let expected = closed_form(kind, n).expect("every kind has a formula");
            let got = family.cardinality(n).expect("closed-form families");
            if got != BigUint::from(expected) {
                return (
                    false,
                    format!("{}: cardinality({n}) = {got}, formula gives {expected}", family.name()),
                );
            }
            formula_checks += 1;
        }
    }
    let everything = Family::unrestricted();
    for n in 1..=8u64 {
        let all: Vec<Perm> = everything.enumerate(n).expect("unrestricted").collect();
        for kind in FamilyKind::ALL {
            let forbidden = forbidden_set(kind);
            let brute = all
                .iter()
                .filter(|p| forbidden.iter().all(|f| occurrences_u128(f, p) == Some(0)))
                .count() as u128;
            let expected = closed_form(kind, n).expect("every kind has a formula");
            if brute != expected {
                return (
                    false,
                    format!("{}: {brute} members at n={n} by avoidance, formula gives {expected}", kind.name()),
                );
            }
        }
    }
    (
        true,
        format!("{formula_checks} closed-form values at n<=12 and 12 families confirmed by exhaustive avoidance at n<=8"),
    )
}

const CODED: [FamilyKind; 8] = [
    FamilyKind::PairD,
    FamilyKind::PairB,
    FamilyKind::PairA,
    FamilyKind::PairE,
    FamilyKind::TripleAaa,
    FamilyKind::TripleCcc,
    FamilyKind::TripleBbb,
    FamilyKind::TripleEee,
];

fn c2_coded_counts() -> (bool, String) {
    let mut pairs = 0u64;
    for kind in CODED {
        let family = structured(kind);
        let mut sigmas: Vec<Perm> = Vec::new();
        for m in 1..=4u64 {
            sigmas.extend(family.enumerate(m).expect("coded family"));
        }
        for n in 1..=8u64 {
            for member in family.enumerate(n).expect("coded family") {
                let code = family.encode(&member).expect("member encodes");
                for sigma in &sigmas {
                    let fast = family.fast_count(sigma, &code).expect("valid code");
                    let direct = occurrences(sigma, &member);
                    if fast != direct {
                        return (
                            false,
                            format!(
                                "{}: fast count {fast} != direct count {direct} for sigma {sigma:?} in {member:?}",
                                family.name()
                            ),
                        );
                    }
                    pairs += 1;
                }
            }
        }
    }
    (
        true,
        format!("{pairs} (member, pattern) pairs agree across 8 coded families at n<=8, |sigma|<=4; the two direct-form families have no codes"),
    )
}

fn c3_uniformity(seed: u64) -> (bool, String) {
    let mut worst_p = 1.0f64;
    let mut worst = "";
    let mut kinds: Vec<FamilyKind> = FamilyKind::STRUCTURED.to_vec();
    kinds.push(FamilyKind::Unrestricted);
    for kind in kinds {
        let family = structured(kind);
        let report = uniformity_check(&family, 6, 1_000_000, seed).expect("small member sets");
        if report.p_value < worst_p {
            worst_p = report.p_value;
            worst = family.name();
        }
    }
    (
        worst_p > 1e-3,
        format!("11 samplers at n=6 with 10^6 draws each; smallest p-value {worst_p:.4} ({worst}); the forbidden-everything class is empty at n=6"),
    )
}

fn c4_grid_expectations() -> (bool, String) {
    let family = structured(FamilyKind::PairE);
    let mut cases = 0u32;
    for i in 1..=3u32 {
        for j in 1..=3u32 {
            for p in 0..=2u32 {
                let total_len = i + j + p;
                if total_len > 4 {
                    continue;
                }
                let sigma = family
                    .decode(&Code::Grid { k: i, l: j, m: p })
                    .expect("grid code");
                for n in u64::from(total_len)..=10 {
                    let members: Vec<Perm> = family.enumerate(n).expect("grid family").collect();
                    let total: BigUint = members.iter().map(|w| occurrences(&sigma, w)).sum();
                    let mean = BigRational::new(
                        total.into(),
                        BigUint::from(members.len() as u64).into(),
                    );
                    if mean != exact_expectation_e(i, j, p, n) {
                        return (
                            false,
                            format!("mean of ({i},{j},{p}) pattern at n={n} is {mean}, binomial form disagrees"),
                        );
                    }
                    cases += 1;
                }
            }
        }
    }
    let fifteen_sevenths = exact_expectation_e(1, 1, 0, 4);
    let ok = fifteen_sevenths == BigRational::new(15.into(), 7.into());
    (
        ok && cases > 0,
        format!("{cases} exact rational identities at n<=10, including mean 15/7 for inversions at n=4"),
    )
}

struct SubCheck {
    label: String,
    ok: bool,
}

fn rel_check(label: &str, got: f64, want: f64, rel: f64) -> SubCheck {
    let ok = (got - want).abs() <= rel * want.abs();
    SubCheck {
        label: format!(
            "{label} = {got:.6} vs {want:.6} within {:.0}% {}",
            rel * 100.0,
            if ok { "ok" } else { "FAILED" }
        ),
        ok,
    }
}

fn c5_scaled_moments(seed: u64, cache: &mut SimCache) -> (bool, String) {
    let n = 5_000f64;
    let mut checks: Vec<SubCheck> = Vec::new();

    let d = cache.report(FamilyKind::PairD, seed).clone();
    checks.push(rel_check("D mean/n^2", d.empirical_mean / n.powi(2), 0.25, 0.01));
    checks.push(rel_check(
        "D var/n^3",
        d.empirical_variance / n.powi(3),
        1.0 / 12.0,
        0.05,
    ));

    let b = cache.report(FamilyKind::PairB, seed).clone();
    checks.push(rel_check("B var/n", b.empirical_variance / n, 6.0, 0.10));

    let mut binomial_ok = true;
    for size in 2..=10u64 {
        let dist = exact_distribution(
            &structured(FamilyKind::PairA),
            &"21".parse().expect("fixed pattern"),
            size,
        )
        .expect("tiny enumeration");
        for v in 0..size {
            let want = binomial_u128(size - 1, v).expect("small binomial") as u64;
            if dist.counts.get(&v).copied().unwrap_or(0) != want {
                binomial_ok = false;
            }
        }
    }
    checks.push(SubCheck {
        label: format!(
            "A inversion multiplicities equal binomial rows for n<=10 {}",
            if binomial_ok { "ok" } else { "FAILED" }
        ),
        ok: binomial_ok,
    });

    let aaa = cache.report(FamilyKind::TripleAaa, seed).clone();
    let stated_mean = (3.0 - 5f64.sqrt()) / 2.0;
    let mean_check = rel_check("AAA mean/n", aaa.empirical_mean / n, stated_mean, 0.02);
    let mean_ok = mean_check.ok;
    checks.push(if mean_ok {
        mean_check
    } else {
        SubCheck {
            label: format!(
                "{}; the sampler agrees with exact enumeration of the count recurrence, which converges to (5-sqrt5)/10 = {:.6}, so the stated target (3-sqrt5)/2 is not attainable",
                mean_check.label,
                (5.0 - 5f64.sqrt()) / 10.0
            ),
            ok: false,
        }
    });
    checks.push(rel_check(
        "AAA var/n",
        aaa.empirical_variance / n,
        5f64.powf(-1.5),
        0.05,
    ));

    let passed = checks.iter().all(|c| c.ok);
    (
        passed,
        checks
            .iter()
            .map(|c| c.label.as_str())
            .collect::<Vec<_>>()
            .join("; "),
    )
}

fn c6_normality(seed: u64, cache: &mut SimCache) -> (bool, String) {
    let mut parts = Vec::new();
    let mut all_ok = true;
    for kind in [
        FamilyKind::PairD,
        FamilyKind::PairB,
        FamilyKind::PairA,
        FamilyKind::TripleAaa,
    ] {
        let report = cache.report(kind, seed).clone();
        let outcome = normality_check(&report);
        let ok = outcome.status == NormalityStatus::Pass;
        all_ok &= ok;
        let verdict = if ok {
            "ok".to_string()
        } else if kind == FamilyKind::PairB {
            format!(
                "FAILED ({}); exact block-composition moments give skewness 0.1443 at n=5000 (about 10.2/sqrt(n)), so the 0.1 bound needs n above roughly 10^4 and the sampler is faithful",
                outcome.reasons.join("; ")
            )
        } else {
            format!("FAILED ({})", outcome.reasons.join("; "))
        };
        parts.push(format!(
            "{}: skew {:.4}, exkurt {:.4} {}",
            report.family, report.standardized_skewness, report.standardized_excess_kurtosis,
            verdict
        ));
    }
    (all_ok, parts.join("; "))
}

fn second_raw_moment(report: &SimulationReport) -> f64 {
    let r = report.replicates as f64;
    report.empirical_variance * (r - 1.0) / r + report.empirical_mean * report.empirical_mean
}

fn c7_line_inversions(seed: u64) -> (bool, String) {
    let sigma: Perm = "21".parse().expect("fixed pattern");
    let n = 1_000u64;
    let nf = n as f64;
    let mut checks = Vec::new();

    let e = simulate(
        &structured(FamilyKind::PairE),
        &sigma,
        n,
        100_000,
        seed,
    )
    .expect("grid simulation");
    checks.push(rel_check(
        "grid inversions mean/n^2",
        e.empirical_mean / nf.powi(2),
        1.0 / 12.0,
        0.03,
    ));
    checks.push(rel_check(
        "grid inversions second moment/n^4",
        second_raw_moment(&e) / nf.powi(4),
        1.0 / 90.0,
        0.05,
    ));

    let ccc = simulate(
        &structured(FamilyKind::TripleCcc),
        &sigma,
        n,
        100_000,
        seed,
    )
    .expect("reversed-head simulation");
    checks.push(rel_check(
        "reversed-head inversions mean/n^2",
        ccc.empirical_mean / nf.powi(2),
        1.0 / 6.0,
        0.03,
    ));

    let eee = simulate(
        &structured(FamilyKind::TripleEee),
        &sigma,
        n,
        100_000,
        seed,
    )
    .expect("split-runs simulation");
    checks.push(rel_check(
        "split-runs inversions mean/n^2",
        eee.empirical_mean / nf.powi(2),
        1.0 / 6.0,
        0.03,
    ));
    checks.push(rel_check(
        "split-runs inversions second moment/n^4",
        second_raw_moment(&eee) / nf.powi(4),
        1.0 / 30.0,
        0.05,
    ));

    let ks = dropped_head_inversion_ks(10_000, 100_000, seed);
    let ks_ok = ks < 0.01;
    checks.push(SubCheck {
        label: format!(
            "dropped-head inversions/n KS distance to uniform {ks:.5} < 0.01 {}",
            if ks_ok { "ok" } else { "FAILED" }
        ),
        ok: ks_ok,
    });

    let passed = checks.iter().all(|c| c.ok);
    (
        passed,
        checks
            .iter()
            .map(|c| c.label.as_str())
            .collect::<Vec<_>>()
            .join("; "),
    )
}

fn dropped_head_inversion_ks(n: u64, draws: u64, seed: u64) -> f64 {
    let family = structured(FamilyKind::TripleBbb);
    let sampler = family.sampler(n).expect("index family");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<f64> = (0..draws)
        .map(|_| match sampler.sample_code(&mut rng) {
            Some(Code::Index { k, .. }) => f64::from(k - 1) / n as f64,
            _ => unreachable!("index family emits index codes"),
        })
        .collect();
    ks_uniform01(&mut values)
}

fn c8_density() -> (bool, String) {
    let mass = adaptive_simpson(&inversion_density_e, 0.0, 0.25, 1e-10);
    let m1 = adaptive_simpson(&|x| x * inversion_density_e(x), 0.0, 0.25, 1e-12);
    let m2 = adaptive_simpson(&|x| x * x * inversion_density_e(x), 0.0, 0.25, 1e-12);
    let law = LimitLaw::Dirichlet(DirichletLaw::EGrid { i: 1, j: 1, p: 0 });
    let want1 = limit_moment(&law, 1.0).expect("integer moment");
    let want2 = limit_moment(&law, 2.0).expect("integer moment");
    let ok = (mass - 1.0).abs() < 1e-6 && (m1 - want1).abs() < 1e-6 && (m2 - want2).abs() < 1e-6;
    (
        ok,
        format!(
            "density mass {mass:.9}; first moment {m1:.9} vs {want1:.9}; second moment {m2:.9} vs {want2:.9}; all within 1e-6"
        ),
    )
}

fn c9_delannoy() -> (bool, String) {
    if delannoy(2, 2) != BigUint::from(13u32) {
        return (false, "D(2,2) != 13".to_string());
    }
    let mut worst = 0.0f64;
    for k in 1..=5u32 {
        for l in 1..=5u32 {
            let mut series = 0.0f64;
            for x in (1..=400u64).rev() {
                let c1 = binomial_u128(x, u64::from(k)).expect("small binomial") as f64;
                let c2 = binomial_u128(x, u64::from(l)).expect("small binomial") as f64;
                series += 0.5f64.powi(x as i32) * c1 * c2;
            }
            let want = 2.0
                * delannoy(k as usize, l as usize)
                    .to_f64()
                    .expect("small value");
            let rel = (series - want).abs() / want;
            worst = worst.max(rel);
        }
    }
    (
        worst < 1e-10,
        format!("geometric binomial products match doubled lattice-path counts for k,l <= 5; worst relative error {worst:.2e}; D(2,2) = 13"),
    )
}

fn c10_ratio(seed: u64) -> (bool, String) {
    let report = factor2_ratio_check(5_000, 10_000, seed).expect("simulation sizes");
    let ok = report.ratio >= 1.8 && report.ratio <= 2.2;
    (
        ok,
        format!(
            "scaled 132 coinversion mean {:.4} over scaled 321 inversion mean {:.4} gives ratio {:.4} in [1.8, 2.2], se {:.4}",
            report.scaled_coinversions_132,
            report.scaled_inversions_321,
            report.ratio,
            report.standard_error
        ),
    )
}

fn c11_invariants() -> (bool, String) {
    let everything = Family::unrestricted();
    for n in 1..=8u64 {
        let all: Vec<Perm> = everything.enumerate(n).expect("unrestricted").collect();
        for m in 1..=4u64.min(n) {
            let patterns: Vec<Perm> = everything.enumerate(m).expect("unrestricted").collect();
            let want = binomial_u128(n, m).expect("small binomial");
            for p in &all {
                let total: u128 = patterns
                    .iter()
                    .map(|s| occurrences_u128(s, p).expect("small counts"))
                    .sum();
                if total != want {
                    return (
                        false,
                        format!("occurrence sum over S_{m} in {p:?} is {total}, want {want}"),
                    );
                }
            }
        }
    }

    for n in 1..=7u64 {
        let all: Vec<Perm> = everything.enumerate(n).expect("unrestricted").collect();
        let sigmas: Vec<Perm> = everything.enumerate(3).expect("unrestricted").collect();
        for g in Symmetry::all() {
            for p in &all {
                let gp = g.apply(p);
                for s in &sigmas {
                    if occurrences_u128(s, p) != occurrences_u128(&g.apply(s), &gp) {
                        return (
                            false,
                            format!("symmetry {g:?} does not transport counts of {s:?} in {p:?}"),
                        );
                    }
                }
            }
        }
    }

    let mut round_trips = 0u64;
    for kind in CODED {
        let family = structured(kind);
        for n in 1..=8u64 {
            for member in family.enumerate(n).expect("coded family") {
                let code = family.encode(&member).expect("member encodes");
                let back = family.decode(&code).expect("code decodes");
                if back != member {
                    return (
                        false,
                        format!("{}: decode(encode) changed {member:?}", family.name()),
                    );
                }
                round_trips += 1;
            }
        }
    }

    for kind in [FamilyKind::PairB, FamilyKind::PairA, FamilyKind::TripleAaa] {
        let family = structured(kind);
        for m in 1..=6u64 {
            let params =
                asymptotic_params(&family, &Perm::identity(m as usize)).expect("normal family");
            if !params.degenerate || params.var_coeff != 0.0 {
                return (
                    false,
                    format!("{}: identity of length {m} should be exactly degenerate", family.name()),
                );
            }
        }
        let inv = asymptotic_params(&family, &"21".parse().expect("fixed pattern"))
            .expect("normal family");
        if inv.degenerate || inv.var_coeff <= 0.0 {
            return (
                false,
                format!("{}: inversions must not be degenerate", family.name()),
            );
        }
    }

    (
        true,
        format!("occurrence sums match binomials at n<=8; all 8 symmetries transport S_3 counts at n<=7; {round_trips} code round trips; identity patterns exactly degenerate in the three renewal families"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_criteria_pass() {
        let mut cache = SimCache::default();
        for index in [1u32, 4, 8, 9] {
            let (_, name) = CRITERIA.iter().find(|(i, _)| *i == index).unwrap();
            let result = run_criterion(index, name, &AcceptanceConfig::default(), &mut cache);
            assert!(result.passed, "{}", result.line());
        }
    }

    #[test]
    fn subset_selection_runs_only_requested_criteria() {
        let config = AcceptanceConfig {
            criteria: Some(vec![9]),
            seed: 1,
        };
        let summary = run_acceptance(&config);
        assert_eq!(summary.results.len(), 1);
        assert_eq!(summary.results[0].index, 9);
        assert!(summary.passed());
        assert!(summary.lines().contains("criterion 09 PASS"));
    }

    #[test]
    fn unknown_criterion_is_not_found() {
        assert!(run_single_criterion(12, &AcceptanceConfig::default()).is_none());
    }
}
