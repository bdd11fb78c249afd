//! Statistical and exact verification: reproducible simulation reports,
//! exhaustive count distributions, normality and uniformity checks, and the
//! cross-family inversion ratio.

pub mod acceptance;

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{CodeCounter, Family, FamilyError, FamilyKind, Sampler};
use crate::limits::{
    exact_expectation_e, limit_law, limit_moment, scaling_exponent, DirichletLaw, LimitLaw,
};
use crate::perm::{occurrences_u128, Pattern, Perm};
use crate::special::chi_square_sf;

/// Replicates per random stream. Each chunk owns a fixed ChaCha stream, so
/// results do not depend on how chunks are scheduled across threads.
const CHUNK: u64 = 4096;

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const UNIFORMITY_MEMBER_BOUND: u64 = 10_000;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("cardinality {cardinality} exceeds the enumeration budget {budget}")]
    BudgetExceeded { cardinality: BigUint, budget: u64 },
    #[error("cardinality {cardinality} exceeds the uniformity bound {bound}")]
    TooManyMembers { cardinality: BigUint, bound: u64 },
    #[error("pattern length {sigma} exceeds the sampled size {n}")]
    PatternTooLong { sigma: usize, n: u64 },
    #[error("need at least {need} replicates, got {got}")]
    TooFewReplicates { need: u64, got: u64 },
    #[error("size {n} is too small, need at least {need}")]
    SizeTooSmall { n: u64, need: u64 },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Streaming central-moment accumulator. Merging two accumulators yields the
/// same state as one pass over the concatenated samples, so chunked parallel
/// runs reproduce the sequential result exactly.
#[derive(Clone, Copy, Debug, Default)]
pub struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        let n0 = self.count as f64;
        self.count += 1;
        let n = self.count as f64;
        let delta = x - self.mean;
        let delta_n = delta / n;
        let delta_n2 = delta_n * delta_n;
        let term = delta * delta_n * n0;
        self.mean += delta_n;
        self.m4 += term * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * self.m2
            - 4.0 * delta_n * self.m3;
        self.m3 += term * delta_n * (n - 2.0) - 3.0 * delta_n * self.m2;
        self.m2 += term;
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        let delta = other.mean - self.mean;
        let d2 = delta * delta;
        let m2 = self.m2 + other.m2 + d2 * na * nb / n;
        let m3 = self.m3
            + other.m3
            + d2 * delta * na * nb * (na - nb) / (n * n)
            + 3.0 * delta * (na * other.m2 - nb * self.m2) / n;
        let m4 = self.m4
            + other.m4
            + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * d2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * delta * (na * other.m3 - nb * self.m3) / n;
        self.mean += delta * nb / n;
        self.m2 = m2;
        self.m3 = m3;
        self.m4 = m4;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn sample_variance(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        self.m2 / (self.count as f64 - 1.0)
    }

    /// Second raw sample moment.
    pub fn second_raw(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        self.m2 / self.count as f64 + self.mean * self.mean
    }

    pub fn skewness(&self) -> f64 {
        if self.count < 2 || self.m2 <= 0.0 {
            return 0.0;
        }
        let n = self.count as f64;
        (self.m3 / n) / (self.m2 / n).powf(1.5)
    }

    pub fn excess_kurtosis(&self) -> f64 {
        if self.count < 2 || self.m2 <= 0.0 {
            return 0.0;
        }
        let n = self.count as f64;
        (self.m4 / n) / (self.m2 / n).powi(2) - 3.0
    }
}

/// Summary of `replicates` independent counts of `sigma` in uniform members
/// at size `n`. Fully determined by (family, sigma, n, replicates, seed),
/// except for `wallClock`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SimulationReport {
    pub family: String,
    pub sigma: String,
    pub n: u64,
    pub replicates: u64,
    pub seed: u64,
    pub empirical_mean: f64,
    pub empirical_variance: f64,
    pub standardized_skewness: f64,
    pub standardized_excess_kurtosis: f64,
    pub theoretical_mean: Option<f64>,
    pub theoretical_variance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalized_histogram: Option<BTreeMap<u64, f64>>,
    pub wall_clock: f64,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SimulateOptions {
    pub histogram: bool,
}

enum CountPlan {
    Coded(CodeCounter),
    Inversions,
    CoInversions,
    Occurrences(Pattern),
}

impl CountPlan {
    fn new(family: &Family, sigma: &Pattern) -> Result<CountPlan, FamilyError> {
        match family.kind() {
            FamilyKind::Single132
            | FamilyKind::Single321
            | FamilyKind::Unrestricted
            | FamilyKind::Trivial => Ok(match sigma.values() {
                [2, 1] => CountPlan::Inversions,
                [1, 2] => CountPlan::CoInversions,
                _ => CountPlan::Occurrences(sigma.clone()),
            }),
            _ => Ok(CountPlan::Coded(CodeCounter::new(family, sigma)?)),
        }
    }

    fn draw<R: Rng + ?Sized>(&self, sampler: &Sampler, rng: &mut R) -> f64 {
        match self {
            CountPlan::Coded(counter) => {
                let code = sampler.sample_code(rng).expect("coded family");
                counter.count_f64(&code)
            }
            CountPlan::Inversions => inversion_count(sampler.sample(rng).values()) as f64,
            CountPlan::CoInversions => {
                let p = sampler.sample(rng);
                let n = p.len() as u64;
                (n * (n - 1) / 2 - inversion_count(p.values())) as f64
            }
            CountPlan::Occurrences(sigma) => {
                let p = sampler.sample(rng);
                match occurrences_u128(sigma, &p) {
                    Some(c) => c as f64,
                    None => f64::INFINITY,
                }
            }
        }
    }
}

/// Number of inversions, via a Fenwick tree over the 1-based values.
pub fn inversion_count(values: &[u32]) -> u64 {
    let n = values.len();
    let mut tree = vec![0u32; n + 1];
    let mut inv = 0u64;
    for (i, &v) in values.iter().enumerate() {
        let mut idx = v as usize;
        let mut at_most = 0u64;
        while idx > 0 {
            at_most += u64::from(tree[idx]);
            idx -= idx & idx.wrapping_neg();
        }
        inv += i as u64 - at_most;
        let mut idx = v as usize;
        while idx <= n {
            tree[idx] += 1;
            idx += idx & idx.wrapping_neg();
        }
    }
    inv
}

pub fn simulate(
    family: &Family,
    sigma: &Pattern,
    n: u64,
    replicates: u64,
    seed: u64,
) -> Result<SimulationReport, VerifyError> {
    simulate_with(family, sigma, n, replicates, seed, SimulateOptions::default())
}

pub fn simulate_with(
    family: &Family,
    sigma: &Pattern,
    n: u64,
    replicates: u64,
    seed: u64,
    opts: SimulateOptions,
) -> Result<SimulationReport, VerifyError> {
    if !family.is_member(sigma) {
        return Err(FamilyError::NotAMember(sigma.clone(), family.name()).into());
    }
    if (sigma.len() as u64) > n {
        return Err(VerifyError::PatternTooLong {
            sigma: sigma.len(),
            n,
        });
    }
    if replicates < 2 {
        return Err(VerifyError::TooFewReplicates {
            need: 2,
            got: replicates,
        });
    }
    let start = Instant::now();
    let sampler = family.sampler(n)?;
    let plan = CountPlan::new(family, sigma)?;
    let chunk_outs: Vec<(Moments, Option<BTreeMap<u64, u64>>)> = (0..replicates.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let take = CHUNK.min(replicates - c * CHUNK);
            let mut moments = Moments::default();
            let mut hist = opts.histogram.then(BTreeMap::<u64, u64>::new);
            for _ in 0..take {
                let x = plan.draw(&sampler, &mut rng);
                moments.push(x);
                if let Some(h) = hist.as_mut() {
                    *h.entry(x.round() as u64).or_insert(0) += 1;
                }
            }
            (moments, hist)
        })
        .collect();
    let mut moments = Moments::default();
    let mut hist = opts.histogram.then(BTreeMap::<u64, u64>::new);
    for (m, h) in &chunk_outs {
        moments.merge(m);
        if let (Some(acc), Some(part)) = (hist.as_mut(), h.as_ref()) {
            for (k, v) in part {
                *acc.entry(*k).or_insert(0) += v;
            }
        }
    }
    let (theoretical_mean, theoretical_variance) = theoretical_values(family, sigma, n);
    Ok(SimulationReport {
        family: family.name().to_string(),
        sigma: sigma.compact().unwrap_or_else(|| sigma.to_string()),
        n,
        replicates,
        seed,
        empirical_mean: moments.mean(),
        empirical_variance: moments.sample_variance(),
        standardized_skewness: moments.skewness(),
        standardized_excess_kurtosis: moments.excess_kurtosis(),
        theoretical_mean,
        theoretical_variance,
        normalized_histogram: hist.map(|h| {
            h.into_iter()
                .map(|(k, v)| (k, v as f64 / replicates as f64))
                .collect()
        }),
        wall_clock: start.elapsed().as_secs_f64(),
    })
}

/// Mean and variance of the count predicted by the family's limit theory,
/// where one is available at finite n.
fn theoretical_values(family: &Family, sigma: &Pattern, n: u64) -> (Option<f64>, Option<f64>) {
    let nf = n as f64;
    match family.kind() {
        FamilyKind::Unrestricted => {
            let m = sigma.len() as u64;
            let mut mean = 1.0;
            for t in 0..m {
                mean *= (n - t) as f64 / (t + 1) as f64;
            }
            mean /= (1..=m).map(|t| t as f64).product::<f64>();
            let var = (m == 2).then(|| nf * (nf - 1.0) * (2.0 * nf + 5.0) / 72.0);
            (Some(mean), var)
        }
        FamilyKind::Trivial | FamilyKind::Single132 | FamilyKind::Single321 => (None, None),
        _ => match limit_law(family, sigma) {
            Ok(LimitLaw::Normal {
                mean_coeff,
                mean_exponent,
                var_coeff,
            }) => (
                Some(mean_coeff * nf.powi(mean_exponent as i32)),
                Some(var_coeff * nf.powi(2 * mean_exponent as i32 - 1)),
            ),
            Ok(law) => {
                let e = scaling_exponent(&law).expect("normal and excursion laws handled") as i32;
                let mean = if let LimitLaw::Dirichlet(DirichletLaw::EGrid { i, j, p }) = &law {
                    exact_expectation_e(*i, *j, *p, n).to_f64()
                } else {
                    limit_moment(&law, 1.0).ok().map(|m1| m1 * nf.powi(e))
                };
                let var = match (limit_moment(&law, 1.0), limit_moment(&law, 2.0)) {
                    (Ok(m1), Ok(m2)) => Some((m2 - m1 * m1) * nf.powi(2 * e)),
                    _ => None,
                };
                (mean, var)
            }
            Err(_) => (None, None),
        },
    }
}

/// Full distribution of the count of `sigma` over every member at size `n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExactDistribution {
    pub family: String,
    pub sigma: String,
    pub n: u64,
    pub counts: BTreeMap<u64, u64>,
}

impl ExactDistribution {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn mean(&self) -> BigRational {
        let total: u64 = self.total();
        let sum: BigUint = self
            .counts
            .iter()
            .map(|(value, mult)| BigUint::from(*value) * BigUint::from(*mult))
            .sum();
        BigRational::new(sum.into(), BigUint::from(total).into())
    }

    pub fn variance(&self) -> BigRational {
        let sq: BigUint = self
            .counts
            .iter()
            .map(|(value, mult)| BigUint::from(*value) * *value * *mult)
            .sum();
        let mean = self.mean();
        BigRational::new(sq.into(), BigUint::from(self.total()).into()) - mean.clone() * mean
    }

    pub fn normalized(&self) -> BTreeMap<u64, f64> {
        let total = self.total() as f64;
        self.counts
            .iter()
            .map(|(value, mult)| (*value, *mult as f64 / total))
            .collect()
    }

    /// Total-variation distance to a normalized histogram.
    pub fn tv_distance(&self, histogram: &BTreeMap<u64, f64>) -> f64 {
        let probs = self.normalized();
        let mut keys: Vec<u64> = probs.keys().chain(histogram.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        0.5 * keys
            .iter()
            .map(|k| {
                (probs.get(k).copied().unwrap_or(0.0) - histogram.get(k).copied().unwrap_or(0.0))
                    .abs()
            })
            .sum::<f64>()
    }
}

pub fn exact_distribution(
    family: &Family,
    sigma: &Pattern,
    n: u64,
) -> Result<ExactDistribution, VerifyError> {
    exact_distribution_with_budget(family, sigma, n, DEFAULT_BUDGET)
}

pub fn exact_distribution_with_budget(
    family: &Family,
    sigma: &Pattern,
    n: u64,
    budget: u64,
) -> Result<ExactDistribution, VerifyError> {
    if !family.is_member(sigma) {
        return Err(FamilyError::NotAMember(sigma.clone(), family.name()).into());
    }
    let cardinality = family.cardinality(n)?;
    if cardinality > BigUint::from(budget) {
        return Err(VerifyError::BudgetExceeded {
            cardinality,
            budget,
        });
    }
    let counter = match family.kind() {
        FamilyKind::Single132
        | FamilyKind::Single321
        | FamilyKind::Unrestricted
        | FamilyKind::Trivial => None,
        _ => Some(CodeCounter::new(family, sigma)?),
    };
    let mut counts = BTreeMap::new();
    for member in family.enumerate(n)? {
        let value = match &counter {
            Some(c) => c.count_u128(&family.encode(&member)?),
            None => occurrences_u128(sigma, &member),
        }
        .and_then(|v| u64::try_from(v).ok())
        .expect("counts at enumerable sizes fit in u64");
        *counts.entry(value).or_insert(0) += 1;
    }
    Ok(ExactDistribution {
        family: family.name().to_string(),
        sigma: sigma.compact().unwrap_or_else(|| sigma.to_string()),
        n,
        counts,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct NormalityThresholds {
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub mean_rel: f64,
    pub var_rel: f64,
}

impl Default for NormalityThresholds {
    fn default() -> Self {
        NormalityThresholds {
            skewness: 0.1,
            excess_kurtosis: 0.2,
            mean_rel: 0.05,
            var_rel: 0.10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NormalityStatus {
    Pass,
    Fail,
    Degenerate,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NormalityOutcome {
    pub status: NormalityStatus,
    pub reasons: Vec<String>,
}

pub fn normality_check(report: &SimulationReport) -> NormalityOutcome {
    normality_check_with(report, &NormalityThresholds::default())
}

/// Gaussian-limit check on a simulation report: standardized skewness and
/// excess kurtosis must be small, and the empirical mean and variance must
/// match the theoretical values when the report carries them. A report whose
/// theoretical variance is exactly zero is a degenerate law and is skipped.
pub fn normality_check_with(
    report: &SimulationReport,
    thresholds: &NormalityThresholds,
) -> NormalityOutcome {
    if report.theoretical_variance == Some(0.0) {
        return NormalityOutcome {
            status: NormalityStatus::Degenerate,
            reasons: vec!["limit variance is zero; moment checks skipped".to_string()],
        };
    }
    let mut reasons = Vec::new();
    if report.standardized_skewness.abs() > thresholds.skewness {
        reasons.push(format!(
            "skewness {:.4} exceeds {}",
            report.standardized_skewness, thresholds.skewness
        ));
    }
    if report.standardized_excess_kurtosis.abs() > thresholds.excess_kurtosis {
        reasons.push(format!(
            "excess kurtosis {:.4} exceeds {}",
            report.standardized_excess_kurtosis, thresholds.excess_kurtosis
        ));
    }
    if let Some(tm) = report.theoretical_mean {
        let se = (report.empirical_variance / report.replicates as f64).sqrt();
        let slack = thresholds.mean_rel * tm.abs() + 4.0 * se;
        if (report.empirical_mean - tm).abs() > slack {
            reasons.push(format!(
                "mean {:.6e} is outside {:.6e} +- {:.2e}",
                report.empirical_mean, tm, slack
            ));
        }
    }
    if let Some(tv) = report.theoretical_variance {
        if (report.empirical_variance - tv).abs() > thresholds.var_rel * tv {
            reasons.push(format!(
                "variance {:.6e} is outside {:.0}% of {:.6e}",
                report.empirical_variance,
                100.0 * thresholds.var_rel,
                tv
            ));
        }
    }
    NormalityOutcome {
        status: if reasons.is_empty() {
            NormalityStatus::Pass
        } else {
            NormalityStatus::Fail
        },
        reasons,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UniformityReport {
    pub family: String,
    pub n: u64,
    pub draws: u64,
    pub seed: u64,
    pub statistic: f64,
    pub degrees_of_freedom: u64,
    pub p_value: f64,
}

/// Chi-square goodness of fit of the sampler against the uniform
/// distribution on all members at size `n`.
pub fn uniformity_check(
    family: &Family,
    n: u64,
    draws: u64,
    seed: u64,
) -> Result<UniformityReport, VerifyError> {
    let cardinality = family.cardinality(n)?;
    if cardinality > BigUint::from(UNIFORMITY_MEMBER_BOUND) {
        return Err(VerifyError::TooManyMembers {
            cardinality,
            bound: UNIFORMITY_MEMBER_BOUND,
        });
    }
    let members: Vec<Perm> = family.enumerate(n)?.collect();
    let index: HashMap<&[u32], usize> = members
        .iter()
        .enumerate()
        .map(|(i, p)| (p.values(), i))
        .collect();
    let sampler = family.sampler(n)?;
    let chunk_counts: Vec<Vec<u64>> = (0..draws.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let take = CHUNK.min(draws - c * CHUNK);
            let mut counts = vec![0u64; members.len()];
            for _ in 0..take {
                let p = sampler.sample(&mut rng);
                counts[*index.get(p.values()).expect("sampler emits members")] += 1;
            }
            counts
        })
        .collect();
    let mut counts = vec![0u64; members.len()];
    for part in &chunk_counts {
        for (acc, v) in counts.iter_mut().zip(part) {
            *acc += v;
        }
    }
    let (statistic, p_value) = chi_square_uniform(&counts);
    Ok(UniformityReport {
        family: family.name().to_string(),
        n,
        draws,
        seed,
        statistic,
        degrees_of_freedom: counts.len() as u64 - 1,
        p_value,
    })
}

/// Chi-square statistic and p-value of observed cell counts against the
/// uniform distribution over the cells.
pub fn chi_square_uniform(counts: &[u64]) -> (f64, f64) {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    let statistic: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let p = chi_square_sf(statistic, counts.len() as f64 - 1.0);
    (statistic, p)
}

/// Kolmogorov-Smirnov distance of a sample to the uniform law on [0, 1].
pub fn ks_uniform01(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| ((i + 1) as f64 / n - v).max(v - i as f64 / n))
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RatioReport {
    pub n: u64,
    pub replicates: u64,
    pub seed: u64,
    pub scaled_inversions_321: f64,
    pub scaled_coinversions_132: f64,
    pub ratio: f64,
    pub standard_error: f64,
}

/// Ratio of the mean coinversion count over 132-avoiders to the mean
/// inversion count over 321-avoiders at the same size. Both means scale by
/// n^(3/2) and their ratio converges to 2.
pub fn factor2_ratio_check(n: u64, replicates: u64, seed: u64) -> Result<RatioReport, VerifyError> {
    if n < 2 {
        return Err(VerifyError::SizeTooSmall { n, need: 2 });
    }
    let fam321 = Family::from_kind(FamilyKind::Single321).expect("structured kind");
    let fam132 = Family::from_kind(FamilyKind::Single132).expect("structured kind");
    let inv: Pattern = "21".parse().expect("fixed pattern");
    let coinv: Pattern = "12".parse().expect("fixed pattern");
    let rep321 = simulate(&fam321, &inv, n, replicates, seed)?;
    let rep132 = simulate(
        &fam132,
        &coinv,
        n,
        replicates,
        seed.wrapping_add(0x9E37_79B9_7F4A_7C15),
    )?;
    let scale = (n as f64).powf(1.5);
    let ratio = rep132.empirical_mean / rep321.empirical_mean;
    let rel_var = |r: &SimulationReport| {
        r.empirical_variance / (r.replicates as f64 * r.empirical_mean * r.empirical_mean)
    };
    Ok(RatioReport {
        n,
        replicates,
        seed,
        scaled_inversions_321: rep321.empirical_mean / scale,
        scaled_coinversions_132: rep132.empirical_mean / scale,
        ratio,
        standard_error: ratio * (rel_var(&rep321) + rel_var(&rep132)).sqrt(),
    })
}

/// Exhaustive version of the ratio at small sizes: (scaled 321 inversion
/// mean, scaled 132 coinversion mean, ratio).
pub fn factor2_exact_ratio(n: u64) -> Result<(f64, f64, f64), VerifyError> {
    if n < 2 {
        return Err(VerifyError::SizeTooSmall { n, need: 2 });
    }
    let fam321 = Family::from_kind(FamilyKind::Single321).expect("structured kind");
    let fam132 = Family::from_kind(FamilyKind::Single132).expect("structured kind");
    let cardinality = fam321.cardinality(n)?;
    if cardinality > BigUint::from(DEFAULT_BUDGET) {
        return Err(VerifyError::BudgetExceeded {
            cardinality,
            budget: DEFAULT_BUDGET,
        });
    }
    let mut total_inv = 0u128;
    let mut members = 0u128;
    for p in fam321.enumerate(n)? {
        total_inv += u128::from(inversion_count(p.values()));
        members += 1;
    }
    let mean321 = total_inv as f64 / members as f64;
    let mut total_coinv = 0u128;
    for p in fam132.enumerate(n)? {
        total_coinv += u128::from(n * (n - 1) / 2 - inversion_count(p.values()));
    }
    let mean132 = total_coinv as f64 / members as f64;
    let scale = (n as f64).powf(1.5);
    Ok((mean321 / scale, mean132 / scale, mean132 / mean321))
}
