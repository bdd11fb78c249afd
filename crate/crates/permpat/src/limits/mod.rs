//! Limit laws of pattern counts inside uniform members: descriptors for
//! every family, closed-form moments for the polynomial-size families,
//! exact finite-n expectations for the grid family, and draws from the
//! limit variables.

mod sample;

pub use sample::{sample_limit, sample_limit_with_steps, DEFAULT_EXCURSION_STEPS};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asymptotics::{asymptotic_params, AsymptoticsError};
use crate::families::counting::binomial_big;
use crate::families::{Code, Family, FamilyError, FamilyKind};
use crate::perm::Perm;
use crate::special::ln_gamma;

#[derive(Debug, Error)]
pub enum LimitError {
    #[error("family {0} has no limit-law descriptor")]
    UnsupportedFamily(&'static str),
    #[error("excursion functionals have no closed-form moments")]
    ExcursionMoment,
    #[error("moment order {0} is not supported for this law")]
    UnsupportedOrder(f64),
    #[error("sampling this excursion functional is not supported")]
    UnsupportedExcursion,
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Limit variable of `X^i Y^j Z^p / (i! j! p!)`-type functionals of a
/// uniform point of the triangle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum DirichletLaw {
    #[serde(rename = "E-grid")]
    EGrid { i: u32, j: u32, p: u32 },
    #[serde(rename = "E-identity")]
    EIdentity { i: u32 },
}

/// Limit variable of a polynomial in a single uniform draw.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum UniformLaw {
    #[serde(rename = "CCC-grid")]
    CccGrid { k: u32, m: u32 },
    #[serde(rename = "CCC-identity")]
    CccIdentity { m: u32 },
    #[serde(rename = "BBB-grid")]
    BbbGrid { k: u32, m: u32 },
    #[serde(rename = "BBB-identity")]
    BbbIdentity { m: u32 },
    #[serde(rename = "EEE-grid")]
    EeeGrid { k: u32, m: u32 },
    #[serde(rename = "EEE-identity")]
    EeeIdentity { m: u32 },
}

/// Limit variable expressed through a Brownian excursion; no closed forms.
/// The count scales by `n^(lambda/2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum ExcursionLaw {
    #[serde(rename = "SINGLE-132", rename_all = "camelCase")]
    Single132 { sigma: String, lambda: u32 },
    #[serde(rename = "SINGLE-321", rename_all = "camelCase")]
    Single321 {
        sigma: String,
        lambda: u32,
        block_lengths: Vec<u32>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum LimitLaw {
    #[serde(rename_all = "camelCase")]
    Normal {
        mean_coeff: f64,
        mean_exponent: u32,
        var_coeff: f64,
    },
    Dirichlet(DirichletLaw),
    Uniform(UniformLaw),
    Excursion(ExcursionLaw),
}

/// Scaling exponent parameter for a pattern counted inside 132-avoiders:
/// the length plus the number of descents, where the final position always
/// counts as a descent.
pub fn lambda_132(sigma: &Perm) -> u32 {
    let v = sigma.values();
    let inner = v.windows(2).filter(|w| w[0] > w[1]).count();
    (v.len() + inner + 1) as u32
}

/// Limit-law descriptor for the count of `sigma` inside a uniform member of
/// the family.
pub fn limit_law(family: &Family, sigma: &Perm) -> Result<LimitLaw, LimitError> {
    match family.kind() {
        FamilyKind::PairD | FamilyKind::PairB | FamilyKind::PairA | FamilyKind::TripleAaa => {
            let params = asymptotic_params(family, sigma).map_err(|e| match e {
                AsymptoticsError::Family(f) => LimitError::Family(f),
                other => unreachable!("normal-limit family: {other}"),
            })?;
            Ok(LimitLaw::Normal {
                mean_coeff: params.mean_coeff,
                mean_exponent: params.mean_exponent,
                var_coeff: params.var_coeff,
            })
        }
        FamilyKind::PairE => Ok(LimitLaw::Dirichlet(match family.encode(sigma)? {
            Code::Grid { k, l, m } => DirichletLaw::EGrid { i: k, j: l, p: m },
            Code::GridIdentity { n } => DirichletLaw::EIdentity { i: n },
            _ => unreachable!("grid family encodes to grid codes"),
        })),
        FamilyKind::TripleCcc => Ok(LimitLaw::Uniform(match family.encode(sigma)? {
            Code::Index { k: 1, n } => UniformLaw::CccIdentity { m: n },
            Code::Index { k, n } => UniformLaw::CccGrid { k, m: n },
            _ => unreachable!("index family encodes to index codes"),
        })),
        FamilyKind::TripleBbb => Ok(LimitLaw::Uniform(match family.encode(sigma)? {
            Code::Index { k: 1, n } => UniformLaw::BbbIdentity { m: n },
            Code::Index { k, n } => UniformLaw::BbbGrid { k, m: n },
            _ => unreachable!("index family encodes to index codes"),
        })),
        FamilyKind::TripleEee => Ok(LimitLaw::Uniform(match family.encode(sigma)? {
            Code::Index { k, n } if k == n => UniformLaw::EeeIdentity { m: n },
            Code::Index { k, n } => UniformLaw::EeeGrid { k, m: n },
            _ => unreachable!("index family encodes to index codes"),
        })),
        FamilyKind::Single132 => {
            if !family.is_member(sigma) {
                return Err(FamilyError::NotAMember(sigma.clone(), family.name()).into());
            }
            Ok(LimitLaw::Excursion(ExcursionLaw::Single132 {
                sigma: label(sigma),
                lambda: lambda_132(sigma),
            }))
        }
        FamilyKind::Single321 => {
            if !family.is_member(sigma) {
                return Err(FamilyError::NotAMember(sigma.clone(), family.name()).into());
            }
            let blocks: Vec<u32> = sigma.block_lengths().iter().map(|&l| l as u32).collect();
            Ok(LimitLaw::Excursion(ExcursionLaw::Single321 {
                sigma: label(sigma),
                lambda: sigma.len() as u32 + blocks.len() as u32,
                block_lengths: blocks,
            }))
        }
        FamilyKind::Trivial | FamilyKind::Unrestricted => {
            Err(LimitError::UnsupportedFamily(family.name()))
        }
    }
}

/// Power of `n` normalizing the count so that `count / n^e` converges to the
/// law. `None` for excursion laws, whose exponent `lambda/2` is half-integer.
pub fn scaling_exponent(law: &LimitLaw) -> Option<u32> {
    match law {
        LimitLaw::Normal { mean_exponent, .. } => Some(*mean_exponent),
        LimitLaw::Dirichlet(DirichletLaw::EGrid { i, j, p }) => Some(i + j + p),
        LimitLaw::Dirichlet(DirichletLaw::EIdentity { i }) => Some(*i),
        LimitLaw::Uniform(UniformLaw::BbbGrid { m, .. }) => Some(m - 1),
        LimitLaw::Uniform(
            UniformLaw::CccGrid { m, .. }
            | UniformLaw::CccIdentity { m }
            | UniformLaw::BbbIdentity { m }
            | UniformLaw::EeeGrid { m, .. }
            | UniformLaw::EeeIdentity { m },
        ) => Some(*m),
        LimitLaw::Excursion(_) => None,
    }
}

fn label(p: &Perm) -> String {
    p.compact().unwrap_or_else(|| p.to_string())
}

fn fact(k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= i;
    }
    acc
}

fn binom(n: u64, k: u64) -> BigInt {
    BigInt::from(binomial_big(n, k))
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// `E[W^r]` for integer `r >= 1`, exact.
fn integer_moment(law: &LimitLaw, r: u64) -> Result<f64, LimitError> {
    let value = match law {
        LimitLaw::Normal { var_coeff, .. } => {
            return if r % 2 == 1 {
                Ok(0.0)
            } else {
                let double_fact: f64 = (1..r).step_by(2).map(|k| k as f64).product();
                Ok(var_coeff.powi((r / 2) as i32) * double_fact)
            };
        }
        LimitLaw::Dirichlet(DirichletLaw::EGrid { i, j, p }) => {
            let (i, j, p) = (u64::from(*i), u64::from(*j), u64::from(*p));
            let num = BigInt::from(2) * fact(r * i) * fact(r * j) * fact(r * p);
            let den = fact(r * (i + j + p) + 2) * (fact(i) * fact(j) * fact(p)).pow(r as u32);
            ratio(num, den)
        }
        LimitLaw::Dirichlet(DirichletLaw::EIdentity { i }) => {
            let i = u64::from(*i);
            if r * i > 128 {
                return Err(LimitError::UnsupportedOrder(r as f64));
            }
            let mut acc = BigRational::zero();
            for alpha in 0..=r {
                for beta in 0..=r - alpha {
                    let gamma = r - alpha - beta;
                    let multi = ratio(fact(r), fact(alpha) * fact(beta) * fact(gamma));
                    let sign = if gamma % 2 == 0 {
                        BigRational::one()
                    } else {
                        -BigRational::one()
                    };
                    for a in 0..=i * alpha {
                        for b in 0..=i * beta {
                            let c = i * r - a - b;
                            let mean = ratio(
                                BigInt::from(2) * fact(a) * fact(b) * fact(c),
                                fact(i * r + 2),
                            );
                            acc += &multi
                                * &sign
                                * ratio(binom(i * alpha, a) * binom(i * beta, b), BigInt::one())
                                * mean;
                        }
                    }
                }
            }
            acc / ratio(fact(i).pow(r as u32), BigInt::one())
        }
        LimitLaw::Uniform(UniformLaw::CccGrid { k, m })
        | LimitLaw::Uniform(UniformLaw::EeeGrid { k, m }) => {
            let (k, m) = (u64::from(*k), u64::from(*m));
            let num = fact(r * k) * fact(r * (m - k));
            let den = fact(r * m + 1) * (fact(k) * fact(m - k)).pow(r as u32);
            ratio(num, den)
        }
        LimitLaw::Uniform(UniformLaw::BbbGrid { k, m }) => {
            let (k, m) = (u64::from(*k), u64::from(*m));
            let num = fact(r * (k - 1)) * fact(r * (m - k));
            let den = fact(r * (m - 1) + 1) * (fact(k - 1) * fact(m - k)).pow(r as u32);
            ratio(num, den)
        }
        LimitLaw::Uniform(UniformLaw::BbbIdentity { m }) => {
            ratio(BigInt::one(), fact(u64::from(*m)).pow(r as u32))
        }
        LimitLaw::Uniform(UniformLaw::CccIdentity { m }) => {
            let m = u64::from(*m);
            let mut acc = BigRational::zero();
            for s in 0..=r {
                let weight = binom(r, s) * BigInt::from(m - 1).pow(s as u32);
                acc += ratio(
                    weight * fact(s) * fact(r * (m - 1)),
                    fact(s + r * (m - 1) + 1),
                );
            }
            acc / ratio(fact(m).pow(r as u32), BigInt::one())
        }
        LimitLaw::Uniform(UniformLaw::EeeIdentity { m }) => {
            let m = u64::from(*m);
            let mut acc = BigRational::zero();
            for s in 0..=r {
                acc += ratio(
                    binom(r, s) * fact(m * s) * fact(m * (r - s)),
                    fact(m * r + 1),
                );
            }
            acc / ratio(fact(m).pow(r as u32), BigInt::one())
        }
        LimitLaw::Excursion(_) => return Err(LimitError::ExcursionMoment),
    };
    Ok(value.to_f64().unwrap())
}

/// `E[W^r]` for the inversion laws whose moment formulas hold for every
/// real order `r > 0`.
fn real_moment(law: &LimitLaw, r: f64) -> Result<f64, LimitError> {
    match law {
        LimitLaw::Dirichlet(DirichletLaw::EGrid { i: 1, j: 1, p: 0 }) => {
            Ok(2.0 * (2.0 * ln_gamma(r + 1.0) - ln_gamma(2.0 * r + 3.0)).exp())
        }
        LimitLaw::Uniform(UniformLaw::CccGrid { k: 2, m: 2 }) => {
            Ok(0.5f64.powf(r) / (2.0 * r + 1.0))
        }
        LimitLaw::Uniform(UniformLaw::EeeGrid { k: 1, m: 2 }) => {
            Ok((2.0 * ln_gamma(r + 1.0) - ln_gamma(2.0 * r + 2.0)).exp())
        }
        LimitLaw::Excursion(_) => Err(LimitError::ExcursionMoment),
        _ => Err(LimitError::UnsupportedOrder(r)),
    }
}

/// `E[W^r]`: exact for integer orders, gamma-function form for real orders
/// of the three inversion laws.
pub fn limit_moment(law: &LimitLaw, r: f64) -> Result<f64, LimitError> {
    if matches!(law, LimitLaw::Excursion(_)) {
        return Err(LimitError::ExcursionMoment);
    }
    if !r.is_finite() || r <= 0.0 {
        return Err(LimitError::UnsupportedOrder(r));
    }
    if r.fract() == 0.0 && (1.0..=64.0).contains(&r) {
        integer_moment(law, r as u64)
    } else {
        real_moment(law, r)
    }
}

/// Exact mean count of the grid pattern `(i, j, p)` inside a uniform member
/// of the grid family of size `n`: one binomial over the cardinality.
pub fn exact_expectation_e(i: u32, j: u32, p: u32, n: u64) -> BigRational {
    assert!(i >= 1 && j >= 1, "grid parameters need i, j >= 1");
    assert!(n >= 1, "size must be at least 1");
    let num = binom(n + 2, u64::from(i + j + p) + 2);
    let den = binom(n, 2) + 1;
    ratio(num, den)
}

/// Density of the limit of scaled inversion counts in the grid family,
/// supported on `(0, 1/4)`.
pub fn inversion_density_e(x: f64) -> f64 {
    if x <= 0.0 || x >= 0.25 {
        return 0.0;
    }
    let s = (1.0 - 4.0 * x).sqrt();
    2.0 * ((1.0 + s) * (1.0 + s) / (4.0 * x)).ln()
}
