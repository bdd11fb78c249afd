//! Mean and variance coefficients for the families whose pattern counts are
//! asymptotically normal, via projection variances of U-statistics over
//! renewal-style block decompositions.
//!
//! Coefficients are assembled in exact arithmetic (rationals, extended by
//! `sqrt 5` for the Fibonacci family) and converted to floating point at the
//! end, so degenerate cases come out exactly zero.

mod q5;

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::counting::binomial_big;
use crate::families::{Code, Family, FamilyError, FamilyKind};
use crate::perm::Perm;
use q5::Q5;

#[derive(Debug, Error)]
pub enum AsymptoticsError {
    #[error("projection order must be at least 1")]
    ZeroOrder,
    #[error("sigma matrix must be {expected}x{expected}, found extent {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("renewal mean nu must be positive, got {0}")]
    NonpositiveNu(f64),
    #[error("family {0} does not have a normal limit")]
    NoNormalLimit(&'static str),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Inputs of the renewal variance formula: the projection order, the mean of
/// the block kernel, the covariances of the projected components with each
/// other and with the block length, and the block-length law's moments.
#[derive(Clone, Debug)]
pub struct ProjectionSpec {
    pub d: usize,
    pub mu: f64,
    pub sigma_matrix: Vec<Vec<f64>>,
    pub cov_with_x: Vec<f64>,
    pub nu: f64,
    pub var_x: f64,
}

/// First-order growth of the count of a pattern inside a uniform member:
/// mean `meanCoeff * n^meanExponent`, variance `varCoeff * n^varExponent`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AsymptoticParams {
    pub family: String,
    pub sigma: String,
    pub mean_exponent: u32,
    pub mean_coeff: f64,
    pub var_exponent: u32,
    pub var_coeff: f64,
    pub degenerate: bool,
}

/// Delannoy number `D(k, l)`, the count of king paths from `(0,0)` to
/// `(k, l)`.
pub fn delannoy(k: usize, l: usize) -> BigUint {
    let mut total = BigUint::ZERO;
    for i in 0..=k.min(l) {
        total += binomial_big((k + l - i) as u64, i as u64)
            * binomial_big((k + l - 2 * i) as u64, (k - i) as u64);
    }
    total
}

fn factorial_big(k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= i;
    }
    acc
}

fn factorial_rat(k: usize) -> BigRational {
    BigRational::from_integer(factorial_big(k))
}

/// Weight of `sigma[i][j]` in the projection variance, 1-based indices.
fn hoeffding_weight(d: usize, i: usize, j: usize) -> BigRational {
    let num = factorial_big(i + j - 2) * factorial_big(2 * d - i - j);
    let den = factorial_big(i - 1)
        * factorial_big(j - 1)
        * factorial_big(d - i)
        * factorial_big(d - j)
        * factorial_big(2 * d - 1);
    BigRational::new(num, den)
}

trait Scalar:
    Clone
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_ratio(r: BigRational) -> Self;
    fn as_f64(&self) -> f64;
}

impl Scalar for BigRational {
    fn from_ratio(r: BigRational) -> Self {
        r
    }
    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap()
    }
}

impl Scalar for Q5 {
    fn from_ratio(r: BigRational) -> Self {
        Q5::from_rational(r)
    }
    fn as_f64(&self) -> f64 {
        self.to_f64()
    }
}

fn pow_scalar<T: Scalar>(base: &T, e: u32) -> T {
    let mut acc = T::from_ratio(BigRational::one());
    for _ in 0..e {
        acc = acc * base.clone();
    }
    acc
}

fn hoeffding_gamma2_exact<T: Scalar>(d: usize, sigma: &[Vec<T>]) -> T {
    let mut acc = T::from_ratio(BigRational::zero());
    for i in 1..=d {
        for j in 1..=d {
            let w = T::from_ratio(hoeffding_weight(d, i, j));
            acc = acc + w * sigma[i - 1][j - 1].clone();
        }
    }
    acc
}

fn renewal_gamma2_exact<T: Scalar>(
    d: usize,
    mu: &T,
    sigma: &[Vec<T>],
    cov_with_x: &[T],
    nu: &T,
    var_x: &T,
) -> T {
    let gamma2 = hoeffding_gamma2_exact(d, sigma);
    let nu_inv = T::from_ratio(BigRational::one()) / nu.clone();
    let cov_sum = cov_with_x
        .iter()
        .fold(T::from_ratio(BigRational::zero()), |acc, c| acc + c.clone());
    let fact_dm1 = factorial_rat(d - 1);
    let fact_d = factorial_rat(d);

    let lead = pow_scalar(&nu_inv, 2 * d as u32 - 1) * gamma2;
    let cross = T::from_ratio(BigRational::from_integer(2.into()) / (&fact_dm1 * &fact_d))
        * pow_scalar(&nu_inv, 2 * d as u32)
        * mu.clone()
        * cov_sum;
    let tail = T::from_ratio(BigRational::one() / (&fact_dm1 * &fact_dm1))
        * pow_scalar(&nu_inv, 2 * d as u32 + 1)
        * mu.clone()
        * mu.clone()
        * var_x.clone();
    lead - cross + tail
}

fn check_square(d: usize, rows: usize, widths: impl Iterator<Item = usize>) -> Result<(), AsymptoticsError> {
    if d == 0 {
        return Err(AsymptoticsError::ZeroOrder);
    }
    if rows != d {
        return Err(AsymptoticsError::DimensionMismatch {
            expected: d,
            found: rows,
        });
    }
    for w in widths {
        if w != d {
            return Err(AsymptoticsError::DimensionMismatch {
                expected: d,
                found: w,
            });
        }
    }
    Ok(())
}

/// Projection variance of an order-`d` U-statistic with component
/// covariances `sigma_matrix`.
pub fn hoeffding_sigma2(d: usize, sigma_matrix: &[Vec<f64>]) -> Result<f64, AsymptoticsError> {
    check_square(d, sigma_matrix.len(), sigma_matrix.iter().map(Vec::len))?;
    let mut acc = 0.0;
    for i in 1..=d {
        for j in 1..=d {
            acc += hoeffding_weight(d, i, j).to_f64().unwrap() * sigma_matrix[i - 1][j - 1];
        }
    }
    Ok(acc)
}

/// Variance coefficient of the count after centering by the renewal mean,
/// correcting the projection variance for the random number of blocks.
pub fn renewal_gamma2(spec: &ProjectionSpec) -> Result<f64, AsymptoticsError> {
    check_square(
        spec.d,
        spec.sigma_matrix.len(),
        spec.sigma_matrix.iter().map(Vec::len),
    )?;
    if spec.cov_with_x.len() != spec.d {
        return Err(AsymptoticsError::DimensionMismatch {
            expected: spec.d,
            found: spec.cov_with_x.len(),
        });
    }
    if spec.nu <= 0.0 {
        return Err(AsymptoticsError::NonpositiveNu(spec.nu));
    }
    let d = spec.d as i32;
    let gamma2 = hoeffding_sigma2(spec.d, &spec.sigma_matrix)?;
    let cov_sum: f64 = spec.cov_with_x.iter().sum();
    let fact_dm1 = factorial_rat(spec.d - 1).to_f64().unwrap();
    let fact_d = factorial_rat(spec.d).to_f64().unwrap();
    Ok(spec.nu.powi(1 - 2 * d) * gamma2
        - 2.0 * spec.nu.powi(-2 * d) * spec.mu / (fact_dm1 * fact_d) * cov_sum
        + spec.nu.powi(-2 * d - 1) * spec.mu * spec.mu / (fact_dm1 * fact_dm1) * spec.var_x)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn pow2_rat(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

fn delannoy_rat(k: usize, l: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(delannoy(k, l)))
}

/// Mean coefficient and variance coefficient for a sign-coded pattern of
/// length `m = signs.len() + 1`.
fn sign_family_theory(signs: &[i8]) -> (BigRational, BigRational) {
    let m = signs.len() + 1;
    let mean = pow2_rat(1 - m as i64) / factorial_rat(m);
    let cell = pow2_rat(2 - 2 * m as i64);
    let mut sigma = vec![vec![BigRational::zero(); m]; m];
    for i in 2..=m {
        for j in 2..=m {
            let prod = i64::from(signs[i - 2]) * i64::from(signs[j - 2]);
            sigma[i - 1][j - 1] = &cell * BigRational::from_integer(prod.into());
        }
    }
    let var = hoeffding_gamma2_exact(m, &sigma);
    (mean, var)
}

/// Theory for block compositions whose blocks are decreasing runs.
fn block_family_theory(parts: &[u32]) -> (BigRational, BigRational) {
    let b = parts.len();
    let mean = BigRational::one() / factorial_rat(b);
    let mu = pow2_rat(b as i64);
    let nu = rat(2, 1);
    let var_x = rat(2, 1);
    let mut sigma = vec![vec![BigRational::zero(); b]; b];
    for i in 0..b {
        for j in 0..b {
            sigma[i][j] = pow2_rat(2 * b as i64 - 1)
                * delannoy_rat(parts[i] as usize, parts[j] as usize)
                - pow2_rat(2 * b as i64);
        }
    }
    let cov: Vec<BigRational> = parts
        .iter()
        .map(|&l| pow2_rat(b as i64) * rat(2 * i64::from(l) - 1, 1))
        .collect();
    let var = renewal_gamma2_exact(b, &mu, &sigma, &cov, &nu, &var_x);
    (mean, var)
}

/// Theory for block compositions whose blocks put the largest value first.
fn head_family_theory(parts: &[u32]) -> (BigRational, BigRational) {
    let b = parts.len();
    let b1 = parts.iter().filter(|&&l| l == 1).count() as i64;
    let mean = pow2_rat(b1 - b as i64) / factorial_rat(b);
    let mu = pow2_rat(b1);
    let nu = rat(2, 1);
    let var_x = rat(2, 1);
    let mut sigma = vec![vec![BigRational::zero(); b]; b];
    for i in 0..b {
        for j in 0..b {
            let (li, lj) = (parts[i], parts[j]);
            sigma[i][j] = match (li >= 2, lj >= 2) {
                (true, true) => {
                    pow2_rat(2 * b1)
                        * (delannoy_rat(li as usize - 1, lj as usize - 1) - BigRational::one())
                }
                (true, false) => pow2_rat(2 * b1) * rat(i64::from(li) - 1, 1),
                (false, true) => pow2_rat(2 * b1) * rat(i64::from(lj) - 1, 1),
                (false, false) => pow2_rat(2 * b1 - 1),
            };
        }
    }
    let cov: Vec<BigRational> = parts
        .iter()
        .map(|&l| {
            if l >= 2 {
                pow2_rat(b1 + 1) * rat(i64::from(l) - 1, 1)
            } else {
                pow2_rat(b1)
            }
        })
        .collect();
    let var = renewal_gamma2_exact(b, &mu, &sigma, &cov, &nu, &var_x);
    (mean, var)
}

/// Theory for compositions into parts 1 and 2 under the golden-ratio block
/// law `P(X=1) = p`, `P(X=2) = p^2` with `p = (sqrt 5 - 1)/2`.
fn golden_family_theory(parts: &[u32]) -> (Q5, Q5) {
    let b = parts.len();
    let p = Q5::golden_p();
    let nu = Q5::from_integer(2) - p.clone();
    let var_x = p.pow(3);
    let part_means: Vec<Q5> = parts
        .iter()
        .map(|&l| {
            if l == 1 {
                nu.clone()
            } else {
                Q5::from_integer(1) - p.clone()
            }
        })
        .collect();
    let mu = part_means
        .iter()
        .fold(Q5::from_integer(1), |acc, m| acc * m.clone());
    let scale: Vec<Q5> = part_means
        .iter()
        .map(|m| mu.clone() / m.clone())
        .collect();
    let mut sigma = vec![vec![Q5::from_integer(0); b]; b];
    for i in 0..b {
        for j in 0..b {
            sigma[i][j] = scale[i].clone() * scale[j].clone() * var_x.clone();
        }
    }
    let cov: Vec<Q5> = scale.iter().map(|c| c.clone() * var_x.clone()).collect();
    let var = renewal_gamma2_exact(b, &mu, &sigma, &cov, &nu, &var_x);
    let mean = mu.clone() * nu.pow(-(b as i32)) * Q5::from_rational(BigRational::one() / factorial_rat(b));
    (mean, var)
}

/// Mean/variance coefficients and exponents for a member pattern of one of
/// the four families with normal limits.
pub fn asymptotic_params(family: &Family, sigma: &Perm) -> Result<AsymptoticParams, AsymptoticsError> {
    let kind = family.kind();
    if !matches!(
        kind,
        FamilyKind::PairD | FamilyKind::PairB | FamilyKind::PairA | FamilyKind::TripleAaa
    ) {
        return Err(AsymptoticsError::NoNormalLimit(family.name()));
    }
    let code = family.encode(sigma)?;
    let (d, mean_coeff, var_coeff, degenerate) = match (kind, code) {
        (FamilyKind::PairD, Code::Signs { signs }) => {
            let (mean, var) = sign_family_theory(&signs);
            let degenerate = var.is_zero();
            (signs.len() + 1, mean.as_f64(), var.as_f64(), degenerate)
        }
        (FamilyKind::PairB, Code::Composition { parts }) => {
            let (mean, var) = block_family_theory(&parts);
            let degenerate = var.is_zero();
            (parts.len(), mean.as_f64(), var.as_f64(), degenerate)
        }
        (FamilyKind::PairA, Code::Composition { parts }) => {
            let (mean, var) = head_family_theory(&parts);
            let degenerate = var.is_zero();
            (parts.len(), mean.as_f64(), var.as_f64(), degenerate)
        }
        (FamilyKind::TripleAaa, Code::Composition { parts }) => {
            let (mean, var) = golden_family_theory(&parts);
            let degenerate = var.is_zero();
            (parts.len(), mean.as_f64(), var.as_f64(), degenerate)
        }
        _ => unreachable!("normal-limit families encode to signs or compositions"),
    };
    let var_coeff = if degenerate { 0.0 } else { var_coeff };
    Ok(AsymptoticParams {
        family: family.name().to_string(),
        sigma: sigma.compact().unwrap_or_else(|| sigma.to_string()),
        mean_exponent: d as u32,
        mean_coeff,
        var_exponent: 2 * d as u32 - 1,
        var_coeff,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Pattern;

    fn p(text: &str) -> Perm {
        text.parse().unwrap()
    }

    fn family(kind: FamilyKind) -> Family {
        Family::from_kind(kind).unwrap()
    }

    fn d_u64(k: usize, l: usize) -> u64 {
        delannoy(k, l).to_u64().unwrap()
    }

    #[test]
    fn delannoy_small_values() {
        for k in 0..=6 {
            assert_eq!(d_u64(k, 0), 1);
        }
        for l in 0..=10 {
            assert_eq!(d_u64(1, l), 2 * l as u64 + 1);
        }
        assert_eq!(d_u64(2, 2), 13);
        assert_eq!(d_u64(3, 3), 63);
    }

    #[test]
    fn delannoy_satisfies_the_king_recurrence() {
        for k in 1..=20usize {
            for l in 1..=20usize {
                assert_eq!(
                    delannoy(k, l),
                    delannoy(k - 1, l) + delannoy(k, l - 1) + delannoy(k - 1, l - 1)
                );
            }
        }
    }

    #[test]
    fn delannoy_is_symmetric() {
        for k in 0..=12usize {
            for l in 0..=12usize {
                assert_eq!(delannoy(k, l), delannoy(l, k));
            }
        }
    }

    #[test]
    fn geometric_binomial_products_match_delannoy() {
        fn choose(x: u64, k: u64) -> f64 {
            if k > x {
                return 0.0;
            }
            (0..k).fold(1.0, |acc, i| acc * (x - i) as f64 / (i + 1) as f64)
        }
        for k in 0..=5u64 {
            for l in 0..=5u64 {
                if (k, l) == (0, 0) {
                    continue;
                }
                let mut sum = 0.0;
                for x in (1..=400u64).rev() {
                    sum += 0.5f64.powi(x as i32) * choose(x, k) * choose(x, l);
                }
                let expected = 2.0 * d_u64(k as usize, l as usize) as f64;
                assert!(
                    (sum - expected).abs() / expected < 1e-10,
                    "k={k} l={l}: {sum} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn order_one_projection_is_the_variance_itself() {
        for v in [0.0, 0.25, 3.5] {
            assert_eq!(hoeffding_sigma2(1, &[vec![v]]).unwrap(), v);
        }
    }

    #[test]
    fn order_two_projection_example() {
        let m = vec![vec![0.0, 0.0], vec![0.0, 0.25]];
        let got = hoeffding_sigma2(2, &m).unwrap();
        assert!((got - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn projection_is_linear_and_transpose_invariant() {
        let a = vec![vec![1.0, 2.0, 0.5], vec![2.0, 3.0, -1.0], vec![0.5, -1.0, 4.0]];
        let b = vec![vec![0.0, 1.0, 1.0], vec![1.0, 5.0, 0.0], vec![1.0, 0.0, 2.0]];
        let sum: Vec<Vec<f64>> = (0..3)
            .map(|i| (0..3).map(|j| a[i][j] + b[i][j]).collect())
            .collect();
        let at: Vec<Vec<f64>> = (0..3).map(|i| (0..3).map(|j| a[j][i]).collect()).collect();
        let ha = hoeffding_sigma2(3, &a).unwrap();
        let hb = hoeffding_sigma2(3, &b).unwrap();
        let hsum = hoeffding_sigma2(3, &sum).unwrap();
        assert!((hsum - ha - hb).abs() < 1e-12);
        assert!((hoeffding_sigma2(3, &at).unwrap() - ha).abs() < 1e-15);
    }

    #[test]
    fn projection_rejects_bad_dimensions() {
        assert!(matches!(
            hoeffding_sigma2(0, &[]),
            Err(AsymptoticsError::ZeroOrder)
        ));
        assert!(matches!(
            hoeffding_sigma2(2, &[vec![1.0, 0.0]]),
            Err(AsymptoticsError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            hoeffding_sigma2(2, &[vec![1.0], vec![0.0]]),
            Err(AsymptoticsError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn renewal_variance_vanishes_on_linear_projections() {
        let (mu, nu, var_x) = (3.0, 2.0, 7.0);
        let r = mu / nu;
        let spec = ProjectionSpec {
            d: 1,
            mu,
            sigma_matrix: vec![vec![r * r * var_x]],
            cov_with_x: vec![r * var_x],
            nu,
            var_x,
        };
        assert!(renewal_gamma2(&spec).unwrap().abs() < 1e-12);
    }

    #[test]
    fn renewal_variance_for_block_inversions() {
        let spec = ProjectionSpec {
            d: 1,
            mu: 2.0,
            sigma_matrix: vec![vec![2.0 * 13.0 - 4.0]],
            cov_with_x: vec![6.0],
            nu: 2.0,
            var_x: 2.0,
        };
        assert!((renewal_gamma2(&spec).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn renewal_variance_for_golden_inversions() {
        let pg = (5f64.sqrt() - 1.0) / 2.0;
        let var_x = 2.0 * pg - 1.0;
        let spec = ProjectionSpec {
            d: 1,
            mu: 1.0 - pg,
            sigma_matrix: vec![vec![var_x]],
            cov_with_x: vec![var_x],
            nu: 2.0 - pg,
            var_x,
        };
        let expected = 5f64.powf(-1.5);
        assert!((renewal_gamma2(&spec).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn renewal_rejects_nonpositive_nu() {
        let spec = ProjectionSpec {
            d: 1,
            mu: 1.0,
            sigma_matrix: vec![vec![1.0]],
            cov_with_x: vec![1.0],
            nu: 0.0,
            var_x: 1.0,
        };
        assert!(matches!(
            renewal_gamma2(&spec),
            Err(AsymptoticsError::NonpositiveNu(_))
        ));
    }

    #[test]
    fn sign_family_params_match_the_inversion_example() {
        let params = asymptotic_params(&family(FamilyKind::PairD), &p("21")).unwrap();
        assert_eq!(params.mean_exponent, 2);
        assert_eq!(params.var_exponent, 3);
        assert!((params.mean_coeff - 0.25).abs() < 1e-15);
        assert!((params.var_coeff - 1.0 / 12.0).abs() < 1e-15);
        assert!(!params.degenerate);
    }

    #[test]
    fn sign_family_mean_depends_only_on_length() {
        let fam = family(FamilyKind::PairD);
        for n in 2..=4u64 {
            let expected = pow2_rat(1 - n as i64) / factorial_rat(n as usize);
            for member in fam.enumerate(n).unwrap() {
                let params = asymptotic_params(&fam, &member).unwrap();
                assert_eq!(params.mean_exponent as u64, n);
                assert!((params.mean_coeff - expected.as_f64()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn head_family_params_match_the_inversion_example() {
        let params = asymptotic_params(&family(FamilyKind::PairA), &p("21")).unwrap();
        assert_eq!(params.mean_exponent, 1);
        assert_eq!(params.var_exponent, 1);
        assert!((params.mean_coeff - 0.5).abs() < 1e-15);
        assert!((params.var_coeff - 0.25).abs() < 1e-15);
    }

    #[test]
    fn block_family_variance_separates_equal_block_counts() {
        let fam = family(FamilyKind::PairB);
        let inv = asymptotic_params(&fam, &p("21")).unwrap();
        assert!((inv.var_coeff - 6.0).abs() < 1e-12);
        assert!((inv.mean_coeff - 1.0).abs() < 1e-15);

        let two_two = asymptotic_params(&fam, &p("2143")).unwrap();
        let three_one = asymptotic_params(&fam, &p("3214")).unwrap();
        assert_eq!(two_two.mean_coeff, three_one.mean_coeff);
        assert!((two_two.var_coeff - 6.0).abs() < 1e-12);
        assert!((three_one.var_coeff - 52.0 / 3.0).abs() < 1e-12);

        let (_, exact) = block_family_theory(&[2, 2]);
        assert_eq!(exact, rat(6, 1));
        let (_, exact) = block_family_theory(&[3, 1]);
        assert_eq!(exact, rat(52, 3));
    }

    #[test]
    fn golden_family_params_use_the_golden_density() {
        let params = asymptotic_params(&family(FamilyKind::TripleAaa), &p("21")).unwrap();
        assert!((params.var_coeff - 5f64.powf(-1.5)).abs() < 1e-12);
        assert!((params.mean_coeff - (5.0 - 5f64.sqrt()) / 10.0).abs() < 1e-12);
        assert_eq!(params.mean_exponent, 1);
    }

    #[test]
    fn golden_family_mean_tracks_exact_enumeration() {
        fn exact_mean_per_n(n: u64) -> f64 {
            let mut total = BigUint::ZERO;
            let mut card = BigUint::ZERO;
            for k in 0..=n / 2 {
                let ways = binomial_big(n - k, k);
                total += &ways * BigUint::from(k);
                card += ways;
            }
            let scale = BigUint::from(10u64).pow(30);
            (&total * &scale / &card).to_f64().unwrap() / 1e30 / n as f64
        }
        let coeff = asymptotic_params(&family(FamilyKind::TripleAaa), &p("21"))
            .unwrap()
            .mean_coeff;
        let err_small = (exact_mean_per_n(1000) - coeff).abs();
        let err_large = (exact_mean_per_n(4000) - coeff).abs();
        assert!(err_large < err_small);
        assert!(err_large < 1e-3, "drift {err_large}");
        let without_density_correction = (3.0 - 5f64.sqrt()) / 2.0;
        assert!((exact_mean_per_n(4000) - without_density_correction).abs() > 0.1);
    }

    #[test]
    fn block_family_mean_tracks_pair_probabilities() {
        let n = 2000u64;
        let mut mean = 0.0;
        for g in 1..n {
            mean += (n - g) as f64 * 0.5f64.powi(g as i32);
        }
        let coeff = asymptotic_params(&family(FamilyKind::PairB), &p("21"))
            .unwrap()
            .mean_coeff;
        assert!((mean / n as f64 - coeff).abs() < 2e-3);
    }

    #[test]
    fn identity_patterns_are_degenerate() {
        for kind in [FamilyKind::PairB, FamilyKind::PairA, FamilyKind::TripleAaa] {
            let fam = family(kind);
            for m in 1..=4usize {
                let identity = Perm::identity(m);
                let params = asymptotic_params(&fam, &identity).unwrap();
                assert!(params.degenerate, "{kind:?} at {m}");
                assert_eq!(params.var_coeff, 0.0);
            }
        }
    }

    #[test]
    fn non_identity_members_are_not_degenerate() {
        for kind in [
            FamilyKind::PairD,
            FamilyKind::PairB,
            FamilyKind::PairA,
            FamilyKind::TripleAaa,
        ] {
            let fam = family(kind);
            for n in 2..=4u64 {
                for member in fam.enumerate(n).unwrap() {
                    if member.is_identity() {
                        continue;
                    }
                    let params = asymptotic_params(&fam, &member).unwrap();
                    assert!(!params.degenerate, "{kind:?} {member}");
                    assert!(params.var_coeff > 0.0);
                }
            }
        }
    }

    #[test]
    fn transported_families_reuse_canonical_theory() {
        let patterns: Vec<Pattern> = vec![p("213"), p("231")];
        let moved = Family::normalize(&patterns).unwrap();
        assert_eq!(moved.kind(), FamilyKind::PairD);
        let sigma = moved.symmetry().apply_inverse(&p("21"));
        let params = asymptotic_params(&moved, &sigma).unwrap();
        assert!((params.var_coeff - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn non_normal_families_are_rejected() {
        for kind in [
            FamilyKind::PairE,
            FamilyKind::TripleCcc,
            FamilyKind::Single132,
            FamilyKind::Unrestricted,
        ] {
            let fam = family(kind);
            assert!(matches!(
                asymptotic_params(&fam, &p("21")),
                Err(AsymptoticsError::NoNormalLimit(_))
            ));
        }
        assert!(matches!(
            asymptotic_params(&family(FamilyKind::PairB), &p("231")),
            Err(AsymptoticsError::Family(_))
        ));
    }

    #[test]
    fn json_shape_of_params() {
        let params = asymptotic_params(&family(FamilyKind::PairD), &p("21")).unwrap();
        let value = serde_json::to_value(&params).unwrap();
        for key in [
            "family",
            "sigma",
            "meanExponent",
            "meanCoeff",
            "varExponent",
            "varCoeff",
            "degenerate",
        ] {
            assert!(value.get(key).is_some(), "missing {key}");
        }
        assert_eq!(value["family"], "PAIR-D");
        assert_eq!(value["sigma"], "21");
    }
}
