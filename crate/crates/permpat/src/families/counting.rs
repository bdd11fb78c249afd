//! Overflow-aware counting arithmetic shared by the family-specific fast
//! counters: a small counter trait implemented for `u128` (checked) and
//! `BigUint` (never overflows), binomials, and the block-placement dynamic
//! programs.

use num_bigint::BigUint;

/// Counter arithmetic with explicit overflow signalling.
pub trait Count: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn checked_add(&self, rhs: &Self) -> Option<Self>;
    fn checked_mul(&self, rhs: &Self) -> Option<Self>;
    fn binomial(n: u64, k: u64) -> Option<Self>;
    fn from_u64(v: u64) -> Self;
    fn is_zero(&self) -> bool;
}

impl Count for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn checked_add(&self, rhs: &Self) -> Option<Self> {
        u128::checked_add(*self, *rhs)
    }
    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        u128::checked_mul(*self, *rhs)
    }
    fn binomial(n: u64, k: u64) -> Option<Self> {
        binomial_u128(n, k)
    }
    fn from_u64(v: u64) -> Self {
        v as u128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
}

impl Count for BigUint {
    fn zero() -> Self {
        BigUint::ZERO
    }
    fn one() -> Self {
        BigUint::from(1u32)
    }
    fn checked_add(&self, rhs: &Self) -> Option<Self> {
        Some(self + rhs)
    }
    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        Some(self * rhs)
    }
    fn binomial(n: u64, k: u64) -> Option<Self> {
        Some(binomial_big(n, k))
    }
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }
    fn is_zero(&self) -> bool {
        *self == BigUint::ZERO
    }
}

/// `C(n, k)` in u128, or `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

/// `C(n, k)` as a big integer.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Occurrence count in the sign-coded family: slot 1 of the pattern may sit
/// at any position, and slot `j >= 2` requires the host position's sign to
/// equal the pattern's sign `eta[j]`.
///
/// `eta` and `xi` hold the signs of positions `2..=len` (index 0 is
/// position 2).
pub fn count_signs<T: Count>(eta: &[i8], xi: &[i8]) -> Option<T> {
    let m = eta.len() + 1;
    let n = xi.len() + 1;
    let mut dp: Vec<T> = vec![T::zero(); m + 1];
    dp[0] = T::one();
    for p in 1..=n {
        let hi = m.min(p);
        for j in (2..=hi).rev() {
            if p >= 2 && xi[p - 2] == eta[j - 2] {
                let add = dp[j - 1].clone();
                dp[j] = dp[j].checked_add(&add)?;
            }
        }
        let one = T::one();
        dp[1] = dp[1].checked_add(&one)?;
    }
    Some(dp[m].clone())
}

/// Occurrence count when each pattern block must land in its own host block
/// in order: sum over increasing block tuples of products of `C(L, l)`.
///
/// Covers the all-blocks-decreasing family and its `{1,2}`-block
/// subfamily.
pub fn count_block_tuples<T: Count>(sigma_lens: &[u32], parts: &[u32]) -> Option<T> {
    let b = sigma_lens.len();
    let mut dp: Vec<T> = vec![T::zero(); b + 1];
    dp[0] = T::one();
    for &part in parts {
        for j in (0..b).rev() {
            if dp[j].is_zero() {
                continue;
            }
            let w: T = T::binomial(part as u64, sigma_lens[j] as u64)?;
            if w.is_zero() {
                continue;
            }
            let add = dp[j].checked_mul(&w)?;
            dp[j + 1] = dp[j + 1].checked_add(&add)?;
        }
    }
    Some(dp[b].clone())
}

/// Occurrence count in the head-block family, where every member block has
/// the shape `(L, 1, 2, …, L-1)`.
///
/// A pattern block of length `l >= 2` occupies a host block exclusively,
/// head on head, choosing its tail: `C(L-1, l-1)` ways. A maximal group of
/// `s` consecutive length-1 pattern blocks placed in one host block has
/// `C(L-1, s)` tail placements, plus the head placement when `s = 1`.
pub fn count_head_blocks<T: Count>(sigma_lens: &[u32], parts: &[u32]) -> Option<T> {
    let b = sigma_lens.len();
    let mut dp: Vec<T> = vec![T::zero(); b + 1];
    dp[0] = T::one();
    for &part in parts {
        let l = part as u64;
        let mut next = dp.clone();
        for j in 0..b {
            if dp[j].is_zero() {
                continue;
            }
            if sigma_lens[j] >= 2 {
                let w: T = T::binomial(l - 1, sigma_lens[j] as u64 - 1)?;
                if !w.is_zero() {
                    let add = dp[j].checked_mul(&w)?;
                    next[j + 1] = next[j + 1].checked_add(&add)?;
                }
            } else {
                let mut s = 0usize;
                while j + s < b && sigma_lens[j + s] == 1 {
                    s += 1;
                    let mut w: T = T::binomial(l - 1, s as u64)?;
                    if s == 1 {
                        let one = T::one();
                        w = w.checked_add(&one)?;
                    }
                    if w.is_zero() {
                        break;
                    }
                    let add = dp[j].checked_mul(&w)?;
                    next[j + s] = next[j + s].checked_add(&add)?;
                }
            }
        }
        dp = next;
    }
    Some(dp[b].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial_u128(10, 3), Some(120));
        assert_eq!(binomial_u128(5, 9), Some(0));
        assert_eq!(binomial_u128(0, 0), Some(1));
        assert_eq!(binomial_u128(200, 100), None);
        assert_eq!(binomial_big(10, 3), BigUint::from(120u32));
        let big = binomial_big(200, 100);
        assert_eq!(
            big.to_string(),
            "90548514656103281165404177077484163874504589675413336841320"
        );
    }

    #[test]
    fn sign_count_full_match() {
        // Pattern equals host: exactly one occurrence.
        let code = [1i8, -1, 1];
        let got: u128 = count_signs(&code, &code).unwrap();
        assert_eq!(got, 1);
    }

    #[test]
    fn sign_count_single_slot_counts_positions() {
        // Pattern of length 1: every position matches.
        let got: u128 = count_signs(&[], &[1, -1, -1, 1]).unwrap();
        assert_eq!(got, 5);
    }

    #[test]
    fn block_tuple_count_inversions() {
        // One pattern block of length 2 against parts (2, 2, 1):
        // C(2,2) + C(2,2) + C(1,2) = 2.
        let got: u128 = count_block_tuples(&[2], &[2, 2, 1]).unwrap();
        assert_eq!(got, 2);
    }

    #[test]
    fn head_block_singles_match_positions() {
        // A single length-1 block can land on any of the n values.
        let got: u128 = count_head_blocks(&[1], &[3, 1, 2]).unwrap();
        assert_eq!(got, 6);
    }

    #[test]
    fn big_and_u128_paths_agree() {
        let eta = [1i8, -1];
        let xi = [1i8, -1, 1, 1, -1, -1, 1];
        let small: u128 = count_signs(&eta, &xi).unwrap();
        let big: BigUint = count_signs(&eta, &xi).unwrap();
        assert_eq!(BigUint::from(small), big);

        let lens = [2u32, 1, 3];
        let parts = [4u32, 2, 5, 1, 3];
        let small: u128 = count_block_tuples(&lens, &parts).unwrap();
        let big: BigUint = count_block_tuples(&lens, &parts).unwrap();
        assert_eq!(BigUint::from(small), big);

        let small: u128 = count_head_blocks(&lens, &parts).unwrap();
        let big: BigUint = count_head_blocks(&lens, &parts).unwrap();
        assert_eq!(BigUint::from(small), big);
    }
}
