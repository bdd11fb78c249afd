//! Composition-coded family with block lengths restricted to 1 and 2: the
//! direct sums of `1` and `21`, counted by the Fibonacci numbers. Uniform
//! sampling walks a single uniform rank through the Fibonacci recursion,
//! choosing part 1 at remainder `r` exactly when the rank falls below
//! `F(r)`.

use super::bigrand::biguint_below;
use super::pairb;
use crate::perm::Perm;
use num_bigint::BigUint;
use rand::Rng;

/// Every direct-sum block is `1` or `21`.
pub fn is_member(p: &Perm) -> bool {
    let v = p.values();
    let mut expect = 1u32;
    let mut i = 0;
    while i < v.len() {
        if v[i] == expect {
            expect += 1;
            i += 1;
        } else if v[i] == expect + 1 && i + 1 < v.len() && v[i + 1] == expect {
            expect += 2;
            i += 2;
        } else {
            return false;
        }
    }
    true
}

/// Block lengths of a member, `None` otherwise.
pub fn encode(p: &Perm) -> Option<Vec<u32>> {
    if !is_member(p) {
        return None;
    }
    Some(p.block_lengths().into_iter().map(|l| l as u32).collect())
}

/// Member with the given block lengths, each 1 or 2.
pub fn decode(parts: &[u32]) -> Perm {
    pairb::decode(parts)
}

/// Fibonacci numbers `F(0..=n+1)` with `F(1) = F(2) = 1`, kept in `u64`
/// while they fit (up to `F(93)`).
pub enum FibTable {
    Small(Vec<u64>),
    Big(Vec<BigUint>),
}

impl FibTable {
    pub fn new(n: usize) -> Self {
        if n < 93 {
            let mut f = vec![0u64; n + 2];
            f[1] = 1;
            for i in 2..=n + 1 {
                f[i] = f[i - 1] + f[i - 2];
            }
            FibTable::Small(f)
        } else {
            let mut f = vec![BigUint::ZERO; n + 2];
            f[1] = BigUint::from(1u32);
            for i in 2..=n + 1 {
                f[i] = &f[i - 1] + &f[i - 2];
            }
            FibTable::Big(f)
        }
    }

    /// Uniform composition of `n` into parts 1 and 2.
    pub fn sample_parts<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<u32> {
        let mut parts = Vec::with_capacity(n);
        match self {
            FibTable::Small(f) => {
                let mut rank = rng.random_range(0..f[n + 1]);
                let mut r = n;
                while r > 0 {
                    if rank < f[r] {
                        parts.push(1);
                        r -= 1;
                    } else {
                        rank -= f[r];
                        parts.push(2);
                        r -= 2;
                    }
                }
            }
            FibTable::Big(f) => {
                let mut rank = biguint_below(&f[n + 1], rng);
                let mut r = n;
                while r > 0 {
                    if rank < f[r] {
                        parts.push(1);
                        r -= 1;
                    } else {
                        rank -= &f[r];
                        parts.push(2);
                        r -= 2;
                    }
                }
            }
        }
        parts
    }
}
