//! Uniform sampling of big integers below a bound, via masked rejection.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

/// Draws a uniform integer in `[0, bound)`.
///
/// Masks the top byte to the bound's bit length, so the expected number of
/// rejection rounds is below two.
pub fn biguint_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    assert!(!bound.is_zero(), "empty sampling range");
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let mask = 0xffu8 >> (bytes as u64 * 8 - bits);
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        *buf.last_mut().expect("at least one byte") &= mask;
        let draw = BigUint::from_bytes_le(&buf);
        if &draw < bound {
            return draw;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn draws_stay_below_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for bound in [1u64, 2, 3, 100, u64::MAX] {
            let bound = BigUint::from(bound) * BigUint::from(bound);
            for _ in 0..200 {
                assert!(biguint_below(&bound, &mut rng) < bound);
            }
        }
    }

    #[test]
    fn small_bound_is_uniform_enough() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let bound = BigUint::from(5u32);
        let mut hits = [0u32; 5];
        for _ in 0..5000 {
            let d = biguint_below(&bound, &mut rng);
            let idx: u32 = d.try_into().unwrap();
            hits[idx as usize] += 1;
        }
        for h in hits {
            assert!((800..1200).contains(&h), "skewed bucket: {h}");
        }
    }
}
