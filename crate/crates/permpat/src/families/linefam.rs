//! Index-coded families with exactly `n` members each, one per head
//! parameter `k` in `1..=n`. Three template shapes share the machinery:
//!
//! - `RevHead`: `(k, …, 1, k+1, …, n)`, a decreasing head then an
//!   increasing tail.
//! - `DropHead`: `(k, 1, …, k-1, k+1, …, n)`, the head value first, then
//!   everything else in increasing order.
//! - `SplitRuns`: `(l+1, …, l+k, 1, …, l)` with `l = n - k`, two increasing
//!   runs.

use super::counting::Count;
use crate::perm::Perm;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    RevHead,
    DropHead,
    SplitRuns,
}

/// Member with head parameter `k` (`1 <= k <= n`).
pub fn decode(shape: Shape, k: u32, n: u32) -> Perm {
    let mut values = Vec::with_capacity(n as usize);
    match shape {
        Shape::RevHead => {
            values.extend((1..=k).rev());
            values.extend(k + 1..=n);
        }
        Shape::DropHead => {
            values.push(k);
            values.extend(1..k);
            values.extend(k + 1..=n);
        }
        Shape::SplitRuns => {
            let l = n - k;
            values.extend(l + 1..=l + k);
            values.extend(1..=l);
        }
    }
    Perm::from_vec_unchecked(values)
}

/// Head parameter of a member, `None` otherwise.
pub fn encode(shape: Shape, p: &Perm) -> Option<u32> {
    let n = p.len() as u32;
    let k = match shape {
        Shape::RevHead | Shape::DropHead => p.values()[0],
        Shape::SplitRuns => n + 1 - p.values()[0],
    };
    if decode(shape, k, n) == *p {
        Some(k)
    } else {
        None
    }
}

pub fn is_member(shape: Shape, p: &Perm) -> bool {
    encode(shape, p).is_some()
}

/// Occurrences of the member with parameters `(sk, sm)` in the member with
/// parameters `(k, n)`, where `sm` is the pattern length.
pub fn count<T: Count>(shape: Shape, sk: u32, sm: u32, k: u32, n: u32) -> Option<T> {
    let (sk, sm, k, n) = (sk as u64, sm as u64, k as u64, n as u64);
    match shape {
        Shape::RevHead => {
            let sl = sm - sk;
            if sk >= 2 {
                T::binomial(k, sk)?.checked_mul(&T::binomial(n - k, sl)?)
            } else {
                let head = T::from_u64(k).checked_mul(&T::binomial(n - k, sl)?)?;
                head.checked_add(&T::binomial(n - k, sl + 1)?)
            }
        }
        Shape::DropHead => {
            let sl = sm - sk;
            if sk >= 2 {
                T::binomial(k - 1, sk - 1)?.checked_mul(&T::binomial(n - k, sl)?)
            } else {
                T::binomial(n - 1, sl + 1)?.checked_add(&T::binomial(n - k, sl)?)
            }
        }
        Shape::SplitRuns => {
            let sl = sm - sk;
            if sl >= 1 {
                T::binomial(k, sk)?.checked_mul(&T::binomial(n - k, sl)?)
            } else {
                T::binomial(k, sk)?.checked_add(&T::binomial(n - k, sk)?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{occurrences, Pattern, Perm};
    use num_bigint::BigUint;

    fn p(text: &str) -> Perm {
        text.parse().unwrap()
    }

    fn forbidden(shape: Shape) -> [Pattern; 3] {
        match shape {
            Shape::RevHead => [p("132"), p("231"), p("312")],
            Shape::DropHead => [p("132"), p("231"), p("321")],
            Shape::SplitRuns => [p("132"), p("213"), p("321")],
        }
    }

    const SHAPES: [Shape; 3] = [Shape::RevHead, Shape::DropHead, Shape::SplitRuns];

    #[test]
    fn decode_examples() {
        assert_eq!(decode(Shape::RevHead, 3, 5), p("32145"));
        assert_eq!(decode(Shape::RevHead, 1, 3), p("123"));
        assert_eq!(decode(Shape::DropHead, 4, 6), p("412356"));
        assert_eq!(decode(Shape::DropHead, 1, 3), p("123"));
        assert_eq!(decode(Shape::SplitRuns, 2, 5), p("45123"));
        assert_eq!(decode(Shape::SplitRuns, 5, 5), p("12345"));
    }

    #[test]
    fn members_are_exactly_the_avoiders() {
        for shape in SHAPES {
            for n in 1..=7usize {
                let mut members = Vec::new();
                for x in crate::perm::tests_support::all_perms(n) {
                    let member = is_member(shape, &x);
                    assert_eq!(member, crate::perm::avoids(&x, &forbidden(shape)));
                    if member {
                        let k = encode(shape, &x).unwrap();
                        assert_eq!(decode(shape, k, n as u32), x);
                        members.push(k);
                    }
                }
                members.sort();
                let want: Vec<u32> = (1..=n as u32).collect();
                assert_eq!(members, want);
            }
        }
    }

    #[test]
    fn counts_match_brute_force() {
        for shape in SHAPES {
            for n in 1..=8u32 {
                for k in 1..=n {
                    let host = decode(shape, k, n);
                    for sm in 1..=4.min(n) {
                        for sk in 1..=sm {
                            let sigma = decode(shape, sk, sm);
                            let got: u128 = count(shape, sk, sm, k, n).unwrap();
                            let want = occurrences(&sigma, &host);
                            assert_eq!(
                                BigUint::from(got),
                                want,
                                "shape {shape:?} sigma ({sk},{sm}) host ({k},{n})"
                            );
                        }
                    }
                }
            }
        }
    }
}
