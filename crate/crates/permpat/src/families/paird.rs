//! Sign-coded family: permutations in which every entry extends the running
//! maximum or the running minimum. Codes are sign vectors over positions
//! `2..=n`, with `+1` for a new maximum and `-1` for a new minimum.

use crate::perm::Perm;

/// Every entry after the first is a strict running maximum or minimum.
pub fn is_member(p: &Perm) -> bool {
    let v = p.values();
    let mut lo = v[0];
    let mut hi = v[0];
    for &x in &v[1..] {
        if x > hi {
            hi = x;
        } else if x < lo {
            lo = x;
        } else {
            return false;
        }
    }
    true
}

/// Sign vector of a member, `None` otherwise.
pub fn encode(p: &Perm) -> Option<Vec<i8>> {
    let v = p.values();
    let mut lo = v[0];
    let mut hi = v[0];
    let mut signs = Vec::with_capacity(v.len() - 1);
    for &x in &v[1..] {
        if x > hi {
            hi = x;
            signs.push(1);
        } else if x < lo {
            lo = x;
            signs.push(-1);
        } else {
            return None;
        }
    }
    Some(signs)
}

/// Member with the given sign vector (`n = signs.len() + 1`).
///
/// The first value is one more than the number of minus signs; plus signs
/// then take the next free value above, minus signs the next free value
/// below.
pub fn decode(signs: &[i8]) -> Perm {
    let minus = signs.iter().filter(|&&s| s == -1).count() as u32;
    let mut values = Vec::with_capacity(signs.len() + 1);
    values.push(minus + 1);
    let mut next_min = minus;
    let mut next_max = minus + 2;
    for &s in signs {
        if s == 1 {
            values.push(next_max);
            next_max += 1;
        } else {
            values.push(next_min);
            next_min -= 1;
        }
    }
    Perm::from_vec_unchecked(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Pattern;

    fn p(text: &str) -> Perm {
        text.parse().unwrap()
    }

    fn forbidden() -> [Pattern; 2] {
        [p("132"), p("312")]
    }

    #[test]
    fn decode_example() {
        assert_eq!(decode(&[1, -1]), p("231"));
        assert_eq!(decode(&[]), p("1"));
        assert_eq!(decode(&[-1, -1, 1]), p("3214"));
    }

    #[test]
    fn encode_decode_round_trip() {
        for n in 1..=9usize {
            for mask in 0u32..1 << (n - 1) {
                let signs: Vec<i8> = (0..n - 1)
                    .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
                    .collect();
                let member = decode(&signs);
                assert!(is_member(&member));
                assert_eq!(encode(&member).unwrap(), signs);
            }
        }
    }

    #[test]
    fn membership_matches_avoidance() {
        for n in 1..=7usize {
            let mut seen = 0u64;
            for x in crate::perm::tests_support::all_perms(n) {
                let member = is_member(&x);
                assert_eq!(member, crate::perm::avoids(&x, &forbidden()));
                if member {
                    seen += 1;
                }
            }
            assert_eq!(seen, 1 << (n - 1));
        }
    }

    #[test]
    fn non_members_have_no_code() {
        assert_eq!(encode(&p("132")), None);
        assert_eq!(encode(&p("2143")), None);
    }
}
