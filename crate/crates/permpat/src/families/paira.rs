//! Composition-coded family: permutations whose direct-sum blocks each put
//! their largest value first, followed by the rest in increasing order.
//! Codes are the block length compositions of `n`.

use crate::perm::Perm;

/// Every direct-sum block has the shape `(L, 1, 2, …, L-1)` after shifting.
pub fn is_member(p: &Perm) -> bool {
    let v = p.values();
    let mut lo = 0u32;
    let mut i = 0;
    while i < v.len() {
        let head = v[i];
        if head <= lo {
            return false;
        }
        let len = (head - lo) as usize;
        if i + len > v.len() {
            return false;
        }
        for j in 1..len {
            if v[i + j] != lo + j as u32 {
                return false;
            }
        }
        lo = head;
        i += len;
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

/// Member with the given block lengths (`n = parts.sum()`).
pub fn decode(parts: &[u32]) -> Perm {
    let n: u32 = parts.iter().sum();
    let mut values = Vec::with_capacity(n as usize);
    let mut off = 0u32;
    for &len in parts {
        values.push(off + len);
        for j in 1..len {
            values.push(off + j);
        }
        off += len;
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
        [p("231"), p("321")]
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode(&[3, 2]), p("31254"));
        assert_eq!(decode(&[1, 1]), p("12"));
        assert_eq!(decode(&[4]), p("4123"));
    }

    #[test]
    fn encode_decode_round_trip() {
        for n in 1..=9usize {
            for mask in 0u32..1 << (n - 1) {
                let mut parts = Vec::new();
                let mut len = 1u32;
                for i in 0..n - 1 {
                    if mask >> i & 1 == 1 {
                        parts.push(len);
                        len = 1;
                    } else {
                        len += 1;
                    }
                }
                parts.push(len);
                let member = decode(&parts);
                assert!(is_member(&member));
                assert_eq!(encode(&member).unwrap(), parts);
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
        assert_eq!(encode(&p("321")), None);
        assert_eq!(encode(&p("231")), None);
    }
}
