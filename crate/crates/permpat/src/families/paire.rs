//! Grid-coded family: besides the identity, every member consists of three
//! increasing runs `(l+1, …, l+k, 1, …, l, k+l+1, …, n)` with `k, l >= 1`.
//! Codes are the run lengths `(k, l, m)` with `m >= 0`, or the identity
//! marker.

use crate::perm::Perm;

/// Run-length code of a member.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Template {
    /// `(l+1, …, l+k, 1, …, l, k+l+1, …, k+l+m)` with `k, l >= 1`.
    Grid { k: u32, l: u32, m: u32 },
    /// The increasing permutation.
    Identity { n: u32 },
}

/// Template of a member, `None` otherwise.
pub fn encode(p: &Perm) -> Option<Template> {
    if p.is_identity() {
        return Some(Template::Identity { n: p.len() as u32 });
    }
    let l = p.values()[0].checked_sub(1)?;
    if l == 0 {
        return None;
    }
    // First descent ends the first run.
    let v = p.values();
    let k = v.windows(2).position(|w| w[1] < w[0])? as u32 + 1;
    let n = p.len() as u32;
    let m = n.checked_sub(k + l)?;
    let t = Template::Grid { k, l, m };
    if decode(&t) == *p {
        Some(t)
    } else {
        None
    }
}

/// Member with the given template.
pub fn decode(t: &Template) -> Perm {
    match *t {
        Template::Identity { n } => Perm::identity(n as usize),
        Template::Grid { k, l, m } => {
            let mut values = Vec::with_capacity((k + l + m) as usize);
            values.extend(l + 1..=l + k);
            values.extend(1..=l);
            values.extend(k + l + 1..=k + l + m);
            Perm::from_vec_unchecked(values)
        }
    }
}

pub fn is_member(p: &Perm) -> bool {
    encode(p).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Pattern;

    fn p(text: &str) -> Perm {
        text.parse().unwrap()
    }

    fn forbidden() -> [Pattern; 2] {
        [p("132"), p("321")]
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode(&Template::Grid { k: 1, l: 1, m: 2 }), p("2134"));
        assert_eq!(decode(&Template::Grid { k: 2, l: 3, m: 0 }), p("45123"));
        assert_eq!(decode(&Template::Identity { n: 4 }), p("1234"));
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode(&p("2134")), Some(Template::Grid { k: 1, l: 1, m: 2 }));
        assert_eq!(encode(&p("1234")), Some(Template::Identity { n: 4 }));
        assert_eq!(encode(&p("2143")), None);
    }

    #[test]
    fn membership_matches_avoidance_and_count() {
        for n in 1..=7usize {
            let mut seen = 0u64;
            for x in crate::perm::tests_support::all_perms(n) {
                let member = is_member(&x);
                assert_eq!(member, crate::perm::avoids(&x, &forbidden()));
                if member {
                    let t = encode(&x).unwrap();
                    assert_eq!(decode(&t), x);
                    seen += 1;
                }
            }
            let n = n as u64;
            assert_eq!(seen, n * (n - 1) / 2 + 1);
        }
    }
}
