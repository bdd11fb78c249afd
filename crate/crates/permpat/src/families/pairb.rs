//! Composition-coded family: permutations whose direct-sum blocks are all
//! decreasing runs. Codes are the block length compositions of `n`.

use crate::perm::Perm;

/// Every direct-sum block is a decreasing run.
pub fn is_member(p: &Perm) -> bool {
    let v = p.values();
    let mut lo = 0u32;
    let mut i = 0;
    while i < v.len() {
        // Block starting at i must be (lo + L, …, lo + 1) for some L.
        let head = v[i];
        if head <= lo {
            return false;
        }
        let len = (head - lo) as usize;
        if i + len > v.len() {
            return false;
        }
        for j in 0..len {
            if v[i + j] != head - j as u32 {
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
        for j in 0..len {
            values.push(off + len - j);
        }
        off += len;
    }
    Perm::from_vec_unchecked(values)
}
