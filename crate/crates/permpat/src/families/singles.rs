//! The two Catalan families, each defined by one forbidden length-3
//! pattern. Members are produced from uniform Dyck paths through a
//! shape-specific bijection; membership is a linear scan.

use crate::perm::Perm;
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Avoids the pattern with the largest value in the middle.
    Mid132,
    /// Avoids the decreasing pattern.
    Dec321,
}

/// Whether `p` contains an occurrence of 132, in one scan.
///
/// Tracks the largest value known to close some `(high, low)` pair from the
/// right; any later-left value below it completes the pattern.
pub fn contains_132(p: &Perm) -> bool {
    let v = p.values();
    let mut stack: Vec<u32> = Vec::new();
    let mut closer = 0u32;
    for &x in v.iter().rev() {
        if closer != 0 && x < closer {
            return true;
        }
        while let Some(&top) = stack.last() {
            if top < x {
                closer = stack.pop().unwrap();
            } else {
                break;
            }
        }
        stack.push(x);
    }
    false
}

/// Whether `p` contains a decreasing subsequence of length 3, in one scan.
///
/// Tracks the smallest value with some larger value before it; any later
/// value below that completes the pattern.
pub fn contains_321(p: &Perm) -> bool {
    let v = p.values();
    let mut max_prefix = 0u32;
    let mut mid = 0u32;
    for &x in v {
        if x < mid {
            return true;
        }
        if x > max_prefix {
            max_prefix = x;
        } else {
            mid = x;
        }
    }
    false
}

pub fn is_member(shape: Shape, p: &Perm) -> bool {
    match shape {
        Shape::Mid132 => !contains_132(p),
        Shape::Dec321 => !contains_321(p),
    }
}

/// Uniform Dyck path of semilength `n` as `+1`/`-1` steps, via the cycle
/// lemma: shuffle `n` up-steps among `n+1` down-steps, rotate to the unique
/// ballot sequence, drop the final down-step.
pub fn random_dyck<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<i8> {
    let mut steps = vec![1i8; 2 * n + 1];
    for s in steps[n..].iter_mut() {
        *s = -1;
    }
    steps.shuffle(rng);
    let mut depth = 0i64;
    let mut min_depth = i64::MAX;
    let mut cut = 0;
    for (i, &s) in steps.iter().enumerate() {
        depth += s as i64;
        if depth < min_depth {
            min_depth = depth;
            cut = i + 1;
        }
    }
    let mut path = Vec::with_capacity(2 * n);
    path.extend_from_slice(&steps[cut..]);
    path.extend_from_slice(&steps[..cut - 1]);
    path
}

/// First Dyck path of semilength `n` in lexicographic order with up-steps
/// first.
pub fn first_dyck(n: usize) -> Vec<i8> {
    let mut path = vec![1i8; 2 * n];
    for s in path[n..].iter_mut() {
        *s = -1;
    }
    path
}

/// Advances `path` to its lexicographic successor (up-step before
/// down-step). Returns false after the last path.
pub fn next_dyck(path: &mut [i8]) -> bool {
    let (mut ups, mut downs) = (0u32, 0u32);
    for i in (0..path.len()).rev() {
        if path[i] == -1 {
            downs += 1;
            continue;
        }
        if downs >= ups + 2 {
            path[i] = -1;
            for (j, s) in path[i + 1..].iter_mut().enumerate() {
                *s = if (j as u32) < ups + 1 { 1 } else { -1 };
            }
            return true;
        }
        ups += 1;
    }
    false
}

/// Member of the 132-avoiding family for a Dyck path, by first-return
/// decomposition: the path `U w1 D w2` maps to `(A, max, B)` where `A`
/// realizes `w1` on the values directly below the maximum and `B` realizes
/// `w2` on the values below those.
pub fn perm_from_dyck_132(path: &[i8]) -> Perm {
    let n = path.len() / 2;
    let mut values = vec![0u32; n];
    // Tasks: (path start, path end, output start, value high).
    let mut tasks = vec![(0usize, path.len(), 0usize, n as u32)];
    while let Some((s, e, out, hi)) = tasks.pop() {
        if s == e {
            continue;
        }
        let mut depth = 0i32;
        let mut t = s;
        for (i, &step) in path[s..e].iter().enumerate() {
            depth += step as i32;
            if depth == 0 {
                t = s + i;
                break;
            }
        }
        let a = (t - s - 1) / 2;
        values[out + a] = hi;
        tasks.push((s + 1, t, out, hi - 1));
        tasks.push((t + 1, e, out + a + 1, hi - 1 - a as u32));
    }
    Perm::from_vec_unchecked(values)
}

/// Member of the 321-avoiding family for a Dyck path: the run lengths
/// `U^{a_1} D^{b_1} U^{a_2} …` place left-to-right maxima `a_1 + … + a_j`
/// at positions `1 + b_1 + … + b_{j-1}`; the remaining values fill the
/// remaining positions in increasing order.
pub fn perm_from_dyck_321(path: &[i8]) -> Perm {
    let n = path.len() / 2;
    let mut values = vec![0u32; n];
    let mut used = vec![false; n + 1];
    let mut pos = 0usize;
    let mut val = 0u32;
    let mut i = 0usize;
    while i < path.len() {
        let mut a = 0u32;
        while i < path.len() && path[i] == 1 {
            a += 1;
            i += 1;
        }
        let mut b = 0usize;
        while i < path.len() && path[i] == -1 {
            b += 1;
            i += 1;
        }
        val += a;
        values[pos] = val;
        used[val as usize] = true;
        pos += b;
    }
    let mut fill = 1u32;
    for slot in values.iter_mut() {
        if *slot == 0 {
            while used[fill as usize] {
                fill += 1;
            }
            *slot = fill;
            fill += 1;
        }
    }
    Perm::from_vec_unchecked(values)
}

pub fn perm_from_dyck(shape: Shape, path: &[i8]) -> Perm {
    match shape {
        Shape::Mid132 => perm_from_dyck_132(path),
        Shape::Dec321 => perm_from_dyck_321(path),
    }
}
