//! Exhaustive enumeration of sample vectors.

use crate::error::{Error, Result};

/// `base^exp`, saturating at `u128::MAX`.
pub fn power(base: usize, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
}

/// `n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling_factorial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128))
}

pub(crate) fn check_limit(what: &'static str, requested: u128, limit: u128) -> Result<()> {
    if requested > limit {
        return Err(Error::EnumerationTooLarge { what, requested, limit });
    }
    Ok(())
}

/// Calls `f` on every vector in `{0..size}^len`, in lexicographic order.
pub fn for_each_tuple(size: usize, len: usize, mut f: impl FnMut(&[usize])) {
    if len == 0 {
        f(&[]);
        return;
    }
    if size == 0 {
        return;
    }
    let mut current = vec![0; len];
    loop {
        f(&current);
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            current[pos] += 1;
            if current[pos] < size {
                break;
            }
            current[pos] = 0;
        }
    }
}

/// Calls `f` on every vector of `len` pairwise distinct values from
/// `0..size`, in lexicographic order.
pub fn for_each_arrangement(size: usize, len: usize, mut f: impl FnMut(&[usize])) {
    fn recurse(size: usize, len: usize, used: &mut [bool], current: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if current.len() == len {
            f(current);
            return;
        }
        for v in 0..size {
            if !used[v] {
                used[v] = true;
                current.push(v);
                recurse(size, len, used, current, f);
                current.pop();
                used[v] = false;
            }
        }
    }
    if len > size {
        return;
    }
    let mut used = vec![false; size];
    let mut current = Vec::with_capacity(len);
    recurse(size, len, &mut used, &mut current, &mut f);
}
