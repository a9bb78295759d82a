//! Colexicographic ranking of k-subsets of `0..n`.
//!
//! Subsets are sorted ascending; colex compares them from the largest element
//! down, so the rank of `{s_1 < ... < s_k}` is `Σ C(s_i, i)`.

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays exact because acc * (n - i) is divisible by i + 1.
        let Some(m) = acc.checked_mul((n - i) as u128) else {
            return u128::MAX;
        };
        acc = m / (i + 1) as u128;
    }
    acc
}

pub fn rank(s: &[usize]) -> u128 {
    s.iter()
        .enumerate()
        .map(|(i, &x)| binomial(x as u64, i as u64 + 1))
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// The subset of rank `r` among k-subsets of `0..n`. Callers keep `r < C(n, k)`.
pub fn unrank(mut r: u128, k: usize, n: usize, out: &mut [usize]) {
    debug_assert_eq!(out.len(), k);
    let mut hi = n;
    for i in (1..=k).rev() {
        // Largest c < hi with C(c, i) <= r.
        let (mut lo, mut top) = (i - 1, hi - 1);
        while lo < top {
            let mid = (lo + top).div_ceil(2);
            if binomial(mid as u64, i as u64) <= r {
                lo = mid;
            } else {
                top = mid - 1;
            }
        }
        out[i - 1] = lo;
        r -= binomial(lo as u64, i as u64);
        hi = lo;
    }
}

/// Advances `s` to its colex successor among subsets of `0..n`; false at the end.
#[inline]
pub fn next(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    for i in 0..k {
        let limit = if i + 1 < k { s[i + 1] } else { n };
        if s[i] + 1 < limit {
            s[i] += 1;
            for (j, x) in s[..i].iter_mut().enumerate() {
                *x = j;
            }
            return true;
        }
    }
    false
}
