//! Lexicographic k-subsets of `0..n`, with ranking so the enumeration can be
//! cut into contiguous blocks.

use alloc::vec::Vec;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        let Some(next) = acc.checked_mul((n - i) as u128) else {
            return u128::MAX;
        };
        acc = next / (i as u128 + 1);
    }
    acc
}

/// The `rank`-th k-subset of `0..n` in lexicographic order.
pub fn unrank(n: usize, k: usize, mut rank: u128) -> Option<Vec<usize>> {
    if rank >= binomial(n, k) {
        return None;
    }
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let remaining = k - slot - 1;
        loop {
            let with_next = binomial(n - next - 1, remaining);
            if rank < with_next {
                break;
            }
            rank -= with_next;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    Some(out)
}

/// Advances `subset` to its lexicographic successor among k-subsets of
/// `0..n`. Returns `false` (leaving `subset` untouched) at the last one.
pub fn advance(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let Some(i) = (0..k).rev().find(|&i| subset[i] < n - k + i) else {
        return false;
    };
    subset[i] += 1;
    for j in i + 1..k {
        subset[j] = subset[j - 1] + 1;
    }
    true
}

/// Iterator over all k-subsets of `0..n` in lexicographic order.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().expect("checked above");
        if !advance(cur, self.n) {
            self.current = None;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 7), 120);
        assert_eq!(binomial(12, 8), 495);
        assert_eq!(binomial(8, 6), 28);
        assert_eq!(binomial(36, 13), 2_310_789_600);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(5, 0), 1);
    }

    #[test]
    fn unrank_matches_iteration() {
        for (rank, subset) in Combinations::new(7, 3).enumerate() {
            assert_eq!(unrank(7, 3, rank as u128), Some(subset));
        }
        assert_eq!(Combinations::new(7, 3).count(), 35);
        assert_eq!(unrank(7, 3, 35), None);
        assert_eq!(Combinations::new(3, 0).collect::<Vec<_>>(), vec![vec![]]);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }
}
