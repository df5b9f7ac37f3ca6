//! Binomial coefficients and the colexicographic order on k-subsets.
//!
//! Colex rank fixes the canonical edge enumeration e_1, ..., e_N used by the
//! generator and the coupling interpolation: for a sorted subset
//! s_0 < s_1 < ... < s_{k-1} of 0-based vertices,
//! rank = sum_i C(s_i, i + 1).

/// C(n, k) as u64; panics on overflow (far beyond desk scale).
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

/// Colex rank of a strictly increasing k-subset.
pub fn colex_rank(verts: &[u32]) -> u64 {
    let mut r = 0u64;
    for (i, &v) in verts.iter().enumerate() {
        r += binomial(v as usize, i + 1);
    }
    r
}

/// Inverse of `colex_rank` for subsets of size `k`.
pub fn colex_unrank(mut rank: u64, k: usize) -> Vec<u32> {
    let mut out = vec![0u32; k];
    for i in (1..=k).rev() {
        // largest m with C(m, i) <= rank
        let mut m = i - 1;
        while binomial(m + 1, i) <= rank {
            m += 1;
        }
        out[i - 1] = m as u32;
        rank -= binomial(m, i);
    }
    out
}

/// In-place iterator over all k-subsets of `0..n` in colex order.
pub struct ColexSubsets {
    current: Vec<u32>,
    n: usize,
    started: bool,
    done: bool,
}

impl ColexSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        ColexSubsets {
            current: (0..k as u32).collect(),
            n,
            started: false,
            done: k > n,
        }
    }

    /// Advances and returns the next subset, or None when exhausted.
    pub fn next_subset(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.current.is_empty() {
                self.done = true;
            }
            return Some(&self.current);
        }
        let k = self.current.len();
        // smallest i with current[i] + 1 < current[i+1] (or i = k-1)
        let mut i = 0;
        while i + 1 < k && self.current[i] + 1 == self.current[i + 1] {
            i += 1;
        }
        if self.current[i] as usize + 1 >= self.n && i == k - 1 {
            self.done = true;
            return None;
        }
        self.current[i] += 1;
        for (j, slot) in self.current.iter_mut().enumerate().take(i) {
            *slot = j as u32;
        }
        if self.current[k - 1] as usize >= self.n {
            self.done = true;
            return None;
        }
        Some(&self.current)
    }
}

/// Calls `f` for every k-subset of `items`; `f` returning false stops early.
/// Returns true if the iteration ran to completion.
pub fn for_each_subset<T: Copy>(items: &[T], k: usize, mut f: impl FnMut(&[T]) -> bool) -> bool {
    if k > items.len() {
        return true;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<T> = idx.iter().map(|&i| items[i]).collect();
    let n = items.len();
    loop {
        if !f(&buf) {
            return false;
        }
        // next lexicographic index combination
        let mut i = k;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return true;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
        for (b, &i) in buf.iter_mut().zip(&idx) {
            *b = items[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(100, 2), 4950);
        assert_eq!(binomial(30, 15), 155_117_520);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn colex_order_of_pairs() {
        // {0,1}, {0,2}, {1,2}, {0,3}, {1,3}, {2,3}, ...
        let mut it = ColexSubsets::new(4, 2);
        let mut seen = Vec::new();
        while let Some(s) = it.next_subset() {
            seen.push(s.to_vec());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 3],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        for (r, s) in seen.iter().enumerate() {
            assert_eq!(colex_rank(s), r as u64);
            assert_eq!(colex_unrank(r as u64, 2), *s);
        }
    }

    #[test]
    fn unrank_roundtrip_k3() {
        for r in 0..binomial(9, 3) {
            let s = colex_unrank(r, 3);
            assert_eq!(colex_rank(&s), r);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn subset_visitor_counts() {
        let items: Vec<u32> = (0..6).collect();
        let mut count = 0u64;
        for_each_subset(&items, 3, |_| {
            count += 1;
            true
        });
        assert_eq!(count, binomial(6, 3));
        // early stop
        let mut count = 0u64;
        for_each_subset(&items, 2, |_| {
            count += 1;
            count < 4
        });
        assert_eq!(count, 4);
    }
}
