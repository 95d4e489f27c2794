//! Lexicographic k-subset enumeration shared by the brute-force oracles.

/// Iterator over all k-subsets of `0..n` in lexicographic order.
pub(crate) struct KSubsets {
    n: usize,
    k: usize,
    cur: Option<Vec<usize>>,
}

pub(crate) fn k_subsets(n: usize, k: usize) -> KSubsets {
    let cur = if k <= n { Some((0..k).collect()) } else { None };
    KSubsets { n, k, cur }
}

impl Iterator for KSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.cur.as_mut()?;
        let out = cur.clone();
        // Advance to the next combination, rightmost index first.
        let mut i = self.k;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if cur[i] < self.n - (self.k - i) {
                cur[i] += 1;
                for j in i + 1..self.k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
