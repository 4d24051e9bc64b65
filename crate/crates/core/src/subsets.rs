//! Lexicographic enumeration of fixed-size subsets of `0..n`.

use crate::error::{Error, Result};
use crate::matrix::IndexSet;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Binomial coefficient as a float, for bound formulas.
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Iterator over all `l`-subsets of `0..n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
    remaining: u128,
}

impl Combinations {
    pub fn new(n: usize, l: usize) -> Result<Self> {
        Self::from_rank(n, l, 0)
    }

    /// Start at the subset with lexicographic rank `rank`.
    pub fn from_rank(n: usize, l: usize, rank: u128) -> Result<Self> {
        if l == 0 || l > n {
            return Err(Error::InvalidArgument(format!(
                "subset size {l} must be in 1..={n}"
            )));
        }
        let total = binomial(n, l);
        if rank >= total {
            return Ok(Self {
                n,
                current: None,
                remaining: 0,
            });
        }
        let mut subset = Vec::with_capacity(l);
        let mut r = rank;
        let mut next = 0;
        for slot in 0..l {
            let left = l - slot - 1;
            loop {
                let block = binomial(n - next - 1, left);
                if r < block {
                    break;
                }
                r -= block;
                next += 1;
            }
            subset.push(next);
            next += 1;
        }
        Ok(Self {
            n,
            current: Some(subset),
            remaining: total - rank,
        })
    }

    /// Limit the iterator to at most `count` further subsets.
    pub fn take_count(mut self, count: u128) -> Self {
        self.remaining = self.remaining.min(count);
        self
    }
}

impl Iterator for Combinations {
    type Item = IndexSet;

    fn next(&mut self) -> Option<IndexSet> {
        if self.remaining == 0 {
            return None;
        }
        let cur = self.current.as_mut()?;
        let out = IndexSet::from_sorted(cur.clone());
        self.remaining -= 1;
        let l = cur.len();
        let mut i = l;
        while i > 0 && cur[i - 1] == self.n - l + i - 1 {
            i -= 1;
        }
        if i == 0 {
            self.current = None;
        } else {
            cur[i - 1] += 1;
            for t in i..l {
                cur[t] = cur[t - 1] + 1;
            }
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, Some(r))
    }
}

/// All `C(n, l)` subsets in lexicographic order.
pub fn enumerate_subsets(n: usize, l: usize) -> Result<Combinations> {
    Combinations::new(n, l)
}

/// Split the enumeration into consecutive chunks of at most `chunk` subsets,
/// returned as independent iterators in order.
pub fn subset_chunks(n: usize, l: usize, chunk: u128) -> Result<Vec<Combinations>> {
    let total = binomial(n, l);
    let chunk = chunk.max(1);
    let mut out = Vec::new();
    let mut start = 0;
    while start < total {
        out.push(Combinations::from_rank(n, l, start)?.take_count(chunk));
        start += chunk;
    }
    if out.is_empty() {
        // Still validate (n, l).
        Combinations::new(n, l)?;
    }
    Ok(out)
}

/// Lexicographic rank of a sorted subset of `0..n`.
pub fn rank_of(subset: &[usize], n: usize) -> u128 {
    let l = subset.len();
    let mut rank = 0;
    let mut prev = 0;
    for (slot, &v) in subset.iter().enumerate() {
        for skipped in prev..v {
            rank += binomial(n - skipped - 1, l - slot - 1);
        }
        prev = v + 1;
    }
    rank
}
