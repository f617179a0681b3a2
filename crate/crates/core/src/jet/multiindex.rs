//! Multi-indices and the derivative ranking.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Dense count vector `μ = (μ_1, …, μ_n)`. Positions are zero-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(counts: Vec<u32>) -> Self {
        MultiIndex(counts)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut c = vec![0; n];
        c[i] = 1;
        MultiIndex(c)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Smallest position with a nonzero entry; `None` for the zero index.
    pub fn class(&self) -> Option<usize> {
        self.0.iter().position(|&c| c != 0)
    }

    pub fn plus(&self, i: usize) -> Self {
        let mut c = self.0.clone();
        c[i] += 1;
        MultiIndex(c)
    }

    pub fn minus(&self, i: usize) -> Option<Self> {
        if self.0[i] == 0 {
            return None;
        }
        let mut c = self.0.clone();
        c[i] -= 1;
        Some(MultiIndex(c))
    }

    pub fn add(&self, other: &MultiIndex) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All multi-indices of length `n` and order exactly `q`.
    pub fn all_of_order(n: usize, q: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if cur.len() + 1 == n {
                cur.push(left);
                out.push(MultiIndex(cur.clone()));
                cur.pop();
                return;
            }
            for k in (0..=left).rev() {
                cur.push(k);
                rec(n, left - k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if q == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(n, q, &mut Vec::with_capacity(n), &mut out);
        out
    }

    /// Ranking of bare multi-indices: lower order first; at equal order the
    /// index whose difference has a positive leftmost nonzero entry is smaller.
    pub fn rank_cmp(&self, other: &MultiIndex) -> Ordering {
        match self.order().cmp(&other.order()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(&other.0) {
            if a != b {
                return if a > b { Ordering::Less } else { Ordering::Greater };
            }
        }
        Ordering::Equal
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A derivative coordinate `u^α_μ` (α zero-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JetVar {
    pub alpha: usize,
    pub mu: MultiIndex,
}

impl JetVar {
    pub fn new(alpha: usize, mu: MultiIndex) -> Self {
        JetVar { alpha, mu }
    }

    pub fn order(&self) -> u32 {
        self.mu.order()
    }

    pub fn class(&self) -> Option<usize> {
        self.mu.class()
    }

    /// Term-over-position ranking: the multi-index decides, ties go by α.
    pub fn rank_cmp(&self, other: &JetVar) -> Ordering {
        self.mu
            .rank_cmp(&other.mu)
            .then_with(|| self.alpha.cmp(&other.alpha))
    }
}

/// Free-function form of [`MultiIndex::class`].
pub fn class(mu: &MultiIndex) -> Option<usize> {
    mu.class()
}

/// Free-function form of [`JetVar::rank_cmp`].
pub fn rank_compare(a: &JetVar, b: &JetVar) -> Ordering {
    a.rank_cmp(b)
}
