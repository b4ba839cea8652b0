//! Subsets of a ground set `{0, …, n−1}` as 64-bit masks, and the graded
//! colex indexer used for lifted variable spaces.
//!
//! Indices are 0-based in memory and 1-based in every text rendering.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_GROUND: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_indices(idx: &[usize]) -> Subset {
        let mut m = 0u64;
        for &i in idx {
            assert!(i < MAX_GROUND, "index {i} out of range");
            m |= 1 << i;
        }
        Subset(m)
    }

    /// `{0, …, k−1}`.
    pub fn prefix(k: usize) -> Subset {
        assert!(k <= MAX_GROUND);
        if k == MAX_GROUND {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << k) - 1)
        }
    }

    /// `{lo, …, hi−1}`.
    pub fn range(lo: usize, hi: usize) -> Subset {
        if lo >= hi {
            return Subset::EMPTY;
        }
        Subset(Subset::prefix(hi).0 & !Subset::prefix(lo).0)
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_GROUND && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Subset {
        Subset(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: Subset) -> Subset {
        Subset(self.0 | o.0)
    }

    pub fn intersection(self, o: Subset) -> Subset {
        Subset(self.0 & o.0)
    }

    pub fn difference(self, o: Subset) -> Subset {
        Subset(self.0 & !o.0)
    }

    pub fn is_disjoint(self, o: Subset) -> bool {
        self.0 & o.0 == 0
    }

    pub fn is_subset_of(self, o: Subset) -> bool {
        self.0 & !o.0 == 0
    }

    /// Largest element plus one (0 for the empty set).
    pub fn bound(self) -> usize {
        MAX_GROUND - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self`, starting with the empty set, in increasing mask
    /// order.
    pub fn subsets(self) -> Vec<Subset> {
        let mut out = Vec::with_capacity(1 << self.len());
        let mut h = 0u64;
        loop {
            out.push(Subset(h));
            if h == self.0 {
                break;
            }
            h = (h.wrapping_sub(self.0)) & self.0;
        }
        out
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

/// All `k`-subsets of `{0,…,n−1}` in lexicographic order of their sorted
/// member lists.
pub fn combinations(n: usize, k: usize) -> Vec<Subset> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(Subset::from_indices(&idx));
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn choose(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

/// Enumerates every `I ⊆ [n]` with `|I| <= cap`, ordered first by size and
/// then colexicographically. Index 0 is the empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetIndexer {
    n: usize,
    cap: usize,
    offsets: Vec<usize>,
}

impl SubsetIndexer {
    pub fn new(n: usize, cap: usize) -> Result<Self> {
        if n > MAX_GROUND {
            return Err(Error::InvalidArgument(format!("ground set of size {n} exceeds {MAX_GROUND}")));
        }
        let cap = cap.min(n);
        let mut offsets = vec![0];
        for s in 0..=cap {
            let last = *offsets.last().unwrap();
            offsets.push(last + choose(n, s));
        }
        Ok(SubsetIndexer { n, cap, offsets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.offsets[self.cap + 1]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// First index of subsets of the given size.
    pub fn level_start(&self, size: usize) -> usize {
        self.offsets[size.min(self.cap + 1)]
    }

    pub fn rank(&self, s: Subset) -> Option<usize> {
        let k = s.len();
        if k > self.cap || s.bound() > self.n {
            return None;
        }
        let within: usize = s.iter().enumerate().map(|(i, e)| choose(e, i + 1)).sum();
        Some(self.offsets[k] + within)
    }

    pub fn unrank(&self, mut r: usize) -> Subset {
        assert!(r < self.len(), "rank {r} out of range");
        let k = (0..=self.cap).rfind(|&s| self.offsets[s] <= r).unwrap();
        r -= self.offsets[k];
        let mut m = Subset::EMPTY;
        let mut hi = self.n;
        for i in (1..=k).rev() {
            let mut e = hi - 1;
            while choose(e, i) > r {
                e -= 1;
            }
            r -= choose(e, i);
            m = m.with(e);
            hi = e;
        }
        m
    }

    pub fn iter(&self) -> impl Iterator<Item = Subset> + '_ {
        (0..self.len()).map(|r| self.unrank(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_colex_order() {
        let ix = SubsetIndexer::new(3, 2).unwrap();
        let got: Vec<String> = ix.iter().map(|s| s.to_string()).collect();
        assert_eq!(got, ["{}", "{1}", "{2}", "{3}", "{1,2}", "{1,3}", "{2,3}"]);
        assert_eq!(ix.len(), 7);
    }

    #[test]
    fn rank_unrank_inverse() {
        let ix = SubsetIndexer::new(7, 4).unwrap();
        for r in 0..ix.len() {
            assert_eq!(ix.rank(ix.unrank(r)), Some(r));
        }
        assert_eq!(ix.rank(Subset::from_indices(&[0, 1, 2, 3, 4])), None);
    }

    #[test]
    fn submask_enumeration() {
        let s = Subset::from_indices(&[1, 3]);
        let subs = s.subsets();
        assert_eq!(subs, vec![Subset(0), Subset(2), Subset(8), Subset(10)]);
    }

    #[test]
    fn combinations_lex() {
        let c: Vec<String> = combinations(4, 2).iter().map(|s| s.to_string()).collect();
        assert_eq!(c, ["{1,2}", "{1,3}", "{1,4}", "{2,3}", "{2,4}", "{3,4}"]);
        assert_eq!(combinations(3, 0), vec![Subset::EMPTY]);
    }
}
