//! Fixed-width vertex bitsets.
//!
//! Every complex handled by this crate has at most 256 vertices (the largest
//! is the 240-vertex nerve of `4_21`), so a vertex set fits in four words.

use std::fmt;

pub const MAX_VERTICES: usize = 256;
const WORDS: usize = MAX_VERTICES / 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet([u64; WORDS]);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet([0; WORDS]);

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_VERTICES);
        let mut s = Self::EMPTY;
        for w in 0..WORDS {
            let lo = w * 64;
            if n >= lo + 64 {
                s.0[w] = u64::MAX;
            } else if n > lo {
                s.0[w] = (1u64 << (n - lo)) - 1;
            }
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut s = Self::EMPTY;
        for v in it {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0[v >> 6] |= 1u64 << (v & 63);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0[v >> 6] &= !(1u64 << (v & 63));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.0[v >> 6] >> (v & 63) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn and(&self, other: &Self) -> Self {
        let mut r = *self;
        for w in 0..WORDS {
            r.0[w] &= other.0[w];
        }
        r
    }

    #[inline]
    pub fn or(&self, other: &Self) -> Self {
        let mut r = *self;
        for w in 0..WORDS {
            r.0[w] |= other.0[w];
        }
        r
    }

    #[inline]
    pub fn and_not(&self, other: &Self) -> Self {
        let mut r = *self;
        for w in 0..WORDS {
            r.0[w] &= !other.0[w];
        }
        r
    }

    #[inline]
    pub fn intersection_len(&self, other: &Self) -> usize {
        (0..WORDS)
            .map(|w| (self.0[w] & other.0[w]).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn is_subset(&self, other: &Self) -> bool {
        (0..WORDS).all(|w| self.0[w] & !other.0[w] == 0)
    }

    /// Smallest element, if any.
    #[inline]
    pub fn first(&self) -> Option<usize> {
        for w in 0..WORDS {
            if self.0[w] != 0 {
                return Some(w * 64 + self.0[w].trailing_zeros() as usize);
            }
        }
        None
    }

    /// Elements strictly greater than `v`.
    #[inline]
    pub fn above(&self, v: usize) -> Self {
        let mut r = *self;
        let w = v >> 6;
        for i in 0..w {
            r.0[i] = 0;
        }
        let b = v & 63;
        r.0[w] &= if b == 63 { 0 } else { u64::MAX << (b + 1) };
        r
    }

    pub fn iter(&self) -> Iter {
        Iter {
            words: self.0,
            word: 0,
        }
    }
}

pub struct Iter {
    words: [u64; WORDS],
    word: usize,
}

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.word < WORDS {
            let w = &mut self.words[self.word];
            if *w != 0 {
                let b = w.trailing_zeros() as usize;
                *w &= *w - 1;
                return Some(self.word * 64 + b);
            }
            self.word += 1;
        }
        None
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = VertexSet::from_iter([0, 63, 64, 200, 255]);
        assert_eq!(s.len(), 5);
        assert!(s.contains(200));
        s.remove(200);
        assert!(!s.contains(200));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 255]);
        assert_eq!(s.above(63).iter().collect::<Vec<_>>(), vec![64, 255]);
        assert_eq!(s.above(255).len(), 0);
        assert_eq!(s.first(), Some(0));
        assert_eq!(VertexSet::full(130).len(), 130);
        assert_eq!(VertexSet::full(256).len(), 256);
        assert!(VertexSet::from_iter([1, 2]).is_subset(&VertexSet::full(3)));
    }
}
