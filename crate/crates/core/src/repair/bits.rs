//! Small fixed-width bit sets indexing candidate atoms of a search
//! space.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct AtomBits {
    len: usize,
    words: Vec<u64>,
}

impl AtomBits {
    pub(crate) fn empty(len: usize) -> Self {
        AtomBits {
            len,
            words: vec![0; len.div_ceil(64).max(1)],
        }
    }

    pub(crate) fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub(crate) fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub(crate) fn count(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub(crate) fn is_subset_of(&self, other: &AtomBits) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub(crate) fn union_with(&mut self, other: &AtomBits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub(crate) fn with_inserted(&self, i: usize) -> AtomBits {
        let mut out = self.clone();
        out.insert(i);
        out
    }

    pub(crate) fn with_union(&self, other: &AtomBits) -> AtomBits {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub(crate) fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    pub(crate) fn max_one(&self) -> Option<usize> {
        (0..self.len).rev().find(|&i| self.contains(i))
    }

    pub(crate) fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut b = AtomBits::empty(len);
        for &i in indices {
            b.insert(i);
        }
        b
    }
}
