//! Used-color set: bitset-backed for realistic palettes, hash-backed beyond.

use crate::bitset::Bitset;
use std::collections::HashSet;

const BITSET_LIMIT: u32 = 1 << 22;

#[derive(Clone, Debug)]
pub enum ColorSet {
    Bits(Bitset),
    Hash(HashSet<u32>),
}

impl ColorSet {
    pub fn new(c: u32) -> Self {
        if c <= BITSET_LIMIT {
            ColorSet::Bits(Bitset::new(c as usize))
        } else {
            ColorSet::Hash(HashSet::new())
        }
    }

    #[inline]
    pub fn insert(&mut self, color: u32) {
        match self {
            ColorSet::Bits(b) => b.insert(color as usize),
            ColorSet::Hash(h) => {
                h.insert(color);
            }
        }
    }

    #[inline]
    pub fn remove(&mut self, color: u32) {
        match self {
            ColorSet::Bits(b) => b.remove(color as usize),
            ColorSet::Hash(h) => {
                h.remove(&color);
            }
        }
    }

    #[inline]
    pub fn contains(&self, color: u32) -> bool {
        match self {
            ColorSet::Bits(b) => b.contains(color as usize),
            ColorSet::Hash(h) => h.contains(&color),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ColorSet::Bits(b) => b.count(),
            ColorSet::Hash(h) => h.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn from_iter_with_palette(c: u32, it: impl IntoIterator<Item = u32>) -> Self {
        let mut s = ColorSet::new(c);
        for x in it {
            s.insert(x);
        }
        s
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = u32> + '_> {
        match self {
            ColorSet::Bits(b) => Box::new(b.iter().map(|i| i as u32)),
            ColorSet::Hash(h) => {
                let mut v: Vec<u32> = h.iter().copied().collect();
                v.sort_unstable();
                Box::new(v.into_iter())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_remove_contains() {
        let mut s = ColorSet::new(100);
        s.insert(3);
        s.insert(99);
        assert!(s.contains(3) && s.contains(99) && !s.contains(4));
        s.remove(3);
        assert!(!s.contains(3));
        assert_eq!(s.len(), 1);
    }
}
