use alloc::vec::Vec;
use core::fmt;
use core::hash::{Hash, Hasher};

const BITS: usize = 64;

/// A subset of `0..capacity`, stored as a bitset.
///
/// Binary operations accept operands of different capacity; the result has
/// the larger one. Equality and hashing look at members only.
#[derive(Clone, Default)]
pub struct VertexSet {
    words: Vec<u64>,
    cap: usize,
}

fn word_count(cap: usize) -> usize {
    cap.div_ceil(BITS)
}

impl VertexSet {
    pub fn new(cap: usize) -> Self {
        VertexSet { words: alloc::vec![0; word_count(cap)], cap }
    }

    /// All of `0..cap`.
    pub fn full(cap: usize) -> Self {
        let mut s = VertexSet { words: alloc::vec![!0; word_count(cap)], cap };
        s.trim();
        s
    }

    pub fn from_slice(cap: usize, members: &[usize]) -> Self {
        let mut s = Self::new(cap);
        for &v in members {
            s.insert(v);
        }
        s
    }

    pub fn from_iter_cap<I: IntoIterator<Item = usize>>(cap: usize, iter: I) -> Self {
        let mut s = Self::new(cap);
        for v in iter {
            s.insert(v);
        }
        s
    }

    fn trim(&mut self) {
        let rem = self.cap % BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    fn grow(&mut self, cap: usize) {
        if cap > self.cap {
            self.cap = cap;
            self.words.resize(word_count(cap), 0);
        }
    }

    pub fn capacity(&self) -> usize {
        self.cap
    }

    /// Inserts `v`, growing the capacity if needed. Returns true if `v` was new.
    pub fn insert(&mut self, v: usize) -> bool {
        if v >= self.cap {
            self.grow(v + 1);
        }
        let (w, b) = (v / BITS, v % BITS);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.cap {
            return false;
        }
        let (w, b) = (v / BITS, v % BITS);
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        present
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.cap && self.words[v / BITS] & (1 << (v % BITS)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter { words: &self.words, idx: 0, cur: self.words.first().copied().unwrap_or(0) }
    }

    /// Smallest member.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.grow(other.cap);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (i, a) in self.words.iter_mut().enumerate() {
            *a &= other.words.get(i).copied().unwrap_or(0);
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s.grow(other.cap);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words.iter().enumerate().all(|(i, &a)| a & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Raw words, least significant bit first. Trailing words may be zero.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    fn significant(&self) -> &[u64] {
        let end = self.words.iter().rposition(|&w| w != 0).map_or(0, |i| i + 1);
        &self.words[..end]
    }
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        self.significant() == other.significant()
    }
}

impl Eq for VertexSet {}

impl Hash for VertexSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.significant().hash(state);
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * BITS + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_membership() {
        let mut s = VertexSet::new(70);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        s.insert(65);
        assert_eq!(s.to_vec(), [3, 65]);
        assert!(s.remove(3));
        assert_eq!(s.len(), 1);
        assert!(!s.contains(200));
    }

    #[test]
    fn full_is_trimmed() {
        let s = VertexSet::full(67);
        assert_eq!(s.len(), 67);
        assert_eq!(s.iter().last(), Some(66));
    }

    #[test]
    fn equality_ignores_capacity() {
        let a = VertexSet::from_slice(10, &[1, 2]);
        let b = VertexSet::from_slice(300, &[2, 1]);
        assert_eq!(a, b);
    }

    #[test]
    fn mixed_capacity_ops() {
        let a = VertexSet::from_slice(10, &[1, 2]);
        let b = VertexSet::from_slice(100, &[2, 90]);
        assert_eq!(a.union(&b).to_vec(), [1, 2, 90]);
        assert_eq!(a.intersection(&b).to_vec(), [2]);
        assert_eq!(b.difference(&a).to_vec(), [90]);
        assert!(!b.is_subset(&a));
        assert!(VertexSet::from_slice(100, &[2]).is_subset(&a));
    }
}
