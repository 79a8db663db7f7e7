use alloc::vec::Vec;
use core::ops::Index;

use super::VertexSet;

macro_rules! tuple_algebra {
    ($name:ident, $elem:ty) => {
        impl $name {
            pub fn new(elements: Vec<$elem>) -> Self {
                $name(elements)
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn as_slice(&self) -> &[$elem] {
                &self.0
            }

            pub fn into_vec(self) -> Vec<$elem> {
                self.0
            }

            pub fn iter(&self) -> core::slice::Iter<'_, $elem> {
                self.0.iter()
            }

            /// The tuple in reverse order.
            pub fn rev(&self) -> Self {
                let mut v = self.0.clone();
                v.reverse();
                $name(v)
            }

            /// The first `i` entries, i.e. entries 1..=i in one-based terms.
            pub fn upto(&self, i: usize) -> Self {
                $name(self.0[..i.min(self.0.len())].to_vec())
            }

            /// Entries with one-based index at least `i`.
            pub fn from(&self, i: usize) -> Self {
                let start = i.saturating_sub(1).min(self.0.len());
                $name(self.0[start..].to_vec())
            }

            pub fn concat(&self, other: &Self) -> Self {
                let mut v = self.0.clone();
                v.extend(other.0.iter().cloned());
                $name(v)
            }
        }

        impl Index<usize> for $name {
            type Output = $elem;

            fn index(&self, i: usize) -> &$elem {
                &self.0[i]
            }
        }

        impl From<Vec<$elem>> for $name {
            fn from(v: Vec<$elem>) -> Self {
                $name(v)
            }
        }
    };
}

/// An ordered tuple of vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VertexTuple(pub Vec<usize>);

/// An ordered tuple of vertex sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SetTuple(pub Vec<VertexSet>);

tuple_algebra!(VertexTuple, usize);
tuple_algebra!(SetTuple, VertexSet);

impl VertexTuple {
    pub fn to_set(&self, cap: usize) -> VertexSet {
        VertexSet::from_slice(cap, &self.0)
    }
}

impl SetTuple {
    /// Removes `x` from every entry.
    pub fn minus(&self, x: &VertexSet) -> Self {
        SetTuple(self.0.iter().map(|s| s.difference(x)).collect())
    }

    /// `k` copies of the same set.
    pub fn repeat(set: &VertexSet, k: usize) -> Self {
        SetTuple(alloc::vec![set.clone(); k])
    }
}
