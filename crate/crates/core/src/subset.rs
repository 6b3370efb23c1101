//! Fixed-width bitmask subsets of the alternative set.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Dense alternative id in `0..n`.
pub type Alt = usize;

/// Largest alternative count a [`Subset`] can index.
pub const MAX_BITS: usize = 32;

/// A subset of `{0, .., n-1}` stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u32) -> Self {
        Subset(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// The whole alternative set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_BITS);
        if n == MAX_BITS {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    pub fn singleton(a: Alt) -> Self {
        Subset(1 << a)
    }

    pub fn pair(a: Alt, b: Alt) -> Self {
        Subset((1 << a) | (1 << b))
    }

    pub fn contains(self, a: Alt) -> bool {
        a < MAX_BITS && self.0 & (1 << a) != 0
    }

    #[must_use]
    pub fn with(self, a: Alt) -> Self {
        Subset(self.0 | (1 << a))
    }

    #[must_use]
    pub fn without(self, a: Alt) -> Self {
        Subset(self.0 & !(1 << a))
    }

    #[must_use]
    pub fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    #[must_use]
    pub fn intersection(self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    #[must_use]
    pub fn difference(self, other: Subset) -> Self {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// True when every member is below `n`.
    pub fn fits(self, n: usize) -> bool {
        self.is_subset_of(Subset::full(n))
    }

    /// Members in increasing order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(self) -> Vec<Alt> {
        self.iter().collect()
    }

    /// Every subset of `self`, starting with the empty set and ending with
    /// `self`, in increasing bit order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            universe: self.0,
            next: Some(0),
        }
    }

    /// Lexicographic order on the sorted member lists.
    pub fn lex_cmp(self, other: Subset) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl FromIterator<Alt> for Subset {
    fn from_iter<I: IntoIterator<Item = Alt>>(iter: I) -> Self {
        iter.into_iter().fold(Subset::EMPTY, Subset::with)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Debug)]
pub struct Members(u32);

impl Iterator for Members {
    type Item = Alt;

    fn next(&mut self) -> Option<Alt> {
        if self.0 == 0 {
            return None;
        }
        let a = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(a)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

/// Submask enumeration of a fixed universe.
#[derive(Clone, Debug)]
pub struct Subsets {
    universe: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        self.next = if cur == self.universe {
            None
        } else {
            Some((cur.wrapping_sub(self.universe)) & self.universe)
        };
        Some(Subset(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerates_every_submask_once() {
        let s: Subset = [1, 3, 4].into_iter().collect();
        let all: Vec<_> = s.subsets().collect();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], Subset::EMPTY);
        assert_eq!(*all.last().unwrap(), s);
        for (i, x) in all.iter().enumerate() {
            assert!(x.is_subset_of(s));
            assert!(all[..i].iter().all(|y| y != x));
        }
        assert_eq!(Subset::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn lex_cmp_compares_member_lists() {
        let a: Subset = [0, 3].into_iter().collect();
        let b: Subset = [1].into_iter().collect();
        assert_eq!(a.lex_cmp(b), Ordering::Less);
        assert_eq!(Subset::EMPTY.lex_cmp(b), Ordering::Less);
        assert_eq!(b.lex_cmp(b), Ordering::Equal);
    }

    #[test]
    fn full_and_membership() {
        assert_eq!(Subset::full(3).to_vec(), [0, 1, 2]);
        assert!(Subset::full(4).contains(3));
        assert!(!Subset::full(4).contains(4));
        assert!(Subset::pair(0, 5).fits(6));
        assert!(!Subset::pair(0, 5).fits(5));
        assert_eq!(Subset::full(32).len(), 32);
    }
}
