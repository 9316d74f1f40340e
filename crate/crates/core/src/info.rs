//! Information sets: subsets of a world space packed into a bit-mask.
//!
//! World indices refer to the declaration order of a [`WorldSpace`]. The
//! canonical order on sets is ascending mask value, which every sweep and
//! witness list in the checkers relies on.
//!
//! [`WorldSpace`]: crate::space::WorldSpace

use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

/// A set of worlds, at most 64, identified by index bits.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct InfoSet(u64);

pub const MAX_WORLDS: usize = 64;

impl InfoSet {
    pub const EMPTY: InfoSet = InfoSet(0);

    pub fn from_mask(mask: u64) -> InfoSet {
        InfoSet(mask)
    }

    pub fn mask(&self) -> u64 {
        self.0
    }

    /// All worlds of an `n`-world space.
    pub fn full(n: usize) -> InfoSet {
        debug_assert!(n <= MAX_WORLDS);
        if n == MAX_WORLDS {
            InfoSet(u64::MAX)
        } else {
            InfoSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(index: usize) -> InfoSet {
        debug_assert!(index < MAX_WORLDS);
        InfoSet(1u64 << index)
    }

    pub fn contains(&self, index: usize) -> bool {
        index < MAX_WORLDS && self.0 & (1u64 << index) != 0
    }

    pub fn with(&self, index: usize) -> InfoSet {
        InfoSet(self.0 | (1u64 << index))
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset_of(&self, other: &InfoSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(&self, other: &InfoSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Complement within an `n`-world space.
    pub fn complement_in(&self, n: usize) -> InfoSet {
        InfoSet(!self.0 & InfoSet::full(n).0)
    }

    /// Ascending world indices.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mask = self.0;
        (0..MAX_WORLDS).filter(move |i| mask & (1u64 << i) != 0)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> InfoSet {
        let mut mask = 0u64;
        for i in indices {
            debug_assert!(i < MAX_WORLDS);
            mask |= 1u64 << i;
        }
        InfoSet(mask)
    }

    /// All subsets of an `n`-world space, ascending by mask (∅ first).
    pub fn all_subsets(n: usize) -> impl Iterator<Item = InfoSet> {
        debug_assert!(n < MAX_WORLDS, "subset enumeration needs n < 64");
        (0..=InfoSet::full(n).0).map(InfoSet)
    }

    /// All nonempty subsets of an `n`-world space, ascending by mask.
    pub fn nonempty_subsets(n: usize) -> impl Iterator<Item = InfoSet> {
        (1..=InfoSet::full(n).0).map(InfoSet)
    }

    /// All subsets of `self` (including ∅ and `self`), ascending by mask.
    pub fn subsets(&self) -> SubsetIter {
        SubsetIter {
            universe: self.0,
            next: Some(0),
        }
    }
}

/// Iterates the submasks of a fixed mask in ascending order.
pub struct SubsetIter {
    universe: u64,
    next: Option<u64>,
}

impl Iterator for SubsetIter {
    type Item = InfoSet;

    fn next(&mut self) -> Option<InfoSet> {
        let current = self.next?;
        // standard submask step: next = (current - universe) & universe
        self.next = if current == self.universe {
            None
        } else {
            Some(current.wrapping_sub(self.universe) & self.universe)
        };
        Some(InfoSet(current))
    }
}

impl BitAnd for InfoSet {
    type Output = InfoSet;
    fn bitand(self, rhs: InfoSet) -> InfoSet {
        InfoSet(self.0 & rhs.0)
    }
}

impl BitOr for InfoSet {
    type Output = InfoSet;
    fn bitor(self, rhs: InfoSet) -> InfoSet {
        InfoSet(self.0 | rhs.0)
    }
}

impl Sub for InfoSet {
    type Output = InfoSet;
    fn sub(self, rhs: InfoSet) -> InfoSet {
        InfoSet(self.0 & !rhs.0)
    }
}

impl fmt::Display for InfoSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for i in self.iter() {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{}", i)?;
            first = false;
        }
        write!(f, "}}")
    }
}
