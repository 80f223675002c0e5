//! Small sets of beam indices backed by a bitmask.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// A subset of beam indices `0..b` for `b <= 64`, stored as a bitmask.
///
/// Used for component-beam index sets and positivity sets alike; cheap to
/// copy, hash, and combine, which the subset enumerations here lean on.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const EMPTY: Self = Self(0);

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < 64);
        Self(1 << i)
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        let mut s = Self::EMPTY;
        for &i in indices {
            s.insert(i);
        }
        s
    }

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < 64);
        self.0 |= 1 << i;
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Complement within `0..b`.
    pub fn complement(self, b: usize) -> Self {
        let all = if b >= 64 { u64::MAX } else { (1u64 << b) - 1 };
        Self(!self.0 & all)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Iterates all nonempty subsets of `self` in descending bitmask order.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = IndexSet> {
        let mask = self.0;
        let mut sub = mask;
        let mut done = mask == 0;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = IndexSet(sub);
            sub = (sub - 1) & mask;
            if sub == 0 {
                done = true;
            }
            Some(out)
        })
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let indices = Vec::<usize>::deserialize(deserializer)?;
        for &i in &indices {
            if i >= 64 {
                return Err(D::Error::custom(format!("index {i} out of range (max 63)")));
            }
        }
        Ok(Self::from_indices(&indices))
    }
}
