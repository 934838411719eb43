//! Fixed-width atom subsets.
//!
//! Atom labels are positive integers `1..=64`; label `i` lives in bit `i - 1`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest atom label an [`AtomSet`] can hold.
pub const MAX_ATOMS: usize = 64;

/// A subset of the atom universe `{1, .., 64}`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct AtomSet(u64);

impl AtomSet {
    pub const EMPTY: AtomSet = AtomSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        AtomSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{1, .., u}`.
    pub fn full(u: usize) -> Self {
        assert!(u <= MAX_ATOMS, "universe of {u} atoms exceeds {MAX_ATOMS}");
        if u == MAX_ATOMS {
            AtomSet(u64::MAX)
        } else {
            AtomSet((1u64 << u) - 1)
        }
    }

    pub fn singleton(label: usize) -> Self {
        assert!((1..=MAX_ATOMS).contains(&label), "atom label {label} out of range");
        AtomSet(1u64 << (label - 1))
    }

    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Self {
        labels
            .into_iter()
            .fold(AtomSet::EMPTY, |acc, l| acc | AtomSet::singleton(l))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, label: usize) -> bool {
        (1..=MAX_ATOMS).contains(&label) && self.0 & (1u64 << (label - 1)) != 0
    }

    pub fn is_subset(self, other: AtomSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: AtomSet) -> bool {
        self != other && self.is_subset(other)
    }

    pub fn is_disjoint(self, other: AtomSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn insert(&mut self, label: usize) {
        *self = *self | AtomSet::singleton(label);
    }

    pub fn remove(&mut self, label: usize) {
        self.0 &= !AtomSet::singleton(label).0;
    }

    pub fn without(self, label: usize) -> Self {
        let mut s = self;
        s.remove(label);
        s
    }

    /// Removes `label` and shifts every larger label down by one.
    pub fn remove_and_compact(self, label: usize) -> Self {
        let bit = label - 1;
        let low = self.0 & ((1u64 << bit) - 1);
        let high = if bit + 1 >= 64 { 0 } else { (self.0 >> (bit + 1)) << bit };
        AtomSet(low | high)
    }

    /// Largest label present, if any.
    pub fn max_label(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(64 - self.0.leading_zeros() as usize)
        }
    }

    pub fn iter(self) -> Labels {
        Labels(self.0)
    }

    /// Applies a relabelling where `perm[i - 1]` is the new label of atom `i`.
    pub fn permute(self, perm: &[usize]) -> Self {
        self.iter().fold(AtomSet::EMPTY, |acc, l| acc | AtomSet::singleton(perm[l - 1]))
    }

    /// All subsets of `self`, in increasing numeric order.
    pub fn subsets(self) -> Subsets {
        Subsets { mask: self.0, next: Some(0) }
    }

    /// Sort key: cardinality first, then numeric value.
    pub fn order_key(self) -> (u32, u64) {
        (self.0.count_ones(), self.0)
    }
}

impl std::ops::BitOr for AtomSet {
    type Output = AtomSet;
    fn bitor(self, rhs: AtomSet) -> AtomSet {
        AtomSet(self.0 | rhs.0)
    }
}

impl std::ops::BitAnd for AtomSet {
    type Output = AtomSet;
    fn bitand(self, rhs: AtomSet) -> AtomSet {
        AtomSet(self.0 & rhs.0)
    }
}

impl std::ops::Sub for AtomSet {
    type Output = AtomSet;
    fn sub(self, rhs: AtomSet) -> AtomSet {
        AtomSet(self.0 & !rhs.0)
    }
}

impl PartialOrd for AtomSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order by `(cardinality, numeric value)`; not the inclusion order.
impl Ord for AtomSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

impl FromIterator<usize> for AtomSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        AtomSet::from_labels(iter)
    }
}

impl Serialize for AtomSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for AtomSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(d)?;
        let mut set = AtomSet::EMPTY;
        for l in labels {
            if !(1..=MAX_ATOMS).contains(&l) {
                return Err(serde::de::Error::custom(format!(
                    "atom label {l} outside 1..={MAX_ATOMS}"
                )));
            }
            set.insert(l);
        }
        Ok(set)
    }
}

/// Iterator over the labels of an [`AtomSet`], ascending.
pub struct Labels(u64);

impl Iterator for Labels {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(tz + 1)
    }
}

/// Iterator over every subset of a mask (Gosper-free carry trick).
pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = AtomSet;
    fn next(&mut self) -> Option<AtomSet> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some((cur.wrapping_sub(self.mask)) & self.mask)
        };
        Some(AtomSet(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        let s = AtomSet::from_labels([1, 3, 5]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(s.to_string(), "{1,3,5}");
        assert_eq!(s.max_label(), Some(5));
    }

    #[test]
    fn subsets_of_three() {
        let s = AtomSet::from_labels([2, 4, 6]);
        let all: Vec<_> = s.subsets().collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|x| x.is_subset(s)));
        assert_eq!(AtomSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn compaction_shifts_high_labels() {
        let s = AtomSet::from_labels([1, 3, 4]);
        assert_eq!(s.remove_and_compact(3), AtomSet::from_labels([1, 3]));
        assert_eq!(s.remove_and_compact(2), AtomSet::from_labels([1, 2, 3]));
        assert_eq!(AtomSet::full(64).remove_and_compact(64), AtomSet::full(63));
    }

    #[test]
    fn permute_relabels() {
        let s = AtomSet::from_labels([1, 2]);
        assert_eq!(s.permute(&[3, 1, 2]), AtomSet::from_labels([1, 3]));
    }
}
