//! Process identifiers and compact process sets.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Upper bound on the system size. Process sets are 64-bit masks.
pub const MAX_PROCESSES: usize = 64;

/// Index of a process in `[0, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProcessId(pub usize);

impl ProcessId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ProcessId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

impl From<usize> for ProcessId {
    fn from(i: usize) -> Self {
        ProcessId(i)
    }
}

/// A set of processes, stored as a bit mask.
///
/// Iteration is always in ascending id order, which keeps every derived
/// artifact (traces, reports, DOT output) byte-stable.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProcessSet(u64);

impl ProcessSet {
    pub const EMPTY: ProcessSet = ProcessSet(0);

    /// The full set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(
            n <= MAX_PROCESSES,
            "system size {n} exceeds {MAX_PROCESSES}"
        );
        if n == MAX_PROCESSES {
            ProcessSet(u64::MAX)
        } else {
            ProcessSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(p: ProcessId) -> Self {
        ProcessSet(bit(p))
    }

    pub fn from_bits(bits: u64) -> Self {
        ProcessSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, p: ProcessId) -> bool {
        p.0 < MAX_PROCESSES && self.0 & bit(p) != 0
    }

    pub fn insert(&mut self, p: ProcessId) -> bool {
        let fresh = !self.contains(p);
        self.0 |= bit(p);
        fresh
    }

    pub fn remove(&mut self, p: ProcessId) -> bool {
        let present = self.contains(p);
        self.0 &= !bit(p);
        present
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: ProcessSet) -> ProcessSet {
        ProcessSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ProcessSet) -> ProcessSet {
        ProcessSet(self.0 & other.0)
    }

    pub fn difference(self, other: ProcessSet) -> ProcessSet {
        ProcessSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ProcessSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: ProcessSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<ProcessId> {
        (self.0 != 0).then(|| ProcessId(self.0.trailing_zeros() as usize))
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }
}

fn bit(p: ProcessId) -> u64 {
    assert!(
        p.0 < MAX_PROCESSES,
        "process id {} exceeds {MAX_PROCESSES}",
        p.0
    );
    1u64 << p.0
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = ProcessId;

    fn next(&mut self) -> Option<ProcessId> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(ProcessId(i))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let len = self.0.count_ones() as usize;
        (len, Some(len))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for ProcessSet {
    type Item = ProcessId;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<ProcessId> for ProcessSet {
    fn from_iter<I: IntoIterator<Item = ProcessId>>(iter: I) -> Self {
        let mut set = ProcessSet::EMPTY;
        for p in iter {
            set.insert(p);
        }
        set
    }
}

impl fmt::Debug for ProcessSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|p| p.0)).finish()
    }
}

impl fmt::Display for ProcessSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

// Serialized as a sorted list of ids.
impl Serialize for ProcessSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|p| p.0))
    }
}

impl<'de> Deserialize<'de> for ProcessSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let ids = Vec::<usize>::deserialize(deserializer)?;
        let mut set = ProcessSet::EMPTY;
        for id in ids {
            if id >= MAX_PROCESSES {
                return Err(serde::de::Error::custom(format!(
                    "process id {id} exceeds {MAX_PROCESSES}"
                )));
            }
            if !set.insert(ProcessId(id)) {
                return Err(serde::de::Error::custom(format!(
                    "duplicate process id {id}"
                )));
            }
        }
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_iteration_order() {
        let s = ProcessSet::full(5);
        assert_eq!(s.len(), 5);
        let ids: Vec<usize> = s.iter().map(ProcessId::index).collect();
        assert_eq!(ids, vec![0, 1, 2, 3, 4]);
        assert_eq!(ProcessSet::full(64).len(), 64);
        assert!(ProcessSet::full(0).is_empty());
    }

    #[test]
    fn set_algebra() {
        let a: ProcessSet = [0, 1, 2].into_iter().map(ProcessId).collect();
        let b: ProcessSet = [1, 2, 3].into_iter().map(ProcessId).collect();
        assert_eq!(a.intersection(b).len(), 2);
        assert_eq!(a.union(b).len(), 4);
        assert_eq!(a.difference(b), ProcessSet::singleton(ProcessId(0)));
        assert!(a.intersection(b).is_subset(a));
        assert!(!a.is_disjoint(b));
        assert_eq!(b.first(), Some(ProcessId(1)));
    }

    #[test]
    fn serde_rejects_duplicates() {
        let s: ProcessSet = serde_json::from_str("[3,1]").unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,3]");
        assert!(serde_json::from_str::<ProcessSet>("[1,1]").is_err());
        assert!(serde_json::from_str::<ProcessSet>("[64]").is_err());
    }
}
