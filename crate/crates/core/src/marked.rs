use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::statevector::MAX_INDEX_QUBITS;

/// The oracle's set of matching items: the indices `i` with `f(i) = 1`.
///
/// Members are kept sorted and duplicate-free, so `len()` is the match count
/// M and membership tests are a binary search. The set always contains at
/// least one index and every index is below `N = 2^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedSet {
    n_index_qubits: usize,
    members: Vec<usize>,
}

impl MarkedSet {
    /// Build a marked set over an `n`-qubit index register. Input indices are
    /// sorted and deduplicated; an empty or out-of-range input is rejected.
    pub fn new(
        n_index_qubits: usize,
        members: impl IntoIterator<Item = usize>,
    ) -> Result<Self, Error> {
        if n_index_qubits == 0 || n_index_qubits > MAX_INDEX_QUBITS {
            return Err(Error::QubitCount {
                n: n_index_qubits,
                max: MAX_INDEX_QUBITS,
            });
        }
        let items = 1usize << n_index_qubits;
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::EmptyMarkedSet);
        }
        if let Some(&last) = members.last() {
            if last >= items {
                return Err(Error::IndexOutOfRange { index: last, items });
            }
        }
        Ok(Self {
            n_index_qubits,
            members,
        })
    }

    /// Mark every item in the list (the M = N case).
    pub fn all(n_index_qubits: usize) -> Result<Self, Error> {
        if n_index_qubits == 0 || n_index_qubits > MAX_INDEX_QUBITS {
            return Err(Error::QubitCount {
                n: n_index_qubits,
                max: MAX_INDEX_QUBITS,
            });
        }
        let items = 1usize << n_index_qubits;
        Ok(Self {
            n_index_qubits,
            members: (0..items).collect(),
        })
    }

    /// Sample `count` distinct indices without replacement, deterministically
    /// for a fixed seed.
    pub fn sample(n_index_qubits: usize, count: usize, seed: u64) -> Result<Self, Error> {
        if n_index_qubits == 0 || n_index_qubits > MAX_INDEX_QUBITS {
            return Err(Error::QubitCount {
                n: n_index_qubits,
                max: MAX_INDEX_QUBITS,
            });
        }
        let items = 1usize << n_index_qubits;
        if count == 0 {
            return Err(Error::EmptyMarkedSet);
        }
        if count > items {
            return Err(Error::MatchCount {
                matches: count as u64,
                items: items as u64,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut members = rand::seq::index::sample(&mut rng, items, count).into_vec();
        members.sort_unstable();
        Ok(Self {
            n_index_qubits,
            members,
        })
    }

    pub fn n_index_qubits(&self) -> usize {
        self.n_index_qubits
    }

    /// N = 2^n, the list size this set is defined over.
    pub fn items(&self) -> usize {
        1 << self.n_index_qubits
    }

    /// M, the number of matches.
    pub fn matches(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_and_dedups() {
        let set = MarkedSet::new(3, [5, 1, 5, 0]).unwrap();
        assert_eq!(set.members(), &[0, 1, 5]);
        assert_eq!(set.matches(), 3);
        assert!(set.contains(5));
        assert!(!set.contains(2));
    }

    #[test]
    fn rejects_empty_and_out_of_range() {
        assert_eq!(MarkedSet::new(2, []), Err(Error::EmptyMarkedSet));
        assert_eq!(
            MarkedSet::new(2, [4]),
            Err(Error::IndexOutOfRange { index: 4, items: 4 })
        );
    }

    #[test]
    fn sampling_is_deterministic_and_duplicate_free() {
        let a = MarkedSet::sample(10, 100, 7).unwrap();
        let b = MarkedSet::sample(10, 100, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matches(), 100);
        for pair in a.members().windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn all_marks_everything() {
        let set = MarkedSet::all(4).unwrap();
        assert_eq!(set.matches(), 16);
        assert_eq!(set.members().first(), Some(&0));
        assert_eq!(set.members().last(), Some(&15));
    }
}
