use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Largest number of classes a [`LabelMatrix`] may declare ([`LabelSet`] is a 64-bit mask).
pub const MAX_CLASSES: usize = 64;

/// One observed label: worker `worker` gave class `label` to item `item`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Observation {
    pub item: usize,
    pub worker: usize,
    pub label: usize,
}

/// Sparse items × workers matrix of categorical labels.
///
/// Absent cells are missing observations. Entries keep their insertion order
/// (so a matrix serialized in that order re-parses to the same indices), and
/// two sorted views are kept for the per-worker and per-item scans that the
/// statistics and learners need.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMatrix {
    n_items: usize,
    n_workers: usize,
    n_classes: usize,
    entries: Vec<Observation>,
    // (item, label), sorted by item
    by_worker: Vec<Vec<(u32, u16)>>,
    // (worker, label), sorted by worker
    by_item: Vec<Vec<(u32, u16)>>,
}

impl LabelMatrix {
    pub fn new<I>(n_items: usize, n_workers: usize, n_classes: usize, observations: I) -> Result<Self>
    where
        I: IntoIterator<Item = Observation>,
    {
        if n_classes == 0 {
            return Err(Error::InvalidParameter("n_classes must be at least 1"));
        }
        if n_classes > MAX_CLASSES {
            return Err(Error::TooManyClasses(n_classes));
        }
        if n_items > u32::MAX as usize || n_workers > u32::MAX as usize {
            return Err(Error::InvalidParameter("matrix dimension exceeds u32"));
        }
        let entries: Vec<Observation> = observations.into_iter().collect();
        if entries.is_empty() {
            return Err(Error::NoEntries);
        }

        let mut by_worker = vec![Vec::new(); n_workers];
        let mut by_item = vec![Vec::new(); n_items];
        for o in &entries {
            if o.item >= n_items {
                return Err(Error::IndexOutOfRange { what: "item", index: o.item, len: n_items });
            }
            if o.worker >= n_workers {
                return Err(Error::IndexOutOfRange { what: "worker", index: o.worker, len: n_workers });
            }
            if o.label >= n_classes {
                return Err(Error::LabelOutOfRange { label: o.label, n_classes });
            }
            by_worker[o.worker].push((o.item as u32, o.label as u16));
            by_item[o.item].push((o.worker as u32, o.label as u16));
        }
        for (worker, list) in by_worker.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::DuplicateObservation { item: w[0].0 as usize, worker });
            }
        }
        for list in &mut by_item {
            list.sort_unstable();
        }

        Ok(Self { n_items, n_workers, n_classes, entries, by_worker, by_item })
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    pub fn n_workers(&self) -> usize {
        self.n_workers
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// Number of observed cells.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Observations in insertion order.
    pub fn entries(&self) -> &[Observation] {
        &self.entries
    }

    /// `(item, label)` pairs of one worker, sorted by item.
    pub fn worker_labels(&self, worker: usize) -> &[(u32, u16)] {
        &self.by_worker[worker]
    }

    /// `(worker, label)` pairs of one item, sorted by worker.
    pub fn item_labels(&self, item: usize) -> &[(u32, u16)] {
        &self.by_item[item]
    }

    pub fn get(&self, item: usize, worker: usize) -> Option<usize> {
        let list = &self.by_worker[worker];
        list.binary_search_by_key(&(item as u32), |&(n, _)| n).ok().map(|pos| list[pos].1 as usize)
    }

    /// Per-class label counts of one worker.
    pub fn label_counts(&self, worker: usize) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes];
        for &(_, r) in &self.by_worker[worker] {
            counts[r as usize] += 1;
        }
        counts
    }

    pub(crate) fn check_worker(&self, worker: usize) -> Result<()> {
        if worker >= self.n_workers {
            return Err(Error::IndexOutOfRange { what: "worker", index: worker, len: self.n_workers });
        }
        Ok(())
    }

    /// Validates a worker subset: nonempty, in range, no repeats.
    pub(crate) fn check_subset(&self, subset: &[usize]) -> Result<()> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut seen = vec![false; self.n_workers];
        for &w in subset {
            self.check_worker(w)?;
            if seen[w] {
                return Err(Error::DuplicateWorker(w));
            }
            seen[w] = true;
        }
        Ok(())
    }

    /// Membership mask of a subset, indexed by worker.
    pub(crate) fn subset_mask(&self, subset: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.n_workers];
        for &w in subset {
            mask[w] = true;
        }
        mask
    }
}

/// Partial ground truth: `labels[item]` is the true class of a labelled item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    labels: Vec<Option<usize>>,
}

impl GroundTruth {
    pub fn new<I>(n_items: usize, n_classes: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut labels = vec![None; n_items];
        for (item, label) in pairs {
            if item >= n_items {
                return Err(Error::IndexOutOfRange { what: "item", index: item, len: n_items });
            }
            if label >= n_classes {
                return Err(Error::LabelOutOfRange { label, n_classes });
            }
            labels[item] = Some(label);
        }
        Ok(Self { labels })
    }

    pub fn n_items(&self) -> usize {
        self.labels.len()
    }

    pub fn get(&self, item: usize) -> Option<usize> {
        self.labels.get(item).copied().flatten()
    }

    /// Number of items with a known label.
    pub fn covered(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    /// `(item, label)` for every labelled item, ascending by item.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.labels.iter().enumerate().filter_map(|(n, l)| l.map(|l| (n, l)))
    }
}

/// A set of class indices, used for majority-vote tie sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LabelSet(u64);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn singleton(label: usize) -> Self {
        debug_assert!(label < MAX_CLASSES);
        LabelSet(1u64 << label)
    }

    /// All classes `0..n_classes`.
    pub fn all(n_classes: usize) -> Self {
        debug_assert!(n_classes <= MAX_CLASSES);
        if n_classes == MAX_CLASSES {
            LabelSet(u64::MAX)
        } else {
            LabelSet((1u64 << n_classes) - 1)
        }
    }

    pub fn insert(&mut self, label: usize) {
        self.0 |= 1u64 << label;
    }

    pub fn contains(self, label: usize) -> bool {
        label < MAX_CLASSES && self.0 & (1u64 << label) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Smallest class in the set.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        core::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let c = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(c)
        })
    }

    /// Expected error of picking uniformly from the set when the truth is `truth`.
    pub fn expected_error(self, truth: usize) -> f64 {
        let m = self.len();
        if m == 0 || !self.contains(truth) {
            1.0
        } else {
            (m - 1) as f64 / m as f64
        }
    }
}

impl FromIterator<usize> for LabelSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = LabelSet::EMPTY;
        for c in iter {
            s.insert(c);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(item: usize, worker: usize, label: usize) -> Observation {
        Observation { item, worker, label }
    }

    #[test]
    fn builds_sorted_views() {
        let m = LabelMatrix::new(2, 2, 2, [obs(1, 1, 0), obs(0, 1, 1), obs(0, 0, 0)]).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m.worker_labels(1), &[(0, 1), (1, 0)]);
        assert_eq!(m.item_labels(0), &[(0, 0), (1, 1)]);
        assert_eq!(m.get(1, 0), None);
        assert_eq!(m.get(0, 1), Some(1));
        assert_eq!(m.label_counts(1), vec![1, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(LabelMatrix::new(1, 1, 2, []), Err(Error::NoEntries));
        assert_eq!(
            LabelMatrix::new(2, 1, 2, [obs(0, 0, 0), obs(0, 0, 1)]),
            Err(Error::DuplicateObservation { item: 0, worker: 0 })
        );
        assert_eq!(LabelMatrix::new(1, 1, 2, [obs(0, 0, 2)]), Err(Error::LabelOutOfRange { label: 2, n_classes: 2 }));
        assert!(matches!(
            LabelMatrix::new(1, 1, 2, [obs(0, 3, 0)]),
            Err(Error::IndexOutOfRange { what: "worker", .. })
        ));
        assert_eq!(LabelMatrix::new(1, 1, 65, [obs(0, 0, 0)]), Err(Error::TooManyClasses(65)));
    }

    #[test]
    fn subset_validation() {
        let m = LabelMatrix::new(1, 3, 2, [obs(0, 0, 0)]).unwrap();
        assert_eq!(m.check_subset(&[]), Err(Error::EmptySubset));
        assert_eq!(m.check_subset(&[0, 2, 0]), Err(Error::DuplicateWorker(0)));
        assert!(m.check_subset(&[5]).is_err());
        assert!(m.check_subset(&[2, 1]).is_ok());
    }

    #[test]
    fn label_set_expected_error() {
        let three: LabelSet = [0, 1, 2].into_iter().collect();
        assert_eq!(three.len(), 3);
        assert!((three.expected_error(1) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(three.expected_error(4), 1.0);
        assert_eq!(LabelSet::singleton(3).expected_error(3), 0.0);
        assert_eq!(LabelSet::all(5).expected_error(0), 0.8);
        assert_eq!(LabelSet::all(64).len(), 64);
        assert_eq!(three.iter().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(LabelSet::singleton(7).first(), Some(7));
        assert_eq!(LabelSet::EMPTY.first(), None);
    }

    #[test]
    fn ground_truth_partial() {
        let t = GroundTruth::new(4, 2, [(2, 1), (0, 0)]).unwrap();
        assert_eq!(t.covered(), 2);
        assert_eq!(t.get(1), None);
        assert_eq!(t.iter().collect::<Vec<_>>(), vec![(0, 0), (2, 1)]);
        assert!(GroundTruth::new(4, 2, [(4, 0)]).is_err());
        assert!(GroundTruth::new(4, 2, [(0, 2)]).is_err());
    }
}
