//! Worker (feature) selection from the mutual-information matrix.
//!
//! Two heuristics:
//!
//! * ranking by score, `score_i = Σ_{j≠i} I(Xi, Xj)`, and keeping the top L;
//! * maximising the sub-matrix sum `Σ_{i<j∈S} I(Xi, Xj)` over subsets of size L,
//!   approximately (greedy forward selection) or exactly for small p.
//!
//! Ties are always broken towards the smaller worker index.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::pairwise::PairwiseStats;
use crate::{Error, Result};

/// Largest worker count accepted by [`select_by_submatrix_exact`].
pub const EXACT_MAX_WORKERS: usize = 15;

/// A selected worker subset and its criterion value.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSubset {
    /// Worker indices, in selection order.
    pub selected: Vec<usize>,
    /// `Σ_{i<j∈S} mi[i][j]` for sub-matrix selection, the sum of member scores for ranking.
    pub criterion: f64,
}

impl FeatureSubset {
    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn sorted(&self) -> Vec<usize> {
        let mut s = self.selected.clone();
        s.sort_unstable();
        s
    }
}

fn check_size(stats: &PairwiseStats, l: usize) -> Result<()> {
    if l == 0 || l > stats.n_workers() {
        return Err(Error::SubsetSize { requested: l, n_workers: stats.n_workers() });
    }
    Ok(())
}

// descending value, ascending index
fn by_value_desc(a: (usize, f64), b: (usize, f64)) -> Ordering {
    b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then(a.0.cmp(&b.0))
}

/// All workers ordered by descending score.
pub fn score_curve(stats: &PairwiseStats) -> Vec<(usize, f64)> {
    let mut curve: Vec<(usize, f64)> = stats.scores().iter().copied().enumerate().collect();
    curve.sort_by(|&a, &b| by_value_desc(a, b));
    curve
}

/// The top-L workers by score.
pub fn select_by_score(stats: &PairwiseStats, l: usize) -> Result<FeatureSubset> {
    check_size(stats, l)?;
    let top: Vec<(usize, f64)> = score_curve(stats).into_iter().take(l).collect();
    Ok(FeatureSubset {
        criterion: top.iter().map(|&(_, s)| s).sum(),
        selected: top.into_iter().map(|(w, _)| w).collect(),
    })
}

/// Greedy forward maximisation of the sub-matrix sum.
///
/// Seeds with the top-scoring worker and repeatedly adds the worker with the
/// largest gain `Σ_{s∈S} mi[w][s]`. The result is compared against the
/// top-L-by-score subset and the one with the larger sub-matrix sum is
/// returned (greedy on ties), so it never does worse than ranking.
pub fn select_by_submatrix(stats: &PairwiseStats, l: usize) -> Result<FeatureSubset> {
    check_size(stats, l)?;
    let p = stats.n_workers();
    let seed = score_curve(stats)[0].0;

    let mut selected = Vec::with_capacity(l);
    let mut in_set = alloc::vec![false; p];
    let mut gain = alloc::vec![0.0; p];
    selected.push(seed);
    in_set[seed] = true;
    for (w, g) in gain.iter_mut().enumerate() {
        *g = stats.mi(w, seed);
    }

    while selected.len() < l {
        let next = (0..p)
            .filter(|&w| !in_set[w])
            .map(|w| (w, gain[w]))
            .min_by(|&a, &b| by_value_desc(a, b))
            .map(|(w, _)| w)
            .expect("candidates remain while |S| < L <= p");
        selected.push(next);
        in_set[next] = true;
        for (w, g) in gain.iter_mut().enumerate() {
            *g += stats.mi(w, next);
        }
    }

    let greedy = FeatureSubset { criterion: stats.subset_sum(&selected), selected };
    let ranked = select_by_score(stats, l)?.selected;
    let ranked_value = stats.subset_sum(&ranked);
    if ranked_value > greedy.criterion {
        Ok(FeatureSubset { selected: ranked, criterion: ranked_value })
    } else {
        Ok(greedy)
    }
}

/// Exhaustive maximisation of the sub-matrix sum for `p <= 15`.
///
/// Among equal optima the lexicographically smallest subset wins; the
/// selection is returned in ascending index order.
pub fn select_by_submatrix_exact(stats: &PairwiseStats, l: usize) -> Result<FeatureSubset> {
    check_size(stats, l)?;
    let p = stats.n_workers();
    if p > EXACT_MAX_WORKERS {
        return Err(Error::InvalidParameter("exact sub-matrix selection needs at most 15 workers"));
    }

    let mut current: Vec<usize> = (0..l).collect();
    let mut best = current.clone();
    let mut best_value = stats.subset_sum(&current);
    // lexicographic enumeration of l-combinations of 0..p
    loop {
        let mut k = l;
        while k > 0 && current[k - 1] == p - l + k - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        current[k - 1] += 1;
        for t in k..l {
            current[t] = current[t - 1] + 1;
        }
        let v = stats.subset_sum(&current);
        if v > best_value {
            best_value = v;
            best.clone_from(&current);
        }
    }
    Ok(FeatureSubset { selected: best, criterion: best_value })
}
