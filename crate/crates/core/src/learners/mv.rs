use alloc::vec;
use alloc::vec::Vec;

use super::Posterior;
use crate::{LabelMatrix, LabelSet, Result};

/// Majority vote over the subset's workers.
///
/// Each item gets the set of labels with the highest tally; an item no
/// subset worker labelled ties over all `C` labels.
pub fn majority_vote(matrix: &LabelMatrix, subset: &[usize]) -> Result<Vec<LabelSet>> {
    matrix.check_subset(subset)?;
    let mask = matrix.subset_mask(subset);
    let c = matrix.n_classes();
    let mut tally = vec![0usize; c];

    let out = (0..matrix.n_items())
        .map(|item| {
            tally.iter_mut().for_each(|t| *t = 0);
            for &(w, r) in matrix.item_labels(item) {
                if mask[w as usize] {
                    tally[r as usize] += 1;
                }
            }
            let top = tally.iter().copied().max().unwrap_or(0);
            if top == 0 {
                LabelSet::all(c)
            } else {
                (0..c).filter(|&r| tally[r] == top).collect()
            }
        })
        .collect();
    Ok(out)
}

/// Posterior placing equal mass on each label of an item's tie set.
pub fn tie_split_posterior(votes: &[LabelSet], n_classes: usize) -> Posterior {
    let mut probs = vec![0.0; votes.len() * n_classes];
    for (n, set) in votes.iter().enumerate() {
        let share = 1.0 / set.len() as f64;
        for c in set.iter() {
            probs[n * n_classes + c] = share;
        }
    }
    Posterior { n_components: n_classes, probs }
}
