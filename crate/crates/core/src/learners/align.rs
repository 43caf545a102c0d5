use alloc::vec;
use alloc::vec::Vec;

use super::Posterior;
use crate::{Error, LabelSet, Result};

/// Maps mixture components to classes.
///
/// Picks the one-to-one assignment maximising agreement between each item's
/// most probable component and the reference tie sets (an item with tie set
/// `T` contributes `1/|T|` to every class in `T`). Returns `mapping[k] = class`.
pub fn align_components(posterior: &Posterior, reference: &[LabelSet], n_classes: usize) -> Result<Vec<usize>> {
    let k = posterior.n_components();
    if k > n_classes {
        return Err(Error::InvalidParameter("more components than classes to align to"));
    }
    if reference.len() != posterior.n_items() {
        return Err(Error::ShapeMismatch { expected: posterior.n_items(), found: reference.len() });
    }
    let mut agreement = vec![0.0; k * n_classes];
    for (comp, set) in posterior.argmax().into_iter().zip(reference) {
        let share = 1.0 / set.len().max(1) as f64;
        for c in set.iter() {
            agreement[comp * n_classes + c] += share;
        }
    }
    max_weight_assignment(&agreement, k, n_classes)
}

/// Maximum-weight assignment of `rows` to distinct columns (`rows <= cols`),
/// by the Hungarian method with potentials. Returns the column of each row.
pub fn max_weight_assignment(weights: &[f64], rows: usize, cols: usize) -> Result<Vec<usize>> {
    if rows > cols {
        return Err(Error::InvalidParameter("assignment needs rows <= cols"));
    }
    if weights.len() != rows * cols {
        return Err(Error::ShapeMismatch { expected: rows * cols, found: weights.len() });
    }
    if rows == 0 {
        return Ok(Vec::new());
    }
    let cost = |i: usize, j: usize| -weights[(i - 1) * cols + (j - 1)];

    // 1-based; column 0 is the virtual start
    let mut u = vec![0.0; rows + 1];
    let mut v = vec![0.0; cols + 1];
    let mut owner = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];

    for i in 1..=rows {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=cols {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            if j1 == 0 {
                return Err(Error::NumericalFailure("assignment weights are not finite"));
            }
            for j in 0..=cols {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0; rows];
    for j in 1..=cols {
        if owner[j] != 0 {
            assignment[owner[j] - 1] = j - 1;
        }
    }
    Ok(assignment)
}
