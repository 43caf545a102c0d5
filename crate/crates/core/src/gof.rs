//! Goodness of fit of a mixture via the Bethe approximation.
//!
//! The residual dependence the current mixture leaves unexplained is
//! approximated by the sum over worker pairs of the conditional mutual
//! information `I(Xi, Xj | Y)` under the tilted distribution: the empirical
//! distribution of items with each item spread over components according to
//! its posterior. For a single-component model this reduces to the plain sum
//! of pairwise mutual information.
//!
//! With missing data each pairwise term only uses the items both workers
//! labelled, renormalised over those items.

use alloc::vec;

use crate::learners::Posterior;
use crate::math::mi_term;
use crate::{Error, LabelMatrix, Result};

/// Empirical item distribution reweighted by a posterior: item `n`
/// contributes `posterior[n][k] / N` to component `k`.
#[derive(Debug, Clone, Copy)]
pub struct TiltedDistribution<'a> {
    posterior: &'a Posterior,
}

impl<'a> TiltedDistribution<'a> {
    pub fn new(posterior: &'a Posterior) -> Self {
        Self { posterior }
    }

    pub fn weight(&self, item: usize, component: usize) -> f64 {
        self.posterior.row(item)[component] / self.posterior.n_items() as f64
    }

    /// `P̃(Y = k)` for every component.
    pub fn component_weights(&self) -> alloc::vec::Vec<f64> {
        let n = self.posterior.n_items() as f64;
        let mut out = vec![0.0; self.posterior.n_components()];
        for row in self.posterior.rows() {
            for (o, &v) in out.iter_mut().zip(row) {
                *o += v;
            }
        }
        out.iter_mut().for_each(|o| *o /= n);
        out
    }

    pub fn total_weight(&self) -> f64 {
        self.component_weights().iter().sum()
    }
}

/// Number of items labelled by both workers.
pub fn co_observed(matrix: &LabelMatrix, i: usize, j: usize) -> usize {
    let (li, lj) = (matrix.worker_labels(i), matrix.worker_labels(j));
    let (mut x, mut y, mut n) = (0, 0, 0);
    while x < li.len() && y < lj.len() {
        match li[x].0.cmp(&lj[y].0) {
            core::cmp::Ordering::Less => x += 1,
            core::cmp::Ordering::Greater => y += 1,
            core::cmp::Ordering::Equal => {
                n += 1;
                x += 1;
                y += 1;
            }
        }
    }
    n
}

/// `I(Xi, Xj | Y)` in nats under the tilted distribution, restricted to co-observed items.
///
/// Returns 0 when no item was labelled by both workers.
pub fn conditional_pairwise_mi(matrix: &LabelMatrix, posterior: &Posterior, i: usize, j: usize) -> Result<f64> {
    matrix.check_worker(i)?;
    matrix.check_worker(j)?;
    if i == j {
        return Err(Error::SameWorker(i));
    }
    if posterior.n_items() != matrix.n_items() {
        return Err(Error::ShapeMismatch { expected: matrix.n_items(), found: posterior.n_items() });
    }
    let c = matrix.n_classes();
    let k = posterior.n_components();
    // [(comp * C + a) * C + b]
    let mut table = vec![0.0; k * c * c];
    let (li, lj) = (matrix.worker_labels(i), matrix.worker_labels(j));
    let (mut x, mut y) = (0, 0);
    let mut m = 0usize;
    while x < li.len() && y < lj.len() {
        match li[x].0.cmp(&lj[y].0) {
            core::cmp::Ordering::Less => x += 1,
            core::cmp::Ordering::Greater => y += 1,
            core::cmp::Ordering::Equal => {
                let (a, b) = (li[x].1 as usize, lj[y].1 as usize);
                for (comp, &w) in posterior.row(li[x].0 as usize).iter().enumerate() {
                    table[(comp * c + a) * c + b] += w;
                }
                m += 1;
                x += 1;
                y += 1;
            }
        }
    }
    if m == 0 {
        return Ok(0.0);
    }
    let m = m as f64;
    table.iter_mut().for_each(|v| *v /= m);

    let mut cmi = 0.0;
    let mut pa = vec![0.0; c];
    let mut pb = vec![0.0; c];
    for block in table.chunks(c * c) {
        pa.iter_mut().for_each(|v| *v = 0.0);
        pb.iter_mut().for_each(|v| *v = 0.0);
        for a in 0..c {
            for b in 0..c {
                let v = block[a * c + b];
                pa[a] += v;
                pb[b] += v;
            }
        }
        let pk: f64 = pa.iter().sum();
        if pk <= 0.0 {
            continue;
        }
        // P(a,b,k) ln[P(a,b|k) / (P(a|k) P(b|k))] = P(a,b,k) ln[P(a,b,k) P(k) / (P(a,k) P(b,k))]
        for a in 0..c {
            for b in 0..c {
                cmi += mi_term(block[a * c + b], pa[a], pb[b] / pk);
            }
        }
    }
    Ok(cmi)
}

/// `Σ_{i<j ∈ subset} I(Xi, Xj | Y)`.
pub fn bethe_gof(matrix: &LabelMatrix, posterior: &Posterior, subset: &[usize]) -> Result<f64> {
    if subset.len() < 2 {
        return Err(Error::TooFewWorkers { required: 2, found: subset.len() });
    }
    matrix.check_subset(subset)?;
    let mut total = 0.0;
    for (a, &i) in subset.iter().enumerate() {
        for &j in &subset[a + 1..] {
            total += conditional_pairwise_mi(matrix, posterior, i, j)?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Observation;
    use alloc::vec::Vec;

    #[test]
    fn separated_clusters_have_zero_residual() {
        // X_i = X_j = Y, posterior puts each item in its own cluster
        let labels = [0usize, 1, 1, 0, 1, 0];
        let rows: Vec<_> = labels
            .iter()
            .enumerate()
            .flat_map(|(n, &y)| {
                [Observation { item: n, worker: 0, label: y }, Observation { item: n, worker: 1, label: y }]
            })
            .collect();
        let m = LabelMatrix::new(6, 2, 2, rows).unwrap();
        let probs: Vec<f64> = labels.iter().flat_map(|&y| if y == 0 { [1.0, 0.0] } else { [0.0, 1.0] }).collect();
        let post = Posterior::new(2, probs).unwrap();
        assert!(conditional_pairwise_mi(&m, &post, 0, 1).unwrap().abs() < 1e-9);
        // a single component sees the full ln 2 of dependence
        let one = Posterior::single_component(6);
        assert!((conditional_pairwise_mi(&m, &one, 0, 1).unwrap() - core::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn disjoint_workers_give_zero() {
        let m = LabelMatrix::new(
            2,
            2,
            2,
            [Observation { item: 0, worker: 0, label: 0 }, Observation { item: 1, worker: 1, label: 1 }],
        )
        .unwrap();
        let post = Posterior::single_component(2);
        assert_eq!(co_observed(&m, 0, 1), 0);
        assert_eq!(conditional_pairwise_mi(&m, &post, 0, 1).unwrap(), 0.0);
    }

    #[test]
    fn errors() {
        let m = LabelMatrix::new(1, 2, 2, [Observation { item: 0, worker: 0, label: 0 }]).unwrap();
        let post = Posterior::single_component(1);
        assert_eq!(conditional_pairwise_mi(&m, &post, 1, 1), Err(Error::SameWorker(1)));
        assert!(bethe_gof(&m, &post, &[0]).is_err());
        assert!(conditional_pairwise_mi(&m, &Posterior::single_component(3), 0, 1).is_err());
    }

    #[test]
    fn tilted_weights_sum_to_one() {
        let post = Posterior::new(2, vec![0.2, 0.8, 0.6, 0.4, 1.0, 0.0]).unwrap();
        let t = TiltedDistribution::new(&post);
        assert!((t.total_weight() - 1.0).abs() < 1e-12);
        assert!((t.weight(1, 0) - 0.2).abs() < 1e-12);
    }
}
