//! Label aggregation over a worker subset: majority voting and EM for MDPD.

mod align;
mod em;
mod mv;

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, LabelMatrix, LabelSet, Result};

pub use align::{align_components, max_weight_assignment};
pub use em::{em_fit, em_fit_observed, log_likelihood, predict, EmConfig, EmFit, EmInit};
pub use mv::{majority_vote, tie_split_posterior};

/// Parameters of a mixture of discrete product distributions.
///
/// `weights[k] = P(Y = k)` and `cond(i, r, k) = P(X_i = r | Y = k)`. Missing
/// observations are not a class; each conditional is a distribution over
/// the `C` observed labels.
#[derive(Debug, Clone, PartialEq)]
pub struct MdpdModel {
    n_components: usize,
    n_classes: usize,
    n_workers: usize,
    weights: Vec<f64>,
    // [(worker * C + label) * K + component]
    cond: Vec<f64>,
}

const SIMPLEX_TOL: f64 = 1e-9;

impl MdpdModel {
    pub fn new(
        n_components: usize,
        n_classes: usize,
        n_workers: usize,
        weights: Vec<f64>,
        cond: Vec<f64>,
    ) -> Result<Self> {
        if n_components == 0 || n_classes == 0 {
            return Err(Error::InvalidParameter("model needs at least one component and class"));
        }
        if weights.len() != n_components {
            return Err(Error::ShapeMismatch { expected: n_components, found: weights.len() });
        }
        let len = n_workers * n_classes * n_components;
        if cond.len() != len {
            return Err(Error::ShapeMismatch { expected: len, found: cond.len() });
        }
        let model = Self { n_components, n_classes, n_workers, weights, cond };
        model.check_simplex()?;
        Ok(model)
    }

    /// Uniform weights and uniform conditionals.
    pub fn uniform(n_components: usize, n_classes: usize, n_workers: usize) -> Self {
        Self {
            n_components,
            n_classes,
            n_workers,
            weights: vec![1.0 / n_components as f64; n_components],
            cond: vec![1.0 / n_classes as f64; n_workers * n_classes * n_components],
        }
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn n_workers(&self) -> usize {
        self.n_workers
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn cond(&self, worker: usize, label: usize, component: usize) -> f64 {
        self.cond[self.idx(worker, label, component)]
    }

    #[inline]
    fn idx(&self, worker: usize, label: usize, component: usize) -> usize {
        (worker * self.n_classes + label) * self.n_components + component
    }

    /// Checks the weight and conditional simplex constraints.
    pub fn check_simplex(&self) -> Result<()> {
        let total: f64 = self.weights.iter().sum();
        if self.weights.iter().any(|&w| w.is_nan() || w < 0.0) || (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidParameter("mixing weights are not a distribution"));
        }
        for i in 0..self.n_workers {
            for k in 0..self.n_components {
                let mut s = 0.0;
                for r in 0..self.n_classes {
                    let v = self.cond(i, r, k);
                    if v.is_nan() || v < 0.0 {
                        return Err(Error::InvalidParameter("negative conditional probability"));
                    }
                    s += v;
                }
                if (s - 1.0).abs() > SIMPLEX_TOL {
                    return Err(Error::InvalidParameter("conditional table is not a distribution"));
                }
            }
        }
        Ok(())
    }

    /// Relabels components: new component `perm[k]` takes old component `k`.
    pub fn permute_components(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n_components)?;
        let mut out = self.clone();
        for (k, &to) in perm.iter().enumerate() {
            out.weights[to] = self.weights[k];
            for i in 0..self.n_workers {
                for r in 0..self.n_classes {
                    let dst = out.idx(i, r, to);
                    out.cond[dst] = self.cond(i, r, k);
                }
            }
        }
        Ok(out)
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::ShapeMismatch { expected: n, found: perm.len() });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidParameter("not a permutation"));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Per-item posterior `P(Y = k | observed labels)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Posterior {
    n_components: usize,
    probs: Vec<f64>,
}

impl Posterior {
    pub fn new(n_components: usize, probs: Vec<f64>) -> Result<Self> {
        if n_components == 0 || !probs.len().is_multiple_of(n_components) {
            return Err(Error::ShapeMismatch { expected: n_components, found: probs.len() });
        }
        for row in probs.chunks(n_components) {
            let s: f64 = row.iter().sum();
            if row.iter().any(|&v| v.is_nan() || v < 0.0) || (s - 1.0).abs() > SIMPLEX_TOL {
                return Err(Error::InvalidParameter("posterior row is not a distribution"));
            }
        }
        Ok(Self { n_components, probs })
    }

    /// Every item fully in the single component.
    pub fn single_component(n_items: usize) -> Self {
        Self { n_components: 1, probs: vec![1.0; n_items] }
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn n_items(&self) -> usize {
        self.probs.len() / self.n_components
    }

    pub fn row(&self, item: usize) -> &[f64] {
        &self.probs[item * self.n_components..(item + 1) * self.n_components]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.probs.chunks(self.n_components)
    }

    /// Most probable component per item, smallest index on ties.
    pub fn argmax(&self) -> Vec<usize> {
        self.rows()
            .map(|row| {
                let mut best = 0;
                for (k, &v) in row.iter().enumerate() {
                    if v > row[best] {
                        best = k;
                    }
                }
                best
            })
            .collect()
    }
}

/// Output of a learner on a worker subset.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerOutput {
    /// Per-item predicted label set (a singleton unless the learner leaves ties).
    pub predictions: Vec<LabelSet>,
    /// The learner's posterior over classes, used for goodness-of-fit reporting.
    pub posterior: Posterior,
}

/// A label-aggregation algorithm that can run on any worker subset.
pub trait Learner {
    fn name(&self) -> &str;

    fn fit_predict(&self, matrix: &LabelMatrix, subset: &[usize]) -> Result<LearnerOutput>;
}

/// Plain majority voting; ties are left as tie sets.
#[derive(Debug, Clone, Copy, Default)]
pub struct MajorityVote;

impl Learner for MajorityVote {
    fn name(&self) -> &str {
        "mv"
    }

    fn fit_predict(&self, matrix: &LabelMatrix, subset: &[usize]) -> Result<LearnerOutput> {
        let predictions = majority_vote(matrix, subset)?;
        let posterior = tie_split_posterior(&predictions, matrix.n_classes());
        Ok(LearnerOutput { predictions, posterior })
    }
}

/// EM initialised from majority voting on the same subset, with components
/// aligned to classes by maximum agreement with the vote.
#[derive(Debug, Clone, Copy, Default)]
pub struct MvEm {
    pub config: EmConfig,
}

impl Learner for MvEm {
    fn name(&self) -> &str {
        "mv-em"
    }

    fn fit_predict(&self, matrix: &LabelMatrix, subset: &[usize]) -> Result<LearnerOutput> {
        let c = matrix.n_classes();
        let fit = em_fit(matrix, subset, c, EmInit::MajorityVote, &self.config)?;
        let votes = majority_vote(matrix, subset)?;
        let mapping = align_components(&fit.posterior, &votes, c)?;
        let predictions = fit.posterior.argmax().into_iter().map(|k| LabelSet::singleton(mapping[k])).collect();

        let mut probs = vec![0.0; fit.posterior.n_items() * c];
        for (n, row) in fit.posterior.rows().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                probs[n * c + mapping[k]] += v;
            }
        }
        Ok(LearnerOutput { predictions, posterior: Posterior { n_components: c, probs } })
    }
}
