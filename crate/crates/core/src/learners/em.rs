use alloc::vec;
use alloc::vec::Vec;

use super::{majority_vote, tie_split_posterior, MdpdModel, Posterior};
use crate::math::{exp, ln, log_sum_exp};
use crate::{Error, LabelMatrix, Result};

/// Stopping rule and M-step smoothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmConfig {
    pub max_iters: usize,
    /// Stop once the log-likelihood improves by less than this.
    pub tol: f64,
    /// Pseudo-count added to every conditional cell in the M-step.
    pub smoothing: f64,
}

impl Default for EmConfig {
    fn default() -> Self {
        Self { max_iters: 500, tol: 1e-6, smoothing: 1e-6 }
    }
}

/// Starting point for EM.
#[derive(Debug, Clone, PartialEq)]
pub enum EmInit {
    /// One M-step from the majority-vote tie-split posterior (requires K = C).
    MajorityVote,
    Model(MdpdModel),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmFit {
    pub model: MdpdModel,
    /// Posterior under `model`.
    pub posterior: Posterior,
    /// `ℓ(Θ_t)` for every model visited, starting with the initial one.
    pub loglik: Vec<f64>,
    /// Number of M-steps taken after initialisation.
    pub iterations: usize,
    pub converged: bool,
    /// Subset workers with no observations; their conditionals stay uniform.
    pub empty_workers: Vec<usize>,
}

/// Finite-sample log-likelihood `Σ_n ln Σ_k ω_k Π_{i observed} μ_{i,x_i,k}` over the subset.
pub fn log_likelihood(model: &MdpdModel, matrix: &LabelMatrix, subset: &[usize]) -> Result<f64> {
    check_model(model, matrix)?;
    matrix.check_subset(subset)?;
    Ok(e_step(model, matrix, &matrix.subset_mask(subset)).1)
}

/// Most probable component per item under `model`, smallest index on ties.
pub fn predict(model: &MdpdModel, matrix: &LabelMatrix, subset: &[usize]) -> Result<Vec<usize>> {
    check_model(model, matrix)?;
    matrix.check_subset(subset)?;
    Ok(e_step(model, matrix, &matrix.subset_mask(subset)).0.argmax())
}

pub fn em_fit(
    matrix: &LabelMatrix,
    subset: &[usize],
    n_components: usize,
    init: EmInit,
    config: &EmConfig,
) -> Result<EmFit> {
    em_fit_observed(matrix, subset, n_components, init, config, |_, _| {})
}

/// [`em_fit`], calling `observer(model, posterior)` after every E-step.
pub fn em_fit_observed<F>(
    matrix: &LabelMatrix,
    subset: &[usize],
    n_components: usize,
    init: EmInit,
    config: &EmConfig,
    mut observer: F,
) -> Result<EmFit>
where
    F: FnMut(&MdpdModel, &Posterior),
{
    matrix.check_subset(subset)?;
    if n_components == 0 {
        return Err(Error::InvalidParameter("EM needs at least one component"));
    }
    if n_components > matrix.n_items() {
        return Err(Error::TooManyComponents { components: n_components, items: matrix.n_items() });
    }
    if config.smoothing.is_nan() || config.smoothing < 0.0 || config.tol.is_nan() || config.tol < 0.0 {
        return Err(Error::InvalidParameter("smoothing and tol must be non-negative"));
    }
    let mask = matrix.subset_mask(subset);
    let empty_workers: Vec<usize> = subset.iter().copied().filter(|&w| matrix.worker_labels(w).is_empty()).collect();

    let mut model = match init {
        EmInit::MajorityVote => {
            if n_components != matrix.n_classes() {
                return Err(Error::InvalidParameter("majority-vote initialisation needs K = C"));
            }
            let votes = majority_vote(matrix, subset)?;
            let post = tie_split_posterior(&votes, n_components);
            let base = MdpdModel::uniform(n_components, matrix.n_classes(), matrix.n_workers());
            m_step(&base, matrix, subset, &post, config.smoothing)
        }
        EmInit::Model(m) => {
            check_model(&m, matrix)?;
            if m.n_components() != n_components {
                return Err(Error::ShapeMismatch { expected: n_components, found: m.n_components() });
            }
            m
        }
    };

    let mut loglik = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    let posterior = loop {
        let (post, ll) = e_step(&model, matrix, &mask);
        if !ll.is_finite() {
            return Err(Error::NumericalFailure("log-likelihood is not finite"));
        }
        observer(&model, &post);
        let improved = loglik.last().map(|&prev| ll - prev);
        loglik.push(ll);
        if improved.is_some_and(|d| d < config.tol) {
            converged = true;
            break post;
        }
        if iterations == config.max_iters {
            break post;
        }
        model = m_step(&model, matrix, subset, &post, config.smoothing);
        iterations += 1;
    };

    Ok(EmFit { model, posterior, loglik, iterations, converged, empty_workers })
}

fn check_model(model: &MdpdModel, matrix: &LabelMatrix) -> Result<()> {
    if model.n_classes() != matrix.n_classes() {
        return Err(Error::ShapeMismatch { expected: matrix.n_classes(), found: model.n_classes() });
    }
    if model.n_workers() != matrix.n_workers() {
        return Err(Error::ShapeMismatch { expected: matrix.n_workers(), found: model.n_workers() });
    }
    Ok(())
}

/// Posterior and log-likelihood; missing cells contribute no factor.
fn e_step(model: &MdpdModel, matrix: &LabelMatrix, mask: &[bool]) -> (Posterior, f64) {
    let k = model.n_components();
    let log_w: Vec<f64> = model.weights().iter().map(|&w| ln(w)).collect();
    let log_cond: Vec<f64> = model.cond.iter().map(|&v| ln(v)).collect();
    let c = model.n_classes();

    let mut probs = vec![0.0; matrix.n_items() * k];
    let mut lp = vec![0.0; k];
    let mut total = 0.0;
    for (item, out) in probs.chunks_mut(k).enumerate() {
        lp.copy_from_slice(&log_w);
        for &(w, r) in matrix.item_labels(item) {
            let w = w as usize;
            if mask[w] {
                let base = (w * c + r as usize) * k;
                for (l, &v) in lp.iter_mut().zip(&log_cond[base..base + k]) {
                    *l += v;
                }
            }
        }
        let lse = log_sum_exp(&lp);
        total += lse;
        for (o, &l) in out.iter_mut().zip(&lp) {
            *o = exp(l - lse);
        }
    }
    (Posterior { n_components: k, probs }, total)
}

/// Weights from posterior mass, conditionals from smoothed soft counts over
/// the items where each subset worker is observed. Workers outside the subset
/// keep the conditionals of `prev`.
fn m_step(prev: &MdpdModel, matrix: &LabelMatrix, subset: &[usize], post: &Posterior, smoothing: f64) -> MdpdModel {
    let k = prev.n_components();
    let c = prev.n_classes();
    let n = matrix.n_items() as f64;

    let mut weights = vec![0.0; k];
    for row in post.rows() {
        for (w, &v) in weights.iter_mut().zip(row) {
            *w += v;
        }
    }
    weights.iter_mut().for_each(|w| *w /= n);

    let mut cond = prev.cond.clone();
    let mut counts = vec![0.0; c * k];
    for &worker in subset {
        counts.iter_mut().for_each(|v| *v = smoothing);
        for &(item, r) in matrix.worker_labels(worker) {
            let row = post.row(item as usize);
            let dst = &mut counts[r as usize * k..(r as usize + 1) * k];
            for (d, &v) in dst.iter_mut().zip(row) {
                *d += v;
            }
        }
        for comp in 0..k {
            let denom: f64 = (0..c).map(|r| counts[r * k + comp]).sum();
            for r in 0..c {
                cond[(worker * c + r) * k + comp] =
                    if denom > 0.0 { counts[r * k + comp] / denom } else { 1.0 / c as f64 };
            }
        }
    }

    MdpdModel { n_components: k, n_classes: c, n_workers: prev.n_workers(), weights, cond }
}
