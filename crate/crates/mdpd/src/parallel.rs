//! Rayon versions of the pairwise statistics and the sweep.
//!
//! Every pair and every sweep point is computed independently and collected
//! in index order, so results match the sequential core functions bit for bit
//! whatever the thread count.

use mdpd_core::eval::{evaluate_point, sweep_points, SweepConfig, SweepContext, SweepReport};
use mdpd_core::pairwise::{pair_mutual_information, PairwiseStats};
use mdpd_core::selection::score_curve;
use mdpd_core::{GroundTruth, LabelMatrix};
use rayon::prelude::*;

use crate::Result;

/// Parallel [`mdpd_core::pairwise::mi_matrix`].
pub fn mi_matrix(matrix: &LabelMatrix) -> Result<PairwiseStats> {
    let p = matrix.n_workers();
    if p < 2 {
        return Err(mdpd_core::Error::TooFewWorkers { required: 2, found: p }.into());
    }
    let pairs: Vec<(usize, usize)> = (0..p).flat_map(|i| (i + 1..p).map(move |j| (i, j))).collect();
    let upper = pairs
        .par_iter()
        .map(|&(i, j)| pair_mutual_information(matrix, i, j))
        .collect::<mdpd_core::Result<Vec<f64>>>()?;
    Ok(PairwiseStats::from_upper_triangle(p, &upper)?)
}

/// Parallel [`mdpd_core::eval::run_sweep`].
pub fn run_sweep(matrix: &LabelMatrix, truth: &GroundTruth, config: &SweepConfig) -> Result<SweepReport> {
    let stats = mi_matrix(matrix)?;
    let curve = score_curve(&stats);
    let ctx = SweepContext::new(stats, matrix, truth, &config.methods)?;
    let rows = sweep_points(config, matrix.n_workers())?
        .into_par_iter()
        .map(|(method, kind, l)| {
            let learner = kind.build(config.em);
            evaluate_point(matrix, truth, &ctx, method, learner.as_ref(), l, config.report_gof)
        })
        .collect::<mdpd_core::Result<Vec<_>>>()?;
    Ok(SweepReport::assemble(rows, curve))
}

/// Runs `f` on a pool of `threads` workers; 0 means rayon's default.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    Ok(pool.install(f))
}
