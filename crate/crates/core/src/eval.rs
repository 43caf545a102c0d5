//! Mis-clustering rates and feature-subset sweeps.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::gof::bethe_gof;
use crate::learners::{EmConfig, Learner, MajorityVote, MvEm};
use crate::pairwise::PairwiseStats;
use crate::selection::{score_curve, select_by_score, select_by_submatrix, select_by_submatrix_exact, FeatureSubset};
use crate::{Error, GroundTruth, LabelMatrix, LabelSet, Result};

/// Mean expected error over the items that have ground truth.
///
/// Singleton predictions score 0 or 1; a tie set `T` scores `(|T|−1)/|T|`
/// when it contains the truth and 1 otherwise.
pub fn misclustering_rate(predictions: &[LabelSet], truth: &GroundTruth) -> Result<f64> {
    if predictions.len() != truth.n_items() {
        return Err(Error::ShapeMismatch { expected: truth.n_items(), found: predictions.len() });
    }
    let mut total = 0.0;
    let mut n = 0usize;
    for (item, label) in truth.iter() {
        total += predictions[item].expected_error(label);
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyTruth);
    }
    Ok(total / n as f64)
}

/// Each worker's individual error on the truth-covered items it labelled,
/// best first (ties by index). A worker with no such items scores `(C−1)/C`.
pub fn supervised_rank(matrix: &LabelMatrix, truth: &GroundTruth) -> Result<Vec<(usize, f64)>> {
    if truth.covered() == 0 {
        return Err(Error::EmptyTruth);
    }
    if truth.n_items() != matrix.n_items() {
        return Err(Error::ShapeMismatch { expected: matrix.n_items(), found: truth.n_items() });
    }
    let c = matrix.n_classes() as f64;
    let mut ranked: Vec<(usize, f64)> = (0..matrix.n_workers())
        .map(|w| {
            let (mut wrong, mut seen) = (0usize, 0usize);
            for &(item, r) in matrix.worker_labels(w) {
                if let Some(t) = truth.get(item as usize) {
                    seen += 1;
                    wrong += usize::from(t != r as usize);
                }
            }
            let err = if seen == 0 { (c - 1.0) / c } else { wrong as f64 / seen as f64 };
            (w, err)
        })
        .collect();
    ranked.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(core::cmp::Ordering::Equal).then(a.0.cmp(&b.0)));
    Ok(ranked)
}

/// Default L grid: every size for `p <= 200`, otherwise 50 log-spaced sizes from 1 to p.
pub fn default_grid(n_workers: usize) -> Vec<usize> {
    if n_workers <= 200 {
        return (1..=n_workers).collect();
    }
    log_grid(n_workers, 50)
}

/// `points` log-spaced subset sizes in `1..=n_workers`, rounded and deduplicated.
pub fn log_grid(n_workers: usize, points: usize) -> Vec<usize> {
    if n_workers == 0 {
        return Vec::new();
    }
    if points <= 1 {
        return alloc::vec![n_workers];
    }
    let top = crate::math::ln(n_workers as f64);
    let mut grid: Vec<usize> = (0..points)
        .map(|t| {
            let x = crate::math::exp(top * t as f64 / (points - 1) as f64);
            (libm::round(x) as usize).clamp(1, n_workers)
        })
        .collect();
    grid.dedup();
    if grid.last() != Some(&n_workers) {
        grid.push(n_workers);
    }
    grid
}

/// How a sweep picks its worker subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SelectionMethod {
    /// Top L by mutual-information score.
    Score,
    /// Greedy sub-matrix maximisation.
    Submatrix,
    /// Exhaustive sub-matrix maximisation (p <= 15).
    SubmatrixExact,
    /// Top L by individual supervised error (uses the ground truth).
    Supervised,
}

impl SelectionMethod {
    pub fn name(self) -> &'static str {
        match self {
            SelectionMethod::Score => "score",
            SelectionMethod::Submatrix => "submatrix",
            SelectionMethod::SubmatrixExact => "submatrix-exact",
            SelectionMethod::Supervised => "supervised",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "score" => SelectionMethod::Score,
            "submatrix" => SelectionMethod::Submatrix,
            "submatrix-exact" => SelectionMethod::SubmatrixExact,
            "supervised" => SelectionMethod::Supervised,
            _ => return None,
        })
    }
}

/// Built-in learners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LearnerKind {
    Mv,
    MvEm,
}

impl LearnerKind {
    pub fn name(self) -> &'static str {
        match self {
            LearnerKind::Mv => "mv",
            LearnerKind::MvEm => "mv-em",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "mv" => Some(LearnerKind::Mv),
            "mv-em" => Some(LearnerKind::MvEm),
            _ => None,
        }
    }

    pub fn build(self, em: EmConfig) -> Box<dyn Learner + Send + Sync> {
        match self {
            LearnerKind::Mv => Box::new(MajorityVote),
            LearnerKind::MvEm => Box::new(MvEm { config: em }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub methods: Vec<SelectionMethod>,
    pub learners: Vec<LearnerKind>,
    /// Subset sizes; sorted and deduplicated before use. Empty means [`default_grid`].
    pub grid: Vec<usize>,
    pub em: EmConfig,
    pub report_gof: bool,
    /// Recorded for reproducibility; the built-in learners are deterministic.
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            methods: alloc::vec![SelectionMethod::Score],
            learners: alloc::vec![LearnerKind::Mv],
            grid: Vec::new(),
            em: EmConfig::default(),
            report_gof: false,
            seed: 0,
        }
    }
}

impl SweepConfig {
    /// The grid actually swept for `n_workers`.
    pub fn resolved_grid(&self, n_workers: usize) -> Result<Vec<usize>> {
        let mut grid = if self.grid.is_empty() { default_grid(n_workers) } else { self.grid.clone() };
        grid.sort_unstable();
        grid.dedup();
        if let Some(&bad) = grid.iter().find(|&&l| l == 0 || l > n_workers) {
            return Err(Error::SubsetSize { requested: bad, n_workers });
        }
        Ok(grid)
    }
}

/// One evaluated (method, learner, L) point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub method: SelectionMethod,
    pub learner: String,
    pub l: usize,
    pub error_rate: f64,
    pub gof: Option<f64>,
    pub selected: Vec<usize>,
    /// Lowest error for this (method, learner), smallest L on ties.
    pub best: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub score_curve: Vec<(usize, f64)>,
}

impl SweepReport {
    /// Marks the best row of each (method, learner) group; rows must be grouped.
    pub fn assemble(mut rows: Vec<SweepRow>, score_curve: Vec<(usize, f64)>) -> Self {
        let mut start = 0;
        while start < rows.len() {
            let mut end = start + 1;
            while end < rows.len() && rows[end].method == rows[start].method && rows[end].learner == rows[start].learner
            {
                end += 1;
            }
            let mut best = start;
            for r in start..end {
                rows[r].best = false;
                let better = rows[r].error_rate < rows[best].error_rate
                    || (rows[r].error_rate == rows[best].error_rate && rows[r].l < rows[best].l);
                if better {
                    best = r;
                }
            }
            rows[best].best = true;
            start = end;
        }
        Self { rows, score_curve }
    }

    pub fn best(&self, method: SelectionMethod, learner: &str) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.best && r.method == method && r.learner == learner)
    }
}

/// Statistics shared by every point of a sweep.
#[derive(Debug, Clone)]
pub struct SweepContext {
    pub stats: PairwiseStats,
    supervised: Option<Vec<usize>>,
}

impl SweepContext {
    pub fn new(
        stats: PairwiseStats,
        matrix: &LabelMatrix,
        truth: &GroundTruth,
        methods: &[SelectionMethod],
    ) -> Result<Self> {
        if stats.n_workers() != matrix.n_workers() {
            return Err(Error::ShapeMismatch { expected: matrix.n_workers(), found: stats.n_workers() });
        }
        let supervised = if methods.contains(&SelectionMethod::Supervised) {
            Some(supervised_rank(matrix, truth)?.into_iter().map(|(w, _)| w).collect())
        } else {
            None
        };
        Ok(Self { stats, supervised })
    }

    pub fn select(&self, method: SelectionMethod, l: usize) -> Result<FeatureSubset> {
        match method {
            SelectionMethod::Score => select_by_score(&self.stats, l),
            SelectionMethod::Submatrix => select_by_submatrix(&self.stats, l),
            SelectionMethod::SubmatrixExact => select_by_submatrix_exact(&self.stats, l),
            SelectionMethod::Supervised => {
                let order =
                    self.supervised.as_ref().ok_or(Error::InvalidParameter("supervised ranking was not prepared"))?;
                if l == 0 || l > order.len() {
                    return Err(Error::SubsetSize { requested: l, n_workers: order.len() });
                }
                Ok(FeatureSubset { selected: order[..l].to_vec(), criterion: 0.0 })
            }
        }
    }
}

/// Selects, fits and scores a single sweep point.
pub fn evaluate_point(
    matrix: &LabelMatrix,
    truth: &GroundTruth,
    ctx: &SweepContext,
    method: SelectionMethod,
    learner: &dyn Learner,
    l: usize,
    report_gof: bool,
) -> Result<SweepRow> {
    let subset = ctx.select(method, l)?;
    let out = learner.fit_predict(matrix, &subset.selected)?;
    let error_rate = misclustering_rate(&out.predictions, truth)?;
    let gof =
        if report_gof && subset.len() >= 2 { Some(bethe_gof(matrix, &out.posterior, &subset.selected)?) } else { None };
    Ok(SweepRow {
        method,
        learner: learner.name().to_string(),
        l,
        error_rate,
        gof,
        selected: subset.selected,
        best: false,
    })
}

/// The (method, learner, L) points of a sweep in report order.
pub fn sweep_points(config: &SweepConfig, n_workers: usize) -> Result<Vec<(SelectionMethod, LearnerKind, usize)>> {
    let grid = config.resolved_grid(n_workers)?;
    let mut points = Vec::new();
    for &m in &config.methods {
        for &learner in &config.learners {
            for &l in &grid {
                points.push((m, learner, l));
            }
        }
    }
    Ok(points)
}

/// Sequential sweep over every configured (method, learner, L).
pub fn run_sweep(matrix: &LabelMatrix, truth: &GroundTruth, config: &SweepConfig) -> Result<SweepReport> {
    let stats = crate::pairwise::mi_matrix(matrix)?;
    let curve = score_curve(&stats);
    let ctx = SweepContext::new(stats, matrix, truth, &config.methods)?;
    let rows = sweep_points(config, matrix.n_workers())?
        .into_iter()
        .map(|(m, kind, l)| {
            let learner = kind.build(config.em);
            evaluate_point(matrix, truth, &ctx, m, learner.as_ref(), l, config.report_gof)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport::assemble(rows, curve))
}
