//! Pairwise co-occurrence tables and the mutual-information matrix.
//!
//! A missing observation is folded in as one extra "virtual" label, so the
//! joint table of two workers is `(C+1) × (C+1)` and always sums to one over
//! all items. The mutual information is then the restricted sum over cells
//! where both workers actually answered, with marginals taken from the full
//! table:
//!
//! ```text
//! I(Xi, Xj) = Σ_{a≠n/a, b≠n/a} P(a,b) ln[ P(a,b) / (P(a) P(b)) ]
//! ```
//!
//! With no missing data this is the ordinary mutual information.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::mi_term;
use crate::{Error, LabelMatrix, Result};

/// Joint distribution of two workers' labels over `{0..C, n/a}²`.
///
/// Index `C` (see [`JointTable::missing`]) is the virtual "n/a" label.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    n_classes: usize,
    cells: Vec<f64>,
}

impl JointTable {
    /// Builds a table from raw cells in row-major order.
    pub fn from_cells(n_classes: usize, cells: Vec<f64>) -> Result<Self> {
        let side = n_classes + 1;
        if cells.len() != side * side {
            return Err(Error::ShapeMismatch { expected: side * side, found: cells.len() });
        }
        Ok(Self { n_classes, cells })
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// Index of the virtual missing label.
    pub fn missing(&self) -> usize {
        self.n_classes
    }

    pub fn side(&self) -> usize {
        self.n_classes + 1
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.cells[a * self.side() + b]
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn total(&self) -> f64 {
        self.cells.iter().sum()
    }

    /// Marginal of the first worker, including the n/a entry.
    pub fn row_marginals(&self) -> Vec<f64> {
        self.cells.chunks(self.side()).map(|row| row.iter().sum()).collect()
    }

    /// Marginal of the second worker, including the n/a entry.
    pub fn col_marginals(&self) -> Vec<f64> {
        let side = self.side();
        let mut out = vec![0.0; side];
        for row in self.cells.chunks(side) {
            for (o, &v) in out.iter_mut().zip(row) {
                *o += v;
            }
        }
        out
    }
}

/// Raw co-occurrence counts of two workers over `{0..C, n/a}²`.
fn co_occurrence(matrix: &LabelMatrix, i: usize, j: usize) -> Vec<u64> {
    let c = matrix.n_classes();
    let side = c + 1;
    let mut counts = vec![0u64; side * side];
    let (li, lj) = (matrix.worker_labels(i), matrix.worker_labels(j));

    let (mut x, mut y) = (0, 0);
    let mut both = 0u64;
    while x < li.len() && y < lj.len() {
        match li[x].0.cmp(&lj[y].0) {
            core::cmp::Ordering::Less => x += 1,
            core::cmp::Ordering::Greater => y += 1,
            core::cmp::Ordering::Equal => {
                counts[li[x].1 as usize * side + lj[y].1 as usize] += 1;
                both += 1;
                x += 1;
                y += 1;
            }
        }
    }

    let ni = matrix.label_counts(i);
    let nj = matrix.label_counts(j);
    for a in 0..c {
        let seen: u64 = counts[a * side..a * side + c].iter().sum();
        counts[a * side + c] = ni[a] as u64 - seen;
    }
    for b in 0..c {
        let seen: u64 = (0..c).map(|a| counts[a * side + b]).sum();
        counts[c * side + b] = nj[b] as u64 - seen;
    }
    counts[c * side + c] = matrix.n_items() as u64 + both - li.len() as u64 - lj.len() as u64;
    counts
}

/// Estimates `P(x_i, x_j)` as co-occurrence counts over `n_items`.
pub fn estimate_joint(matrix: &LabelMatrix, i: usize, j: usize) -> Result<JointTable> {
    matrix.check_worker(i)?;
    matrix.check_worker(j)?;
    if i == j {
        return Err(Error::SameWorker(i));
    }
    let n = matrix.n_items() as f64;
    let cells = co_occurrence(matrix, i, j).into_iter().map(|k| k as f64 / n).collect();
    Ok(JointTable { n_classes: matrix.n_classes(), cells })
}

/// Mutual information in nats, restricted to cells where neither label is n/a.
///
/// Not clamped: with missing data the restricted sum can dip below zero.
pub fn mutual_information(table: &JointTable) -> f64 {
    let c = table.n_classes();
    let rows = table.row_marginals();
    let cols = table.col_marginals();
    let mut mi = 0.0;
    for (a, &ra) in rows[..c].iter().enumerate() {
        for (b, &cb) in cols[..c].iter().enumerate() {
            mi += mi_term(table.get(a, b), ra, cb);
        }
    }
    mi
}

/// Mutual information of one worker pair, clamped at zero.
pub fn pair_mutual_information(matrix: &LabelMatrix, i: usize, j: usize) -> Result<f64> {
    let table = estimate_joint(matrix, i, j)?;
    Ok(mutual_information(&table).max(0.0))
}

/// The dense p×p mutual-information matrix and per-worker scores.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseStats {
    n_workers: usize,
    mi: Vec<f64>,
    scores: Vec<f64>,
}

impl PairwiseStats {
    /// Builds stats from the strict upper triangle in row-major order
    /// (`(0,1), (0,2), …, (0,p-1), (1,2), …`).
    pub fn from_upper_triangle(n_workers: usize, upper: &[f64]) -> Result<Self> {
        let expected = n_workers * n_workers.saturating_sub(1) / 2;
        if upper.len() != expected {
            return Err(Error::ShapeMismatch { expected, found: upper.len() });
        }
        let mut mi = vec![0.0; n_workers * n_workers];
        let mut k = 0;
        for i in 0..n_workers {
            for j in i + 1..n_workers {
                let v = upper[k];
                if !v.is_finite() {
                    return Err(Error::NumericalFailure("non-finite mutual information"));
                }
                let v = v.max(0.0);
                mi[i * n_workers + j] = v;
                mi[j * n_workers + i] = v;
                k += 1;
            }
        }
        let scores =
            (0..n_workers).map(|i| (0..n_workers).filter(|&j| j != i).map(|j| mi[i * n_workers + j]).sum()).collect();
        Ok(Self { n_workers, mi, scores })
    }

    pub fn n_workers(&self) -> usize {
        self.n_workers
    }

    pub fn mi(&self, i: usize, j: usize) -> f64 {
        self.mi[i * self.n_workers + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.mi[i * self.n_workers..(i + 1) * self.n_workers]
    }

    /// `score_i = Σ_{j≠i} mi[i][j]`.
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    /// `Σ_{i<j, i,j∈S} mi[i][j]`, summed in subset order.
    pub fn subset_sum(&self, subset: &[usize]) -> f64 {
        let mut total = 0.0;
        for (a, &i) in subset.iter().enumerate() {
            for &j in &subset[a + 1..] {
                total += self.mi(i, j);
            }
        }
        total
    }
}

/// Computes every unordered pair once and mirrors it.
pub fn mi_matrix(matrix: &LabelMatrix) -> Result<PairwiseStats> {
    let p = matrix.n_workers();
    if p < 2 {
        return Err(Error::TooFewWorkers { required: 2, found: p });
    }
    let mut upper = Vec::with_capacity(p * (p - 1) / 2);
    for i in 0..p {
        for j in i + 1..p {
            upper.push(pair_mutual_information(matrix, i, j)?);
        }
    }
    PairwiseStats::from_upper_triangle(p, &upper)
}
