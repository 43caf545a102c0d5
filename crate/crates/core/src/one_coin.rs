//! The one-coin crowdsourcing model.
//!
//! Each worker `i` answers correctly with probability `p_i` and otherwise
//! picks one of the `K − 1` wrong labels uniformly; the true class is uniform
//! over `K`. Every pairwise joint is then a `K × K` matrix with `α` on the
//! diagonal and `(1 − Kα)/(K(K − 1))` off it, which gives a closed-form
//! mutual information that is zero at `α = 1/K²` and increasing in both
//! abilities once they exceed `1/K`.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math::ln;
use crate::{Error, GroundTruth, LabelMatrix, Observation, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OneCoinModel {
    k: usize,
    abilities: Vec<f64>,
}

impl OneCoinModel {
    pub fn new(k: usize, abilities: Vec<f64>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter("one-coin model needs K >= 2"));
        }
        if abilities.is_empty() {
            return Err(Error::InvalidParameter("one-coin model needs at least one worker"));
        }
        if abilities.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidParameter("abilities must lie in [0, 1]"));
        }
        Ok(Self { k, abilities })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn abilities(&self) -> &[f64] {
        &self.abilities
    }

    /// `P(X_i = c | Y = k)`.
    pub fn conditional(&self, worker: usize, label: usize, class: usize) -> f64 {
        let p = self.abilities[worker];
        if label == class {
            p
        } else {
            (1.0 - p) / (self.k - 1) as f64
        }
    }
}

/// Diagonal entry `P(X_i = c, X_j = c) = p_i p_j / K + (1 − p_i)(1 − p_j) / (K(K − 1))`.
///
/// Evaluated in the form centred on the saddle point `p_i = p_j = 1/K`,
/// `[(p_i + p_j − 2/K)² − (p_i − p_j)²] / (4(K − 1)) + 1/K²`, which is exact there.
pub fn alpha(p_i: f64, p_j: f64, k: usize) -> f64 {
    let k = k as f64;
    let s = p_i + p_j - 2.0 / k;
    let d = p_i - p_j;
    (s * s - d * d) / (4.0 * (k - 1.0)) + 1.0 / (k * k)
}

/// Closed-form mutual information (nats) between two one-coin workers.
pub fn one_coin_mi(p_i: f64, p_j: f64, k: usize) -> f64 {
    let a = alpha(p_i, p_j, k);
    let kf = k as f64;
    let diag = kf * a;
    let off = 1.0 - diag;
    let mut mi = 2.0 * ln(kf);
    if a > 0.0 {
        mi += diag * ln(a);
    }
    if off > 0.0 {
        mi += off * ln(off / (kf * (kf - 1.0)));
    }
    mi
}

/// Samples a label matrix and its ground truth from a one-coin model.
///
/// The stream is `ChaCha8Rng::seed_from_u64(seed)`. For each item in order it
/// draws the true class, then for each worker in order: the correctness coin,
/// the wrong label (only when the coin fails), and the missing coin.
pub fn generate(
    model: &OneCoinModel,
    n_items: usize,
    missing_rate: f64,
    seed: u64,
) -> Result<(LabelMatrix, GroundTruth)> {
    if n_items == 0 {
        return Err(Error::InvalidParameter("n_items must be at least 1"));
    }
    if !(0.0..1.0).contains(&missing_rate) {
        return Err(Error::InvalidParameter("missing_rate must lie in [0, 1)"));
    }
    let k = model.k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut truth = Vec::with_capacity(n_items);
    let mut observations = Vec::with_capacity(n_items * model.abilities.len());

    for item in 0..n_items {
        let y = rng.gen_range(0..k);
        truth.push((item, y));
        for (worker, &p) in model.abilities.iter().enumerate() {
            let correct = rng.gen::<f64>() < p;
            let label = if correct {
                y
            } else {
                let w = rng.gen_range(0..k - 1);
                if w >= y {
                    w + 1
                } else {
                    w
                }
            };
            let missing = rng.gen::<f64>() < missing_rate;
            if !missing {
                observations.push(Observation { item, worker, label });
            }
        }
    }

    let matrix = LabelMatrix::new(n_items, model.abilities.len(), k, observations)?;
    let truth = GroundTruth::new(n_items, k, truth)?;
    Ok((matrix, truth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn alpha_saddle_and_corners() {
        for k in [2usize, 3, 5] {
            let inv = 1.0 / k as f64;
            assert_eq!(alpha(inv, inv, k), 1.0 / (k * k) as f64);
        }
        assert!((alpha(1.0 / 3.0, 1.0 / 3.0, 3) - 1.0 / 9.0).abs() < 1e-15);
        assert!(alpha(1.0, 0.0, 2).abs() < 1e-15);
    }

    #[test]
    fn mi_known_values() {
        assert!((one_coin_mi(1.0, 1.0, 3) - 3f64.ln()).abs() < 1e-12);
        assert!((one_coin_mi(1.0, 1.0, 2) - 2f64.ln()).abs() < 1e-12);
        for p in [0.0, 0.3, 0.9, 1.0] {
            assert!(one_coin_mi(0.5, p, 2).abs() < 1e-12);
            assert!(one_coin_mi(0.2, p, 5).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_in_abilities() {
        for (a, b) in [(0.1, 0.7), (0.9, 0.35), (0.5, 0.51)] {
            assert_eq!(alpha(a, b, 3), alpha(b, a, 3));
            assert_eq!(one_coin_mi(a, b, 4), one_coin_mi(b, a, 4));
        }
    }

    #[test]
    fn model_validation() {
        assert!(OneCoinModel::new(1, vec![0.5]).is_err());
        assert!(OneCoinModel::new(2, vec![]).is_err());
        assert!(OneCoinModel::new(2, vec![1.2]).is_err());
        let m = OneCoinModel::new(3, vec![0.6]).unwrap();
        assert_eq!(m.conditional(0, 1, 1), 0.6);
        assert!((m.conditional(0, 0, 1) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn perfect_workers_copy_truth() {
        let m = OneCoinModel::new(4, vec![1.0; 5]).unwrap();
        let (x, t) = generate(&m, 200, 0.0, 11).unwrap();
        assert_eq!(x.len(), 1000);
        for o in x.entries() {
            assert_eq!(Some(o.label), t.get(o.item));
        }
    }

    #[test]
    fn generation_is_seeded() {
        let m = OneCoinModel::new(3, vec![0.7, 0.4, 0.9]).unwrap();
        let a = generate(&m, 300, 0.3, 5).unwrap();
        let b = generate(&m, 300, 0.3, 5).unwrap();
        let c = generate(&m, 300, 0.3, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn generation_rejects_bad_rates() {
        let m = OneCoinModel::new(2, vec![0.7]).unwrap();
        assert!(generate(&m, 10, 1.0, 0).is_err());
        assert!(generate(&m, 10, -0.1, 0).is_err());
        assert!(generate(&m, 0, 0.0, 0).is_err());
    }
}
