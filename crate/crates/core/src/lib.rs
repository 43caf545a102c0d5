//! Learning mixtures of discrete product distributions (MDPD) with
//! pairwise mutual-information feature selection.
//!
//! The crate is `no_std` with `alloc`. Everything here is pure computation
//! over a sparse items × workers [`LabelMatrix`]:
//!
//! | Module | What it provides |
//! |--------|------------------|
//! | [`pairwise`] | joint co-occurrence tables, the p×p mutual-information matrix, per-worker scores |
//! | [`selection`] | top-L by score, greedy/exact sub-matrix maximisation, score curve |
//! | [`one_coin`] | closed-form α and MI of the one-coin model, seeded synthetic generator |
//! | [`learners`] | majority voting with tie sets, EM for MDPD, component alignment |
//! | [`gof`] | Bethe-approximated goodness of fit (sum of conditional pairwise MI) |
//! | [`eval`] | mis-clustering rate, supervised ranking, L-grid sweeps |
//!
//! Class labels are 0-based indices `0..n_classes`; a missing observation is
//! simply an absent entry. Mutual information is in nats.
//!
//! Enable the `std` feature to get `std::error::Error` on [`Error`].

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

mod error;
pub mod eval;
pub mod gof;
pub mod learners;
pub(crate) mod math;
mod matrix;
pub mod one_coin;
pub mod pairwise;
pub mod selection;

pub use error::{Error, Result};
pub use matrix::{GroundTruth, LabelMatrix, LabelSet, Observation, MAX_CLASSES};
