//! File formats, parallel drivers and the command-line interface for
//! [`mdpd_core`].
//!
//! | module | contents |
//! |---|---|
//! | [`ingest`] | label and truth files, id maps |
//! | [`grid`] | subset-size grid specifications |
//! | [`parallel`] | rayon MI matrix and sweep, identical to the sequential results |
//! | [`output`] | MI, sweep and score CSVs, JSON run manifest |
//! | [`cli`] | the `mdpd` command |

pub mod cli;
mod error;
pub mod grid;
pub mod ingest;
pub mod output;
pub mod parallel;

pub use error::{Error, Result};
