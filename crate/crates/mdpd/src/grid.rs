//! Subset-size grid specifications.
//!
//! A spec is `all` (every size up to p, or 50 log-spaced sizes when p > 200),
//! `log:N` (N log-spaced sizes), or a comma-separated list whose entries are
//! sizes `L`, inclusive ranges `A-B`, or stepped ranges `A-B:S`.

use mdpd_core::eval::{default_grid, log_grid};

use crate::{Error, Result};

/// Expands `spec` for `n_workers` workers. The result is sorted and deduplicated.
pub fn parse_grid(spec: &str, n_workers: usize) -> Result<Vec<usize>> {
    let bad = |reason: &str| Error::Grid { spec: spec.to_string(), reason: reason.to_string() };
    let spec_t = spec.trim();
    let mut grid = if spec_t == "all" {
        default_grid(n_workers)
    } else if let Some(n) = spec_t.strip_prefix("log:") {
        let points: usize = n.parse().map_err(|_| bad("log:N needs an integer N"))?;
        if points == 0 {
            return Err(bad("log:N needs N >= 1"));
        }
        log_grid(n_workers, points)
    } else {
        let mut out = Vec::new();
        for part in spec_t.split(',') {
            let part = part.trim();
            let (range, step) = match part.split_once(':') {
                Some((r, s)) => (r, s.parse::<usize>().map_err(|_| bad("step must be an integer"))?),
                None => (part, 1),
            };
            if step == 0 {
                return Err(bad("step must be positive"));
            }
            let (lo, hi) = match range.split_once('-') {
                Some((a, b)) => (a.trim().parse::<usize>(), b.trim().parse::<usize>()),
                None => (range.parse::<usize>(), range.parse::<usize>()),
            };
            let (lo, hi) = match (lo, hi) {
                (Ok(lo), Ok(hi)) if lo <= hi => (lo, hi),
                _ => return Err(bad(&format!("cannot read `{part}`"))),
            };
            out.extend((lo..=hi).step_by(step));
        }
        out
    };
    grid.sort_unstable();
    grid.dedup();
    if grid.is_empty() {
        return Err(bad("no sizes"));
    }
    if let Some(&l) = grid.iter().find(|&&l| l == 0 || l > n_workers) {
        return Err(bad(&format!("size {l} is outside 1..={n_workers}")));
    }
    Ok(grid)
}
