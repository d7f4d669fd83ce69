//! Constellation counts in materialized cycles of gaps.
//!
//! All window counts are cyclic: a window may run off the end of `G(p#)` and
//! continue at its start, because the counts live on the full cycle of
//! residues. Counts are exact big integers.

mod driving;
mod recurrence;

pub use driving::{driving_terms, DrivingTermSet};
pub use recurrence::{advance_row, aggregated_step, theorem1_step, ConstellationCounts};

use crate::exec::{map_range_ordered, ExecPolicy};
use crate::gap_cycle::{Constellation, GapCycle};
use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::Zero;
use std::fmt::Write as _;

pub const DEFAULT_MAX_GAP: u32 = 32;

/// `n_{g,j}(p)`: the number of length-`j` windows of `G(p#)` whose gaps sum
/// to `g`, for `j = 1 ..= J(g)`.
///
/// `J(g)` is the longest length that actually occurs; trailing zero lengths
/// are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusTable {
    pub stage_prime: u64,
    pub gap: u32,
    row: Vec<BigUint>,
}

impl CensusTable {
    pub fn new(stage_prime: u64, gap: u32, mut row: Vec<BigUint>) -> Self {
        while row.last().is_some_and(|c| c.is_zero()) {
            row.pop();
        }
        CensusTable {
            stage_prime,
            gap,
            row,
        }
    }

    /// The longest occurring length `J(g)`; 0 when nothing sums to `g`.
    pub fn max_len(&self) -> usize {
        self.row.len()
    }

    /// `n_{g,j}` for `j >= 1`; zero beyond `J(g)`.
    pub fn n(&self, j: usize) -> BigUint {
        assert!(j >= 1, "window length starts at 1");
        self.row.get(j - 1).cloned().unwrap_or_default()
    }

    pub fn row(&self) -> &[BigUint] {
        &self.row
    }

    pub fn total(&self) -> BigUint {
        self.row.iter().sum()
    }
}

/// Occurrences of `s` among the cyclic windows of `cycle`.
pub fn count_constellation(cycle: &GapCycle, s: &Constellation) -> Result<u64> {
    let gaps = cycle.gaps();
    let n = gaps.len();
    let k = s.len();
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "constellation of {k} gaps is longer than G({}#) ({n} gaps)",
            cycle.stage_prime()
        )));
    }
    let pat = s.gaps();
    let mut hits = 0;
    for i in 0..n {
        if (0..k).all(|t| gaps[(i + t) % n] == pat[t]) {
            hits += 1;
        }
    }
    Ok(hits)
}

fn check_gap(g: u32) -> Result<()> {
    if g < 2 || !g.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "gap must be even and >= 2, got {g}"
        )));
    }
    Ok(())
}

const SHARD: usize = 1 << 16;

/// Counts windows for every even `g <= max_gap` in one pass over the cycle.
///
/// The cycle is sharded by window start; each shard reads past its end (and
/// around the seam) as needed, so every window is counted exactly once.
pub fn census_rows(cycle: &GapCycle, max_gap: u32, policy: ExecPolicy) -> Result<Vec<CensusTable>> {
    check_gap(max_gap)?;
    let gaps = cycle.gaps();
    let n = gaps.len();
    let rows = max_gap as usize / 2;
    let max_j = (max_gap as usize / 2).min(n);
    let width = max_j + 1;
    let shards = n.div_ceil(SHARD);

    let partials = map_range_ordered(policy, shards, |s| {
        let mut local = vec![0u64; (rows + 1) * width];
        let begin = s * SHARD;
        let end = (begin + SHARD).min(n);
        for i in begin..end {
            let mut sum = 0usize;
            let mut idx = i;
            for j in 1..=max_j {
                sum += gaps[idx] as usize;
                if sum > max_gap as usize {
                    break;
                }
                if sum.is_multiple_of(2) {
                    local[(sum / 2) * width + j] += 1;
                }
                idx += 1;
                if idx == n {
                    idx = 0;
                }
            }
        }
        local
    });
    let mut total = vec![0u64; (rows + 1) * width];
    for part in partials {
        for (t, c) in total.iter_mut().zip(part) {
            *t += c;
        }
    }
    Ok((1..=rows)
        .map(|h| {
            let row = (1..width)
                .map(|j| BigUint::from(total[h * width + j]))
                .collect();
            CensusTable::new(cycle.stage_prime(), 2 * h as u32, row)
        })
        .collect())
}

/// `n_{g,j}(p)` for one gap `g`.
pub fn census_row(cycle: &GapCycle, g: u32, policy: ExecPolicy) -> Result<CensusTable> {
    check_gap(g)?;
    let mut rows = census_rows(cycle, g, policy)?;
    Ok(rows.pop().expect("at least one row"))
}

/// `g,j,count` lines for `j = 1 ..= J(g)` of each row.
pub fn rows_to_csv(rows: &[CensusTable]) -> String {
    let mut s = String::from("g,j,count\n");
    for r in rows {
        for (j, c) in r.row().iter().enumerate() {
            let _ = writeln!(s, "{},{},{}", r.gap, j + 1, c);
        }
    }
    s
}

pub fn rows_to_json(rows: &[CensusTable]) -> serde_json::Value {
    serde_json::Value::Array(
        rows.iter()
            .map(|r| {
                serde_json::json!({
                    "p": r.stage_prime,
                    "g": r.gap,
                    "counts": r.row().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

/// A fixed-width table with one row per gap and one column per length.
pub fn rows_to_table(rows: &[CensusTable]) -> String {
    let cols = rows.iter().map(|r| r.max_len()).max().unwrap_or(1).max(1);
    let width = rows
        .iter()
        .flat_map(|r| r.row().iter().map(|c| c.to_string().len()))
        .max()
        .unwrap_or(1)
        .max(5);
    let stage = rows.first().map(|r| r.stage_prime).unwrap_or(0);
    let mut s = String::new();
    let _ = writeln!(s, "n_{{g,j}}({stage})");
    let _ = write!(s, "{:>4} |", "g");
    for j in 1..=cols {
        let _ = write!(s, " {:>width$}", format!("j={j}"));
    }
    s.push('\n');
    let _ = writeln!(s, "{}", "-".repeat(6 + cols * (width + 1)));
    for r in rows {
        let _ = write!(s, "{:>4} |", r.gap);
        for j in 1..=r.max_len() {
            let _ = write!(s, " {:>width$}", r.n(j).to_string());
        }
        s.push('\n');
    }
    s
}
