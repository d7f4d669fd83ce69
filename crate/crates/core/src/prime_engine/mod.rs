//! Prime generation over arbitrary ranges with a segmented sieve of
//! Eratosthenes, and the census of gaps between consecutive primes.
//!
//! Segments hold odd numbers only, one bit each. A segment of `n` entries spans
//! `2n` consecutive integers; the default of 2^20 entries is 128 KiB of bits.
//! Segments are independent work units, so the per-segment work can be spread
//! over threads and recombined in ascending order.

mod gaps;

pub use gaps::{gap_census, ratio_to_two, BoundaryConvention, GapCensus};

use crate::exec::{map_ordered, ExecPolicy};
use crate::{Error, Result};
use serde::Serialize;

/// Exclusive upper ceiling on range endpoints.
pub const RANGE_CEILING: u64 = 1 << 63;

pub const DEFAULT_SEGMENT_ODDS: usize = 1 << 20;

/// An inclusive range `[lo, hi]` of integers to sieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeRange {
    lo: u64,
    hi: u64,
}

impl PrimeRange {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo < 2 {
            return Err(Error::InvalidRange {
                lo,
                hi,
                reason: "lo must be at least 2",
            });
        }
        if hi <= lo {
            return Err(Error::InvalidRange {
                lo,
                hi,
                reason: "hi must exceed lo",
            });
        }
        if hi >= RANGE_CEILING {
            return Err(Error::Capacity {
                what: "prime range upper bound".into(),
                required: hi as u128,
                limit: RANGE_CEILING as u128 - 1,
            });
        }
        Ok(PrimeRange { lo, hi })
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SieveConfig {
    /// Odd numbers per segment.
    pub segment_odds: usize,
    pub policy: ExecPolicy,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_odds: DEFAULT_SEGMENT_ODDS,
            policy: ExecPolicy::default(),
        }
    }
}

impl SieveConfig {
    pub fn sequential() -> Self {
        SieveConfig {
            policy: ExecPolicy::Sequential,
            ..Default::default()
        }
    }

    fn span(&self) -> u64 {
        2 * self.segment_odds.max(64) as u64
    }
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Odd primes up to and including `limit`, by a plain odd-only sieve.
pub fn odd_primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    // index i <-> 2i + 1
    let n = (limit as usize - 1) / 2 + 1;
    let mut composite = vec![false; n];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut k = (p * p) / 2;
            while k < n {
                composite[k] = true;
                k += p;
            }
        }
        i += 1;
    }
    (1..n)
        .filter(|&i| !composite[i])
        .map(|i| 2 * i as u64 + 1)
        .collect()
}

/// All primes up to and including `limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let mut v = Vec::new();
    if limit >= 2 {
        v.push(2);
    }
    v.extend(odd_primes_up_to(limit));
    v
}

/// Deterministic trial division; used for small arguments and validation.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d <= n / d {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// One unit of sieve work: the integers in `[start, end]` (inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Segment {
    pub start: u64,
    pub end: u64,
}

/// Shared state for sieving segments of one range.
#[derive(Debug, Clone)]
pub(crate) struct Sieve {
    base: Vec<u64>,
    span: u64,
}

impl Sieve {
    pub fn for_range(range: &PrimeRange, cfg: &SieveConfig) -> Self {
        Sieve {
            base: odd_primes_up_to(isqrt(range.hi)),
            span: cfg.span(),
        }
    }

    /// Splits `[lo, hi]` into segments, additionally cutting after every value
    /// in `cuts` so that each cut point ends a segment.
    pub fn segments(&self, range: &PrimeRange, cuts: &[u64]) -> Vec<Segment> {
        let mut out = Vec::new();
        let mut start = range.lo;
        let mut cuts: Vec<u64> = cuts
            .iter()
            .copied()
            .filter(|&c| c >= range.lo && c < range.hi)
            .collect();
        cuts.sort_unstable();
        cuts.dedup();
        let mut cut_iter = cuts.into_iter().peekable();
        while start <= range.hi {
            let mut end = start.saturating_add(self.span - 1).min(range.hi);
            while let Some(&c) = cut_iter.peek() {
                if c < start {
                    cut_iter.next();
                } else {
                    if c < end {
                        end = c;
                    }
                    break;
                }
            }
            out.push(Segment { start, end });
            if end == range.hi {
                break;
            }
            start = end + 1;
        }
        out
    }

    /// Appends the primes in `seg`, ascending, to `out`.
    pub fn sieve_into(&self, seg: Segment, bits: &mut Vec<u64>, out: &mut Vec<u64>) {
        if seg.start <= 2 && seg.end >= 2 {
            out.push(2);
        }
        let first = if seg.start <= 3 { 3 } else { seg.start | 1 };
        if first > seg.end {
            return;
        }
        let count = ((seg.end - first) / 2 + 1) as usize;
        let words = count.div_ceil(64);
        bits.clear();
        bits.resize(words, 0);
        for &p in &self.base {
            let sq = p * p;
            if sq > seg.end {
                break;
            }
            let mut m = if sq >= first {
                sq
            } else {
                let q = first.div_ceil(p) * p;
                if q % 2 == 0 {
                    q + p
                } else {
                    q
                }
            };
            if m > seg.end {
                continue;
            }
            m = (m - first) / 2;
            let mut idx = m as usize;
            let step = p as usize;
            while idx < count {
                bits[idx >> 6] |= 1 << (idx & 63);
                idx += step;
            }
        }
        for (w, &word) in bits.iter().enumerate() {
            let mut free = !word;
            if w == words - 1 && !count.is_multiple_of(64) {
                free &= (1u64 << (count % 64)) - 1;
            }
            while free != 0 {
                let b = free.trailing_zeros() as u64;
                out.push(first + 2 * (64 * w as u64 + b));
                free &= free - 1;
            }
        }
    }

    pub fn sieve(&self, seg: Segment) -> Vec<u64> {
        let mut bits = Vec::new();
        let mut out = Vec::new();
        self.sieve_into(seg, &mut bits, &mut out);
        out
    }
}

/// Number of segments mapped concurrently before their results are folded.
const BATCH: usize = 256;

/// Sieves `range` segment by segment (cut at `cuts`), maps each segment's
/// primes with `map`, and folds the results into `acc` in ascending order.
pub(crate) fn fold_segments<A, R, M, F>(
    range: &PrimeRange,
    cfg: &SieveConfig,
    cuts: &[u64],
    mut acc: A,
    map: M,
    mut fold: F,
) -> A
where
    R: Send,
    M: Fn(Segment, &[u64]) -> R + Sync + Send,
    F: FnMut(A, Segment, R) -> A,
{
    let sieve = Sieve::for_range(range, cfg);
    let segments = sieve.segments(range, cuts);
    for batch in segments.chunks(BATCH) {
        let results = map_ordered(cfg.policy, batch, |&seg| {
            let primes = sieve.sieve(seg);
            map(seg, &primes)
        });
        for (&seg, r) in batch.iter().zip(results) {
            acc = fold(acc, seg, r);
        }
    }
    acc
}

/// Streams the primes of `range` in ascending order, one segment at a time.
pub struct PrimeStream {
    sieve: Sieve,
    segments: std::vec::IntoIter<Segment>,
    bits: Vec<u64>,
    buf: Vec<u64>,
    pos: usize,
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if let Some(&p) = self.buf.get(self.pos) {
                self.pos += 1;
                return Some(p);
            }
            let seg = self.segments.next()?;
            self.buf.clear();
            self.pos = 0;
            self.sieve.sieve_into(seg, &mut self.bits, &mut self.buf);
        }
    }
}

/// Every prime `p` with `lo <= p <= hi`, ascending.
pub fn primes_in_range(range: PrimeRange, cfg: &SieveConfig) -> PrimeStream {
    let sieve = Sieve::for_range(&range, cfg);
    let segments = sieve.segments(&range, &[]);
    PrimeStream {
        sieve,
        segments: segments.into_iter(),
        bits: Vec::new(),
        buf: Vec::new(),
        pos: 0,
    }
}

/// Primes in `(after, upto]`; empty when `upto <= after`.
pub fn primes_between(after: u64, upto: u64, cfg: &SieveConfig) -> Result<Vec<u64>> {
    if upto <= after.max(1) {
        return Ok(Vec::new());
    }
    let lo = (after + 1).max(2);
    if upto == lo {
        return Ok(if is_prime(lo) { vec![lo] } else { Vec::new() });
    }
    Ok(primes_in_range(PrimeRange::new(lo, upto)?, cfg).collect())
}
