use super::{fold_segments, PrimeRange, SieveConfig};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Which gaps near the range ends are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryConvention {
    /// A gap counts only when both of its primes lie in `[lo, hi]`.
    BothEndpointsInside,
}

/// Occurrence counts of each gap between consecutive primes in a range.
///
/// The first and last primes found are kept so the boundary treatment can be
/// audited against other tabulations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapCensus {
    pub range: PrimeRange,
    pub boundary_convention: BoundaryConvention,
    pub first_prime: Option<u64>,
    pub last_prime: Option<u64>,
    pub prime_count: u64,
    pub counts: BTreeMap<u64, u64>,
}

impl GapCensus {
    pub fn count(&self, gap: u64) -> u64 {
        self.counts.get(&gap).copied().unwrap_or(0)
    }

    pub fn total_gaps(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Joins the census of an adjacent range to the right, counting the gap
    /// that straddles the seam exactly once.
    pub fn merge(mut self, right: GapCensus) -> Result<GapCensus> {
        if right.range.lo() != self.range.hi() + 1 {
            return Err(Error::InvalidArgument(format!(
                "census ranges [{}, {}] and [{}, {}] are not adjacent",
                self.range.lo(),
                self.range.hi(),
                right.range.lo(),
                right.range.hi()
            )));
        }
        if let (Some(a), Some(b)) = (self.last_prime, right.first_prime) {
            *self.counts.entry(b - a).or_insert(0) += 1;
        }
        for (g, c) in right.counts {
            *self.counts.entry(g).or_insert(0) += c;
        }
        self.range = PrimeRange::new(self.range.lo(), right.range.hi())?;
        self.first_prime = self.first_prime.or(right.first_prime);
        self.last_prime = right.last_prime.or(self.last_prime);
        self.prime_count += right.prime_count;
        Ok(self)
    }

    /// `gap,count` lines, ascending by gap.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("gap,count\n");
        for (g, c) in &self.counts {
            let _ = writeln!(s, "{g},{c}");
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let counts: serde_json::Map<String, serde_json::Value> = self
            .counts
            .iter()
            .map(|(g, c)| (g.to_string(), (*c).into()))
            .collect();
        serde_json::json!({
            "lo": self.range.lo(),
            "hi": self.range.hi(),
            "boundary_convention": self.boundary_convention,
            "first_prime": self.first_prime,
            "last_prime": self.last_prime,
            "prime_count": self.prime_count,
            "counts": counts,
        })
    }
}

/// Per-segment partial census; a monoid under [`Partial::join`].
#[derive(Debug, Default)]
struct Partial {
    first: Option<u64>,
    last: Option<u64>,
    primes: u64,
    // indexed by gap
    counts: Vec<u64>,
}

impl Partial {
    fn from_primes(primes: &[u64]) -> Partial {
        let mut counts = Vec::new();
        for w in primes.windows(2) {
            bump(&mut counts, w[1] - w[0], 1);
        }
        Partial {
            first: primes.first().copied(),
            last: primes.last().copied(),
            primes: primes.len() as u64,
            counts,
        }
    }

    fn join(mut self, right: Partial) -> Partial {
        if let (Some(a), Some(b)) = (self.last, right.first) {
            bump(&mut self.counts, b - a, 1);
        }
        if right.counts.len() > self.counts.len() {
            self.counts.resize(right.counts.len(), 0);
        }
        for (g, c) in right.counts.into_iter().enumerate() {
            self.counts[g] += c;
        }
        self.first = self.first.or(right.first);
        self.last = right.last.or(self.last);
        self.primes += right.primes;
        self
    }
}

fn bump(counts: &mut Vec<u64>, gap: u64, by: u64) {
    let g = gap as usize;
    if g >= counts.len() {
        counts.resize(g + 1, 0);
    }
    counts[g] += by;
}

/// Counts gaps between consecutive primes with both primes in the range.
pub fn gap_census(range: PrimeRange, cfg: &SieveConfig) -> GapCensus {
    let total = fold_segments(
        &range,
        cfg,
        &[],
        Partial::default(),
        |_, primes| Partial::from_primes(primes),
        |acc, _, part| acc.join(part),
    );
    GapCensus {
        range,
        boundary_convention: BoundaryConvention::BothEndpointsInside,
        first_prime: total.first,
        last_prime: total.last,
        prime_count: total.primes,
        counts: total
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(g, &c)| (g as u64, c))
            .collect(),
    }
}

/// `counts[g] / counts[2]`.
pub fn ratio_to_two(census: &GapCensus, gap: u64) -> Result<f64> {
    let twins = census.count(2);
    if twins == 0 {
        return Err(Error::DivisionUndefined);
    }
    Ok(census.count(gap) as f64 / twins as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::ExecPolicy;
    use crate::prime_engine::is_prime;
    use proptest::prelude::*;

    fn brute(lo: u64, hi: u64) -> BTreeMap<u64, u64> {
        let p: Vec<u64> = (lo..=hi).filter(|&n| is_prime(n)).collect();
        let mut m = BTreeMap::new();
        for w in p.windows(2) {
            *m.entry(w[1] - w[0]).or_insert(0) += 1;
        }
        m
    }

    #[test]
    fn ten_to_fifty() {
        let c = gap_census(PrimeRange::new(10, 50).unwrap(), &SieveConfig::default());
        assert_eq!(c.counts, BTreeMap::from([(2, 4), (4, 4), (6, 2)]));
        assert_eq!(c.first_prime, Some(11));
        assert_eq!(c.last_prime, Some(47));
        assert_eq!(ratio_to_two(&c, 6).unwrap(), 0.5);
        assert_eq!(ratio_to_two(&c, 2).unwrap(), 1.0);
    }

    #[test]
    fn empty_and_single_prime() {
        let c = gap_census(PrimeRange::new(24, 28).unwrap(), &SieveConfig::default());
        assert!(c.counts.is_empty());
        assert_eq!(c.prime_count, 0);
        assert!(matches!(ratio_to_two(&c, 4), Err(Error::DivisionUndefined)));
        let c = gap_census(PrimeRange::new(24, 30).unwrap(), &SieveConfig::default());
        assert!(c.counts.is_empty());
        assert_eq!(c.prime_count, 1);
    }

    #[test]
    fn gap_one_from_two() {
        let c = gap_census(PrimeRange::new(2, 7).unwrap(), &SieveConfig::default());
        assert_eq!(c.counts, BTreeMap::from([(1, 1), (2, 2)]));
    }

    #[test]
    fn csv_and_json_exports() {
        let c = gap_census(PrimeRange::new(10, 50).unwrap(), &SieveConfig::default());
        assert_eq!(c.to_csv(), "gap,count\n2,4\n4,4\n6,2\n");
        let j = c.to_json();
        assert_eq!(j["counts"]["4"], 4);
        assert_eq!(j["boundary_convention"], "both-endpoints-inside");
        assert_eq!(j["first_prime"], 11);
    }

    #[test]
    fn merge_rejects_gapped_ranges() {
        let cfg = SieveConfig::default();
        let a = gap_census(PrimeRange::new(10, 50).unwrap(), &cfg);
        let b = gap_census(PrimeRange::new(60, 90).unwrap(), &cfg);
        assert!(a.merge(b).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn census_matches_brute_force(lo in 2u64..200_000, len in 1u64..5000, seg in 64usize..1024) {
            let hi = lo + len;
            let cfg = SieveConfig { segment_odds: seg, policy: ExecPolicy::Parallel };
            let c = gap_census(PrimeRange::new(lo, hi).unwrap(), &cfg);
            prop_assert_eq!(&c.counts, &brute(lo, hi));
            prop_assert_eq!(c.total_gaps(), c.prime_count.saturating_sub(1));
        }

        #[test]
        fn split_and_merge_reproduces_whole(lo in 2u64..100_000, a in 1u64..3000, b in 1u64..3000) {
            let cfg = SieveConfig { segment_odds: 128, policy: ExecPolicy::Sequential };
            let mid = lo + a;
            let hi = mid + b;
            let left = gap_census(PrimeRange::new(lo, mid).unwrap(), &cfg);
            let right = gap_census(PrimeRange::new(mid + 1, mid + 1 + b).unwrap(), &cfg);
            let whole = gap_census(PrimeRange::new(lo, hi + 1).unwrap(), &cfg);
            prop_assert_eq!(left.merge(right).unwrap(), whole);
        }
    }
}
