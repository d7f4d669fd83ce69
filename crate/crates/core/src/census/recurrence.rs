//! The exact counting recurrence: a constellation `s` of `j` gaps keeps
//! `p' - j - 1` of the copies it has at one stage (each copy is carried into
//! `p'` translates, `j + 1` of which lose an interior value) and gains one copy
//! per occurrence of each of its driving terms. It applies while `j < p' - 1`
//! and `σ(s) < 2p'`.

use super::{driving_terms, CensusTable};
use crate::gap_cycle::{Constellation, GapCycle};
use crate::prime_engine::next_prime;
use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};

/// Exact counts for a set of constellations at one stage.
///
/// The set must be closed under driving terms below its maximum length `J`.
/// Driving terms of the longest members are one gap longer than anything
/// tracked and are taken to be absent; this holds when no window of length
/// `J + 1` with the same sum occurs, which [`ConstellationCounts::from_cycle`]
/// guarantees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstellationCounts {
    pub stage_prime: u64,
    counts: BTreeMap<Constellation, BigUint>,
}

impl ConstellationCounts {
    pub fn new(stage_prime: u64, counts: BTreeMap<Constellation, BigUint>) -> Self {
        ConstellationCounts {
            stage_prime,
            counts,
        }
    }

    /// Every composition of `g` into even parts, up to the longest occurring
    /// length in `cycle`, with its number of cyclic occurrences.
    pub fn from_cycle(cycle: &GapCycle, g: u32) -> Result<Self> {
        if g < 2 || !g.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "gap must be even and >= 2, got {g}"
            )));
        }
        let gaps = cycle.gaps();
        let n = gaps.len();
        let mut seen: HashMap<Vec<u16>, u64> = HashMap::new();
        let mut window = Vec::new();
        for i in 0..n {
            window.clear();
            let mut sum = 0u32;
            for k in 0..n.min(g as usize / 2) {
                let x = gaps[(i + k) % n];
                sum += x as u32;
                if sum > g {
                    break;
                }
                window.push(x);
                if sum == g {
                    *seen.entry(window.clone()).or_insert(0) += 1;
                    break;
                }
            }
        }
        let max_len = seen.keys().map(|k| k.len()).max().unwrap_or(0);
        let mut counts = BTreeMap::new();
        for comp in compositions(g, max_len) {
            let c = seen.get(&comp).copied().unwrap_or(0);
            counts.insert(Constellation::from_valid(comp), BigUint::from(c));
        }
        Ok(ConstellationCounts {
            stage_prime: cycle.stage_prime(),
            counts,
        })
    }

    pub fn get(&self, s: &Constellation) -> Option<&BigUint> {
        self.counts.get(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Constellation, &BigUint)> {
        self.counts.iter()
    }

    pub fn max_len(&self) -> usize {
        self.counts.keys().map(|s| s.len()).max().unwrap_or(0)
    }

    /// Counts summed over all tracked constellations of each length
    /// `1 ..= J` with span `g`.
    pub fn totals_by_length(&self, g: u32) -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); self.max_len()];
        for (s, c) in &self.counts {
            if s.sum() == g {
                out[s.len() - 1] += c;
            }
        }
        out
    }
}

/// Compositions of `g` into even parts with at most `max_parts` parts.
fn compositions(g: u32, max_parts: usize) -> Vec<Vec<u16>> {
    fn rec(rest: u32, max_parts: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if cur.len() == max_parts {
            return;
        }
        let mut x = 2;
        while x <= rest {
            cur.push(x as u16);
            rec(rest - x, max_parts, cur, out);
            cur.pop();
            x += 2;
        }
    }
    let mut out = Vec::new();
    if max_parts > 0 {
        rec(g, max_parts, &mut Vec::new(), &mut out);
    }
    out
}

fn check_next(stage: u64, p_next: u64) -> Result<()> {
    let expected = next_prime(stage);
    if p_next != expected {
        return Err(Error::InvalidArgument(format!(
            "stage after p = {stage} is {expected}, not {p_next}"
        )));
    }
    Ok(())
}

fn check_hypotheses(what: impl Fn() -> String, len: usize, span: u64, p_next: u64) -> Result<()> {
    if len as u64 + 1 >= p_next {
        return Err(Error::StageTooEarly {
            constellation: what(),
            prime: p_next,
            reason: format!("length {len} is not below p - 1 = {}", p_next - 1),
        });
    }
    if span >= 2 * p_next {
        return Err(Error::StageTooEarly {
            constellation: what(),
            prime: p_next,
            reason: format!("span {span} is not below 2p = {}", 2 * p_next),
        });
    }
    Ok(())
}

/// Advances every tracked count from `p_k` to `p_next`.
pub fn theorem1_step(counts: &ConstellationCounts, p_next: u64) -> Result<ConstellationCounts> {
    check_next(counts.stage_prime, p_next)?;
    let max_len = counts.max_len();
    let mut out = BTreeMap::new();
    for (s, n) in &counts.counts {
        let j = s.len();
        check_hypotheses(|| s.to_string(), j, s.sum() as u64, p_next)?;
        let mut next = n * BigUint::from(p_next - j as u64 - 1);
        if j < max_len {
            for m in driving_terms(s).members {
                match counts.counts.get(&m) {
                    Some(c) => next += c,
                    None => {
                        return Err(Error::NotClosed {
                            target: s.to_string(),
                            missing: m.to_string(),
                        })
                    }
                }
            }
        }
        out.insert(s.clone(), next);
    }
    Ok(ConstellationCounts {
        stage_prime: p_next,
        counts: out,
    })
}

/// `n_{g,j}(p') = (p' - j - 1)·n_{g,j}(p) + j·n_{g,j+1}(p)`, with
/// `n_{g,J+1} = 0`.
pub fn aggregated_step(row: &CensusTable, p_next: u64) -> Result<CensusTable> {
    check_next(row.stage_prime, p_next)?;
    let big_j = row.max_len();
    if big_j > 0 {
        check_hypotheses(
            || format!("n_{{{},{big_j}}}", row.gap),
            big_j,
            row.gap as u64,
            p_next,
        )?;
    }
    let next = (1..=big_j)
        .map(|j| {
            let keep = row.n(j) * BigUint::from(p_next - j as u64 - 1);
            keep + row.n(j + 1) * BigUint::from(j as u64)
        })
        .collect();
    Ok(CensusTable::new(p_next, row.gap, next))
}

/// Repeats [`aggregated_step`] through every prime up to `p_end`.
pub fn advance_row(row: &CensusTable, p_end: u64) -> Result<CensusTable> {
    let mut cur = row.clone();
    loop {
        let p = next_prime(cur.stage_prime);
        if p > p_end {
            return Ok(cur);
        }
        cur = aggregated_step(&cur, p)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gap_cycle::{cycle_for, CycleLimits};

    fn c(v: &[u16]) -> Constellation {
        Constellation::new(v.to_vec()).unwrap()
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn twins_from_13_to_17() {
        let counts = ConstellationCounts::new(13, BTreeMap::from([(c(&[2]), big(1485))]));
        let next = theorem1_step(&counts, 17).unwrap();
        assert_eq!(next.get(&c(&[2])), Some(&big(22275)));
    }

    #[test]
    fn six_system_from_13_to_17() {
        let counts = ConstellationCounts::new(
            13,
            BTreeMap::from([
                (c(&[6]), big(1690)),
                (c(&[2, 4]), big(640)),
                (c(&[4, 2]), big(640)),
            ]),
        );
        let next = theorem1_step(&counts, 17).unwrap();
        assert_eq!(next.get(&c(&[6])), Some(&big(26630)));
    }

    #[test]
    fn zeros_stay_zero() {
        let counts = ConstellationCounts::new(
            13,
            BTreeMap::from([
                (c(&[6]), big(0)),
                (c(&[2, 4]), big(0)),
                (c(&[4, 2]), big(0)),
            ]),
        );
        let next = theorem1_step(&counts, 17).unwrap();
        assert!(next.iter().all(|(_, n)| n.is_zero()));
    }

    #[test]
    fn missing_driving_term_is_reported() {
        let counts = ConstellationCounts::new(
            13,
            BTreeMap::from([(c(&[6]), big(1690)), (c(&[2, 4]), big(640))]),
        );
        match theorem1_step(&counts, 17) {
            Err(Error::NotClosed { missing, .. }) => assert_eq!(missing, "4,2"),
            other => panic!("expected NotClosed, got {other:?}"),
        }
    }

    #[test]
    fn refuses_early_stages() {
        let g11 = cycle_for(11, &CycleLimits::default()).unwrap();
        let counts = ConstellationCounts::from_cycle(&g11, 30).unwrap();
        assert!(matches!(
            theorem1_step(&counts, 13),
            Err(Error::StageTooEarly { .. })
        ));
        let row = CensusTable::new(11, 30, vec![big(1); 3]);
        assert!(matches!(
            aggregated_step(&row, 13),
            Err(Error::StageTooEarly { .. })
        ));
        let row = CensusTable::new(13, 8, vec![big(1); 3]);
        assert!(aggregated_step(&row, 19).is_err());
    }

    #[test]
    fn eight_row_from_13_to_17() {
        let row = CensusTable::new(13, 8, vec![big(394), big(902), big(189)]);
        let next = aggregated_step(&row, 17).unwrap();
        assert_eq!(next.row(), &[big(6812), big(13006), big(2457)]);
        let twins = aggregated_step(&CensusTable::new(13, 2, vec![big(1485)]), 17).unwrap();
        assert_eq!(twins.row(), &[big(22275)]);
        let zero = aggregated_step(&CensusTable::new(13, 20, vec![]), 17).unwrap();
        assert_eq!(zero.max_len(), 0);
    }

    #[test]
    fn per_constellation_sums_match_rows() {
        let g13 = cycle_for(13, &CycleLimits::default()).unwrap();
        for g in [6u32, 8, 12, 16] {
            let counts = ConstellationCounts::from_cycle(&g13, g).unwrap();
            let row = crate::census::census_row(&g13, g, crate::ExecPolicy::Sequential).unwrap();
            assert_eq!(counts.totals_by_length(g), row.row());
            let stepped = theorem1_step(&counts, 17).unwrap();
            let row17 = aggregated_step(&row, 17).unwrap();
            assert_eq!(stepped.totals_by_length(g), row17.row(), "g = {g}");
        }
    }

    #[test]
    fn composition_counts() {
        // compositions of 5 (into parts of 2) with at most 2 parts: 2+8, ..., 10
        assert_eq!(compositions(10, 2).len(), 5);
        assert_eq!(compositions(10, 5).len(), 16);
        assert!(compositions(10, 0).is_empty());
    }
}
