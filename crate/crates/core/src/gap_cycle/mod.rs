//! The cycle of gaps `G(p#)`: differences between consecutive generators of
//! `Z mod p#`, starting at residue 1 and wrapping back to `1 + p#`.
//!
//! Two independent constructions are provided. [`next_cycle`] applies the
//! three-step recursion (next prime, concatenate copies, close gaps), while
//! [`cycle_from_residues`] sieves the residues directly. They must agree gap for
//! gap.

mod io;

pub use io::{read_cycle, read_cycle_text, write_cycle, write_cycle_text};

use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::One;
use std::fmt;

/// Default ceiling on the number of gaps in a materialized cycle.
pub const DEFAULT_MAX_GAPS: u64 = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleLimits {
    pub max_gaps: u64,
}

impl Default for CycleLimits {
    fn default() -> Self {
        CycleLimits {
            max_gaps: DEFAULT_MAX_GAPS,
        }
    }
}

impl CycleLimits {
    fn check(&self, gaps: u128) -> Result<()> {
        if gaps > self.max_gaps as u128 {
            return Err(Error::Capacity {
                what: format!("gap cycle of {gaps} gaps ({} bytes)", gaps * 2),
                required: gaps,
                limit: self.max_gaps as u128,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapCycle {
    stage_prime: u64,
    gaps: Vec<u16>,
}

impl GapCycle {
    /// Wraps raw gaps, checking that they sum to `p#` and number `φ(p#)`.
    pub fn from_gaps(stage_prime: u64, gaps: Vec<u16>) -> Result<Self> {
        if !crate::prime_engine::is_prime(stage_prime) {
            return Err(Error::NotPrime(stage_prime));
        }
        let len = totient_of_primorial(stage_prime);
        if BigUint::from(gaps.len()) != len {
            return Err(Error::Format(format!(
                "G({stage_prime}#) has {len} gaps, got {}",
                gaps.len()
            )));
        }
        let sum: BigUint = gaps.iter().map(|&g| g as u64).sum::<u64>().into();
        if sum != primorial(stage_prime) {
            return Err(Error::Format(format!(
                "gaps of G({stage_prime}#) sum to {sum}"
            )));
        }
        Ok(GapCycle { stage_prime, gaps })
    }

    pub fn stage_prime(&self) -> u64 {
        self.stage_prime
    }

    pub fn gaps(&self) -> &[u16] {
        &self.gaps
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.gaps.iter().map(|&g| g as u64).sum()
    }

    /// Occurrences of the single gap `g` (not windows).
    pub fn count_gap(&self, g: u16) -> u64 {
        self.gaps.iter().filter(|&&x| x == g).count() as u64
    }

    /// The first gap spans 1 to the next prime.
    pub fn next_prime(&self) -> u64 {
        self.gaps[0] as u64 + 1
    }

    /// Apart from the final 2, the cycle reads the same in both directions.
    pub fn is_symmetric(&self) -> bool {
        match self.gaps.split_last() {
            Some((&2, body)) => body.iter().eq(body.iter().rev()),
            _ => false,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.gaps.len() * 3);
        for (i, g) in self.gaps.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&g.to_string());
        }
        s
    }
}

/// A run of consecutive gaps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constellation {
    gaps: Vec<u16>,
    sum: u32,
}

impl Constellation {
    /// Requires at least one gap, all even and at least 2.
    pub fn new(gaps: Vec<u16>) -> Result<Self> {
        if gaps.is_empty() {
            return Err(Error::InvalidArgument(
                "constellation must have at least one gap".into(),
            ));
        }
        if let Some(bad) = gaps.iter().find(|&&g| g < 2 || g % 2 != 0) {
            return Err(Error::InvalidArgument(format!(
                "constellation gaps must be even and >= 2, got {bad}"
            )));
        }
        Ok(Self::from_valid(gaps))
    }

    pub(crate) fn from_valid(gaps: Vec<u16>) -> Self {
        let sum = gaps.iter().map(|&g| g as u32).sum();
        Constellation { gaps, sum }
    }

    pub fn gaps(&self) -> &[u16] {
        &self.gaps
    }

    /// The number of gaps, `j`.
    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    /// The span `σ(s)`.
    pub fn sum(&self) -> u32 {
        self.sum
    }
}

impl fmt::Display for Constellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.gaps.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// `p#`, the product of all primes up to `p`.
pub fn primorial(p: u64) -> BigUint {
    crate::prime_engine::primes_up_to(p)
        .into_iter()
        .fold(BigUint::one(), |acc, q| acc * q)
}

/// `φ(p#) = Π (q - 1)` over primes `q <= p`.
pub fn totient_of_primorial(p: u64) -> BigUint {
    crate::prime_engine::primes_up_to(p)
        .into_iter()
        .fold(BigUint::one(), |acc, q| acc * (q - 1))
}

/// Hard-coded seeds `G(2#)`, `G(3#)` and `G(5#)`.
pub fn initial_cycle(p: u64) -> Result<GapCycle> {
    let gaps = match p {
        2 => vec![2],
        3 => vec![4, 2],
        5 => vec![6, 4, 2, 4, 2, 4, 6, 2],
        _ => return Err(Error::UnsupportedSeed(p)),
    };
    Ok(GapCycle {
        stage_prime: p,
        gaps,
    })
}

/// `G(p_next#)` from `G(p#)`, where `p_next` is one more than the first gap.
///
/// The `p_next` concatenated copies of the cycle run over the values
/// `1 .. 1 + p_next·p#`. Each residue `r` coprime to `p#` marks the composite
/// `p_next·r` for removal; removing a value adds together the two gaps on
/// either side of it. The removals are visited in ascending order alongside a
/// single pass over the concatenation.
pub fn next_cycle(cycle: &GapCycle, limits: &CycleLimits) -> Result<GapCycle> {
    let p_next = cycle.next_prime();
    let n = cycle.gaps.len();
    let out_len = n as u128 * (p_next as u128 - 1);
    limits.check(out_len)?;
    if (cycle.sum() as u128) * (p_next as u128) >= u64::MAX as u128 {
        return Err(Error::Capacity {
            what: "cycle value coordinate".into(),
            required: cycle.sum() as u128 * p_next as u128,
            limit: u64::MAX as u128,
        });
    }

    let mut out = Vec::with_capacity(out_len as usize);
    // removal targets p_next * r, generated on the fly from the residues of `cycle`
    let mut residue: u64 = 1;
    let mut target_idx = 0usize;
    let mut target = p_next;
    let mut value: u64 = 1;
    let mut acc: u32 = 0;
    for _ in 0..p_next {
        for &g in &cycle.gaps {
            value += g as u64;
            acc += g as u32;
            if target_idx < n && value == target {
                residue += cycle.gaps[target_idx] as u64;
                target_idx += 1;
                target = p_next * residue;
                continue;
            }
            let gap = u16::try_from(acc).map_err(|_| Error::Capacity {
                what: "gap width".into(),
                required: acc as u128,
                limit: u16::MAX as u128,
            })?;
            out.push(gap);
            acc = 0;
        }
    }
    debug_assert_eq!(acc, 0);
    if target_idx != n || out.len() as u128 != out_len {
        return Err(Error::Format(format!(
            "recursion from G({}#) performed {target_idx} closures, expected {n}",
            cycle.stage_prime
        )));
    }
    Ok(GapCycle {
        stage_prime: p_next,
        gaps: out,
    })
}

/// Iterates [`next_cycle`] from the `G(5#)` seed (or a smaller seed) up to `p`.
pub fn cycle_for(p: u64, limits: &CycleLimits) -> Result<GapCycle> {
    if !crate::prime_engine::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut c = initial_cycle(p.min(5))?;
    while c.stage_prime < p {
        c = next_cycle(&c, limits)?;
    }
    Ok(c)
}

/// `G(p#)` by sieving the residues in `[1, 1 + p#]` coprime to `p#`.
pub fn cycle_from_residues(p: u64, limits: &CycleLimits) -> Result<GapCycle> {
    if !crate::prime_engine::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let len = totient_of_primorial(p);
    let len_u128 = u128::try_from(&len).unwrap_or(u128::MAX);
    limits.check(len_u128)?;
    let modulus = u64::try_from(&primorial(p)).map_err(|_| Error::Capacity {
        what: format!("{p}#"),
        required: u128::MAX,
        limit: u64::MAX as u128,
    })?;
    let small = crate::prime_engine::primes_up_to(p);

    const CHUNK: u64 = 1 << 20;
    let mut gaps = Vec::with_capacity(len_u128 as usize);
    let mut struck = vec![false; CHUNK as usize];
    let mut prev: u64 = 1;
    // values 2 ..= modulus + 1; 1 is the origin
    let mut start = 2u64;
    let end = modulus + 1;
    while start <= end {
        let stop = (start + CHUNK - 1).min(end);
        let width = (stop - start + 1) as usize;
        struck[..width].fill(false);
        for &q in &small {
            let mut m = start.div_ceil(q) * q;
            while m <= stop {
                struck[(m - start) as usize] = true;
                m += q;
            }
        }
        for (i, &s) in struck[..width].iter().enumerate() {
            if !s {
                let v = start + i as u64;
                gaps.push((v - prev) as u16);
                prev = v;
            }
        }
        start = stop + 1;
    }
    Ok(GapCycle {
        stage_prime: p,
        gaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const G7: [u16; 48] = [
        10, 2, 4, 2, 4, 6, 2, 6, 4, 2, 4, 6, 6, 2, 6, 4, 2, 6, 4, 6, 8, 4, 2, 4, 2, 4, 8, 6, 4, 6,
        2, 4, 6, 2, 6, 6, 4, 2, 4, 6, 2, 6, 4, 2, 4, 2, 10, 2,
    ];

    #[test]
    fn seeds() {
        assert_eq!(initial_cycle(2).unwrap().gaps(), &[2]);
        assert_eq!(initial_cycle(3).unwrap().gaps(), &[4, 2]);
        assert_eq!(initial_cycle(5).unwrap().gaps(), &[6, 4, 2, 4, 2, 4, 6, 2]);
        assert!(matches!(initial_cycle(7), Err(Error::UnsupportedSeed(7))));
    }

    #[test]
    fn seven_from_five() {
        let g5 = initial_cycle(5).unwrap();
        let g7 = next_cycle(&g5, &CycleLimits::default()).unwrap();
        assert_eq!(g7.stage_prime(), 7);
        assert_eq!(g7.gaps(), &G7);
        assert_eq!(g7.sum(), 210);
    }

    #[test]
    fn three_from_two() {
        let g3 = next_cycle(&initial_cycle(2).unwrap(), &CycleLimits::default()).unwrap();
        assert_eq!(g3, initial_cycle(3).unwrap());
        let g5 = next_cycle(&g3, &CycleLimits::default()).unwrap();
        assert_eq!(g5, initial_cycle(5).unwrap());
    }

    #[test]
    fn residues_small() {
        let l = CycleLimits::default();
        assert_eq!(cycle_from_residues(2, &l).unwrap().gaps(), &[2]);
        assert_eq!(cycle_from_residues(3, &l).unwrap().gaps(), &[4, 2]);
        assert_eq!(
            cycle_from_residues(5, &l).unwrap().gaps(),
            &[6, 4, 2, 4, 2, 4, 6, 2]
        );
        assert_eq!(cycle_from_residues(7, &l).unwrap().gaps(), &G7);
    }

    #[test]
    fn recursion_matches_residues_through_19() {
        let l = CycleLimits::default();
        let mut c = initial_cycle(5).unwrap();
        for p in [7, 11, 13, 17, 19] {
            c = next_cycle(&c, &l).unwrap();
            assert_eq!(c.stage_prime(), p);
            assert_eq!(c, cycle_from_residues(p, &l).unwrap(), "p = {p}");
        }
    }

    #[test]
    fn structural_invariants() {
        let l = CycleLimits::default();
        let mut c = initial_cycle(3).unwrap();
        let mut twins = 1u64;
        loop {
            let p = c.stage_prime();
            assert_eq!(BigUint::from(c.sum()), primorial(p));
            assert_eq!(BigUint::from(c.len()), totient_of_primorial(p));
            assert!(c.is_symmetric(), "p = {p}");
            assert_eq!(c.gaps()[c.len() - 1], 2);
            assert_eq!(c.next_prime(), crate::prime_engine::next_prime(p));
            if p > 3 {
                twins *= p - 2;
            }
            assert_eq!(c.count_gap(2), twins);
            if p == 17 {
                break;
            }
            c = next_cycle(&c, &l).unwrap();
        }
    }

    #[test]
    fn primorials() {
        assert_eq!(primorial(2), BigUint::from(2u32));
        assert_eq!(primorial(5), BigUint::from(30u32));
        assert_eq!(primorial(13), BigUint::from(30030u32));
        assert_eq!(totient_of_primorial(13), BigUint::from(5760u32));
    }

    #[test]
    fn capacity_is_enforced() {
        let l = CycleLimits { max_gaps: 50 };
        let g5 = initial_cycle(5).unwrap();
        assert!(next_cycle(&g5, &l).is_ok());
        let g7 = next_cycle(&g5, &l).unwrap();
        match next_cycle(&g7, &l) {
            Err(Error::Capacity { required, .. }) => assert_eq!(required, 480),
            other => panic!("expected capacity error, got {other:?}"),
        }
        assert!(matches!(
            cycle_from_residues(11, &l),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn from_gaps_validates() {
        assert!(GapCycle::from_gaps(5, vec![6, 4, 2, 4, 2, 4, 6, 2]).is_ok());
        assert!(GapCycle::from_gaps(5, vec![6, 4, 2, 4, 2, 4, 4, 2]).is_err());
        assert!(GapCycle::from_gaps(6, vec![6, 4, 2, 4, 2, 4, 6, 2]).is_err());
    }

    #[test]
    fn constellation_validation() {
        let s = Constellation::new(vec![2, 4, 2]).unwrap();
        assert_eq!(s.sum(), 8);
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_string(), "2,4,2");
        assert!(Constellation::new(vec![]).is_err());
        assert!(Constellation::new(vec![3]).is_err());
        assert!(Constellation::new(vec![0, 2]).is_err());
    }
}
