//! Ratio vectors `w_j = n_{g,j}(p) / N_p(2)` and what can be said about them
//! in closed form.

use super::matrix::{build_matrix, TransferMatrix};
use super::scalar::Scalar;
use crate::census::CensusTable;
use crate::prime_engine::{primes_between, SieveConfig};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct RatioVector<T> {
    pub stage_prime: u64,
    /// The gap this vector describes; informational.
    pub gap: u32,
    pub entries: Vec<T>,
}

impl RatioVector<BigRational> {
    /// Normalizes a census row by the stage's count of twin gaps.
    pub fn from_census(row: &CensusTable, twins: &BigUint) -> Result<Self> {
        if twins.is_zero() {
            return Err(Error::DivisionUndefined);
        }
        let den = BigInt::from(twins.clone());
        let entries = row
            .row()
            .iter()
            .map(|n| BigRational::new(BigInt::from(n.clone()), den.clone()))
            .collect();
        Ok(RatioVector {
            stage_prime: row.stage_prime,
            gap: row.gap,
            entries,
        })
    }
}

impl<T: Scalar> RatioVector<T> {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn convert<U: Scalar>(&self, f: impl Fn(&T) -> U) -> RatioVector<U> {
        RatioVector {
            stage_prime: self.stage_prime,
            gap: self.gap,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

/// Applies `M_J(q)` for every prime `q` in `(p0, p_end]`, in ascending order.
pub fn evolve<T: Scalar>(
    w0: &RatioVector<T>,
    p_end: u64,
    cfg: &SieveConfig,
) -> Result<RatioVector<T>> {
    let dim = w0.dim();
    if dim == 0 {
        return Ok(RatioVector {
            stage_prime: p_end.max(w0.stage_prime),
            ..w0.clone()
        });
    }
    if p_end < w0.stage_prime {
        return Err(Error::InvalidArgument(format!(
            "cannot evolve backwards from {} to {p_end}",
            w0.stage_prime
        )));
    }
    if w0.stage_prime <= dim as u64 + 1 {
        return Err(Error::DegenerateStage {
            dim,
            prime: w0.stage_prime,
        });
    }
    let mut w = w0.entries.clone();
    let mut last = w0.stage_prime;
    for q in primes_between(w0.stage_prime, p_end, cfg)? {
        w = build_matrix::<T>(dim, q)?.apply(&w);
        last = q;
    }
    Ok(RatioVector {
        stage_prime: last,
        gap: w0.gap,
        entries: w,
    })
}

/// The limit of `w_1` as `p → ∞`: the sum of the entries of `w0`.
pub fn asymptotic_ratio<T: Scalar>(w0: &RatioVector<T>) -> T {
    w0.entries.iter().fold(T::zero(), |acc, x| acc.add(x))
}

/// `Π (q - 1)/(q - 2)` over the odd primes `q` dividing `g`.
pub fn asymptotic_formula(g: u64) -> Result<BigRational> {
    if g < 2 || !g.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "gap must be even and >= 2, got {g}"
        )));
    }
    let mut rest = g;
    while rest.is_multiple_of(2) {
        rest /= 2;
    }
    let mut out = <BigRational as One>::one();
    let mut q = 3;
    while q * q <= rest {
        if rest.is_multiple_of(q) {
            out *= BigRational::new((q - 1).into(), (q - 2).into());
            while rest.is_multiple_of(q) {
                rest /= q;
            }
        }
        q += 2;
    }
    if rest > 1 {
        out *= BigRational::new((rest - 1).into(), (rest - 2).into());
    }
    Ok(out)
}

/// `L_m · w0 = Σ_{j >= m} C(j - 1, m - 1) w0_j`.
pub fn eigen_coefficient<T: Scalar>(w0: &[T], m: usize) -> T {
    (m..=w0.len()).fold(T::zero(), |acc, j| {
        let c = binomial(j as u64 - 1, m as u64 - 1);
        acc.add(&T::from_u64(c).mul(&w0[j - 1]))
    })
}

/// `Σ_{m=1}^{terms} (-1)^(m+1) a_m^k (L_m · w0)`, the eigen-expansion of
/// `w_1(p_k)` cut after `terms` modes. `terms` is clamped to `len(w0)`, where
/// the sum is exact.
pub fn truncated_ratio<T: Scalar>(
    w0: &[T],
    transfer: &TransferMatrix<T>,
    terms: usize,
) -> Result<T> {
    if terms == 0 {
        return Err(Error::InvalidArgument("at least one term is needed".into()));
    }
    if w0.len() > transfer.dim() {
        return Err(Error::InvalidArgument(format!(
            "ratio vector of length {} needs a transfer matrix of at least that dimension, got {}",
            w0.len(),
            transfer.dim()
        )));
    }
    let terms = terms.min(w0.len());
    Ok(expansion(w0, terms, |m| transfer.a(m).clone()))
}

fn expansion<T: Scalar>(w0: &[T], terms: usize, a: impl Fn(usize) -> T) -> T {
    (1..=terms).fold(T::zero(), |acc, m| {
        let term = a(m).mul(&eigen_coefficient(w0, m));
        if m % 2 == 1 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        }
    })
}

/// The value of `a_2^k` below which the truncated ratio of `w_later` first
/// exceeds that of `w_early` as the sieve proceeds past `transfer.to`.
///
/// Later stages are modelled by keeping the ratios `a_m^k / (a_2^k)^(m-1)`
/// fixed at their values in `transfer`; each `(q-m-1)/(q-2)` factor is
/// `(1 - 1/(q-2))^(m-1)` up to `O(q^-2)`, so these ratios converge. Returns
/// `None` if no crossing is found below the current `a_2^k`.
pub fn crossover_a2(
    w_early: &[f64],
    w_later: &[f64],
    transfer: &TransferMatrix<f64>,
    terms: usize,
) -> Result<Option<f64>> {
    let dim = w_early.len().max(w_later.len());
    if dim > transfer.dim() || dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "crossover needs 2 <= J <= {} modes, got {dim}",
            transfer.dim()
        )));
    }
    let a2 = *transfer.a(2);
    let shape: Vec<f64> = (1..=dim)
        .map(|m| transfer.a(m) / a2.powi(m as i32 - 1))
        .collect();
    let diff = |x: f64| {
        let model = |m: usize| shape[m - 1] * x.powi(m as i32 - 1);
        let t_late = expansion(w_later, terms.min(w_later.len()), model);
        let t_early = expansion(w_early, terms.min(w_early.len()), model);
        t_late - t_early
    };
    if diff(a2) >= 0.0 {
        return Ok(Some(a2));
    }
    let steps = 100_000;
    let mut hi = a2;
    for s in 1..=steps {
        let lo = a2 * (1.0 - s as f64 / steps as f64);
        if diff(lo) >= 0.0 {
            let (mut neg, mut pos) = (hi, lo);
            for _ in 0..200 {
                let mid = 0.5 * (neg + pos);
                if diff(mid) >= 0.0 {
                    pos = mid;
                } else {
                    neg = mid;
                }
            }
            return Ok(Some(0.5 * (neg + pos)));
        }
        hi = lo;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::transfer_matrix;
    use crate::exec::ExecPolicy;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn w_at_13(gap: u32, counts: &[i64]) -> RatioVector<BigRational> {
        RatioVector {
            stage_prime: 13,
            gap,
            entries: counts.iter().map(|&n| q(n, 1485)).collect(),
        }
    }

    #[test]
    fn formula_values() {
        assert_eq!(asymptotic_formula(30).unwrap(), q(8, 3));
        for g in [2, 4, 8, 16, 32] {
            assert_eq!(asymptotic_formula(g).unwrap(), q(1, 1));
        }
        for g in [6, 12, 18, 24] {
            assert_eq!(asymptotic_formula(g).unwrap(), q(2, 1));
        }
        assert_eq!(asymptotic_formula(22).unwrap(), q(10, 9));
        assert_eq!(asymptotic_formula(26).unwrap(), q(12, 11));
        assert!(asymptotic_formula(7).is_err());
    }

    #[test]
    fn asymptotics_from_initial_rows() {
        assert_eq!(
            asymptotic_ratio(&w_at_13(12, &[188, 1276, 1314, 192])),
            q(2, 1)
        );
        assert_eq!(
            asymptotic_ratio(&w_at_13(30, &[0, 0, 10, 194, 1066, 1784, 816, 90])),
            q(8, 3)
        );
        assert_eq!(asymptotic_ratio(&w_at_13(2, &[1485])), q(1, 1));
    }

    #[test]
    fn gap_two_is_fixed() {
        let w = evolve(&w_at_13(2, &[1485]), 1000, &SieveConfig::default()).unwrap();
        assert_eq!(w.entries, vec![q(1, 1)]);
        assert_eq!(w.stage_prime, 997);
    }

    #[test]
    fn six_from_13_to_17_exact() {
        let w = evolve(&w_at_13(6, &[1690, 1280]), 17, &SieveConfig::default()).unwrap();
        // counts in G(17#): n_{6,1} = 26630, n_{6,2} = 17920, N(2) = 22275
        assert_eq!(w.entries, vec![q(26630, 22275), q(17920, 22275)]);
    }

    #[test]
    fn evolve_matches_transfer_and_conserves_sum() {
        let cfg = SieveConfig::default();
        let w0 = w_at_13(30, &[0, 0, 10, 194, 1066, 1784, 816, 90]);
        let mut w = w0.clone();
        let sum0 = asymptotic_ratio(&w0);
        for p_end in [17u64, 29, 53, 97] {
            w = evolve(&w, p_end, &cfg).unwrap();
            assert_eq!(asymptotic_ratio(&w), sum0);
        }
        let t: TransferMatrix<BigRational> = transfer_matrix(13, 97, 8, &cfg).unwrap();
        assert_eq!(t.apply(&w0.entries), w.entries);
    }

    #[test]
    fn truncation_limits() {
        let cfg = SieveConfig {
            policy: ExecPolicy::Sequential,
            ..Default::default()
        };
        let w0 = w_at_13(6, &[1690, 1280]);
        let t: TransferMatrix<BigRational> = transfer_matrix(13, 200, 2, &cfg).unwrap();
        assert_eq!(truncated_ratio(&w0.entries, &t, 1).unwrap(), q(2, 1));
        let full = evolve(&w0, 200, &cfg).unwrap();
        assert_eq!(
            truncated_ratio(&w0.entries, &t, 2).unwrap(),
            full.entries[0]
        );
        assert_eq!(
            truncated_ratio(&w0.entries, &t, 9).unwrap(),
            full.entries[0]
        );
        assert!(truncated_ratio(&w0.entries, &t, 0).is_err());
        let small: TransferMatrix<BigRational> = transfer_matrix(13, 200, 1, &cfg).unwrap();
        assert!(truncated_ratio(&w0.entries, &small, 2).is_err());
    }

    #[test]
    fn expansion_coefficients_for_twelve() {
        let w0 = w_at_13(12, &[188, 1276, 1314, 192]);
        let coeffs: Vec<BigRational> = (1..=4).map(|m| eigen_coefficient(&w0.entries, m)).collect();
        assert_eq!(
            coeffs,
            vec![q(2, 1), q(4480, 1485), q(1890, 1485), q(192, 1485)]
        );
    }

    #[test]
    fn crossover_of_a_vector_with_itself_is_immediate() {
        let t: TransferMatrix<f64> = transfer_matrix(13, 1000, 8, &SieveConfig::default()).unwrap();
        let w = [1690.0 / 1485.0, 1280.0 / 1485.0];
        assert_eq!(crossover_a2(&w, &w, &t, 2).unwrap(), Some(*t.a(2)));
    }

    #[test]
    fn crossover_with_two_terms_is_linear() {
        // with two modes the crossing solves S_30 - a T_30 = S_6 - a T_6
        let t: TransferMatrix<f64> = transfer_matrix(13, 1000, 8, &SieveConfig::default()).unwrap();
        let w6: Vec<f64> = [1690.0, 1280.0].iter().map(|x| x / 1485.0).collect();
        let w30: Vec<f64> = [0.0, 0.0, 10.0, 194.0, 1066.0, 1784.0, 816.0, 90.0]
            .iter()
            .map(|x| x / 1485.0)
            .collect();
        let s = |w: &[f64]| w.iter().sum::<f64>();
        let tt = |w: &[f64]| w.iter().enumerate().map(|(j, x)| j as f64 * x).sum::<f64>();
        let expect = (s(&w30) - s(&w6)) / (tt(&w30) - tt(&w6));
        let got = crossover_a2(&w6, &w30, &t, 2).unwrap().unwrap();
        assert!((got - expect).abs() < 1e-12, "{got} vs {expect}");
    }
}
