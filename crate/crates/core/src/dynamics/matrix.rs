//! The one-stage system matrix `M_J(p)` and its ordered products over primes.
//!
//! `M_J(p)` is upper bidiagonal with diagonal `a_1 = 1`,
//! `a_j = (p - j - 1)/(p - 2)` and superdiagonal `b_j = j/(p - 2)`. The
//! transfer matrix over `(p_0, p_k]` is `M_J(p_k) · … · M_J(p_1)`; its diagonal
//! holds the products `a_j^k` and its strict upper part the fill-in `β_ij`.

use super::scalar::Scalar;
use crate::prime_engine::{fold_segments, is_prime, PrimeRange, SieveConfig};
use crate::{Error, Result};

fn check_stage(dim: usize, p: u64) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    if p <= dim as u64 + 1 {
        return Err(Error::DegenerateStage { dim, prime: p });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemMatrix<T> {
    pub prime: u64,
    diag: Vec<T>,
    sup: Vec<T>,
}

impl<T: Scalar> SystemMatrix<T> {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `a_j`, 1-based.
    pub fn a(&self, j: usize) -> &T {
        &self.diag[j - 1]
    }

    /// `b_j`, 1-based, for `j < J`.
    pub fn b(&self, j: usize) -> &T {
        &self.sup[j - 1]
    }

    /// Entry `(i, j)`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> T {
        if i == j {
            self.a(i).clone()
        } else if j == i + 1 {
            self.b(i).clone()
        } else {
            T::zero()
        }
    }

    pub fn apply(&self, w: &[T]) -> Vec<T> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let keep = self.diag[i].mul(&w[i]);
                if i + 1 < n {
                    keep.add(&self.sup[i].mul(&w[i + 1]))
                } else {
                    keep
                }
            })
            .collect()
    }
}

fn entries<T: Scalar>(dim: usize, p: u64) -> (Vec<T>, Vec<T>) {
    let diag = (1..=dim)
        .map(|j| {
            if j == 1 {
                T::one()
            } else {
                T::ratio(p - j as u64 - 1, p - 2)
            }
        })
        .collect();
    let sup = (1..dim).map(|j| T::ratio(j as u64, p - 2)).collect();
    (diag, sup)
}

/// `M_J(p)`; requires `J >= 1`, `p` prime and `p > J + 1`.
pub fn build_matrix<T: Scalar>(dim: usize, p: u64) -> Result<SystemMatrix<T>> {
    check_stage(dim, p)?;
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (diag, sup) = entries(dim, p);
    Ok(SystemMatrix {
        prime: p,
        diag,
        sup,
    })
}

/// An accumulated, upper-triangular product of system matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix<T> {
    dim: usize,
    /// Product covers primes in `(from, to]`.
    pub from: u64,
    pub to: u64,
    m: Vec<T>,
}

impl<T: Scalar> TransferMatrix<T> {
    pub fn identity(dim: usize, p0: u64) -> Self {
        let mut m = vec![T::zero(); dim * dim];
        for i in 0..dim {
            m[i * dim + i] = T::one();
        }
        TransferMatrix {
            dim,
            from: p0,
            to: p0,
            m,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `(i, j)`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> &T {
        &self.m[(i - 1) * self.dim + (j - 1)]
    }

    /// Diagonal product `a_j^k`.
    pub fn a(&self, j: usize) -> &T {
        self.entry(j, j)
    }

    /// Fill-in `β_ij^(k)` for `i < j`.
    pub fn beta(&self, i: usize, j: usize) -> &T {
        assert!(i < j, "β is strictly upper triangular");
        self.entry(i, j)
    }

    /// Left-multiplies by `M_J(q)` for the next prime `q`.
    pub fn push_prime(&mut self, q: u64) {
        let d = self.dim;
        let den = q - 2;
        for i in 0..d {
            let a = if i == 0 {
                T::one()
            } else {
                T::ratio(q - i as u64 - 2, den)
            };
            if i + 1 < d {
                let b = T::ratio(i as u64 + 1, den);
                for j in i..d {
                    let v = a
                        .mul(&self.m[i * d + j])
                        .add(&b.mul(&self.m[(i + 1) * d + j]));
                    self.m[i * d + j] = v;
                }
            } else {
                let v = a.mul(&self.m[i * d + i]);
                self.m[i * d + i] = v;
            }
        }
        self.to = q;
    }

    /// `later · earlier`, where `later` continues where `earlier` stops.
    pub fn then(&self, later: &TransferMatrix<T>) -> TransferMatrix<T> {
        assert_eq!(self.dim, later.dim);
        let d = self.dim;
        let mut m = vec![T::zero(); d * d];
        for i in 0..d {
            for j in i..d {
                let mut acc = T::zero();
                for k in i..=j {
                    acc = acc.add(&later.m[i * d + k].mul(&self.m[k * d + j]));
                }
                m[i * d + j] = acc;
            }
        }
        let to = if later.to > later.from {
            later.to
        } else {
            self.to
        };
        TransferMatrix {
            dim: d,
            from: self.from,
            to,
            m,
        }
    }

    pub fn apply(&self, w: &[T]) -> Vec<T> {
        let d = self.dim;
        (0..w.len().min(d))
            .map(|i| {
                (i..w.len().min(d)).fold(T::zero(), |acc, j| acc.add(&self.m[i * d + j].mul(&w[j])))
            })
            .collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> TransferMatrix<U> {
        TransferMatrix {
            dim: self.dim,
            from: self.from,
            to: self.to,
            m: self.m.iter().map(f).collect(),
        }
    }
}

/// Primes in `(p0, p_end]` as a sieve range (which starts at `p0` itself; the
/// callers drop `p0`).
fn span(p0: u64, p_end: u64) -> Result<Option<PrimeRange>> {
    if p_end < p0 {
        return Err(Error::InvalidArgument(format!(
            "p_end = {p_end} precedes p_0 = {p0}"
        )));
    }
    if p_end == p0 {
        return Ok(None);
    }
    PrimeRange::new(p0.max(2), p_end).map(Some)
}

/// `M_J^k` over `(p0, p_end]`, together with snapshots at each checkpoint.
///
/// A snapshot at `c` covers the primes in `(p0, c]`. Segment products are
/// formed independently (concurrently under a parallel policy) and combined
/// in ascending prime order.
pub fn transfer_with_checkpoints<T: Scalar>(
    p0: u64,
    p_end: u64,
    dim: usize,
    checkpoints: &[u64],
    cfg: &SieveConfig,
) -> Result<(TransferMatrix<T>, Vec<TransferMatrix<T>>)> {
    check_stage(dim, p0)?;
    let Some(range) = span(p0, p_end)? else {
        return Ok((TransferMatrix::identity(dim, p0), Vec::new()));
    };
    let mut cuts: Vec<u64> = checkpoints
        .iter()
        .copied()
        .filter(|&c| c > p0 && c <= p_end)
        .collect();
    cuts.sort_unstable();
    cuts.dedup();
    let (total, snaps, _) = fold_segments(
        &range,
        cfg,
        &cuts,
        (TransferMatrix::identity(dim, p0), Vec::new(), 0usize),
        |seg, primes| {
            let mut t = TransferMatrix::identity(dim, seg.start.saturating_sub(1));
            for &q in primes.iter().filter(|&&q| q > p0) {
                t.push_prime(q);
            }
            t
        },
        |(acc, mut snaps, mut next_cut), seg, part| {
            let acc = acc.then(&part);
            while next_cut < cuts.len() && cuts[next_cut] <= seg.end {
                snaps.push(acc.clone());
                next_cut += 1;
            }
            (acc, snaps, next_cut)
        },
    );
    Ok((total, snaps))
}

/// `M_J^k` over the primes in `(p0, p_end]`.
pub fn transfer_matrix<T: Scalar>(
    p0: u64,
    p_end: u64,
    dim: usize,
    cfg: &SieveConfig,
) -> Result<TransferMatrix<T>> {
    transfer_with_checkpoints(p0, p_end, dim, &[], cfg).map(|(t, _)| t)
}

/// `a_j^k = Π (q - j - 1)/(q - 2)` over primes `q` in `(p0, p_end]`.
///
/// Segment products are reduced in ascending order, so the result does not
/// depend on the thread count.
pub fn a_product<T: Scalar>(p0: u64, p_end: u64, j: usize, cfg: &SieveConfig) -> Result<T> {
    check_stage(j, p0)?;
    let Some(range) = span(p0, p_end)? else {
        return Ok(T::one());
    };
    if j == 1 {
        return Ok(T::one());
    }
    Ok(fold_segments(
        &range,
        cfg,
        &[],
        T::one(),
        |_, primes| {
            primes
                .iter()
                .filter(|&&q| q > p0)
                .fold(T::one(), |acc, &q| {
                    acc.mul(&T::ratio(q - j as u64 - 1, q - 2))
                })
        },
        |acc, _, part| acc.mul(&part),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::DoubleDouble;
    use crate::exec::ExecPolicy;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn m2_at_17() {
        let m = build_matrix::<BigRational>(2, 17).unwrap();
        assert_eq!(m.b(1), &q(1, 15));
        assert_eq!(m.a(2), &q(14, 15));
        assert_eq!(m.a(1), &q(1, 1));
    }

    #[test]
    fn m3_general_entries() {
        for p in [17u64, 19, 101] {
            let m = build_matrix::<BigRational>(3, p).unwrap();
            let d = p as i64 - 2;
            assert_eq!(m.b(2), &q(2, d));
            assert_eq!(m.a(3), &q(p as i64 - 4, d));
            assert_eq!(m.entry(1, 3), q(0, 1));
        }
    }

    #[test]
    fn m1_is_identity() {
        let m = build_matrix::<BigRational>(1, 3).unwrap();
        assert_eq!(m.dim(), 1);
        assert_eq!(m.a(1), &q(1, 1));
    }

    #[test]
    fn degenerate_stages() {
        assert!(matches!(
            build_matrix::<f64>(4, 5),
            Err(Error::DegenerateStage { .. })
        ));
        assert!(matches!(
            build_matrix::<f64>(2, 15),
            Err(Error::NotPrime(15))
        ));
        assert!(matches!(
            build_matrix::<f64>(0, 17),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn transfer_13_to_17() {
        let t: TransferMatrix<BigRational> =
            transfer_matrix(13, 17, 2, &SieveConfig::default()).unwrap();
        assert_eq!(t.a(1), &q(1, 1));
        assert_eq!(t.beta(1, 2), &q(1, 15));
        assert_eq!(t.a(2), &q(14, 15));
        assert_eq!(t.entry(2, 1), &q(0, 1));
        assert_eq!((t.from, t.to), (13, 17));
    }

    #[test]
    fn empty_product_is_identity() {
        let t: TransferMatrix<BigRational> =
            transfer_matrix(13, 13, 3, &SieveConfig::default()).unwrap();
        assert_eq!(t, TransferMatrix::identity(3, 13));
        assert_eq!(
            a_product::<f64>(13, 16, 2, &SieveConfig::default()).unwrap(),
            1.0
        );
        assert!(transfer_matrix::<f64>(13, 11, 3, &SieveConfig::default()).is_err());
    }

    #[test]
    fn a_product_at_17() {
        let a: BigRational = a_product(13, 17, 2, &SieveConfig::default()).unwrap();
        assert_eq!(a, q(14, 15));
    }

    #[test]
    fn beta_recursions_for_m3() {
        let t: TransferMatrix<BigRational> =
            transfer_matrix(13, 113, 3, &SieveConfig::default()).unwrap();
        let (mut a2, mut a3) = (q(1, 1), q(1, 1));
        let (mut b12, mut b13, mut b23) = (q(0, 1), q(0, 1), q(0, 1));
        for p in crate::prime_engine::primes_between(13, 113, &SieveConfig::default()).unwrap() {
            let d = p as i64 - 2;
            let nb12 = &b12 + q(1, d) * &a2;
            let nb23 = q(p as i64 - 3, d) * &b23 + q(2, d) * &a3;
            let nb13 = &b13 + q(1, d) * &b23;
            a2 *= q(p as i64 - 3, d);
            a3 *= q(p as i64 - 4, d);
            (b12, b13, b23) = (nb12, nb13, nb23);
        }
        assert_eq!(t.a(2), &a2);
        assert_eq!(t.a(3), &a3);
        assert_eq!(t.beta(1, 2), &b12);
        assert_eq!(t.beta(1, 3), &b13);
        assert_eq!(t.beta(2, 3), &b23);
    }

    #[test]
    fn segmented_product_matches_sequential() {
        let fine = SieveConfig {
            segment_odds: 64,
            policy: ExecPolicy::Parallel,
        };
        let seq = SieveConfig::sequential();
        let a: TransferMatrix<BigRational> = transfer_matrix(13, 3000, 5, &fine).unwrap();
        let b: TransferMatrix<BigRational> = transfer_matrix(13, 3000, 5, &seq).unwrap();
        assert_eq!(a, b);
        let x: f64 = a_product(13, 200_000, 3, &fine).unwrap();
        let y: f64 = a_product(13, 200_000, 3, &fine).unwrap();
        assert_eq!(x.to_bits(), y.to_bits());
    }

    #[test]
    fn checkpoints_are_prefixes() {
        let cfg = SieveConfig {
            segment_odds: 64,
            policy: ExecPolicy::Parallel,
        };
        let (total, snaps) =
            transfer_with_checkpoints::<BigRational>(13, 1000, 3, &[100, 500, 1000, 5000], &cfg)
                .unwrap();
        assert_eq!(snaps.len(), 3);
        assert_eq!(snaps[2], total);
        assert_eq!(snaps[0], transfer_matrix(13, 100, 3, &cfg).unwrap());
        assert_eq!(snaps[0].to, 97);
        assert_eq!(snaps[1], transfer_matrix(13, 500, 3, &cfg).unwrap());
        assert_eq!(total.to, 997);
    }

    #[test]
    fn compensated_agrees_with_exact() {
        let cfg = SieveConfig::default();
        let exact: TransferMatrix<BigRational> = transfer_matrix(13, 2000, 4, &cfg).unwrap();
        let dd: TransferMatrix<DoubleDouble> = transfer_matrix(13, 2000, 4, &cfg).unwrap();
        for i in 1..=4 {
            for j in i..=4 {
                let e = DoubleDouble::from_rational(exact.entry(i, j));
                let rel = (*dd.entry(i, j) - e).to_f64().abs() / e.to_f64();
                assert!(rel < 1e-28, "({i},{j}) rel {rel}");
            }
        }
    }
}
