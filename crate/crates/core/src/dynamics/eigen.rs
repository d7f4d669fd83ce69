//! The eigenstructure `M_J(p) = R · Λ(p) · L` with `L = R⁻¹`.
//!
//! `R` and `L` are the signed and unsigned Pascal matrices and do not depend
//! on `p`; only `Λ(p) = diag(1, a_2, …, a_J)` does. Everything here is exact.

use super::matrix::build_matrix;
use crate::Result;
use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// A small dense square matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> BigRational) -> Self {
        let data = (0..n * n).map(|k| f(k / n + 1, k % n + 1)).collect();
        DenseMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[(i - 1) * self.n + (j - 1)]
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[(i - 1) * self.n..i * self.n]
    }

    pub fn mul(&self, o: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a * &o.data[k * n + j];
                    out.data[i * n + j] += v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, w: &[BigRational]) -> Vec<BigRational> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| &self.data[i * self.n + j] * &w[j])
                    .sum()
            })
            .collect()
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let w = cells.iter().map(|c| c.len()).max().unwrap_or(1);
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| format!("{:>w$}", cells[i * self.n + j]))
                .collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

fn binom(n: usize, k: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(binomial(n as u128, k as u128)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenDecomposition {
    /// Columns are right eigenvectors: `R_ij = (-1)^(i+j) C(j-1, i-1)`.
    pub r: DenseMatrix,
    /// Rows are left eigenvectors: `L_ij = C(j-1, i-1)`.
    pub l: DenseMatrix,
}

pub fn eigendecomposition(dim: usize) -> EigenDecomposition {
    let r = DenseMatrix::from_fn(dim, |i, j| {
        if i > j {
            BigRational::zero()
        } else if (i + j) % 2 == 0 {
            binom(j - 1, i - 1)
        } else {
            -binom(j - 1, i - 1)
        }
    });
    let l = DenseMatrix::from_fn(dim, |i, j| {
        if i > j {
            BigRational::zero()
        } else {
            binom(j - 1, i - 1)
        }
    });
    EigenDecomposition { r, l }
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.r.dim()
    }

    /// `(1, a_2(p), …, a_J(p))`.
    pub fn eigenvalues(&self, p: u64) -> Result<Vec<BigRational>> {
        let m = build_matrix::<BigRational>(self.dim(), p)?;
        Ok((1..=self.dim()).map(|j| m.a(j).clone()).collect())
    }

    pub fn lambda(&self, p: u64) -> Result<DenseMatrix> {
        let ev = self.eigenvalues(p)?;
        Ok(DenseMatrix::from_fn(self.dim(), |i, j| {
            if i == j {
                ev[i - 1].clone()
            } else {
                BigRational::zero()
            }
        }))
    }

    /// `R · Λ(p) · L`.
    pub fn reconstruct(&self, p: u64) -> Result<DenseMatrix> {
        Ok(self.r.mul(&self.lambda(p)?).mul(&self.l))
    }

    /// Coordinates `L · w` of `w` in the basis of right eigenvectors.
    pub fn coefficients(&self, w: &[BigRational]) -> Vec<BigRational> {
        self.l.mul_vec(w)
    }
}

/// `M_J(p)` as a dense matrix.
pub fn system_dense(dim: usize, p: u64) -> Result<DenseMatrix> {
    let m = build_matrix::<BigRational>(dim, p)?;
    Ok(DenseMatrix::from_fn(dim, |i, j| m.entry(i, j)))
}
