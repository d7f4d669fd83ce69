use super::dd::DoubleDouble;
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::Debug;

/// The arithmetic the dynamic system needs, implemented for exact rationals,
/// plain doubles and double-doubles.
pub trait Scalar: Clone + Debug + PartialOrd + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    /// `num / den` for `den > 0`.
    fn ratio(num: u64, den: u64) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn to_f64(&self) -> f64;

    fn from_u64(n: u64) -> Self {
        Self::ratio(n, 1)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }
    fn from_rational(r: &BigRational) -> Self {
        rational_to_f64(r)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for DoubleDouble {
    fn zero() -> Self {
        DoubleDouble::ZERO
    }
    fn one() -> Self {
        DoubleDouble::ONE
    }
    fn ratio(num: u64, den: u64) -> Self {
        DoubleDouble::ratio(num, den)
    }
    fn from_rational(r: &BigRational) -> Self {
        let hi = rational_to_f64(r);
        let rest = r - BigRational::from_float(hi).unwrap_or_else(<BigRational as Zero>::zero);
        let lo = rational_to_f64(&rest);
        DoubleDouble::from_f64(hi) + DoubleDouble::from_f64(lo)
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub(&self, o: &Self) -> Self {
        *self - *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn to_f64(&self) -> f64 {
        DoubleDouble::to_f64(*self)
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

/// Nearest double to `r` (within one ulp), for rationals of any size.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    let (n, d) = (r.numer(), r.denom());
    if n.is_zero() {
        return 0.0;
    }
    let neg = (n.sign() == Sign::Minus) != (d.sign() == Sign::Minus);
    let (n, d) = (n.magnitude(), d.magnitude());
    // scale so the integer quotient carries 64 significant bits
    let shift = d.bits() as i64 - n.bits() as i64 + 64;
    let q = if shift >= 0 {
        (n << shift as u64) / d
    } else {
        n / (d << (-shift) as u64)
    };
    let v = q.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(-shift as i32);
    if neg {
        -v
    } else {
        v
    }
}
