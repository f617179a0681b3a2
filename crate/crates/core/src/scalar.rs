//! Evaluation targets for expressions and the elimination domains.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

/// Exact rational numbers: the coefficient field of every expression.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A number type expressions can be evaluated into.
pub trait Scalar: Clone + Debug + Num + Neg<Output = Self> {
    fn from_rational(q: &Rational) -> Self;

    fn powi(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl Scalar for f64 {
    fn from_rational(q: &Rational) -> Self {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    }

    fn powi(&self, e: u32) -> Self {
        f64::powi(*self, e as i32)
    }
}

/// An integral domain with exact division, as needed by fraction-free
/// elimination. Fields implement `exact_div` as ordinary division.
pub trait Domain: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// `self / other`, assuming the division is exact.
    fn exact_div(&self, other: &Self) -> Self;
    /// Size measure used for pivot selection.
    fn complexity(&self) -> (usize, u32) {
        (1, 0)
    }
    fn is_constant(&self) -> bool {
        true
    }
}

impl Domain for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn exact_div(&self, other: &Self) -> Self {
        self / other
    }
}

/// A field: a domain where every nonzero element is invertible.
pub trait Field: Domain {
    fn div(&self, other: &Self) -> Self {
        self.exact_div(other)
    }
    fn neg(&self) -> Self {
        Self::zero().sub(self)
    }
}

impl Field for Rational {}
