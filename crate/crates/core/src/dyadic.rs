//! Exact nonnegative dyadic rationals `numerator · 2^-exponent`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::grade::Grade;

/// A nonnegative rational with a power-of-two denominator, kept canonical:
/// the numerator is odd, or zero with exponent zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicValue {
    numerator: BigUint,
    exponent: i64,
}

impl DyadicValue {
    pub fn new(numerator: impl Into<BigUint>, exponent: i64) -> Self {
        let mut v = Self {
            numerator: numerator.into(),
            exponent,
        };
        v.normalize();
        v
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.numerator.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.numerator >>= tz;
            self.exponent -= tz as i64;
        }
    }

    pub fn zero() -> Self {
        Self::new(0u32, 0)
    }

    pub fn one() -> Self {
        Self::new(1u32, 0)
    }

    /// `2^k` for any integer `k`.
    pub fn pow2(k: i64) -> Self {
        Self {
            numerator: BigUint::one(),
            exponent: -k,
        }
    }

    /// `2^-μ`, with `Top` mapping to zero.
    pub fn from_grade(g: Grade) -> Self {
        match g {
            Grade::Level(n) => Self::pow2(-n),
            Grade::Top => Self::zero(),
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Multiply by `2^k`.
    pub fn scale_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self {
            numerator: self.numerator.clone(),
            exponent: self.exponent - k,
        }
    }

    /// `Some(k)` when the value is exactly `2^k`.
    pub fn log2_exact(&self) -> Option<i64> {
        self.numerator.is_one().then_some(-self.exponent)
    }

    /// `⌈log₂ v⌉` for positive `v`.
    pub fn ceil_log2(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let below = &self.numerator - BigUint::one();
        Some(below.bits() as i64 - self.exponent)
    }

    /// `⌊log₂ v⌋` for positive `v`.
    pub fn floor_log2(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.numerator.bits() as i64 - 1 - self.exponent)
    }

    pub fn to_ratio(&self) -> BigRational {
        let num = BigInt::from(self.numerator.clone());
        if self.exponent >= 0 {
            BigRational::new(num, BigInt::one() << self.exponent as usize)
        } else {
            BigRational::from_integer(num << (-self.exponent) as usize)
        }
    }

    /// Exact conversion from a nonnegative rational whose reduced
    /// denominator is a power of two.
    pub fn from_ratio(r: &BigRational) -> Option<Self> {
        if r.is_negative() {
            return None;
        }
        let denom = r.denom().magnitude();
        if denom.count_ones() != 1 {
            return None;
        }
        let e = denom.trailing_zeros().unwrap_or(0) as i64;
        Some(Self::new(r.numer().magnitude().clone(), e))
    }

    /// `(a − b) ≥ (c − d)` without subtraction: `a + d ≥ c + b`.
    pub fn excess_ge(a: &Self, b: &Self, c: &Self, d: &Self) -> bool {
        a + d >= c + b
    }

    fn aligned(&self, other: &Self) -> (BigUint, BigUint) {
        let e = self.exponent.max(other.exponent);
        (
            &self.numerator << (e - self.exponent) as usize,
            &other.numerator << (e - other.exponent) as usize,
        )
    }
}

impl Add for &DyadicValue {
    type Output = DyadicValue;

    fn add(self, rhs: &DyadicValue) -> DyadicValue {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b) = self.aligned(rhs);
        DyadicValue::new(a + b, self.exponent.max(rhs.exponent))
    }
}

impl Add for DyadicValue {
    type Output = DyadicValue;

    fn add(self, rhs: DyadicValue) -> DyadicValue {
        &self + &rhs
    }
}

impl Ord for DyadicValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        if self.exponent == other.exponent {
            return self.numerator.cmp(&other.numerator);
        }
        // Compare magnitudes first so huge exponent gaps never allocate.
        let fl = self.floor_log2().expect("positive");
        let fr = other.floor_log2().expect("positive");
        if fl != fr {
            return fl.cmp(&fr);
        }
        let (a, b) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent <= 0 {
            write!(f, "{}", &self.numerator << (-self.exponent) as usize)
        } else {
            let den = BigUint::one() << self.exponent as usize;
            write!(f, "{}/{}", self.numerator, den)
        }
    }
}

impl fmt::Debug for DyadicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for DyadicValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
