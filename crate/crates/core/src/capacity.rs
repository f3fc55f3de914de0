//! Exact capacities and rational approximation factors.
//!
//! Every cut value in the crate is an arbitrary-width unsigned integer.
//! Scaling tricks (perturbation, tie-breaking edges) are realized by integer
//! multiplication so no value ever passes through floating point.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Capacity(BigUint);

impl Capacity {
    pub fn zero() -> Self {
        Capacity(BigUint::zero())
    }

    pub fn one() -> Self {
        Capacity(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `base^exp` for small bases (node counts).
    pub fn pow(base: u64, exp: u32) -> Self {
        Capacity(BigUint::from(base).pow(exp))
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn to_u128(&self) -> Option<u128> {
        self.0.to_u128()
    }

    /// Floor division.
    pub fn div_floor(&self, rhs: &Capacity) -> Capacity {
        Capacity(&self.0 / &rhs.0)
    }

    pub fn checked_sub(&self, rhs: &Capacity) -> Option<Capacity> {
        if self.0 >= rhs.0 {
            Some(Capacity(&self.0 - &rhs.0))
        } else {
            None
        }
    }

    pub fn mul_u64(&self, k: u64) -> Capacity {
        Capacity(&self.0 * k)
    }
}

impl From<u64> for Capacity {
    fn from(v: u64) -> Self {
        Capacity(BigUint::from(v))
    }
}

impl From<u32> for Capacity {
    fn from(v: u32) -> Self {
        Capacity(BigUint::from(v))
    }
}

impl From<u128> for Capacity {
    fn from(v: u128) -> Self {
        Capacity(BigUint::from(v))
    }
}

impl From<BigUint> for Capacity {
    fn from(v: BigUint) -> Self {
        Capacity(v)
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for Capacity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::InvalidInput(format!("not a decimal capacity: {s:?}")));
        }
        BigUint::from_str(s)
            .map(Capacity)
            .map_err(|e| Error::InvalidInput(format!("bad capacity {s:?}: {e}")))
    }
}

impl Serialize for Capacity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Capacity {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for Capacity {
    type Output = Capacity;
    fn add(self, rhs: Capacity) -> Capacity {
        Capacity(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Capacity> for &'a Capacity {
    type Output = Capacity;
    fn add(self, rhs: &Capacity) -> Capacity {
        Capacity(&self.0 + &rhs.0)
    }
}

impl AddAssign<&Capacity> for Capacity {
    fn add_assign(&mut self, rhs: &Capacity) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Capacity {
    fn add_assign(&mut self, rhs: Capacity) {
        self.0 += rhs.0;
    }
}

/// Panics on underflow; capacities are never negative.
impl<'a> Sub<&'a Capacity> for &'a Capacity {
    type Output = Capacity;
    fn sub(self, rhs: &Capacity) -> Capacity {
        Capacity(&self.0 - &rhs.0)
    }
}

impl<'a> Mul<&'a Capacity> for &'a Capacity {
    type Output = Capacity;
    fn mul(self, rhs: &Capacity) -> Capacity {
        Capacity(&self.0 * &rhs.0)
    }
}

impl Sum for Capacity {
    fn sum<I: Iterator<Item = Capacity>>(iter: I) -> Self {
        iter.fold(Capacity::zero(), |acc, c| acc + c)
    }
}

impl<'a> Sum<&'a Capacity> for Capacity {
    fn sum<I: Iterator<Item = &'a Capacity>>(iter: I) -> Self {
        let mut acc = BigUint::zero();
        for c in iter {
            acc += &c.0;
        }
        Capacity(acc)
    }
}

/// A nonnegative rational approximation parameter `num/den`.
///
/// All `(1+eps)^k` comparisons are cross-multiplied so they stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

impl Epsilon {
    pub const ZERO: Epsilon = Epsilon { num: 0, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self, Error> {
        if den == 0 {
            return Err(Error::InvalidInput("epsilon denominator is zero".into()));
        }
        let g = gcd(num, den);
        Ok(Epsilon {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// `eps / k`, as used when a caller wants a net factor from a compounded one.
    pub fn divided_by(&self, k: u64) -> Epsilon {
        Epsilon::new(self.num, self.den * k).expect("nonzero denominator")
    }

    /// `a <= (1+eps)^power * b`, exactly.
    pub fn within(&self, a: &Capacity, b: &Capacity, power: u32) -> bool {
        let lhs = &a.0 * BigUint::from(self.den).pow(power);
        let rhs = &b.0 * BigUint::from(self.num + self.den).pow(power);
        lhs <= rhs
    }

    /// `(1+eps) * c` as an exact fraction `(numerator, denominator)`.
    pub fn scale(&self, c: &Capacity) -> (Capacity, u64) {
        (c.mul_u64(self.num + self.den), self.den)
    }
}

impl Default for Epsilon {
    fn default() -> Self {
        Epsilon::ZERO
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    /// Accepts `p/q` or a bare integer `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::InvalidInput(format!("epsilon must look like p/q, got {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        };
        Epsilon::new(num, den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}
