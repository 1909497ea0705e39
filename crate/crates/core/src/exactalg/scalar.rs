use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integers.
pub type Z = BigInt;
/// Rationals.
pub type Q = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingTag {
    Integers,
    Rationals,
}

impl std::fmt::Display for RingTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RingTag::Integers => "Z",
            RingTag::Rationals => "Q",
        })
    }
}

/// Exact scalars: arbitrary-precision integers or reduced rationals.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + Eq + Hash + Send + Sync + Signed + 'static
{
    const RING: RingTag;

    fn from_i64(v: i64) -> Self;
    fn from_integer(v: BigInt) -> Self;
    fn to_rational(&self) -> BigRational;
    /// Exact conversion; fails over ℤ when the rational is not integral.
    fn from_rational(q: &BigRational) -> Result<Self>;
    /// Multiplicative inverse, if it exists in the ring.
    fn inverse(&self) -> Option<Self>;
    /// Scale a sparse row to integer entries. Over ℤ this is the identity;
    /// over ℚ it multiplies by the common denominator, preserving the span.
    fn integer_row(row: &[(usize, Self)]) -> Vec<(usize, BigInt)>;

    fn is_unit(&self) -> bool {
        self.inverse().is_some()
    }

    /// Parse an integer or a `p/q` string.
    fn parse(s: &str) -> Result<Self> {
        let q = parse_rational(s)?;
        Self::from_rational(&q)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not an integer or rational"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl Scalar for BigInt {
    const RING: RingTag = RingTag::Integers;

    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn from_integer(v: BigInt) -> Self {
        v
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }

    fn from_rational(q: &BigRational) -> Result<Self> {
        if q.is_integer() {
            Ok(q.to_integer())
        } else {
            Err(Error::NotInRing(q.to_string()))
        }
    }

    fn inverse(&self) -> Option<Self> {
        (self.abs().is_one()).then(|| self.clone())
    }

    fn integer_row(row: &[(usize, Self)]) -> Vec<(usize, BigInt)> {
        row.to_vec()
    }
}

impl Scalar for BigRational {
    const RING: RingTag = RingTag::Rationals;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_integer(v: BigInt) -> Self {
        BigRational::from_integer(v)
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    fn from_rational(q: &BigRational) -> Result<Self> {
        Ok(q.clone())
    }

    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn integer_row(row: &[(usize, Self)]) -> Vec<(usize, BigInt)> {
        let lcm = row.iter().fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
        row.iter()
            .map(|(j, q)| (*j, q.numer() * (&lcm / q.denom())))
            .collect()
    }
}
