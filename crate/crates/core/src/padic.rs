//! Exact integers, 2-adic valuations and residues in `Z/2^L Z`.
//!
//! Residues store their value in a `u64`, so levels are limited to
//! `1..=MAX_LEVEL`. Arithmetic is done with wrapping `u64` operations and a
//! final mask: reduction `Z/2^64 -> Z/2^L` is a ring homomorphism, so this is
//! exact for every supported level.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type ExactInt = BigInt;

/// Largest level a [`Residue`] can carry.
pub const MAX_LEVEL: u32 = 64;

/// 2-adic valuation of an integer; `Infinite` only for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(k) => Some(k),
            Valuation::Infinite => None,
        }
    }
}

// JSON form: a number, or the string "inf"
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ValuationRepr {
    Finite(u64),
    Infinite(String),
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Valuation::Finite(k) => ValuationRepr::Finite(k),
            Valuation::Infinite => ValuationRepr::Infinite("inf".into()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Valuation, D::Error> {
        match ValuationRepr::deserialize(d)? {
            ValuationRepr::Finite(k) => Ok(Valuation::Finite(k)),
            ValuationRepr::Infinite(s) if s == "inf" => Ok(Valuation::Infinite),
            ValuationRepr::Infinite(s) => Err(serde::de::Error::custom(format!("bad valuation {s:?}"))),
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(k) => write!(f, "{k}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Exponent of the largest power of two dividing `a`.
pub fn v2(a: &ExactInt) -> Valuation {
    match a.trailing_zeros() {
        Some(k) => Valuation::Finite(k),
        None => Valuation::Infinite,
    }
}

/// `a mod 2^64` as an unsigned word (two's complement for negatives).
pub(crate) fn wrap_u64(a: &ExactInt) -> u64 {
    let low = a.magnitude().iter_u64_digits().next().unwrap_or(0);
    match a.sign() {
        Sign::Minus => low.wrapping_neg(),
        _ => low,
    }
}

#[inline]
pub(crate) fn mask(level: u32) -> u64 {
    if level >= 64 {
        u64::MAX
    } else {
        (1u64 << level) - 1
    }
}

fn check_level(level: u32) -> Result<()> {
    if level == 0 || level > MAX_LEVEL {
        Err(Error::LevelOutOfRange { level, min: 1, max: MAX_LEVEL })
    } else {
        Ok(())
    }
}

/// An element of `Z/2^L Z` together with its level `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Residue {
    level: u32,
    value: u64,
}

impl Residue {
    /// Builds a residue from a value already in `[0, 2^level)`.
    pub fn new(value: u64, level: u32) -> Result<Residue> {
        check_level(level)?;
        if value & !mask(level) != 0 {
            return Err(Error::InvalidBall(format!("value {value} is not below 2^{level}")));
        }
        Ok(Residue { level, value })
    }

    /// Canonical map `Z -> Z/2^level Z`; negative inputs wrap.
    pub fn reduce(a: &ExactInt, level: u32) -> Result<Residue> {
        check_level(level)?;
        Ok(Residue { level, value: wrap_u64(a) & mask(level) })
    }

    pub fn from_i64(a: i64, level: u32) -> Result<Residue> {
        check_level(level)?;
        Ok(Residue { level, value: (a as u64) & mask(level) })
    }

    pub(crate) fn from_word(word: u64, level: u32) -> Residue {
        debug_assert!((1..=MAX_LEVEL).contains(&level));
        Residue { level, value: word & mask(level) }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Representative in `(-2^(L-1), 2^(L-1)]`.
    pub fn signed(&self) -> i128 {
        let v = self.value as i128;
        let half = 1i128 << (self.level - 1);
        if v > half {
            v - (1i128 << self.level)
        } else {
            v
        }
    }

    /// The two residues at level `L+1` lying over `self`.
    pub fn children(&self) -> Result<(Residue, Residue)> {
        let level = self.level + 1;
        check_level(level)?;
        Ok((
            Residue { level, value: self.value },
            Residue { level, value: self.value | (1u64 << self.level) },
        ))
    }

    /// Image under `Z/2^L -> Z/2^level` for `level <= L`.
    pub fn truncate(&self, level: u32) -> Result<Residue> {
        check_level(level)?;
        if level > self.level {
            return Err(Error::LevelMismatch { left: self.level, right: level });
        }
        Ok(Residue { level, value: self.value & mask(level) })
    }

    fn same_level(&self, other: &Residue) -> Result<()> {
        if self.level == other.level {
            Ok(())
        } else {
            Err(Error::LevelMismatch { left: self.level, right: other.level })
        }
    }

    pub fn try_add(self, other: Residue) -> Result<Residue> {
        self.same_level(&other)?;
        Ok(Residue::from_word(self.value.wrapping_add(other.value), self.level))
    }

    pub fn try_sub(self, other: Residue) -> Result<Residue> {
        self.same_level(&other)?;
        Ok(Residue::from_word(self.value.wrapping_sub(other.value), self.level))
    }

    pub fn try_mul(self, other: Residue) -> Result<Residue> {
        self.same_level(&other)?;
        Ok(Residue::from_word(self.value.wrapping_mul(other.value), self.level))
    }
}

// The operator impls panic on mixed levels, like slice indexing does on
// out-of-range access. Use the `try_*` methods to get an error instead.
impl Add for Residue {
    type Output = Residue;

    fn add(self, rhs: Residue) -> Residue {
        self.try_add(rhs).expect("residue addition across levels")
    }
}

impl Sub for Residue {
    type Output = Residue;

    fn sub(self, rhs: Residue) -> Residue {
        self.try_sub(rhs).expect("residue subtraction across levels")
    }
}

impl Mul for Residue {
    type Output = Residue;

    fn mul(self, rhs: Residue) -> Residue {
        self.try_mul(rhs).expect("residue multiplication across levels")
    }
}

impl Neg for Residue {
    type Output = Residue;

    fn neg(self) -> Residue {
        Residue::from_word(self.value.wrapping_neg(), self.level)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod 2^{}", self.value, self.level)
    }
}

/// `true` iff `2^k` divides `a` (zero is divisible by everything).
pub fn divisible_by_pow2(a: &ExactInt, k: u64) -> bool {
    a.is_zero() || a.trailing_zeros().is_some_and(|t| t >= k)
}
