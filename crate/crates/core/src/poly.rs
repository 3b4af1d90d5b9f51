//! Integer-coefficient polynomials and the two Chebyshev constructions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::{mask, wrap_u64, ExactInt, Residue};

/// Polynomial with exact integer coefficients, `coeffs[i]` multiplying `x^i`.
///
/// Trailing zeros are always stripped, so the zero polynomial has no
/// coefficients and [`IntPolynomial::degree`] returns `None` for it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<ExactInt>,
}

impl IntPolynomial {
    pub fn from_coeffs(mut coeffs: Vec<ExactInt>) -> IntPolynomial {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::from_coeffs(coeffs.iter().map(|&c| ExactInt::from(c)).collect())
    }

    pub fn zero() -> IntPolynomial {
        IntPolynomial::default()
    }

    pub fn constant(c: ExactInt) -> IntPolynomial {
        IntPolynomial::from_coeffs(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> IntPolynomial {
        IntPolynomial::from_i64s(&[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> ExactInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[ExactInt] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&ExactInt> {
        self.coeffs.last()
    }

    /// Exact evaluation over `Z`.
    pub fn eval(&self, x: &ExactInt) -> ExactInt {
        let mut acc = ExactInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `f(x)` reduced at the level of `x`.
    pub fn eval_mod(&self, x: Residue) -> Residue {
        ReducedPoly::new(self).eval(x)
    }

    pub fn derivative(&self) -> IntPolynomial {
        IntPolynomial::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * ExactInt::from(i))
                .collect(),
        )
    }

    pub fn pow(&self, mut exp: u32) -> IntPolynomial {
        let mut base = self.clone();
        let mut acc = IntPolynomial::constant(ExactInt::one());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self ∘ inner`, by Horner's scheme over polynomials.
    pub fn compose(&self, inner: &IntPolynomial) -> IntPolynomial {
        let mut acc = IntPolynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &IntPolynomial::constant(c.clone());
        }
        acc
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![ExactInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::from_coeffs(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// Renders as e.g. `4*x^3 - 3*x`; the output parses back to the same polynomial.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let monomial = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            if i == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&monomial)?;
            } else {
                write!(f, "{mag}*{monomial}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial with coefficients reduced mod `2^64`, for fast evaluation on
/// residues of any level up to 64.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedPoly {
    words: Vec<u64>,
}

impl ReducedPoly {
    pub fn new(f: &IntPolynomial) -> ReducedPoly {
        ReducedPoly { words: f.coeffs.iter().map(wrap_u64).collect() }
    }

    /// Horner evaluation mod `2^64`; callers mask to the level they need.
    #[inline]
    pub(crate) fn eval_word(&self, x: u64) -> u64 {
        self.words.iter().rev().fold(0u64, |acc, &c| acc.wrapping_mul(x).wrapping_add(c))
    }

    #[inline]
    pub(crate) fn eval_at(&self, x: u64, level: u32) -> u64 {
        self.eval_word(x) & mask(level)
    }

    pub fn eval(&self, x: Residue) -> Residue {
        Residue::from_word(self.eval_word(x.value()), x.level())
    }
}

/// `T_m` from `T_0 = 1`, `T_1 = x`, `T_{j+1} = 2x T_j - T_{j-1}`.
pub fn chebyshev_recurrence(m: u64) -> IntPolynomial {
    let two_x = IntPolynomial::from_i64s(&[0, 2]);
    let mut prev = IntPolynomial::from_i64s(&[1]);
    if m == 0 {
        return prev;
    }
    let mut cur = IntPolynomial::x();
    for _ in 1..m {
        let next = &(&two_x * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `C(n, k)` by the multiplicative formula; every partial product is an integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

/// `T_m` from the explicit sum
/// `sum_k (-1)^k m/(m-k) C(m-k, k) 2^(m-2k-1) x^(m-2k)`, evaluated in exact
/// rationals with each term checked to be an integer.
pub fn chebyshev_closed_form(m: u64) -> Result<IntPolynomial> {
    if m == 0 {
        return Err(Error::InvalidIndex { m, reason: "closed form needs m >= 1" });
    }
    let mut coeffs = vec![BigInt::zero(); m as usize + 1];
    let two = BigRational::from_integer(BigInt::from(2));
    for k in 0..=m / 2 {
        let exponent = m as i64 - 2 * k as i64 - 1;
        // exponent is -1 for the constant term of even m
        let power = two.pow(exponent as i32);
        let mut term = BigRational::new(BigInt::from(m), BigInt::from(m - k))
            * BigRational::from_integer(binomial(m - k, k))
            * power;
        if k % 2 == 1 {
            term = -term;
        }
        if !term.is_integer() {
            return Err(Error::Inconsistent(format!(
                "non-integral term {term} at k = {k} of T_{m}"
            )));
        }
        coeffs[(m - 2 * k) as usize] = term.to_integer();
    }
    Ok(IntPolynomial::from_coeffs(coeffs))
}
