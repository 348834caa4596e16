//! Exact arithmetic in a real quadratic field `Q(√D0)`.
//!
//! Every angle, mean index and fractional-part argument in the crate is an
//! [`ExactScalar`]. Floors, ceilings and signs are decided with integer
//! arithmetic only, so no verdict downstream depends on rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("radicand mismatch: √{left} combined with √{right}")]
    RadicandMismatch { left: u64, right: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand {0} is not a square-free integer greater than 1")]
    BadRadicand(u64),
    #[error("cannot parse exact scalar {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// `a + b√D0` with arbitrary-precision rational `a`, `b`.
///
/// A scalar with `b = 0` is stored with radicand 1 so that rationals mix
/// freely with any field. Two irrational scalars over different radicands
/// cannot be combined.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    rational: BigRational,
    surd: BigRational,
    radicand: u64,
}

pub fn is_square_free(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    let mut m = n;
    while p.saturating_mul(p) <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

impl ExactScalar {
    pub fn new(rational: BigRational, surd: BigRational, radicand: u64) -> Result<Self, FieldError> {
        if surd.is_zero() {
            return Ok(Self::from_rational(rational));
        }
        if !is_square_free(radicand) {
            return Err(FieldError::BadRadicand(radicand));
        }
        Ok(ExactScalar { rational, surd, radicand })
    }

    pub fn from_rational(rational: BigRational) -> Self {
        ExactScalar { rational, surd: BigRational::zero(), radicand: 1 }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(BigRational::new(numer.into(), denom.into()))
    }

    /// `√d`, for a square-free `d > 1`.
    pub fn sqrt(d: u64) -> Result<Self, FieldError> {
        Self::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    /// The field radicand, or 1 for a rational scalar.
    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    pub fn is_irrational(&self) -> bool {
        !self.is_rational()
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.rational.is_integer()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rational)
    }

    fn common_radicand(&self, other: &Self) -> Result<u64, FieldError> {
        match (self.radicand, other.radicand) {
            (l, r) if l == r => Ok(l),
            (1, r) => Ok(r),
            (l, 1) => Ok(l),
            (left, right) => Err(FieldError::RadicandMismatch { left, right }),
        }
    }

    fn build(rational: BigRational, surd: BigRational, radicand: u64) -> Self {
        if surd.is_zero() {
            Self::from_rational(rational)
        } else {
            ExactScalar { rational, surd, radicand }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.common_radicand(other)?;
        Ok(Self::build(&self.rational + &other.rational, &self.surd + &other.surd, d))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.common_radicand(other)?;
        Ok(Self::build(&self.rational - &other.rational, &self.surd - &other.surd, d))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.common_radicand(other)?;
        let dd = BigRational::from_integer(BigInt::from(d));
        let rational = &self.rational * &other.rational + &self.surd * &other.surd * dd;
        let surd = &self.rational * &other.surd + &self.surd * &other.rational;
        Ok(Self::build(rational, surd, d))
    }

    /// `a² - b²D`, the field norm. Nonzero for every nonzero scalar.
    pub fn norm(&self) -> BigRational {
        let dd = BigRational::from_integer(BigInt::from(self.radicand));
        &self.rational * &self.rational - &self.surd * &self.surd * dd
    }

    pub fn conjugate(&self) -> Self {
        Self::build(self.rational.clone(), -&self.surd, self.radicand)
    }

    pub fn try_recip(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let norm = self.norm();
        let conj = self.conjugate();
        Ok(Self::build(&conj.rational / &norm, &conj.surd / &norm, self.radicand))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.common_radicand(other)?;
        self.try_mul(&other.try_recip()?)
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, FieldError> {
        Ok(self.try_sub(other)?.signum())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::build(&self.rational * k, &self.surd * k, self.radicand)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(k.into()))
    }

    /// Exact sign, as an ordering against zero.
    pub fn signum(&self) -> Ordering {
        let a = sign_of(&self.rational);
        let b = sign_of(&self.surd);
        match (a, b) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            // opposite signs: compare a² against b²D
            (x, _) => {
                let dd = BigRational::from_integer(BigInt::from(self.radicand));
                let lhs = &self.rational * &self.rational;
                let rhs = &self.surd * &self.surd * dd;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => x,
                    Ordering::Less => x.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    /// `[x] = max{k ∈ Z : k ≤ x}`.
    pub fn floor(&self) -> BigInt {
        self.floor_of_multiple(&BigInt::one())
    }

    /// `[k·x]` without normalizing the product.
    ///
    /// With `x = (A + B√D)/Q`, `Q > 0`, the value `A + B√D` lies strictly
    /// between the consecutive integers `A + [B√D]` and one more, and no
    /// multiple of `Q` can fall in that open gap; hence
    /// `[x] = [(A + [B√D]) / Q]`.
    pub fn floor_of_multiple(&self, k: &BigInt) -> BigInt {
        if self.is_rational() {
            let q = &self.rational;
            return (q.numer() * k).div_floor(q.denom());
        }
        let a = &self.rational;
        let b = &self.surd;
        let q = a.denom().lcm(b.denom());
        let big_a = a.numer() * (&q / a.denom()) * k;
        let big_b = b.numer() * (&q / b.denom()) * k;
        let root = (&big_b * &big_b * BigInt::from(self.radicand)).sqrt();
        let surd_floor = if big_b.is_negative() { -root - 1 } else { root };
        (big_a + surd_floor).div_floor(&q)
    }

    /// `E(x) = min{k ∈ Z : k ≥ x}`.
    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// `{x} = x - [x]`, in `[0, 1)`.
    pub fn frac(&self) -> ExactScalar {
        self.offset(&self.floor())
    }

    /// `φ(x) = E(x) - [x]`: 0 on integers, 1 elsewhere.
    pub fn phi(&self) -> u8 {
        if self.is_integer() {
            0
        } else {
            1
        }
    }

    pub(crate) fn offset(&self, k: &BigInt) -> ExactScalar {
        Self::build(&self.rational - BigRational::from_integer(k.clone()), self.surd.clone(), self.radicand)
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.rational.to_f64().unwrap_or(f64::NAN);
        let b = self.surd.to_f64().unwrap_or(f64::NAN);
        a + b * (self.radicand as f64).sqrt()
    }

    /// Parses a scalar and also reports the radicand written in the text
    /// (`None` for a plain rational), so callers can enforce a field.
    pub fn parse_with_radicand(input: &str) -> Result<(Self, Option<u64>), FieldError> {
        parse_scalar(input)
    }
}

fn sign_of(q: &BigRational) -> Ordering {
    match q.numer().sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

/// Writes a `BigInt` as a JSON number when it fits in `i64`, else as a string.
pub fn serialize_bigint<S: Serializer>(n: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
    match n.to_i64() {
        Some(v) => serializer.serialize_i64(v),
        None => serializer.collect_str(n),
    }
}

pub fn serialize_bigints<S: Serializer>(v: &[BigInt], serializer: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = serializer.serialize_seq(Some(v.len()))?;
    for n in v {
        match n.to_i64() {
            Some(x) => seq.serialize_element(&x)?,
            None => seq.serialize_element(&n.to_string())?,
        }
    }
    seq.end()
}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialOrd for ExactScalar {
    /// `None` only when the radicands are incompatible.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            /// Panics on a radicand mismatch; use the `try_` variant otherwise.
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                self.$try(rhs).expect(concat!("ExactScalar::", stringify!($method)))
            }
        }
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::build(-&self.rational, -&self.surd, self.radicand)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigInt> for ExactScalar {
    fn from(n: BigInt) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

fn write_ratio(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write_ratio(f, &self.rational);
        }
        if !self.rational.is_zero() {
            write_ratio(f, &self.rational)?;
            if self.surd.is_positive() {
                f.write_str("+")?;
            }
        }
        if (-&self.surd).is_one() {
            f.write_str("-")?;
        } else if !self.surd.is_one() {
            write_ratio(f, &self.surd)?;
        }
        write!(f, "√{}", self.radicand)
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactScalar({self})")
    }
}

fn parse_error(input: &str, reason: impl Into<String>) -> FieldError {
    FieldError::Parse { input: input.to_string(), reason: reason.into() }
}

pub fn parse_rational(input: &str) -> Result<BigRational, FieldError> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(parse_error(input, "empty number"));
    }
    if s.contains(['.', 'e', 'E']) {
        return Err(parse_error(input, "floating-point literals are not exact; write a fraction"));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s.as_str(), None),
    };
    let num = BigInt::from_str(num).map_err(|_| parse_error(input, "bad numerator"))?;
    let den = match den {
        Some(d) => {
            if d.starts_with(['+', '-']) {
                return Err(parse_error(input, "signed denominator"));
            }
            BigInt::from_str(d).map_err(|_| parse_error(input, "bad denominator"))?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(parse_error(input, "zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

fn parse_scalar(input: &str) -> Result<(ExactScalar, Option<u64>), FieldError> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    let (left, right) = if let Some(idx) = s.find('√') {
        (&s[..idx], &s[idx + '√'.len_utf8()..])
    } else if let Some(idx) = s.find("sqrt") {
        (&s[..idx], &s[idx + 4..])
    } else {
        return Ok((ExactScalar::from_rational(parse_rational(&s)?), None));
    };
    let right = right.trim_start_matches('(').trim_end_matches(')');
    let radicand: u64 = right.parse().map_err(|_| parse_error(input, "bad radicand"))?;
    if !is_square_free(radicand) {
        return Err(FieldError::BadRadicand(radicand));
    }
    let left = left.strip_suffix('*').unwrap_or(left);
    // split "a±b" at the last non-leading sign
    let split = left
        .char_indices()
        .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
        .map(|(i, _)| i)
        .next_back();
    let (rat_text, coeff_text) = match split {
        Some(i) => (&left[..i], &left[i..]),
        None => ("", left),
    };
    let rational = if rat_text.is_empty() { BigRational::zero() } else { parse_rational(rat_text)? };
    let coeff = match coeff_text {
        "" | "+" => BigRational::one(),
        "-" => -BigRational::one(),
        other => parse_rational(other)?,
    };
    Ok((ExactScalar::new(rational, coeff, radicand)?, Some(radicand)))
}

impl FromStr for ExactScalar {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scalar(s).map(|(x, _)| x)
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
