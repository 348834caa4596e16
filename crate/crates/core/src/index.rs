//! Morse index iteration for closed geodesics.
//!
//! The general iteration formula is evaluated term by term from the block
//! counts of a [`PoincareDecomposition`]; the bumpy elliptic specialization
//! `i(c^m) = m(i - r) + 2 Σ [m x_j] + r` is kept as a separate entry point so
//! the two can be checked against each other.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::field::ExactScalar;
use crate::normal_form::{PoincareDecomposition, ValidationMode, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("invalid decomposition for {name}: {}", join(.violations))]
    InvalidDecomposition { name: String, violations: Vec<Violation> },
    #[error("{name} is not bumpy elliptic: {}", join(.violations))]
    NotBumpyElliptic { name: String, violations: Vec<Violation> },
    #[error("iteration count must be at least 1")]
    ZeroIteration,
    #[error("mean index of {name} is {mean_index}, not positive")]
    NonPositiveMeanIndex { name: String, mean_index: String },
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeodesicRecord {
    pub name: String,
    pub initial_index: u64,
    pub decomp: PoincareDecomposition,
}

/// The invariant `γ_c ∈ {±1/2, ±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gamma {
    positive: bool,
    whole: bool,
}

impl Gamma {
    pub fn new(positive: bool, whole: bool) -> Self {
        Gamma { positive, whole }
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    /// `2γ`, an integer in `{±1, ±2}`.
    pub fn doubled(self) -> i64 {
        let magnitude = if self.whole { 2 } else { 1 };
        if self.positive {
            magnitude
        } else {
            -magnitude
        }
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(self.doubled().into(), 2.into())
    }

    pub fn abs(self) -> BigRational {
        self.to_rational().abs()
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.doubled() {
            2 => f.write_str("1"),
            1 => f.write_str("1/2"),
            -1 => f.write_str("-1/2"),
            _ => f.write_str("-1"),
        }
    }
}

impl Serialize for Gamma {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn big(n: impl Into<BigInt>) -> BigInt {
    n.into()
}

fn times(x: &ExactScalar, m: u64) -> ExactScalar {
    x.scale(&BigRational::from_integer(BigInt::from(m)))
}

fn ceil_of_multiple(x: &ExactScalar, m: &BigInt) -> BigInt {
    -(-x).floor_of_multiple(m)
}

impl GeodesicRecord {
    pub fn new(name: impl Into<String>, initial_index: u64, decomp: PoincareDecomposition) -> Self {
        GeodesicRecord { name: name.into(), initial_index, decomp }
    }

    /// General iteration formula, evaluated without validating the blocks.
    pub fn index_of_iterate(&self, m: u64) -> BigInt {
        let c = self.decomp.counts();
        let i = big(self.initial_index);
        let p = big(c.p_minus + c.p_zero);
        let r_bar = big(c.r_bar);
        let mut out = big(m) * (&i + &p - &r_bar) - &r_bar - &p;
        let mb = big(m);
        for x in self.decomp.rotation_angles() {
            out += ceil_of_multiple(x, &mb) * 2;
        }
        if m.is_multiple_of(2) {
            out -= big(c.q_zero + c.q_plus);
        }
        for a in self.decomp.nontrivial_n2_angles() {
            out += big(2 * times(a, m).phi() as u64);
        }
        out - big(2 * c.r_star)
    }

    /// Bumpy elliptic formula; only meaningful when the decomposition has
    /// irrational `R`/`N2` blocks only.
    pub fn index_of_iterate_elliptic(&self, m: u64) -> BigInt {
        let r = self.decomp.counts().r_bar;
        let mut out = big(m) * (big(self.initial_index) - big(r)) + big(r);
        for x in self.decomp.rotation_angles() {
            out += x.floor_of_multiple(&big(m)) * 2;
        }
        out
    }

    /// `î(c)`, the slope of the iteration formula.
    pub fn mean_index(&self) -> ExactScalar {
        let c = self.decomp.counts();
        let base = self.initial_index as i64 + (c.p_minus + c.p_zero) as i64 - c.r_bar as i64;
        self.decomp
            .rotation_angles()
            .fold(ExactScalar::from(base), |acc, x| acc + x.scale_int(2))
    }

    pub fn gamma(&self) -> Gamma {
        let i1 = big(self.initial_index);
        let i2 = self.index_of_iterate(2);
        let diff: BigInt = i2 - &i1;
        Gamma::new(i1.is_even(), diff.is_even())
    }

    pub fn nullity_of_iterate(&self, m: u64) -> u32 {
        self.decomp.nullity_of_iterate(m)
    }

    /// Verifies `i(c^m) ≡ dn - 1 (mod 2)` for `1 ≤ m ≤ m_max`.
    pub fn parity_check(&self, dn_minus_1: usize, m_max: u64) -> Result<(), ParityCounterexample> {
        let target = (dn_minus_1 % 2) as u32;
        for m in 1..=m_max {
            let index = self.index_of_iterate(m);
            let parity = if index.is_even() { 0 } else { 1 };
            if parity != target {
                return Err(ParityCounterexample { name: self.name.clone(), m, index });
            }
        }
        Ok(())
    }

    /// First `m ≤ m_max` with `i(c^m) < i(c)`, which no metric can realize.
    pub fn monotonicity_violation(&self, m_max: u64) -> Option<u64> {
        let base = big(self.initial_index);
        (1..=m_max).find(|&m| self.index_of_iterate(m) < base)
    }

    /// Lower bound `g(m) ≤ i(c^{m+l}) - i(c^l)` valid for every `l ≥ 1`.
    fn jump_lower_bound(&self, m: u64) -> BigInt {
        let c = self.decomp.counts();
        let slope = big(self.initial_index) + big(c.p_minus + c.p_zero) - big(c.r_bar);
        let mut g = big(m) * slope - big(c.q_zero + c.q_plus);
        for x in self.decomp.rotation_angles() {
            g += x.floor_of_multiple(&big(m)) * 2;
        }
        let rational_n2 = self.decomp.nontrivial_n2_angles().filter(|a| a.is_rational()).count();
        g - big(2 * rational_n2)
    }

    /// Smallest `m*` with `g(m) ≥ 0` for all `m ≥ m*`.
    fn growth_threshold(&self) -> Result<u64, IndexError> {
        let slope = self.mean_index();
        if !slope.is_positive() {
            return Err(IndexError::NonPositiveMeanIndex { name: self.name.clone(), mean_index: slope.to_string() });
        }
        let c = self.decomp.counts();
        let rational_n2 = self.decomp.nontrivial_n2_angles().filter(|a| a.is_rational()).count();
        let defect = ExactScalar::from((2 * c.r_bar + c.q_zero + c.q_plus + 2 * rational_n2) as i64);
        // g(m) ≥ m·î - defect, so everything from the tail on is safe
        let tail = defect.try_div(&slope).expect("positive slope").ceil().max(BigInt::one());
        let tail = tail.to_u64().expect("threshold fits in u64");
        let last_bad = (1..tail).rev().find(|&m| self.jump_lower_bound(m).is_negative());
        Ok(last_bad.map_or(1, |m| m + 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityCounterexample {
    pub name: String,
    pub m: u64,
    #[serde(serialize_with = "crate::field::serialize_bigint")]
    pub index: BigInt,
}

impl fmt::Display for ParityCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: i(c^{}) = {} has the wrong parity", self.name, self.m, self.index)
    }
}

/// General iteration formula with block validation.
pub fn iterate_index_general(rec: &GeodesicRecord, m: u64) -> Result<BigInt, IndexError> {
    if m == 0 {
        return Err(IndexError::ZeroIteration);
    }
    let dim = rec.decomp.symplectic_dim();
    let violations = rec.decomp.validate(dim, ValidationMode::General);
    if !violations.is_empty() {
        return Err(IndexError::InvalidDecomposition { name: rec.name.clone(), violations });
    }
    Ok(rec.index_of_iterate(m))
}

/// Bumpy elliptic iteration formula; rejects any other decomposition.
pub fn iterate_index_elliptic(rec: &GeodesicRecord, m: u64) -> Result<BigInt, IndexError> {
    if m == 0 {
        return Err(IndexError::ZeroIteration);
    }
    let dim = rec.decomp.symplectic_dim();
    let violations = rec.decomp.validate(dim, ValidationMode::BumpyElliptic);
    if !violations.is_empty() {
        return Err(IndexError::NotBumpyElliptic { name: rec.name.clone(), violations });
    }
    Ok(rec.index_of_iterate_elliptic(m))
}

/// A sound upper bound for the growth threshold `m̄`: for `m` at or above
/// the returned value, `i(c^{m+l}) ≥ i(c^l)` for every record and `l ≥ 1`.
pub fn mbar_threshold(records: &[GeodesicRecord]) -> Result<u64, IndexError> {
    records
        .iter()
        .map(GeodesicRecord::growth_threshold)
        .try_fold(1u64, |acc, t| Ok(acc.max(t?)))
}
