//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the library's arithmetic: quadratic surds are
//! bracketed with 100-digit integer square roots, and the index and Betti
//! formulas are re-evaluated term by term.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use geodesic_audit::index::GeodesicRecord;
use geodesic_audit::normal_form::BlockSpec;
use geodesic_audit::ExactScalar;

pub const DIGITS: u32 = 100;

fn scale() -> BigInt {
    BigInt::from(10).pow(DIGITS)
}

static ROOTS: Mutex<Option<HashMap<u64, BigInt>>> = Mutex::new(None);

/// `⌊√d · 10^DIGITS⌋`.
fn root(d: u64) -> BigInt {
    let mut guard = ROOTS.lock().unwrap();
    let map = guard.get_or_insert_with(HashMap::new);
    map.entry(d)
        .or_insert_with(|| {
            let s = scale();
            (BigInt::from(d) * &s * &s).sqrt()
        })
        .clone()
}

/// Integers `(lo, hi, den)` with `lo/den < m·(a + b√d)·10^DIGITS < hi/den`,
/// or `lo = hi` when `b = 0`.
fn int_bracket(a: &BigRational, b: &BigRational, d: u64, m: &BigInt) -> (BigInt, BigInt, BigInt) {
    let s = scale();
    let den = a.denom().lcm(b.denom());
    let big_a = a.numer() * (&den / a.denom()) * m;
    let big_b = b.numer() * (&den / b.denom()) * m;
    let base = &big_a * &s;
    if big_b.is_zero() {
        return (base.clone(), base, den);
    }
    let lo_root = root(d);
    let (x, y) = (&big_b * &lo_root, &big_b * (lo_root + 1));
    let (lo, hi) = if big_b.is_positive() { (x, y) } else { (y, x) };
    (&base + lo, base + hi, den)
}

/// Open interval `(lo, hi)` containing `(a + b√d)·10^DIGITS`, or the exact
/// value twice when `b = 0`.
pub fn bracket(a: &BigRational, b: &BigRational, d: u64) -> (BigRational, BigRational) {
    let (lo, hi, den) = int_bracket(a, b, d, &BigInt::one());
    (BigRational::new(lo, den.clone()), BigRational::new(hi, den))
}

/// `⌊m·(a + b√d)⌋` from the bracket; panics if the bracket straddles an integer.
pub fn floor_multiple(a: &BigRational, b: &BigRational, d: u64, m: &BigInt) -> BigInt {
    let (lo, hi, den) = int_bracket(a, b, d, m);
    let unit = den * scale();
    let f = lo.div_floor(&unit);
    if lo != hi {
        // open interval: the integer f+1 may be the upper end itself
        assert!(hi <= (&f + 1) * &unit, "bracket too wide for {m}·({a} + {b}√{d})");
    }
    f
}

pub fn floor(a: &BigRational, b: &BigRational, d: u64) -> BigInt {
    floor_multiple(a, b, d, &BigInt::one())
}

/// `|a + b√d| < bound`, decided from the bracket.
pub fn abs_below(a: &BigRational, b: &BigRational, d: u64, bound: i64) -> bool {
    let (lo, hi, den) = int_bracket(a, b, d, &BigInt::one());
    let limit = den * scale() * bound;
    lo > -limit.clone() && hi < limit
}

pub fn floor_of(x: &ExactScalar) -> BigInt {
    floor(x.rational_part(), x.surd_part(), x.radicand())
}

pub fn ceil_of(x: &ExactScalar) -> BigInt {
    -floor(&-x.rational_part(), &-x.surd_part(), x.radicand())
}

fn ceil_of_multiple(x: &ExactScalar, m: &BigInt) -> BigInt {
    -floor_multiple(x.rational_part(), x.surd_part(), x.radicand(), &-m)
}

/// `{x}` approximated from below with `DIGITS` digits, as a rational.
pub fn frac_lower(x: &ExactScalar) -> BigRational {
    let s = BigRational::from_integer(scale());
    let (lo, _) = bracket(x.rational_part(), x.surd_part(), x.radicand());
    lo / s - BigRational::from_integer(floor_of(x))
}

pub fn frac_upper(x: &ExactScalar) -> BigRational {
    let s = BigRational::from_integer(scale());
    let (_, hi) = bracket(x.rational_part(), x.surd_part(), x.radicand());
    hi / s - BigRational::from_integer(floor_of(x))
}

/// Iteration formula evaluated block by block.
pub fn index_term_by_term(rec: &GeodesicRecord, m: u64) -> BigInt {
    let mm = BigInt::from(m);
    let (mut p_minus, mut p_zero, mut q_zero, mut q_plus, mut r_bar, mut r_star) = (0i64, 0i64, 0i64, 0i64, 0i64, 0i64);
    let mut ceil_sum = BigInt::zero();
    let mut phi_sum = BigInt::zero();
    for block in &rec.decomp.blocks {
        match block {
            BlockSpec::N1 { lambda: 1, a: 1 } => p_minus += 1,
            BlockSpec::N1 { lambda: 1, a: 0 } => p_zero += 1,
            BlockSpec::N1 { lambda: -1, a: 0 } => q_zero += 1,
            BlockSpec::N1 { lambda: -1, a: -1 } => q_plus += 1,
            BlockSpec::N1 { .. } | BlockSpec::H { .. } => {}
            BlockSpec::R { angle } => {
                r_bar += 1;
                ceil_sum += ceil_of_multiple(angle, &mm);
            }
            BlockSpec::N2 { angle, nontrivial } => {
                if *nontrivial {
                    r_star += 1;
                    let neg = -&mm;
                    let fl = floor_multiple(angle.rational_part(), angle.surd_part(), angle.radicand(), &mm);
                    let cl = -floor_multiple(angle.rational_part(), angle.surd_part(), angle.radicand(), &neg);
                    if fl != cl {
                        phi_sum += 1;
                    }
                }
            }
        }
    }
    let i = BigInt::from(rec.initial_index);
    let even = if m.is_multiple_of(2) { q_zero + q_plus } else { 0 };
    &mm * (i + p_minus + p_zero - r_bar) + ceil_sum * 2 - r_bar - p_minus - p_zero - even + phi_sum * 2 - 2 * r_star
}

/// `b_i` for odd `d` by listing the degrees that carry homology.
pub fn betti_odd(d: u64, max: u64) -> Vec<u64> {
    let mut b = vec![0u64; max as usize + 1];
    let mut deg = d - 1;
    while deg <= max {
        b[deg as usize] = 1;
        deg += 2;
    }
    let mut k = 2;
    while k * (d - 1) <= max {
        b[(k * (d - 1)) as usize] = 2;
        k += 1;
    }
    b
}

/// `b_i` for even `d`, building the exceptional set by enumeration.
pub fn betti_even(d: u64, n: u64, max: u64) -> Vec<u64> {
    let big_d = d * (n + 1) - 2;
    let mut omega = HashSet::new();
    let mut k1 = 1;
    while k1 * big_d + d - 1 <= max {
        for k2 in 0..n {
            let k = k1 * big_d + k2 * d + d - 1;
            if k % 2 == 1 {
                omega.insert(k);
            }
        }
        k1 += 1;
    }
    (0..=max)
        .map(|i| {
            if i % 2 == 0 || i + 2 <= d {
                0
            } else if i < d - 1 + (n - 1) * d {
                (i - (d - 1)) / d + 1
            } else if omega.contains(&i) {
                n + 1
            } else {
                n
            }
        })
        .collect()
}

fn floor_rat(q: &BigRational) -> BigInt {
    q.numer().div_floor(q.denom())
}

fn frac(q: &BigRational) -> BigRational {
    q - BigRational::from_integer(floor_rat(q))
}

fn r(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// `Θ_{d,n}(k)` for even `d`.
pub fn theta(d: u64, n: u64, k: u64) -> BigRational {
    let (d, n, k) = (d as i64, n as i64, k as i64);
    let big_d = d * (n + 1) - 2;
    let f = frac(&r(k - (d - 1), big_d));
    frac(&(r(big_d, d * n) * &f)) - (r(2, d) + r(d - 2, d * n)) * &f
        - BigRational::from_integer(n.into()) * frac(&(r(big_d, 2) * &f))
        - frac(&(r(big_d, d) * &f))
}

/// Closed-form partial Betti sum for even `d`.
pub fn betti_sum_even_closed(d: u64, n: u64, k: u64) -> BigRational {
    let big_d = (d * (n + 1) - 2) as i64;
    let (di, ni, ki) = (d as i64, n as i64, k as i64);
    r(ni * (ni + 1) * di, 2 * big_d) * BigRational::from_integer((ki - (di - 1)).into()) - r(ni * (ni - 1) * di, 4)
        + BigRational::one()
        + theta(d, n, k)
}

pub fn betti_sum_odd_closed(d: u64, k: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(k / (d - 1) + k / 2)) - r(d as i64 - 1, 2)
}

/// `B(d, n)`.
pub fn resonance_constant(d: u64, n: u64) -> BigRational {
    let (d, n) = (d as i64, n as i64);
    if d % 2 == 0 {
        -r(n * (n + 1) * d, 2 * (d * (n + 1) - 2))
    } else {
        r(d + 1, 2 * (d - 1))
    }
}

/// `2γ` from the first two iterates.
pub fn doubled_gamma(rec: &GeodesicRecord) -> i64 {
    let i1 = index_term_by_term(rec, 1);
    let i2 = index_term_by_term(rec, 2);
    let sign = if i1.is_even() { 1 } else { -1 };
    if (i2 - i1).is_even() {
        2 * sign
    } else {
        sign
    }
}
