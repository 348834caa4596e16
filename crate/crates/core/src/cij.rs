//! Search and verification of common index jump tuples `(N, m_1, …, m_q)`.
//!
//! Candidates are multiples `N` of `M_0` whose fractional parts
//! `{N/(M̄ î_k)}` lie within `ε` of `χ_k ∈ {0, 1}`; all tests are exact.
//! By default a candidate is only accepted once the iterate relations have
//! been checked by direct index evaluation, since the fractional condition
//! alone does not control every rotation angle.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::betti::{resonance_check, ManifoldClass};
use crate::field::ExactScalar;
use crate::index::{mbar_threshold, GeodesicRecord, IndexError};
use crate::normal_form::ValidationMode;

pub const DEFAULT_WINDOW: u64 = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CijError {
    #[error("epsilon must be positive, got {0}")]
    BadEpsilon(String),
    #[error("no geodesics to search over")]
    Empty,
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("no admissible N ≤ {n_max} with M0 = {m0}")]
    Exhausted { n_max: u64, m0: u64 },
    #[error("verification failed at N = {n}: {failure}")]
    Verification { n: u64, failure: VerificationFailure },
    #[error("no complementary tuple with N' ≤ {n_max}")]
    PairExhausted { n_max: u64 },
}

/// `(m̄, M_0, M̄)` plus what they were derived from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchConstants {
    pub mbar: u64,
    pub m0: u64,
    pub mbar_period: u64,
}

/// Default `M_0`: `D` for even `d`, `d - 1` for odd `d`.
pub fn default_m0(manifold: &ManifoldClass) -> u64 {
    if manifold.d_is_even() {
        manifold.big_d()
    } else {
        manifold.d - 1
    }
}

pub fn mbar_m0_mbar(
    manifold: &ManifoldClass,
    records: &[GeodesicRecord],
    m0_override: Option<u64>,
) -> Result<SearchConstants, CijError> {
    let mbar = mbar_threshold(records)?;
    let mut period = BigInt::one();
    for rec in records {
        period = period.lcm(&rec.decomp.rational_angle_period());
    }
    let m0 = m0_override.unwrap_or_else(|| default_m0(manifold));
    Ok(SearchConstants { mbar, m0, mbar_period: period.to_u64().expect("M̄ fits in u64") })
}

/// `true` when `2 M_0 B(d, n)` is an even integer, so the same holds for every multiple.
pub fn m0_makes_even(manifold: &ManifoldClass, m0: u64) -> bool {
    let v = manifold.resonance_constant() * BigRational::from_integer(BigInt::from(2 * m0));
    v.is_integer() && v.to_integer().is_even()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Three-gap stepping when some `1/(M̄ î_k)` is irrational, else scan.
    #[default]
    Auto,
    Scan,
    ThreeGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Admissibility {
    /// Skip candidates whose iterate relations fail.
    #[default]
    Verified,
    /// Take the first candidate meeting the fractional condition and
    /// report a verification failure if its relations break.
    FractionalOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    pub epsilon: BigRational,
    pub n_max: u64,
    pub m0: Option<u64>,
    pub window: u64,
    pub strategy: Strategy,
    pub admissibility: Admissibility,
}

impl SearchParams {
    pub fn new(epsilon: BigRational, n_max: u64) -> Self {
        SearchParams {
            epsilon,
            n_max,
            m0: None,
            window: DEFAULT_WINDOW,
            strategy: Strategy::Auto,
            admissibility: Admissibility::Verified,
        }
    }
}

/// One relation family checked over a range of `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: &'static str,
    pub m_from: u64,
    pub m_to: u64,
    pub holds: bool,
    /// Smallest slack of an inequality family; `None` for equalities.
    pub min_margin: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationFailure {
    pub geodesic: String,
    pub relation: &'static str,
    pub m: u64,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for VerificationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: relation {} at m = {}: expected {}, found {}",
            self.geodesic, self.relation, self.m, self.expected, self.found
        )
    }
}

fn ser_big<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    crate::field::serialize_bigint(n, s)
}

fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(q)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TupleEntry {
    pub name: String,
    pub m: u64,
    pub chi: u8,
    /// `{N/(M̄ î_k)}`.
    pub frac: ExactScalar,
    pub delta: u64,
    pub c_total: u32,
    pub s_plus_one: u32,
    #[serde(serialize_with = "ser_big")]
    pub index_at_2m: BigInt,
    pub checks: Vec<RelationCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CijTuple {
    pub n: u64,
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: BigRational,
    pub constants: SearchConstants,
    pub entries: Vec<TupleEntry>,
}

impl CijTuple {
    pub fn ms(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.m).collect()
    }

    pub fn chis(&self) -> Vec<u8> {
        self.entries.iter().map(|e| e.chi).collect()
    }

    pub fn deltas(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.delta).collect()
    }

    /// `Δ_k + Δ'_k = C(M_k)` for every `k`.
    pub fn complements(&self, other: &CijTuple) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.delta + b.delta == u64::from(a.c_total))
    }
}

/// `floor(t·v)` for a fixed `v = (a + b√d)/q`, without rebuilding scalars.
#[derive(Debug, Clone)]
struct Probe {
    a: BigInt,
    b: BigInt,
    q: BigInt,
    d: BigInt,
}

impl Probe {
    fn new(v: &ExactScalar) -> Self {
        let (ra, rb) = (v.rational_part(), v.surd_part());
        let q = ra.denom().lcm(rb.denom());
        Probe {
            a: ra.numer() * (&q / ra.denom()),
            b: rb.numer() * (&q / rb.denom()),
            q,
            d: BigInt::from(v.radicand()),
        }
    }

    fn floor(&self, t: &BigInt) -> BigInt {
        let mut acc = &self.a * t;
        if !self.b.is_zero() {
            let c = &self.b * t;
            let root = (&c * &c * &self.d).sqrt();
            acc += if c.is_negative() { -root - 1 } else { root };
        }
        acc.div_floor(&self.q)
    }
}

/// Exact test of `|{t·v} - χ| < ε` for both `χ`.
#[derive(Debug, Clone)]
struct FracTest {
    v: Probe,
    /// `v·e₂`, where `ε = e₁/e₂`.
    w: Probe,
    neg_w: Probe,
    e1: BigInt,
    e2: BigInt,
}

impl FracTest {
    fn new(v: &ExactScalar, epsilon: &BigRational) -> Self {
        let e2 = epsilon.denom().clone();
        let w = v.scale(&BigRational::from_integer(e2.clone()));
        FracTest { v: Probe::new(v), w: Probe::new(&w), neg_w: Probe::new(&-w), e1: epsilon.numer().clone(), e2 }
    }

    /// `{tv} < ε  ⇔  ⌊t·w⌋ < ⌊tv⌋·e₂ + e₁`.
    fn below(&self, t: &BigInt) -> bool {
        self.w.floor(t) < self.v.floor(t) * &self.e2 + &self.e1
    }

    /// `{tv} > 1 - ε  ⇔  ⌊-t·w⌋ < e₁ - (⌊tv⌋ + 1)·e₂`.
    fn above(&self, t: &BigInt) -> bool {
        self.neg_w.floor(t) < &self.e1 - (self.v.floor(t) + 1) * &self.e2
    }

    /// `χ` for which `t` is admissible, preferring 0.
    fn chi(&self, t: &BigInt) -> Option<u8> {
        if self.below(t) {
            Some(0)
        } else if self.above(t) {
            Some(1)
        } else {
            None
        }
    }
}

/// Smallest `g ≥ 1` with `{g·v} < len` (or `{g·v} > 1 - len` when
/// `upper`), searched up to `cap`.
fn first_visit(v: &ExactScalar, len: &BigRational, upper: bool, cap: u64) -> Option<u64> {
    let test = FracTest::new(v, len);
    (1..=cap).find(|&g| {
        let t = BigInt::from(g);
        if upper {
            test.above(&t)
        } else {
            test.below(&t)
        }
    })
}

struct Searcher<'a> {
    records: &'a [GeodesicRecord],
    consts: SearchConstants,
    epsilon: BigRational,
    window: u64,
    tests: Vec<FracTest>,
    /// `1/(M̄ î_k)`.
    ratios: Vec<ExactScalar>,
    bumpy: bool,
}

impl<'a> Searcher<'a> {
    fn new(records: &'a [GeodesicRecord], consts: SearchConstants, params: &SearchParams) -> Result<Self, CijError> {
        if !params.epsilon.is_positive() {
            return Err(CijError::BadEpsilon(params.epsilon.to_string()));
        }
        if records.is_empty() {
            return Err(CijError::Empty);
        }
        let period = ExactScalar::from(consts.mbar_period as i64);
        let mut ratios = Vec::with_capacity(records.len());
        for rec in records {
            let mean = rec.mean_index();
            if !mean.is_positive() {
                return Err(IndexError::NonPositiveMeanIndex { name: rec.name.clone(), mean_index: mean.to_string() }.into());
            }
            ratios.push(period.try_mul(&mean).and_then(|p| p.try_recip()).expect("nonzero mean index"));
        }
        let tests = ratios.iter().map(|v| FracTest::new(v, &params.epsilon)).collect();
        let bumpy = records.iter().all(|r| r.decomp.validate(r.decomp.symplectic_dim(), ValidationMode::Bumpy).is_empty());
        Ok(Searcher { records, consts, epsilon: params.epsilon.clone(), window: params.window, tests, ratios, bumpy })
    }

    fn fractional(&self, n: u64) -> Option<Vec<u8>> {
        let t = BigInt::from(n);
        self.tests.iter().map(|test| test.chi(&t)).collect()
    }

    fn ms(&self, n: u64, chis: &[u8]) -> Option<Vec<u64>> {
        let t = BigInt::from(n);
        self.tests
            .iter()
            .zip(chis)
            .map(|(test, &chi)| {
                let m = (test.v.floor(&t) + BigInt::from(chi)) * BigInt::from(self.consts.mbar_period);
                m.to_u64().filter(|&m| m >= 1)
            })
            .collect()
    }

    /// Fractional candidate at `n`, verified.
    fn candidate(&self, n: u64) -> Option<Result<CijTuple, VerificationFailure>> {
        let chis = self.fractional(n)?;
        let ms = match self.ms(n, &chis) {
            Some(ms) => ms,
            None => {
                return Some(Err(VerificationFailure {
                    geodesic: String::new(),
                    relation: "m_positive",
                    m: 0,
                    expected: "m_k ≥ 1".into(),
                    found: "m_k = 0".into(),
                }))
            }
        };
        Some(self.build(n, &chis, &ms))
    }

    fn build(&self, n: u64, chis: &[u8], ms: &[u64]) -> Result<CijTuple, VerificationFailure> {
        let mut entries = Vec::with_capacity(ms.len());
        for (k, rec) in self.records.iter().enumerate() {
            let (checks, delta, idx) = verify_one(rec, n, ms[k], self.consts.mbar, self.window, self.bumpy)?;
            let prof = rec.decomp.splitting_profile();
            let frac = self.ratios[k].scale(&BigRational::from_integer(BigInt::from(n))).frac();
            entries.push(TupleEntry {
                name: rec.name.clone(),
                m: ms[k],
                chi: chis[k],
                frac,
                delta,
                c_total: prof.c_total(),
                s_plus_one: prof.plus_at_one(),
                index_at_2m: idx,
                checks,
            });
        }
        Ok(CijTuple { n, epsilon: self.epsilon.clone(), constants: self.consts, entries })
    }

    /// Index of the irrational ratio used for three-gap stepping.
    fn stepping_coordinate(&self) -> Option<usize> {
        self.ratios.iter().position(|r| r.is_irrational())
    }

    /// Multiples `t` of the stepping coordinate hitting the target arc, in order.
    fn hits(&self, k: usize, t_max: u64) -> Option<Vec<u64>> {
        let two_eps = &self.epsilon * BigRational::from_integer(2.into());
        if two_eps >= BigRational::one() {
            return None;
        }
        let m0 = BigRational::from_integer(BigInt::from(self.consts.m0));
        let alpha = self.ratios[k].scale(&m0);
        let test = FracTest::new(&alpha, &self.epsilon);
        let cap = 10_000_000;
        let ga = first_visit(&alpha, &two_eps, false, cap)?;
        let gb = first_visit(&alpha, &two_eps, true, cap)?;
        let steps = [ga.min(gb), ga.max(gb), ga + gb];
        let mut out = Vec::new();
        let mut t = 0u64;
        loop {
            let next = steps
                .iter()
                .map(|g| t + g)
                .find(|&s| test.chi(&BigInt::from(s)).is_some())
                .or_else(|| (t + 1..=t + ga + gb).find(|&s| test.chi(&BigInt::from(s)).is_some()));
            match next {
                Some(s) if s <= t_max => {
                    out.push(s);
                    t = s;
                }
                _ => return Some(out),
            }
        }
    }

    /// Smallest `N ≤ n_max` accepted by `accept`, honoring the admissibility mode.
    fn first<F>(&self, params: &SearchParams, accept: F) -> Result<CijTuple, CijError>
    where
        F: Fn(&CijTuple) -> bool + Sync,
    {
        let m0 = self.consts.m0;
        let t_max = params.n_max / m0;
        let strict = params.admissibility == Admissibility::FractionalOnly;
        let judge = |t: u64| -> Option<Result<CijTuple, CijError>> {
            let n = t * m0;
            match self.candidate(n)? {
                Ok(tuple) if accept(&tuple) => Some(Ok(tuple)),
                Ok(_) => None,
                Err(failure) if strict => Some(Err(CijError::Verification { n, failure })),
                Err(_) => None,
            }
        };
        let stepping = match params.strategy {
            Strategy::Scan => None,
            Strategy::Auto | Strategy::ThreeGap => {
                self.stepping_coordinate().and_then(|k| self.hits(k, t_max))
            }
        };
        let found = match stepping {
            Some(hits) => hits.into_iter().find_map(judge),
            None => (1..=t_max).into_par_iter().find_map_first(judge),
        };
        found.unwrap_or(Err(CijError::Exhausted { n_max: params.n_max, m0 }))
    }
}

/// Checks the iterate relations of one geodesic at `(N, m_k)` and extracts `Δ_k`.
fn verify_one(
    rec: &GeodesicRecord,
    n: u64,
    mk: u64,
    mbar: u64,
    window: u64,
    bumpy: bool,
) -> Result<(Vec<RelationCheck>, u64, BigInt), VerificationFailure> {
    let fail = |relation: &'static str, m: u64, expected: String, found: String| VerificationFailure {
        geodesic: rec.name.clone(),
        relation,
        m,
        expected,
        found,
    };
    let two_n = BigInt::from(2 * n);
    let two_mk = 2 * mk;
    if mbar + 2 > two_mk {
        return Err(fail("mbar_spacing", 0, format!("2m_k ≥ {}", mbar + 2), format!("2m_k = {two_mk}")));
    }
    let prof = rec.decomp.splitting_profile();
    let s_plus = BigInt::from(prof.plus_at_one());
    let c_total = prof.c_total();
    let idx = |m: u64| rec.index_of_iterate(m);
    let mut checks = Vec::new();

    for m in 1..=mbar {
        let nu = rec.nullity_of_iterate(m);
        for (label, mm) in [("nu_minus", two_mk - m), ("nu_plus", two_mk + m)] {
            let found = rec.nullity_of_iterate(mm);
            if found != nu {
                return Err(fail(label, m, nu.to_string(), found.to_string()));
            }
        }
    }
    checks.push(RelationCheck { relation: "nu", m_from: 1, m_to: mbar, holds: true, min_margin: None });

    for m in 1..=mbar {
        let base = idx(m);
        let plus = idx(two_mk + m);
        let expected = &two_n + &base;
        if plus != expected {
            return Err(fail("plus_shift", m, expected.to_string(), plus.to_string()));
        }
        let q = BigInt::from(q_term(rec, mk, m));
        let minus = idx(two_mk - m);
        let expected = &two_n - &base - (&s_plus + q) * 2;
        if minus != expected {
            return Err(fail("minus_shift", m, expected.to_string(), minus.to_string()));
        }
    }
    checks.push(RelationCheck { relation: "plus_shift", m_from: 1, m_to: mbar, holds: true, min_margin: None });
    checks.push(RelationCheck { relation: "minus_shift", m_from: 1, m_to: mbar, holds: true, min_margin: None });

    let at_2m = idx(two_mk);
    let twice_delta = &at_2m - &two_n + &s_plus + BigInt::from(c_total);
    if twice_delta.is_odd() || twice_delta.is_negative() || twice_delta > BigInt::from(2 * c_total) {
        return Err(fail("delta_range", 0, format!("2Δ even in [0, {}]", 2 * c_total), twice_delta.to_string()));
    }
    let delta = (twice_delta / BigInt::from(2)).to_u64().expect("small");
    checks.push(RelationCheck { relation: "delta_range", m_from: 0, m_to: 0, holds: true, min_margin: None });

    if bumpy {
        let i1 = BigInt::from(rec.initial_index);
        let floor_up = &two_n + &i1;
        let mut margin_up: Option<BigInt> = None;
        for m in 1..=window {
            let slack = idx(two_mk + m) - &floor_up;
            if slack.is_negative() {
                return Err(fail("window_plus", m, format!("≥ {floor_up}"), (slack + &floor_up).to_string()));
            }
            margin_up = Some(margin_up.map_or(slack.clone(), |v| v.min(slack)));
        }
        let ceil_down = &two_n - &i1;
        let mut margin_down: Option<BigInt> = None;
        let top = window.min(two_mk - 1);
        for m in 1..=top {
            let slack = &ceil_down - idx(two_mk - m);
            if slack.is_negative() {
                return Err(fail("window_minus", m, format!("≤ {ceil_down}"), (&ceil_down - slack).to_string()));
            }
            margin_down = Some(margin_down.map_or(slack.clone(), |v| v.min(slack)));
        }
        checks.push(RelationCheck {
            relation: "window_plus",
            m_from: 1,
            m_to: window,
            holds: true,
            min_margin: margin_up.and_then(|v| v.to_i64()),
        });
        checks.push(RelationCheck {
            relation: "window_minus",
            m_from: 1,
            m_to: top,
            holds: true,
            min_margin: margin_down.and_then(|v| v.to_i64()),
        });
    }
    Ok((checks, delta, at_2m))
}

/// `Q_k(m)`: `S⁻` over spectrum points with `{2 m_k x} = {m x} = 0`.
fn q_term(rec: &GeodesicRecord, mk: u64, m: u64) -> u32 {
    let prof = rec.decomp.splitting_profile();
    let two_mk = BigRational::from_integer(BigInt::from(2 * mk));
    let mm = BigRational::from_integer(BigInt::from(m));
    prof.entries
        .iter()
        .filter(|e| e.location.scale(&two_mk).is_integer() && e.location.scale(&mm).is_integer())
        .map(|e| e.minus)
        .sum()
}

/// Recomputes the search invariants from a tuple's fields alone.
pub fn recheck_fields(records: &[GeodesicRecord], tuple: &CijTuple) -> bool {
    let c = tuple.constants;
    if !tuple.n.is_multiple_of(c.m0) || records.len() != tuple.entries.len() {
        return false;
    }
    let period = ExactScalar::from(c.mbar_period as i64);
    records.iter().zip(&tuple.entries).all(|(rec, e)| {
        let v = period.try_mul(&rec.mean_index()).and_then(|p| p.try_recip()).expect("positive mean index");
        let x = v.scale(&BigRational::from_integer(BigInt::from(tuple.n)));
        let m_ok = (x.floor() + BigInt::from(e.chi)) * BigInt::from(c.mbar_period) == BigInt::from(e.m);
        let dist = x.frac().offset(&BigInt::from(e.chi));
        let dist = if dist.is_negative() { -dist } else { dist };
        m_ok && e.chi <= 1 && dist < ExactScalar::from(tuple.epsilon.clone())
    })
}

pub fn find_tuple(
    manifold: &ManifoldClass,
    records: &[GeodesicRecord],
    params: &SearchParams,
) -> Result<CijTuple, CijError> {
    let consts = mbar_m0_mbar(manifold, records, params.m0)?;
    let searcher = Searcher::new(records, consts, params)?;
    searcher.first(params, |_| true)
}

/// Smallest verified `N' ≠ N` whose `Δ'` complements the given tuple.
pub fn find_paired_tuple(
    manifold: &ManifoldClass,
    records: &[GeodesicRecord],
    tuple: &CijTuple,
    params: &SearchParams,
) -> Result<CijTuple, CijError> {
    let consts = mbar_m0_mbar(manifold, records, params.m0)?;
    let searcher = Searcher::new(records, consts, params)?;
    let params = SearchParams { admissibility: Admissibility::Verified, ..params.clone() };
    searcher
        .first(&params, |cand| cand.n != tuple.n && tuple.complements(cand))
        .map_err(|e| match e {
            CijError::Exhausted { n_max, .. } => CijError::PairExhausted { n_max },
            other => other,
        })
}

/// `1/(1 + 2 M̄ Σ|γ_k|)`.
pub fn claim3_threshold(records: &[GeodesicRecord], mbar_period: u64) -> BigRational {
    let total: BigRational = records.iter().map(|r| r.gamma().abs()).sum();
    let denom = BigRational::one() + total * BigRational::from_integer(BigInt::from(2 * mbar_period));
    denom.recip()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Claim3Precondition {
    #[error("resonance identity fails")]
    Resonance,
    #[error("epsilon {epsilon} is not below the threshold {threshold}")]
    EpsilonTooLarge { epsilon: String, threshold: String },
    #[error("2NB = {value} is not an even integer")]
    NotEven { value: String },
    #[error(transparent)]
    Betti(#[from] crate::betti::BettiError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim3Outcome {
    pub pass: bool,
    /// `Σ 2 m_k γ_k`.
    pub lhs: i64,
    /// `2 N B(d, n)`.
    pub rhs: i64,
}

pub fn claim3_check(
    manifold: &ManifoldClass,
    records: &[GeodesicRecord],
    tuple: &CijTuple,
) -> Result<Claim3Outcome, Claim3Precondition> {
    let res = resonance_check(manifold, records, &BigRational::zero())?;
    if !res.pass {
        return Err(Claim3Precondition::Resonance);
    }
    let threshold = claim3_threshold(records, tuple.constants.mbar_period);
    if tuple.epsilon >= threshold {
        return Err(Claim3Precondition::EpsilonTooLarge {
            epsilon: tuple.epsilon.to_string(),
            threshold: threshold.to_string(),
        });
    }
    let rhs = manifold.resonance_constant() * BigRational::from_integer(BigInt::from(2 * tuple.n));
    if !rhs.is_integer() || rhs.to_integer().is_odd() {
        return Err(Claim3Precondition::NotEven { value: rhs.to_string() });
    }
    let rhs = rhs.to_integer().to_i64().expect("fits");
    let lhs = records.iter().zip(&tuple.entries).map(|(r, e)| e.m as i64 * r.gamma().doubled()).sum();
    Ok(Claim3Outcome { pass: lhs == rhs, lhs, rhs })
}
