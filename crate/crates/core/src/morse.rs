//! Morse-type numbers of a finite geodesic configuration and the counting
//! checks built on them.
//!
//! An iterate `c^m` contributes one critical module in degree `i(c^m)` iff
//! `i(c^m) - i(c)` is even; every other iterate contributes nothing.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::betti::{ManifoldClass, OmegaVariant};
use crate::cij::CijTuple;
use crate::field::ExactScalar;
use crate::index::GeodesicRecord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorseError {
    #[error("geodesic {name} has mean index {mean_index}; enumeration needs a positive mean index")]
    NonPositiveMeanIndex { name: String, mean_index: String },
}

/// `(geodesic, m)` of an iterate counted in some degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Contributor {
    pub geodesic: usize,
    pub m: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorseTable {
    pub cutoff: u64,
    /// `M_p` for `0 ≤ p ≤ cutoff`.
    pub values: Vec<u64>,
    /// `M_p(k)`, indexed `[k][p]`.
    pub per_geodesic: Vec<Vec<u64>>,
    /// Contributing iterates per degree.
    pub contributors: Vec<Vec<Contributor>>,
}

impl MorseTable {
    pub fn get(&self, p: u64) -> u64 {
        self.values.get(p as usize).copied().unwrap_or(0)
    }

    /// `Σ_{p ≤ top} (-1)^p M_p`.
    pub fn alternating_sum(&self, top: u64) -> i64 {
        (0..=top.min(self.cutoff)).map(|p| sign(p) * self.get(p) as i64).sum()
    }
}

fn sign(p: u64) -> i64 {
    if p.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Largest `m` with `m·î - L ≤ cutoff`, where `i(c^m) ≥ m·î - L`.
fn enumeration_bound(rec: &GeodesicRecord, cutoff: u64) -> Result<u64, MorseError> {
    let mean = rec.mean_index();
    if !mean.is_positive() {
        return Err(MorseError::NonPositiveMeanIndex { name: rec.name.clone(), mean_index: mean.to_string() });
    }
    let c = rec.decomp.counts();
    let slack = c.r_bar + c.p_minus + c.p_zero + c.q_zero + c.q_plus + 2 * c.r_star;
    let top = ExactScalar::from((cutoff + slack as u64) as i64).try_div(&mean).expect("positive mean index");
    Ok(top.floor().to_u64().unwrap_or(0))
}

pub fn morse_numbers(records: &[GeodesicRecord], cutoff: u64) -> Result<MorseTable, MorseError> {
    let len = cutoff as usize + 1;
    let mut values = vec![0u64; len];
    let mut per_geodesic = Vec::with_capacity(records.len());
    let mut contributors = vec![Vec::new(); len];
    for (k, rec) in records.iter().enumerate() {
        let mut counts = vec![0u64; len];
        let base = BigInt::from(rec.initial_index);
        for m in 1..=enumeration_bound(rec, cutoff)? {
            let idx = rec.index_of_iterate(m);
            if idx.is_negative() || (&idx - &base).is_odd() {
                continue;
            }
            if let Some(p) = idx.to_u64().filter(|&p| p <= cutoff) {
                counts[p as usize] += 1;
                values[p as usize] += 1;
                contributors[p as usize].push(Contributor { geodesic: k, m });
            }
        }
        per_geodesic.push(counts);
    }
    Ok(MorseTable { cutoff, values, per_geodesic, contributors })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MorseFailureKind {
    /// `M_p < b_p`.
    Inequality,
    /// `Σ_{i≤p} (-1)^{p-i} M_i < Σ_{i≤p} (-1)^{p-i} b_i`.
    Alternating,
    /// `M_p ≠ b_p`.
    Equality,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorseFailure {
    pub p: u64,
    pub kind: MorseFailureKind,
    pub morse: i64,
    pub betti: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorseIdentityOutcome {
    pub cutoff: u64,
    pub pass: bool,
    pub first_failure: Option<MorseFailure>,
}

/// Inequalities first over the whole window, then equalities.
pub fn morse_identity_check(manifold: &ManifoldClass, table: &MorseTable) -> MorseIdentityOutcome {
    let cutoff = table.cutoff;
    let betti: Vec<i64> = (0..=cutoff).map(|p| manifold.betti(p, OmegaVariant::Corrected) as i64).collect();
    let morse: Vec<i64> = (0..=cutoff).map(|p| table.get(p) as i64).collect();
    let fail = |p: u64, kind, morse, betti| MorseIdentityOutcome {
        cutoff,
        pass: false,
        first_failure: Some(MorseFailure { p, kind, morse, betti }),
    };
    let (mut alt_m, mut alt_b) = (0i64, 0i64);
    for p in 0..=cutoff {
        let i = p as usize;
        alt_m = morse[i] - alt_m;
        alt_b = betti[i] - alt_b;
        if morse[i] < betti[i] {
            return fail(p, MorseFailureKind::Inequality, morse[i], betti[i]);
        }
        if alt_m < alt_b {
            return fail(p, MorseFailureKind::Alternating, alt_m, alt_b);
        }
    }
    for p in 0..=cutoff {
        let i = p as usize;
        if morse[i] != betti[i] {
            return fail(p, MorseFailureKind::Equality, morse[i], betti[i]);
        }
    }
    MorseIdentityOutcome { cutoff, pass: true, first_failure: None }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Claim2Violation {
    IndexBelowBound { name: String, index: u64, bound: u64 },
    NonPositiveMeanIndex { name: String, mean_index: String },
    /// Number of iterates with index `d - 1`.
    BottomDegreeCount { count: u64 },
    BottomNotFirstIterate { name: String, m: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim2Outcome {
    pub pass: bool,
    pub violations: Vec<Claim2Violation>,
}

pub fn claim2_check(manifold: &ManifoldClass, records: &[GeodesicRecord]) -> Claim2Outcome {
    let bound = manifold.d - 1;
    let mut violations = Vec::new();
    for rec in records {
        if rec.initial_index < bound {
            violations.push(Claim2Violation::IndexBelowBound {
                name: rec.name.clone(),
                index: rec.initial_index,
                bound,
            });
        }
        let mean = rec.mean_index();
        if !mean.is_positive() {
            violations.push(Claim2Violation::NonPositiveMeanIndex { name: rec.name.clone(), mean_index: mean.to_string() });
        }
    }
    if violations.is_empty() {
        let table = morse_numbers(records, bound).expect("mean indices checked");
        let at = &table.contributors[bound as usize];
        if at.len() != 1 {
            violations.push(Claim2Violation::BottomDegreeCount { count: at.len() as u64 });
        }
        for c in at.iter().filter(|c| c.m != 1) {
            violations.push(Claim2Violation::BottomNotFirstIterate { name: records[c.geodesic].name.clone(), m: c.m });
        }
    }
    Claim2Outcome { pass: violations.is_empty(), violations }
}

/// Buckets of `i(c_k^{2m_k})` around `2N`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub plus: Vec<String>,
    pub minus: Vec<String>,
    pub at_2n: Vec<String>,
    /// Odd `d` only: indices at `2N ± 1`, which parity forbids.
    pub unclassified: Vec<String>,
}

impl Classification {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.plus.len(), self.minus.len(), self.at_2n.len())
    }

    pub fn total(&self) -> usize {
        self.plus.len() + self.minus.len() + self.at_2n.len() + self.unclassified.len()
    }

    /// The bucket swap expected of a complementary pair.
    pub fn swapped_with(&self, other: &Classification) -> bool {
        let set = |v: &[String]| {
            let mut v = v.to_vec();
            v.sort();
            v
        };
        set(&self.plus) == set(&other.minus)
            && set(&self.minus) == set(&other.plus)
            && set(&self.at_2n) == set(&other.at_2n)
    }
}

pub fn classify_counts(manifold: &ManifoldClass, records: &[GeodesicRecord], tuple: &CijTuple) -> Classification {
    let two_n = BigInt::from(2 * tuple.n);
    let gap = if manifold.d_is_even() { 1 } else { 2 };
    let mut out = Classification::default();
    for (rec, entry) in records.iter().zip(&tuple.entries) {
        let idx = rec.index_of_iterate(2 * entry.m);
        let name = rec.name.clone();
        if idx >= &two_n + gap {
            out.plus.push(name);
        } else if idx <= &two_n - gap {
            out.minus.push(name);
        } else if idx == two_n && !manifold.d_is_even() {
            out.at_2n.push(name);
        } else {
            out.unclassified.push(name);
        }
    }
    out
}

/// Predicted bucket sizes in the finite case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PredictedCounts {
    pub plus: u64,
    pub minus: u64,
    pub at_2n: u64,
    pub q: u64,
}

pub fn predicted_counts(manifold: &ManifoldClass) -> PredictedCounts {
    if manifold.d_is_even() {
        let half = manifold.d * manifold.n * (manifold.n + 1) / 4;
        PredictedCounts { plus: half, minus: half, at_2n: 0, q: 2 * half }
    } else {
        let half = (manifold.d - 1) / 2;
        PredictedCounts { plus: half, minus: half, at_2n: 2, q: manifold.d + 1 }
    }
}

/// Direct signed count `Σ_{m ≤ 2m_k} (-1)^{i(c^m)} [i(c^m) - i(c) even]`.
pub fn signed_iterate_count(rec: &GeodesicRecord, two_mk: u64) -> i64 {
    let base = BigInt::from(rec.initial_index);
    (1..=two_mk)
        .map(|m| rec.index_of_iterate(m))
        .filter(|idx| (idx - &base).is_even())
        .map(|idx| if idx.is_even() { 1 } else { -1 })
        .sum()
}

/// Both sides of the alternating-sum identity over the proof's window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowIdentity {
    /// `2N` (even `d`) or `2N + 1` (odd `d`).
    pub top: u64,
    /// `Σ_{p ≤ top} (-1)^p M_p`.
    pub morse_side: i64,
    /// `Σ 2 m_k γ_k` minus the contribution of iterates `c_k^{2m_k}` above `top`.
    pub tuple_side: i64,
    pub pass: bool,
}

pub fn window_identity(manifold: &ManifoldClass, records: &[GeodesicRecord], tuple: &CijTuple) -> Result<WindowIdentity, MorseError> {
    let top = if manifold.d_is_even() { 2 * tuple.n } else { 2 * tuple.n + 1 };
    let table = morse_numbers(records, top)?;
    let morse_side = table.alternating_sum(top);
    let mut tuple_side = 0i64;
    for (rec, entry) in records.iter().zip(&tuple.entries) {
        tuple_side += entry.m as i64 * rec.gamma().doubled();
        let idx = rec.index_of_iterate(2 * entry.m);
        let contributes = (&idx - BigInt::from(rec.initial_index)).is_even();
        if contributes && idx > BigInt::from(top) {
            tuple_side -= if idx.is_even() { 1 } else { -1 };
        }
    }
    Ok(WindowIdentity { top, morse_side, tuple_side, pass: morse_side == tuple_side })
}

/// `Σ_{p ≤ top} (-1)^p b_p`.
pub fn betti_alternating_sum(manifold: &ManifoldClass, top: u64) -> i64 {
    (0..=top).map(|p| sign(p) * manifold.betti(p, OmegaVariant::Corrected) as i64).sum()
}
