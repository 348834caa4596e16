//! End-to-end replay of the multiplicity count on one configuration.
//!
//! Checks run in a fixed order and each leaves a verdict. Realizability
//! failures (the Morse identity) are reported, not raised; predicted counts
//! are only compared once every structural check has passed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::betti::{resonance_check, BettiError, ManifoldClass, ResonanceOutcome};
use crate::cij::{
    claim3_check, find_paired_tuple, find_tuple, recheck_fields, Claim3Outcome, Claim3Precondition, CijError,
    CijTuple, SearchParams, Strategy, DEFAULT_WINDOW,
};
use crate::config::GeodesicConfig;
use crate::index::ParityCounterexample;
use crate::morse::{
    claim2_check, classify_counts, morse_identity_check, morse_numbers, predicted_counts, signed_iterate_count,
    window_identity, Claim2Outcome, Classification, MorseIdentityOutcome, PredictedCounts, WindowIdentity,
};
use crate::normal_form::{ValidationMode, Violation};

pub const FALLBACK_CUTOFF: u64 = 41;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AuditError {
    #[error("geodesic {name} is not bumpy elliptic: {}", .violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    NotBumpyElliptic { name: String, violations: Vec<Violation> },
    #[error("configuration has no geodesics")]
    Empty,
    #[error(transparent)]
    Betti(#[from] BettiError),
    #[error(transparent)]
    Search(CijError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditParams {
    pub epsilon: BigRational,
    pub n_max: u64,
    /// Morse cutoff; `2N + 1` of the first tuple when absent.
    pub max_p: Option<u64>,
    pub m0: Option<u64>,
    /// Iterates checked for parity and for the window bounds.
    pub window: u64,
    pub strategy: Strategy,
}

impl AuditParams {
    pub fn new(epsilon: BigRational, n_max: u64) -> Self {
        AuditParams { epsilon, n_max, max_p: None, m0: None, window: DEFAULT_WINDOW, strategy: Strategy::Auto }
    }

    fn search(&self) -> SearchParams {
        let mut p = SearchParams::new(self.epsilon.clone(), self.n_max);
        p.m0 = self.m0;
        p.window = self.window;
        p.strategy = self.strategy;
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Hypotheses of the counting argument.
    Structural,
    /// Metric realizability of the configuration.
    Realizability,
    /// Consequences that must hold once their hypotheses do.
    Internal,
    /// Comparison with the predicted counts.
    Prediction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckVerdict {
    pub name: &'static str,
    pub kind: CheckKind,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub manifold: ManifoldClass,
    pub q: u64,
    pub q_expected: u64,
    pub predicted: PredictedCounts,
    pub verdict: &'static str,
    pub realizable: Option<bool>,
    pub search_exhausted: bool,
    pub internal_inconsistency: bool,
    pub checks: Vec<CheckVerdict>,
    pub parity: Vec<ParityCounterexample>,
    pub claim2: Claim2Outcome,
    pub resonance: ResonanceOutcome,
    pub morse: Option<MorseIdentityOutcome>,
    pub tuple: Option<CijTuple>,
    pub paired_tuple: Option<CijTuple>,
    pub claim3: Option<Claim3Outcome>,
    pub window_identity: Option<WindowIdentity>,
    pub classification: Option<Classification>,
    pub paired_classification: Option<Classification>,
}

impl AuditReport {
    pub fn check(&self, name: &str) -> Option<&CheckVerdict> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

struct Log(Vec<CheckVerdict>);

impl Log {
    fn push(&mut self, name: &'static str, kind: CheckKind, status: CheckStatus, detail: impl Into<String>) {
        self.0.push(CheckVerdict { name, kind, status, detail: detail.into() });
    }

    fn verdict(&mut self, name: &'static str, kind: CheckKind, ok: bool, detail: impl Into<String>) {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        self.push(name, kind, status, detail);
    }

    fn all_pass(&self, kinds: &[CheckKind]) -> bool {
        self.0.iter().filter(|c| kinds.contains(&c.kind)).all(|c| c.status != CheckStatus::Fail)
    }
}

pub fn audit(config: &GeodesicConfig, params: &AuditParams) -> Result<AuditReport, AuditError> {
    let mc = config.manifold;
    let recs = &config.geodesics;
    if recs.is_empty() {
        return Err(AuditError::Empty);
    }
    for rec in recs {
        let violations = rec.decomp.validate(config.dn_minus_1(), ValidationMode::BumpyElliptic);
        if !violations.is_empty() {
            return Err(AuditError::NotBumpyElliptic { name: rec.name.clone(), violations });
        }
    }
    let mut log = Log(Vec::new());
    log.push("validation", CheckKind::Structural, CheckStatus::Pass, "all decompositions bumpy elliptic");

    let parity: Vec<_> = recs.iter().filter_map(|r| r.parity_check(config.dn_minus_1(), params.window).err()).collect();
    let detail = match parity.first() {
        Some(c) => c.to_string(),
        None => format!("i(c^m) ≡ {} mod 2 for m ≤ {}", config.dn_minus_1() % 2, params.window),
    };
    log.verdict("claim1_parity", CheckKind::Structural, parity.is_empty(), detail);

    let claim2 = claim2_check(&mc, recs);
    let detail = if claim2.pass { "unique bottom iterate".to_string() } else { format!("{:?}", claim2.violations) };
    log.verdict("claim2", CheckKind::Structural, claim2.pass, detail);

    let resonance = resonance_check(&mc, recs, &BigRational::zero())?;
    log.verdict(
        "resonance",
        CheckKind::Structural,
        resonance.pass,
        format!("sum {} vs B = {} (residual {})", resonance.sum, resonance.target, resonance.residual),
    );

    let search = params.search();
    let mut search_exhausted = false;
    let tuple = match find_tuple(&mc, recs, &search) {
        Ok(t) => Some(t),
        Err(CijError::Exhausted { n_max, m0 }) => {
            search_exhausted = true;
            log.push("tuple_search", CheckKind::Structural, CheckStatus::Fail, format!("no verified tuple with N ≤ {n_max}, M0 = {m0}"));
            None
        }
        Err(e) => return Err(AuditError::Search(e)),
    };
    if let Some(t) = &tuple {
        let ok = recheck_fields(recs, t);
        log.verdict("tuple_search", CheckKind::Structural, ok, format!("N = {}, m = {:?}, chi = {:?}, delta = {:?}", t.n, t.ms(), t.chis(), t.deltas()));
    }

    let cutoff = params.max_p.or(tuple.as_ref().map(|t| 2 * t.n + 1)).unwrap_or(FALLBACK_CUTOFF);
    let table = morse_numbers(recs, cutoff).expect("positive mean indices");
    let morse = morse_identity_check(&mc, &table);
    let detail = match &morse.first_failure {
        Some(f) => format!("{:?} fails at p = {}: M = {}, b = {}", f.kind, f.p, f.morse, f.betti),
        None => format!("M_p = b_p for p ≤ {cutoff}"),
    };
    log.verdict("morse_identity", CheckKind::Realizability, morse.pass, detail);

    let mut paired_tuple = None;
    if let Some(t) = &tuple {
        match find_paired_tuple(&mc, recs, t, &search) {
            Ok(p) => {
                log.verdict("paired_tuple", CheckKind::Structural, t.complements(&p), format!("N' = {}, delta' = {:?}", p.n, p.deltas()));
                paired_tuple = Some(p);
            }
            Err(CijError::PairExhausted { n_max }) => {
                search_exhausted = true;
                log.push("paired_tuple", CheckKind::Structural, CheckStatus::Fail, format!("no complementary tuple with N' ≤ {n_max}"));
            }
            Err(e) => return Err(AuditError::Search(e)),
        }
    } else {
        log.push("paired_tuple", CheckKind::Structural, CheckStatus::Skipped, "no first tuple");
    }

    let mut claim3 = None;
    match tuple.as_ref().map(|t| claim3_check(&mc, recs, t)) {
        Some(Ok(out)) => {
            log.verdict("claim3", CheckKind::Internal, out.pass, format!("Σ 2 m_k γ_k = {}, 2NB = {}", out.lhs, out.rhs));
            claim3 = Some(out);
        }
        Some(Err(pre)) => {
            let detail = match pre {
                Claim3Precondition::Resonance => "resonance fails".to_string(),
                other => other.to_string(),
            };
            log.push("claim3", CheckKind::Internal, CheckStatus::Skipped, detail);
        }
        None => log.push("claim3", CheckKind::Internal, CheckStatus::Skipped, "no tuple"),
    }

    let mut window = None;
    let mut classification = None;
    let mut paired_classification = None;
    if let Some(t) = &tuple {
        let mut bookkeeping = Vec::new();
        for (rec, e) in recs.iter().zip(&t.entries) {
            let direct = signed_iterate_count(rec, 2 * e.m);
            let expected = e.m as i64 * rec.gamma().doubled();
            if direct != expected {
                bookkeeping.push(format!("{}: {} ≠ {}", rec.name, direct, expected));
            }
        }
        log.verdict(
            "gamma_bookkeeping",
            CheckKind::Internal,
            bookkeeping.is_empty(),
            if bookkeeping.is_empty() { "signed counts equal 2 m_k γ_k".to_string() } else { bookkeeping.join("; ") },
        );
        let w = window_identity(&mc, recs, t).expect("positive mean indices");
        log.verdict("window_identity", CheckKind::Internal, w.pass, format!("top {}: {} vs {}", w.top, w.morse_side, w.tuple_side));
        window = Some(w);

        let c = classify_counts(&mc, recs, t);
        let partition = c.total() == recs.len() && c.unclassified.is_empty() && (!mc.d_is_even() || c.at_2n.is_empty());
        log.verdict("partition", CheckKind::Internal, partition, format!("(+, -, 2N) = {:?}", c.counts()));
        if let Some(p) = &paired_tuple {
            let pc = classify_counts(&mc, recs, p);
            log.verdict("bucket_swap", CheckKind::Internal, c.swapped_with(&pc), format!("paired (+, -, 2N) = {:?}", pc.counts()));
            paired_classification = Some(pc);
        }
        classification = Some(c);
    }

    let predicted = predicted_counts(&mc);
    let q = recs.len() as u64;
    let ready = log.all_pass(&[CheckKind::Structural, CheckKind::Realizability, CheckKind::Internal]);
    match (&classification, ready) {
        (Some(c), true) => {
            let (plus, minus, at) = c.counts();
            let ok = q == predicted.q
                && plus as u64 == predicted.plus
                && minus as u64 == predicted.minus
                && at as u64 == predicted.at_2n;
            log.verdict(
                "expected_counts",
                CheckKind::Prediction,
                ok,
                format!("q = {q} (expected {}), (+, -, 2N) = ({plus}, {minus}, {at}) (expected ({}, {}, {}))", predicted.q, predicted.plus, predicted.minus, predicted.at_2n),
            );
        }
        _ => log.push("expected_counts", CheckKind::Prediction, CheckStatus::Skipped, "an earlier check did not pass"),
    }

    let internal_inconsistency = log.0.iter().any(|c| c.kind == CheckKind::Internal && c.status == CheckStatus::Fail);
    let verdict = if log.0.iter().any(|c| c.status == CheckStatus::Fail) { "fail" } else { "pass" };
    Ok(AuditReport {
        manifold: mc,
        q,
        q_expected: predicted.q,
        predicted,
        verdict,
        realizable: Some(morse.pass),
        search_exhausted,
        internal_inconsistency,
        checks: log.0,
        parity,
        claim2,
        resonance,
        morse: Some(morse),
        tuple,
        paired_tuple,
        claim3,
        window_identity: window,
        classification,
        paired_classification,
    })
}

/// `2N B(d, n)` as an exact integer when it is one.
pub fn two_n_b(manifold: &ManifoldClass, n: u64) -> Option<BigInt> {
    let v = manifold.resonance_constant() * BigRational::from_integer(BigInt::from(2 * n));
    v.is_integer().then(|| v.to_integer())
}
