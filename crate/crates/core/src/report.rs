//! Serialization of command results as text, JSON or CSV.
//!
//! JSON output is wrapped in an envelope carrying [`SCHEMA_VERSION`] and the
//! report kind; field order follows the struct definitions, so identical
//! inputs give identical bytes.

use std::fmt::Write as _;

use serde::Serialize;

use crate::audit::{AuditReport, CheckStatus};
use crate::betti::{BettiTable, ResonanceOutcome};
use crate::cij::{Claim3Outcome, CijTuple};
use crate::config::emit_config;
use crate::field::ExactScalar;
use crate::index::Gamma;
use crate::morse::{MorseIdentityOutcome, MorseTable};
use crate::normal_form::{BlockCounts, EllipticClass, SplittingProfile, Violation};
use crate::synth::SynthOutcome;

pub const SCHEMA_VERSION: &str = "geodesic-audit/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown output format {other:?}; expected text, json or csv")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeodesicClass {
    pub name: String,
    pub initial_index: u64,
    pub counts: BlockCounts,
    pub class: EllipticClass,
    pub splitting: SplittingProfile,
    pub mean_index: ExactScalar,
    pub gamma: Gamma,
    pub bumpy_elliptic_violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexRow {
    pub geodesic: String,
    pub m: u64,
    pub index: i64,
    pub nullity: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceRow {
    pub geodesic: String,
    pub gamma: Gamma,
    pub mean_index: ExactScalar,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CijReport {
    pub tuple: CijTuple,
    pub paired: Option<CijTuple>,
    pub claim3: Option<Claim3Outcome>,
    /// Why the gamma sum check was not evaluated, if it was not.
    pub claim3_skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MorseReport {
    pub table: MorseTable,
    pub betti: Vec<u64>,
    pub identity: MorseIdentityOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Report {
    Betti(BettiTable),
    Classify { geodesics: Vec<GeodesicClass> },
    Iterate { rows: Vec<IndexRow> },
    Resonance { outcome: ResonanceOutcome, geodesics: Vec<ResonanceRow> },
    Morse(MorseReport),
    Cij(CijReport),
    Audit(AuditReport),
    Synthesize(SynthOutcome),
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: &'static str,
    #[serde(flatten)]
    report: &'a Report,
}

pub fn emit_report(report: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&Envelope { schema: SCHEMA_VERSION, report })
                .expect("reports serialize");
            s.push('\n');
            s
        }
        OutputFormat::Csv => emit_csv(report),
        OutputFormat::Text => emit_text(report),
    }
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn emit_csv(report: &Report) -> String {
    match report {
        Report::Betti(t) => {
            csv_rows(&["degree", "betti"], t.nonzero().map(|(i, b)| vec![i.to_string(), b.to_string()]))
        }
        Report::Classify { geodesics } => csv_rows(
            &["geodesic", "initial_index", "elliptic_height", "mean_index", "gamma", "bumpy_elliptic"],
            geodesics.iter().map(|g| {
                vec![
                    g.name.clone(),
                    g.initial_index.to_string(),
                    g.class.height.to_string(),
                    g.mean_index.to_string(),
                    g.gamma.to_string(),
                    g.bumpy_elliptic_violations.is_empty().to_string(),
                ]
            }),
        ),
        Report::Iterate { rows } => csv_rows(
            &["geodesic", "m", "index", "nullity"],
            rows.iter().map(|r| vec![r.geodesic.clone(), r.m.to_string(), r.index.to_string(), r.nullity.to_string()]),
        ),
        Report::Resonance { geodesics, .. } => csv_rows(
            &["geodesic", "gamma", "mean_index"],
            geodesics.iter().map(|g| vec![g.geodesic.clone(), g.gamma.to_string(), g.mean_index.to_string()]),
        ),
        Report::Morse(m) => csv_rows(
            &["p", "morse", "betti"],
            m.table.values.iter().enumerate().filter_map(|(p, &v)| {
                let b = m.betti.get(p).copied().unwrap_or(0);
                (v > 0 || b > 0).then(|| vec![p.to_string(), v.to_string(), b.to_string()])
            }),
        ),
        Report::Cij(c) => {
            let mut rows = tuple_rows("first", &c.tuple);
            if let Some(p) = &c.paired {
                rows.extend(tuple_rows("paired", p));
            }
            csv_rows(&["tuple", "n", "geodesic", "m", "chi", "delta", "c", "index_at_2m"], rows)
        }
        Report::Audit(a) => csv_rows(
            &["check", "kind", "status", "detail"],
            a.checks.iter().map(|c| {
                vec![c.name.to_string(), format!("{:?}", c.kind).to_lowercase(), status(c.status).to_string(), c.detail.clone()]
            }),
        ),
        Report::Synthesize(s) => csv_rows(
            &["geodesic", "initial_index", "mean_index", "gamma"],
            s.config.geodesics.iter().map(|g| {
                vec![g.name.clone(), g.initial_index.to_string(), g.mean_index().to_string(), g.gamma().to_string()]
            }),
        ),
    }
}

fn tuple_rows(label: &str, t: &CijTuple) -> Vec<Vec<String>> {
    t.entries
        .iter()
        .map(|e| {
            vec![
                label.to_string(),
                t.n.to_string(),
                e.name.clone(),
                e.m.to_string(),
                e.chi.to_string(),
                e.delta.to_string(),
                e.c_total.to_string(),
                e.index_at_2m.to_string(),
            ]
        })
        .collect()
}

fn status(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "fail",
        CheckStatus::Skipped => "skipped",
    }
}

fn tuple_text(out: &mut String, label: &str, t: &CijTuple) {
    let _ = writeln!(out, "{label}: N = {}  (eps = {}, M0 = {}, Mbar = {}, mbar = {})", t.n, t.epsilon, t.constants.m0, t.constants.mbar_period, t.constants.mbar);
    for e in &t.entries {
        let _ = writeln!(
            out,
            "  {:<8} m = {:<8} chi = {}  delta = {} / C = {}  i(c^2m) = {}  frac = {}",
            e.name, e.m, e.chi, e.delta, e.c_total, e.index_at_2m, e.frac
        );
    }
}

fn emit_text(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Betti(t) => {
            let _ = writeln!(out, "Betti numbers, (d, n) = ({}, {}), up to degree {}", t.manifold.d, t.manifold.n, t.max_degree());
            for (i, b) in t.nonzero() {
                let _ = writeln!(out, "  b_{i:<5} = {b:<3}  partial sum {}", t.partial_sums[i as usize]);
            }
        }
        Report::Classify { geodesics } => {
            for g in geodesics {
                let _ = writeln!(
                    out,
                    "{}: i = {}, mean index {}, gamma {}, elliptic height {}, elliptic {}, irrationally elliptic {}",
                    g.name, g.initial_index, g.mean_index, g.gamma, g.class.height, g.class.elliptic, g.class.irrationally_elliptic
                );
                for v in &g.bumpy_elliptic_violations {
                    let _ = writeln!(out, "  not bumpy elliptic: {v}");
                }
            }
        }
        Report::Iterate { rows } => {
            for r in rows {
                let _ = writeln!(out, "{:<8} m = {:<6} i = {:<8} nu = {}", r.geodesic, r.m, r.index, r.nullity);
            }
        }
        Report::Resonance { outcome, geodesics } => {
            for g in geodesics {
                let _ = writeln!(out, "{:<8} gamma = {:<5} mean index = {}", g.geodesic, g.gamma, g.mean_index);
            }
            let _ = writeln!(out, "sum = {}, B = {}, residual = {} (~{:e})", outcome.sum, outcome.target, outcome.residual, outcome.residual_approx);
            let _ = writeln!(out, "resonance: {}", if outcome.pass { "pass" } else { "fail" });
        }
        Report::Morse(m) => {
            for (p, &v) in m.table.values.iter().enumerate() {
                let b = m.betti.get(p).copied().unwrap_or(0);
                if v > 0 || b > 0 {
                    let _ = writeln!(out, "p = {p:<5} M = {v:<3} b = {b}");
                }
            }
            match &m.identity.first_failure {
                None => {
                    let _ = writeln!(out, "Morse identity holds up to p = {}", m.identity.cutoff);
                }
                Some(f) => {
                    let _ = writeln!(out, "Morse identity fails at p = {} ({:?}): {} vs {}", f.p, f.kind, f.morse, f.betti);
                }
            }
        }
        Report::Cij(c) => {
            tuple_text(&mut out, "tuple", &c.tuple);
            if let Some(p) = &c.paired {
                tuple_text(&mut out, "paired", p);
            }
            match (&c.claim3, &c.claim3_skipped) {
                (Some(o), _) => {
                    let _ = writeln!(out, "gamma sum: {} ({} vs {})", if o.pass { "pass" } else { "fail" }, o.lhs, o.rhs);
                }
                (None, Some(why)) => {
                    let _ = writeln!(out, "gamma sum not evaluated: {why}");
                }
                _ => {}
            }
        }
        Report::Audit(a) => {
            let _ = writeln!(out, "audit of (d, n) = ({}, {}), q = {} (expected {})", a.manifold.d, a.manifold.n, a.q, a.q_expected);
            for c in &a.checks {
                let _ = writeln!(out, "  [{:<7}] {:<18} {}", status(c.status), c.name, c.detail);
            }
            let _ = writeln!(out, "verdict: {}", a.verdict);
        }
        Report::Synthesize(s) => {
            let _ = writeln!(
                out,
                "# morse window {}: {}; attempt {}, {} candidates",
                s.window,
                if s.morse_pass { "pass".to_string() } else { format!("fails at p = {}", s.morse_failure.as_ref().map_or(0, |f| f.p)) },
                s.attempts_used,
                s.candidates
            );
            out.push_str(&emit_config(&s.config));
        }
    }
    out
}
