//! Acceptance suite. Prints one line per criterion and exits non-zero if any
//! criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use geodesic_audit::audit::{audit, AuditParams, CheckStatus};
use geodesic_audit::betti::{ManifoldClass, OmegaVariant};
use geodesic_audit::cij::{find_paired_tuple, find_tuple, CijError, CijTuple, SearchParams};
use geodesic_audit::config::{parse_config, GeodesicConfig};
use geodesic_audit::index::{iterate_index_elliptic, iterate_index_general, GeodesicRecord};
use geodesic_audit::morse::morse_numbers;
use geodesic_audit::normal_form::{BlockSpec, PoincareDecomposition, ValidationMode};
use geodesic_audit::synth::{random_resonant, synthesize_config, SynthParams};
use geodesic_audit::ExactScalar;

type Outcome = Result<String, String>;

const S2_CONFIG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/s2_sqrt2.cfg");

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn idx(rec: &GeodesicRecord, m: u64) -> BigInt {
    common::index_term_by_term(rec, m)
}

/// `î = A + B√D` of a bumpy elliptic record, from its blocks.
fn mean_index_parts(rec: &GeodesicRecord) -> (BigRational, BigRational, u64) {
    let r = rec.decomp.blocks.iter().filter(|b| matches!(b, BlockSpec::R { .. })).count() as i64;
    let mut a = BigRational::from_integer(BigInt::from(rec.initial_index as i64 - r));
    let mut b = BigRational::zero();
    let mut radicand = 1;
    for block in &rec.decomp.blocks {
        if let BlockSpec::R { angle } = block {
            a += angle.rational_part() * BigRational::from_integer(2.into());
            b += angle.surd_part() * BigRational::from_integer(2.into());
            if angle.is_irrational() {
                radicand = angle.radicand();
            }
        }
    }
    (a, b, radicand)
}

/// `t/(M̄ î)` as a scalar, via the conjugate.
fn ratio_over_mean(rec: &GeodesicRecord, t: u64, mbar_period: u64) -> ExactScalar {
    let (a, b, d) = mean_index_parts(rec);
    let norm = &a * &a - &b * &b * BigRational::from_integer(d.into());
    let k = rat(t as i64, 1) / (norm * rat(mbar_period as i64, 1));
    ExactScalar::new(&a * &k, -&b * &k, d).expect("square-free radicand")
}

/// `χ` for one coordinate, or `None` when neither end is within `ε`.
fn oracle_chi(x: &ExactScalar, eps: &BigRational) -> Option<u8> {
    if &common::frac_upper(x) < eps {
        Some(0)
    } else if common::frac_lower(x) > BigRational::one() - eps {
        Some(1)
    } else {
        None
    }
}

/// `2γ` from the oracle, and `B(d, n)` from the test's own formula.
fn claim3_sides(mc: &ManifoldClass, recs: &[GeodesicRecord], t: &CijTuple) -> (i64, BigRational) {
    let lhs = recs.iter().zip(&t.entries).map(|(r, e)| e.m as i64 * common::doubled_gamma(r)).sum();
    let rhs = common::resonance_constant(mc.d, mc.n) * rat(2 * t.n as i64, 1);
    (lhs, rhs)
}

fn claim3_threshold(recs: &[GeodesicRecord], mbar_period: u64) -> BigRational {
    let total: i64 = recs.iter().map(|r| common::doubled_gamma(r).abs()).sum();
    // Σ|γ| = total/2
    BigRational::one() / (BigRational::one() + rat(total * mbar_period as i64, 1))
}

/// Bucket sets `(+, -, 2N)` from oracle indices.
fn oracle_buckets(
    mc: &ManifoldClass,
    recs: &[GeodesicRecord],
    t: &CijTuple,
) -> (BTreeSet<String>, BTreeSet<String>, BTreeSet<String>, usize) {
    let two_n = BigInt::from(2 * t.n);
    let gap = if mc.d_is_even() { 1 } else { 2 };
    let (mut plus, mut minus, mut at, mut other) = (BTreeSet::new(), BTreeSet::new(), BTreeSet::new(), 0);
    for (r, e) in recs.iter().zip(&t.entries) {
        let i = idx(r, 2 * e.m);
        if i >= &two_n + gap {
            plus.insert(r.name.clone());
        } else if i <= &two_n - gap {
            minus.insert(r.name.clone());
        } else if i == two_n && !mc.d_is_even() {
            at.insert(r.name.clone());
        } else {
            other += 1;
        }
    }
    (plus, minus, at, other)
}

/// Fields, shift relations, `Δ` and the window bounds, all from the oracle.
fn recheck_tuple(recs: &[GeodesicRecord], t: &CijTuple, window: u64) -> Result<(), String> {
    let two_n = BigInt::from(2 * t.n);
    let mp = t.constants.mbar_period;
    for (r, e) in recs.iter().zip(&t.entries) {
        let x = ratio_over_mean(r, t.n, mp);
        let chi = oracle_chi(&x, &t.epsilon).ok_or_else(|| format!("{}: fractional part not within ε at N = {}", r.name, t.n))?;
        ensure(chi == e.chi || (e.chi == 1 && common::frac_lower(&x) > BigRational::one() - &t.epsilon), || {
            format!("{}: χ = {} but oracle gives {chi}", r.name, e.chi)
        })?;
        let m = (common::floor_of(&x) + e.chi) * mp;
        ensure(m == BigInt::from(e.m), || format!("{}: m = {} but oracle gives {m}", r.name, e.m))?;
        ensure(e.s_plus_one == 0, || format!("{}: S+(1) = {}", r.name, e.s_plus_one))?;
        let two_mk = 2 * e.m;
        ensure(t.constants.mbar + 2 <= two_mk, || format!("{}: 2m_k too small", r.name))?;
        for m in 1..=t.constants.mbar {
            let base = idx(r, m);
            ensure(idx(r, two_mk + m) == &two_n + &base, || format!("{}: plus shift fails at m = {m}", r.name))?;
            ensure(idx(r, two_mk - m) == &two_n - &base, || format!("{}: minus shift fails at m = {m}", r.name))?;
        }
        let twice = idx(r, two_mk) - &two_n + BigInt::from(e.c_total);
        ensure(twice.is_even() && !twice.is_negative() && twice <= BigInt::from(2 * e.c_total), || {
            format!("{}: 2Δ = {twice} out of range", r.name)
        })?;
        ensure(twice / 2 == BigInt::from(e.delta), || format!("{}: Δ mismatch", r.name))?;
        let i1 = BigInt::from(r.initial_index);
        for m in 1..=window {
            ensure(idx(r, two_mk + m) >= &two_n + &i1, || format!("{}: upper window fails at m = {m}", r.name))?;
            if m < two_mk {
                ensure(idx(r, two_mk - m) <= &two_n - &i1, || format!("{}: lower window fails at m = {m}", r.name))?;
            }
        }
    }
    Ok(())
}

fn cli(args: &[&str]) -> Result<(Value, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_geodesic-audit"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot run the binary: {e}"))?;
    let code = out.status.code().unwrap_or(-1);
    let json = serde_json::from_slice(&out.stdout)
        .map_err(|e| format!("{args:?}: bad JSON ({e}); stderr {}", String::from_utf8_lossy(&out.stderr)))?;
    Ok((json, code))
}

fn load_s2() -> Result<GeodesicConfig, String> {
    let text = std::fs::read_to_string(S2_CONFIG).map_err(|e| e.to_string())?;
    parse_config(&text).map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    let cfg = load_s2()?;
    let recs = &cfg.geodesics;
    let eps = rat(3, 100);

    // resonance, evaluated by hand: -1/√2 - 1/(2+√2) = -1
    let sum = recs.iter().fold(ExactScalar::zero(), |acc, r| {
        let g = rat(common::doubled_gamma(r), 2);
        acc + ratio_over_mean(r, 1, 1).scale(&g)
    });
    ensure(sum == ExactScalar::from(common::resonance_constant(2, 1)), || format!("resonance sum {sum}"))?;
    ensure(sum == ExactScalar::from(-1), || format!("B(2,1) ≠ -1: {sum}"))?;

    // brute-force minimal N with M0 = M̄ = m̄ = 1
    let mut found = None;
    'scan: for n in 1..1000u64 {
        let mut ms = Vec::new();
        let mut chis = Vec::new();
        for r in recs {
            let x = ratio_over_mean(r, n, 1);
            let Some(chi) = oracle_chi(&x, &eps) else { continue 'scan };
            let m = (common::floor_of(&x) + chi).to_u64().unwrap();
            if m < 2 {
                continue 'scan;
            }
            let (two_n, two_m) = (BigInt::from(2 * n), 2 * m);
            if idx(r, two_m + 1) != &two_n + idx(r, 1) || idx(r, two_m - 1) != &two_n - idx(r, 1) {
                continue 'scan;
            }
            let twice: BigInt = idx(r, two_m) - &two_n + BigInt::one();
            if twice.is_odd() || twice.is_negative() || twice > BigInt::from(2) {
                continue 'scan;
            }
            ms.push(m);
            chis.push(chi);
        }
        found = Some((n, ms, chis));
        break;
    }
    let (n, ms, chis) = found.ok_or("brute force found no N below 1000")?;
    ensure((n, ms.as_slice(), chis.as_slice()) == (17, &[12, 5][..], &[0, 1][..]), || {
        format!("brute force gives N = {n}, m = {ms:?}, chi = {chis:?}")
    })?;
    let (c1, c2) = (&recs[0], &recs[1]);
    let pinned = [(c1, 24, 33), (c2, 10, 35), (c1, 23, 33), (c1, 25, 35), (c2, 9, 31), (c2, 11, 37)];
    for (r, m, want) in pinned {
        ensure(idx(r, m) == BigInt::from(want) && r.index_of_iterate(m) == BigInt::from(want), || {
            format!("i({}^{m}) ≠ {want}", r.name)
        })?;
    }

    let (json, code) = cli(&["cij", S2_CONFIG, "--epsilon", "3/100", "--m0", "1", "--output", "json"])?;
    ensure(code == 0, || format!("cij exit code {code}"))?;
    let t = &json["tuple"];
    let field = |k: &str| t["entries"].as_array().unwrap().iter().map(|e| e[k].as_u64().unwrap()).collect::<Vec<_>>();
    ensure(t["n"] == 17 && field("m") == [12, 5] && field("chi") == [0, 1] && field("delta") == [0, 1], || {
        format!("cij reports N = {}, m = {:?}, chi = {:?}, delta = {:?}", t["n"], field("m"), field("chi"), field("delta"))
    })?;
    let (lhs, rhs) = (&json["claim3"]["lhs"], &json["claim3"]["rhs"]);
    ensure(lhs == -34 && rhs == -34, || format!("gamma sum reports {lhs} vs {rhs}"))?;
    let tuple = find_tuple(&cfg.manifold, recs, &{
        let mut p = SearchParams::new(eps.clone(), 1000);
        p.m0 = Some(1);
        p
    })
    .map_err(|e| e.to_string())?;
    let (lhs, rhs) = claim3_sides(&cfg.manifold, recs, &tuple);
    ensure(BigRational::from_integer(lhs.into()) == rhs && lhs == -34, || format!("oracle gamma sum {lhs} vs {rhs}"))?;

    let (json, code) = cli(&["audit", S2_CONFIG, "--epsilon", "3/100", "--m0", "1", "--output", "json"])?;
    ensure(code == 0 && json["verdict"] == "pass" && json["q_expected"] == 2 && json["q"] == 2, || {
        format!("audit exit {code}, verdict {}, q {} of {}", json["verdict"], json["q"], json["q_expected"])
    })?;
    let bucket = |k: &str| json["classification"][k].as_array().map_or(usize::MAX, Vec::len);
    ensure((bucket("plus"), bucket("minus")) == (1, 1), || format!("audit buckets ({}, {})", bucket("plus"), bucket("minus")))?;
    let (p, m, _, _) = oracle_buckets(&cfg.manifold, recs, &tuple);
    ensure((p.len(), m.len()) == (1, 1), || "oracle buckets differ".into())?;
    Ok("resonance -1 exact; N = 17, m = (12,5), chi = (0,1), delta = (0,1); gamma sum -34 = -34; buckets (1,1), q = 2".into())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for (d, n) in [(2u64, 1u64), (2, 2), (4, 2), (6, 3), (8, 2)] {
        let mc = ManifoldClass::new(d, n).map_err(|e| e.to_string())?;
        let b = common::betti_even(d, n, 400);
        let mut sum = 0u64;
        for k in 0..=400u64 {
            sum += b[k as usize];
            ensure(mc.betti(k, OmegaVariant::Corrected) == b[k as usize], || format!("({d},{n}) b_{k} differs"))?;
            if k + 1 < d * n {
                continue;
            }
            let closed = common::betti_sum_even_closed(d, n, k);
            let lib = mc.betti_sum_closed(k).map_err(|e| e.to_string())?;
            ensure(closed == BigRational::from_integer(sum.into()) && lib == closed, || {
                format!("({d},{n}) k = {k}: direct {sum}, closed {closed}, library {lib}")
            })?;
            ensure(mc.betti_sum_direct(k, OmegaVariant::Corrected) == sum, || format!("({d},{n}) direct sum at {k}"))?;
            checked += 1;
        }
    }
    for d in [3u64, 5, 7, 9] {
        let mc = ManifoldClass::new(d, 1).map_err(|e| e.to_string())?;
        let b = common::betti_odd(d, 400);
        let mut sum = 0u64;
        for k in 0..=400u64 {
            sum += b[k as usize];
            ensure(mc.betti(k, OmegaVariant::Corrected) == b[k as usize], || format!("d = {d}: b_{k} differs"))?;
            if k + 1 < d {
                continue;
            }
            let closed = common::betti_sum_odd_closed(d, k);
            let lib = mc.betti_sum_closed(k).map_err(|e| e.to_string())?;
            ensure(closed == BigRational::from_integer(sum.into()) && lib == closed, || {
                format!("d = {d} k = {k}: direct {sum}, closed {closed}, library {lib}")
            })?;
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{checked} partial sums agree up to k = 400 in {:.2?}", elapsed))
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for (d, n) in [(2u64, 1u64), (2, 2), (2, 3), (4, 1), (4, 2), (6, 3), (8, 2), (10, 1)] {
        let mc = ManifoldClass::new(d, n).map_err(|e| e.to_string())?;
        let big_d = d * (n + 1) - 2;
        let want = -rat(d as i64 - 2, big_d as i64);
        for j in 1..=30 {
            let k = 2 * j * big_d - 1;
            let lib = mc.theta(k).map_err(|e| e.to_string())?;
            let oracle = common::theta(d, n, k);
            ensure(lib == want && oracle == want, || format!("({d},{n}) N = {}: library {lib}, oracle {oracle}", j * big_d))?;
            checked += 1;
        }
    }
    Ok(format!("Θ(2N-1) = -(d-2)/D at {checked} multiples N of D across 8 classes"))
}

fn criterion_4() -> Outcome {
    let cfg = load_s2()?;
    let table = morse_numbers(&cfg.geodesics, 41).map_err(|e| e.to_string())?;
    let b = common::betti_even(2, 1, 41);
    for p in 0..=41u64 {
        // M_p counted directly: every iterate here has index of the parity of i(c)
        let direct: u64 = cfg
            .geodesics
            .iter()
            .map(|r| (1..=p + 2).filter(|&m| idx(r, m) == BigInt::from(p)).count() as u64)
            .sum();
        ensure(table.get(p) == direct, || format!("M_{p}: library {}, direct {direct}", table.get(p)))?;
        if p % 2 == 1 {
            ensure(direct == b[p as usize], || format!("M_{p} = {direct} but b_{p} = {}", b[p as usize]))?;
        } else {
            ensure(direct == 0, || format!("M_{p} = {direct} for even p"))?;
        }
    }
    Ok("M_p = b_p for odd p ≤ 41 and M_p = 0 for even p".into())
}

fn random_decomposition(rng: &mut ChaCha8Rng, radicand: u64) -> (usize, GeodesicRecord) {
    let dim = rng.gen_range(1..=6usize);
    loop {
        let mut blocks = Vec::new();
        let mut left = dim;
        while left > 0 {
            let den = rng.gen_range(1..=9i64);
            let num = rng.gen_range(1..=40i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let c = rng.gen_range(0..12i64);
            let x = ExactScalar::new(rat(c, 12), rat(num, den), radicand).unwrap().frac();
            if left >= 2 && rng.gen_bool(0.3) {
                blocks.push(BlockSpec::n2(x, true));
                left -= 2;
            } else {
                blocks.push(BlockSpec::rotation(x));
                left -= 1;
            }
        }
        if !blocks.iter().any(|b| matches!(b, BlockSpec::R { .. })) {
            continue;
        }
        // i ≡ dim (mod 2) keeps every iterate index of one parity
        let i = dim as u64 % 2 + 2 * rng.gen_range(0..6u64);
        return (dim, GeodesicRecord::new("c", i, PoincareDecomposition::new(blocks)));
    }
}

fn criterion_5() -> Outcome {
    let failures: Vec<String> = (0..1000u64)
        .into_par_iter()
        .filter_map(|trial| check_decomposition(trial).err())
        .collect();
    match failures.first() {
        Some(f) => Err(format!("{} of 1000 trials fail; first: {f}", failures.len())),
        None => Ok("1000 decompositions, m ≤ 500: general = elliptic = term-by-term, parity holds, |i(c^m) - m·î| < r".into()),
    }
}

fn check_decomposition(trial: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5_000 + trial);
    let radicand = if trial.is_multiple_of(2) { 2 } else { 5 };
    let (dim, rec) = random_decomposition(&mut rng, radicand);
    let violations = rec.decomp.validate(dim, ValidationMode::BumpyElliptic);
    ensure(violations.is_empty(), || format!("trial {trial}: generator produced {violations:?}"))?;
    let r = rec.decomp.blocks.iter().filter(|b| matches!(b, BlockSpec::R { .. })).count() as i64;
    let (a, b, _) = mean_index_parts(&rec);
    iterate_index_general(&rec, 1).map_err(|e| e.to_string())?;
    iterate_index_elliptic(&rec, 1).map_err(|e| e.to_string())?;
    // both accepted the decomposition; the unchecked forms evaluate the same formulas
    for m in 1..=500u64 {
        let general = rec.index_of_iterate(m);
        let elliptic = rec.index_of_iterate_elliptic(m);
        ensure(general == elliptic, || format!("trial {trial} m = {m}: {general} vs {elliptic}"))?;
        let oracle = idx(&rec, m);
        ensure(general == oracle, || format!("trial {trial} m = {m}: library {general}, oracle {oracle}"))?;
        ensure(general.is_odd() == (dim % 2 == 1), || format!("trial {trial} m = {m}: parity of {general}"))?;
        let mm = rat(m as i64, 1);
        let diff_a = BigRational::from_integer(general) - &a * &mm;
        let diff_b = -(&b * &mm);
        ensure(common::abs_below(&diff_a, &diff_b, radicand, r), || {
            format!("trial {trial} m = {m}: |i - mî| not below r = {r}")
        })?;
    }
    Ok(())
}

#[derive(Default)]
struct CijTally {
    tuples: usize,
    exhausted: usize,
    pairs: usize,
    pairs_exhausted: usize,
    claim3: usize,
}

fn check_resonant(mc: &ManifoldClass, cfg: &GeodesicConfig, eps: &BigRational, tally: &mut CijTally) -> Result<(), String> {
    let recs = &cfg.geodesics;
    let params = SearchParams::new(eps.clone(), 1_000_000);
    let t = match find_tuple(mc, recs, &params) {
        Ok(t) => t,
        Err(CijError::Exhausted { .. }) => {
            tally.exhausted += 1;
            return Ok(());
        }
        Err(e) => return Err(e.to_string()),
    };
    tally.tuples += 1;
    recheck_tuple(recs, &t, 200)?;
    if eps < &claim3_threshold(recs, t.constants.mbar_period) {
        let (lhs, rhs) = claim3_sides(mc, recs, &t);
        if rhs.is_integer() && rhs.to_integer().is_even() {
            ensure(BigRational::from_integer(lhs.into()) == rhs, || format!("gamma sum {lhs} vs {rhs}"))?;
            tally.claim3 += 1;
        }
    }
    let p = match find_paired_tuple(mc, recs, &t, &params) {
        Ok(p) => p,
        Err(CijError::PairExhausted { .. }) => {
            tally.pairs_exhausted += 1;
            return Ok(());
        }
        Err(e) => return Err(e.to_string()),
    };
    recheck_tuple(recs, &p, 200).map_err(|e| format!("pair: {e}"))?;
    for (a, b) in t.entries.iter().zip(&p.entries) {
        ensure(a.delta + b.delta == u64::from(a.c_total), || format!("Δ + Δ' ≠ C for {}", a.name))?;
    }
    let (p1, m1, a1, _) = oracle_buckets(mc, recs, &t);
    let (p2, m2, a2, _) = oracle_buckets(mc, recs, &p);
    ensure(p1 == m2 && m1 == p2 && a1 == a2, || "buckets do not swap".into())?;
    tally.pairs += 1;
    Ok(())
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let eps = rat(3, 100);
    let plan = [((2u64, 1u64), 2usize), ((2, 1), 3), ((2, 1), 4), ((3, 1), 4), ((4, 1), 4)];
    let mut tally = CijTally::default();
    let (mut configs, mut seed) = (0, 0u64);
    while configs < 100 {
        let ((d, n), count) = plan[configs % plan.len()];
        seed += 1;
        let mc = ManifoldClass::new(d, n).map_err(|e| e.to_string())?;
        let Ok(cfg) = random_resonant(mc, count, seed, &[2, 3, 5], 50_000) else { continue };
        configs += 1;
        check_resonant(&mc, &cfg, &eps, &mut tally).map_err(|e| format!("({d},{n}) {count} geodesics, seed {seed}: {e}"))?;
    }
    let elapsed = start.elapsed();
    ensure(tally.tuples > 0, || "no search returned a tuple".into())?;
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{configs} configs: {} tuples and {} pairs verified, gamma sum checked on {}; searches exhausted at N = 10^6: {} first, {} paired; {elapsed:.1?}",
        tally.tuples, tally.pairs, tally.claim3, tally.exhausted, tally.pairs_exhausted
    ))
}

fn criterion_7() -> Outcome {
    let mc = ManifoldClass::new(3, 1).map_err(|e| e.to_string())?;
    let eps = rat(1, 20);
    let mut with_tuple = 0;
    let (mut precheck, mut skipped) = (0, 0);
    let (mut full_pass, mut full_skipped) = (Vec::new(), Vec::new());
    for seed in 0..8u64 {
        let outcome = synthesize_config(&SynthParams::new(mc, seed, 20_000)).map_err(|e| e.to_string())?;
        let recs = &outcome.config.geodesics;
        let t = find_tuple(&mc, recs, &SearchParams::new(eps.clone(), 1_000_000)).map_err(|e| format!("seed {seed}: {e}"))?;
        let (p, m, a, other) = oracle_buckets(&mc, recs, &t);
        ensure(other == 0 && p.len() + m.len() + a.len() == recs.len(), || format!("seed {seed}: partition fails"))?;
        with_tuple += 1;
        if !outcome.morse_pass {
            skipped += 1;
            continue;
        }
        let report = audit(&outcome.config, &AuditParams::new(eps.clone(), 1_000_000)).map_err(|e| e.to_string())?;
        let c = report.classification.as_ref().ok_or(format!("seed {seed}: audit found no tuple"))?;
        ensure(c.counts() == (1, 1, 2) && (p.len(), m.len(), a.len()) == (1, 1, 2), || {
            format!("seed {seed}: audit buckets {:?}, oracle ({}, {}, {})", c.counts(), p.len(), m.len(), a.len())
        })?;
        precheck += 1;
        match report.check("expected_counts").map(|v| v.status) {
            Some(CheckStatus::Pass) => full_pass.push(seed),
            Some(CheckStatus::Skipped) => full_skipped.push(seed),
            other => return Err(format!("seed {seed}: expected_counts {other:?}")),
        }
    }
    ensure(precheck > 0, || "no synthesized config passed the Morse precheck".into())?;
    Ok(format!(
        "partition holds on {with_tuple} configs; conditional on the p ≤ 60 precheck ({precheck} passed, {skipped} did not): \
         buckets (1,1) with two at 2N on all {precheck}; the audit's full-window expected_counts passes on seeds {full_pass:?} \
         and is skipped on seeds {full_skipped:?}, where the Morse identity fails above p = 60"
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let radicands: Vec<u64> = (2..200).filter(|&d| geodesic_audit::field::is_square_free(d)).collect();
    for trial in 0..10_000 {
        let d = radicands[rng.gen_range(0..radicands.len())];
        let big = |rng: &mut ChaCha8Rng| rng.gen_range(-1_000_000_000_000i64..1_000_000_000_000);
        let a = rat(big(&mut rng), rng.gen_range(1..1_000_000));
        let b = rat(big(&mut rng), rng.gen_range(1..1_000_000));
        let x = ExactScalar::new(a, b, d).map_err(|e| e.to_string())?;
        let f = x.floor();
        let oracle = common::floor_of(&x);
        ensure(f == oracle, || format!("trial {trial}: floor({x}) = {f}, oracle {oracle}"))?;
        let frac = x.frac();
        ensure(frac == &x - &ExactScalar::from(BigRational::from_integer(f.clone())), || format!("trial {trial}: frac mismatch"))?;
        ensure(common::floor_of(&frac).is_zero(), || format!("trial {trial}: frac({x}) = {frac} outside [0, 1)"))?;
    }
    Ok("floor and frac of 10000 scalars agree with 100-digit brackets".into())
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 8] = [
        (1, "anchored S2 end to end", criterion_1),
        (2, "Betti cross-validation", criterion_2),
        (3, "Theta identity", criterion_3),
        (4, "Morse identity on S2", criterion_4),
        (5, "index formula equivalence", criterion_5),
        (6, "CIJ postconditions", criterion_6),
        (7, "odd-d structure", criterion_7),
        (8, "floor oracle", criterion_8),
    ];
    let mut failed = 0;
    for (n, name, run) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {n} PASS ({name}, {secs:.2}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} FAIL ({name}, {secs:.2}s): {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
