//! Randomized construction of configurations satisfying the resonance
//! identity exactly.
//!
//! Every geodesic gets a random block shape and a small initial index of the
//! right parity; the last free angle is solved from the identity, so only the
//! range, index lower bound and monotonicity filters can reject a draw. Surviving
//! candidates are ranked by how far the Morse identity holds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::betti::{resonance_check, ManifoldClass};
use crate::config::{GeodesicConfig, Meta};
use crate::field::ExactScalar;
use crate::index::GeodesicRecord;
use crate::morse::{claim2_check, morse_identity_check, morse_numbers, MorseFailure};
use crate::normal_form::{BlockSpec, PoincareDecomposition, ValidationMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("no candidate survived {attempts} attempts")]
    Exhausted { attempts: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub manifold: ManifoldClass,
    pub seed: u64,
    pub attempts: u64,
    /// Morse cutoff used for ranking.
    pub window: u64,
    pub radicands: Vec<u64>,
    /// Iterates checked for monotonicity.
    pub monotone_window: u64,
}

impl SynthParams {
    pub fn new(manifold: ManifoldClass, seed: u64, attempts: u64) -> Self {
        SynthParams { manifold, seed, attempts, window: 60, radicands: vec![2, 3, 5], monotone_window: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthOutcome {
    pub config: GeodesicConfig,
    pub morse_pass: bool,
    pub morse_failure: Option<MorseFailure>,
    pub window: u64,
    pub attempts_used: u64,
    pub candidates: u64,
}

/// How the rotation angles of one geodesic are tied together.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Piece {
    /// One `N2` block with a random irrational angle.
    N2,
    /// `R(x)` with its own angle.
    Free,
    /// `R(x), R(x)` with one shared angle.
    Tied,
    /// `R(x), R(1 - x)`.
    Complementary,
}

fn dims(piece: Piece) -> usize {
    match piece {
        Piece::Free => 1,
        _ => 2,
    }
}

fn random_shape(rng: &mut ChaCha8Rng, dim: usize, need_angle: bool) -> Vec<Piece> {
    loop {
        let mut left = dim;
        let mut shape = Vec::new();
        while left > 0 {
            let options: &[Piece] =
                if left >= 2 { &[Piece::N2, Piece::Free, Piece::Tied, Piece::Complementary] } else { &[Piece::Free] };
            let p = *options.choose(rng).expect("non-empty");
            left -= dims(p);
            shape.push(p);
        }
        if !need_angle || shape.iter().any(|p| matches!(p, Piece::Free | Piece::Tied)) {
            return shape;
        }
    }
}

fn small_ratio(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> BigRational {
    let den = rng.gen_range(1..=max_den);
    let num = rng.gen_range(0..max_num * den);
    BigRational::new(num.into(), den.into())
}

/// `{b√D + c}` for small random `b ≠ 0` and `c`.
fn random_angle(rng: &mut ChaCha8Rng, radicand: u64) -> ExactScalar {
    let den = rng.gen_range(1..=6i64);
    let mut num = rng.gen_range(1..=6 * den);
    if rng.gen_bool(0.5) {
        num = -num;
    }
    let b = BigRational::new(num.into(), den.into());
    let c = small_ratio(rng, 1, 6);
    ExactScalar::new(c, b, radicand).expect("square-free radicand").frac()
}

fn angle_ok(x: &ExactScalar) -> bool {
    x.is_irrational() && x.is_positive() && x < &ExactScalar::one()
}

/// Blocks for a shape; `solve` fixes the shared angle of the first
/// `Free`/`Tied` piece from `target = Σ 2x` over all `R` angles.
fn realize(
    rng: &mut ChaCha8Rng,
    shape: &[Piece],
    radicand: u64,
    target: Option<&ExactScalar>,
) -> Option<Vec<BlockSpec>> {
    let solve_at = target.and_then(|_| shape.iter().position(|p| matches!(p, Piece::Free | Piece::Tied)));
    let mut angles: Vec<Option<ExactScalar>> = Vec::with_capacity(shape.len());
    let mut fixed = ExactScalar::zero();
    for (i, p) in shape.iter().enumerate() {
        if Some(i) == solve_at {
            angles.push(None);
            continue;
        }
        let x = random_angle(rng, radicand);
        match p {
            Piece::Free => fixed = fixed + x.scale_int(2),
            Piece::Tied => fixed = fixed + x.scale_int(4),
            Piece::Complementary => fixed = fixed + ExactScalar::from(2),
            Piece::N2 => {}
        }
        angles.push(Some(x));
    }
    if let (Some(k), Some(t)) = (solve_at, target) {
        let copies = if shape[k] == Piece::Tied { 4 } else { 2 };
        let x = (t - &fixed).scale(&BigRational::new(BigInt::one(), BigInt::from(copies)));
        if !angle_ok(&x) {
            return None;
        }
        angles[k] = Some(x);
    }
    let mut blocks = Vec::new();
    for (p, x) in shape.iter().zip(angles) {
        let x = x.expect("all angles set");
        match p {
            Piece::N2 => blocks.push(BlockSpec::n2(x, true)),
            Piece::Free => blocks.push(BlockSpec::rotation(x)),
            Piece::Tied => {
                blocks.push(BlockSpec::rotation(x.clone()));
                blocks.push(BlockSpec::rotation(x));
            }
            Piece::Complementary => {
                blocks.push(BlockSpec::rotation(ExactScalar::one() - &x));
                blocks.push(BlockSpec::rotation(x));
            }
        }
    }
    Some(blocks)
}

fn r_count(shape: &[Piece]) -> u64 {
    shape.iter().map(|p| if *p == Piece::Free { 1 } else if *p == Piece::N2 { 0 } else { 2 }).sum()
}

fn draw(rng: &mut ChaCha8Rng, manifold: &ManifoldClass, radicand: u64, q: usize) -> Option<Vec<GeodesicRecord>> {
    let dim = (manifold.dim() - 1) as usize;
    let bottom = manifold.d - 1;
    let target_sum = {
        let b = manifold.resonance_constant();
        ExactScalar::from(if b < BigRational::zero() { -b } else { b })
    };
    let mut recs = Vec::with_capacity(q);
    let mut sum = ExactScalar::zero();
    for k in 0..q {
        let last = k + 1 == q;
        let shape = random_shape(rng, dim, last);
        let index = if k == 0 { bottom } else { bottom + 2 * rng.gen_range(1..=(q as u64 + 2)) };
        let blocks = if last {
            // 1/î = B - Σ; î = i - r + Σ 2x
            let rest = target_sum.try_sub(&sum).ok()?;
            if !rest.is_positive() {
                return None;
            }
            let mean = rest.try_recip().ok()?;
            let target = mean - ExactScalar::from(index as i64 - r_count(&shape) as i64);
            realize(rng, &shape, radicand, Some(&target))?
        } else {
            realize(rng, &shape, radicand, None)?
        };
        let rec = GeodesicRecord::new(format!("c{}", k + 1), index, PoincareDecomposition::new(blocks));
        let mean = rec.mean_index();
        if !mean.is_positive() {
            return None;
        }
        sum = sum + mean.try_recip().ok()?;
        recs.push(rec);
    }
    Some(recs)
}

fn admissible(manifold: &ManifoldClass, recs: &[GeodesicRecord], monotone_window: u64) -> bool {
    let dim = (manifold.dim() - 1) as usize;
    recs.iter().all(|r| r.decomp.validate(dim, ValidationMode::BumpyElliptic).is_empty())
        && claim2_check(manifold, recs).pass
        && recs.iter().all(|r| r.parity_check(dim, monotone_window).is_ok())
        && recs.iter().all(|r| r.monotonicity_violation(monotone_window).is_none())
        && resonance_check(manifold, recs, &BigRational::zero()).is_ok_and(|o| o.pass)
}

/// First admissible draw with `count` geodesics, without Morse ranking.
pub fn random_resonant(
    manifold: ManifoldClass,
    count: usize,
    seed: u64,
    radicands: &[u64],
    attempts: u64,
) -> Result<GeodesicConfig, SynthError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=attempts {
        let radicand = *radicands.choose(&mut rng).expect("at least one radicand");
        let Some(recs) = draw(&mut rng, &manifold, radicand, count) else { continue };
        if admissible(&manifold, &recs, 200) {
            return Ok(GeodesicConfig {
                manifold,
                radicand,
                meta: Meta {
                    description: Some(format!("{count} geodesics for (d, n) = ({}, {})", manifold.d, manifold.n)),
                    source: Some(format!("random_resonant seed {seed} attempt {attempt}")),
                },
                geodesics: recs,
            });
        }
    }
    Err(SynthError::Exhausted { attempts })
}

/// Best candidate: a Morse pass, else the one failing latest.
pub fn synthesize_config(params: &SynthParams) -> Result<SynthOutcome, SynthError> {
    let mc = params.manifold;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut best: Option<(u64, SynthOutcome)> = None;
    let mut candidates = 0;
    for attempt in 1..=params.attempts {
        let radicand = *params.radicands.choose(&mut rng).expect("at least one radicand");
        let q = mc.expected_geodesic_count() as usize;
        let Some(recs) = draw(&mut rng, &mc, radicand, q) else { continue };
        if !admissible(&mc, &recs, params.monotone_window) {
            continue;
        }
        candidates += 1;
        let table = morse_numbers(&recs, params.window).expect("positive mean indices");
        let out = morse_identity_check(&mc, &table);
        let reach = out.first_failure.as_ref().map_or(u64::MAX, |f| f.p);
        if best.as_ref().is_none_or(|(r, _)| reach > *r) {
            let config = GeodesicConfig {
                manifold: mc,
                radicand,
                meta: Meta {
                    description: Some(format!("synthesized for (d, n) = ({}, {})", mc.d, mc.n)),
                    source: Some(format!("synthesize seed {} attempt {attempt}", params.seed)),
                },
                geodesics: recs,
            };
            let outcome = SynthOutcome {
                config,
                morse_pass: out.pass,
                morse_failure: out.first_failure,
                window: params.window,
                attempts_used: attempt,
                candidates,
            };
            best = Some((reach, outcome));
        }
        if out.pass {
            break;
        }
    }
    match best {
        Some((_, mut outcome)) => {
            outcome.candidates = candidates;
            Ok(outcome)
        }
        None => Err(SynthError::Exhausted { attempts: params.attempts }),
    }
}
