//! Basic normal-form decompositions of linearized Poincaré maps.
//!
//! A decomposition is an ordered ⋄-product of 2×2 blocks (`N1`, `H`, `R`) and
//! 4×4 blocks (`N2`). Rotation angles are stored normalized, `x = θ/2π`, so a
//! block `R(x)` has eigenvalues `e^{±2πix}`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::field::ExactScalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum BlockSpec {
    /// `[[λ, a], [0, λ]]` with `λ = ±1`, `a ∈ {-1, 0, 1}`.
    N1 { lambda: i8, a: i8 },
    /// `diag(b, 1/b)`; only the sign of `b` matters.
    H { positive: bool },
    R { angle: ExactScalar },
    N2 { angle: ExactScalar, nontrivial: bool },
}

impl BlockSpec {
    pub fn rotation(angle: ExactScalar) -> Self {
        BlockSpec::R { angle }
    }

    pub fn n2(angle: ExactScalar, nontrivial: bool) -> Self {
        BlockSpec::N2 { angle, nontrivial }
    }

    /// Half the real dimension of the block.
    pub fn symplectic_dim(&self) -> usize {
        match self {
            BlockSpec::N2 { .. } => 2,
            _ => 1,
        }
    }

    pub fn angle(&self) -> Option<&ExactScalar> {
        match self {
            BlockSpec::R { angle } | BlockSpec::N2 { angle, .. } => Some(angle),
            _ => None,
        }
    }

    /// Algebraic multiplicity of unit-circle eigenvalues.
    pub fn unit_multiplicity(&self) -> usize {
        match self {
            BlockSpec::N1 { .. } | BlockSpec::R { .. } => 2,
            BlockSpec::N2 { .. } => 4,
            BlockSpec::H { .. } => 0,
        }
    }

    pub fn label(&self) -> String {
        match self {
            BlockSpec::N1 { lambda, a } => format!("N1({lambda},{a})"),
            BlockSpec::H { positive } => format!("H({})", if *positive { "+" } else { "-" }),
            BlockSpec::R { angle } => format!("R({angle})"),
            BlockSpec::N2 { angle, nontrivial } => {
                format!("N2({angle},{})", if *nontrivial { "nontrivial" } else { "trivial" })
            }
        }
    }
}

/// Block counts of a decomposition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BlockCounts {
    /// `N1(1,1)`
    pub p_minus: usize,
    /// `N1(1,0) = I₂`
    pub p_zero: usize,
    /// `N1(1,-1)`
    pub p_plus: usize,
    /// `N1(-1,1)`
    pub q_minus: usize,
    /// `N1(-1,0) = -I₂`
    pub q_zero: usize,
    /// `N1(-1,-1)`
    pub q_plus: usize,
    /// all rotation blocks
    pub r_bar: usize,
    pub r_irrational: usize,
    pub r_rational: usize,
    /// nontrivial `N2`
    pub r_star: usize,
    /// trivial `N2`
    pub r_zero: usize,
    pub h: usize,
}

impl BlockCounts {
    pub fn dimension(&self) -> usize {
        self.p_minus
            + self.p_zero
            + self.p_plus
            + self.q_minus
            + self.q_zero
            + self.q_plus
            + self.r_bar
            + 2 * self.r_star
            + 2 * self.r_zero
            + self.h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationMode {
    General,
    Bumpy,
    BumpyElliptic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DimensionMismatch { expected: usize, found: usize },
    AngleOutOfRange { block: usize, angle: String },
    AngleAtHalf { block: usize },
    RationalAngle { block: usize, angle: String },
    DegenerateBlock { block: usize, label: String },
    HyperbolicBlock { block: usize },
    InvalidN1 { block: usize, lambda: i8, a: i8 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DimensionMismatch { expected, found } => {
                write!(f, "block dimensions sum to {found}, expected {expected}")
            }
            Violation::AngleOutOfRange { block, angle } => {
                write!(f, "block {block}: normalized angle {angle} not in (0,1)")
            }
            Violation::AngleAtHalf { block } => write!(f, "block {block}: angle 1/2 (θ = π) is excluded"),
            Violation::RationalAngle { block, angle } => {
                write!(f, "block {block}: rational angle {angle} in a bumpy decomposition")
            }
            Violation::DegenerateBlock { block, label } => {
                write!(f, "block {block}: {label} forbidden in a bumpy decomposition")
            }
            Violation::HyperbolicBlock { block } => write!(f, "block {block}: H block forbidden in an elliptic decomposition"),
            Violation::InvalidN1 { block, lambda, a } => {
                write!(f, "block {block}: N1({lambda},{a}) needs λ = ±1 and a ∈ {{-1,0,1}}")
            }
        }
    }
}

/// Spectral classification of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EllipticClass {
    pub height: usize,
    pub elliptic: bool,
    pub hyperbolic: bool,
    pub non_degenerate: bool,
    pub irrationally_elliptic: bool,
}

/// Splitting numbers `(S⁺, S⁻)` at one unit-circle point `e^{2πix}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitEntry {
    /// Normalized location in `[0, 1)`; 0 is the eigenvalue 1.
    pub location: ExactScalar,
    pub plus: u32,
    pub minus: u32,
}

/// Splitting numbers over the unit spectrum, sorted by location.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SplittingProfile {
    pub entries: Vec<SplitEntry>,
}

/// Identifies the table below; bump when an entry changes.
pub const N1_SPLITTING_TABLE_VERSION: &str = "n1-unit-splitting/v1";

/// `(λ, a) → (S⁺, S⁻)` at the eigenvalue `λ` for `N1(λ, a)` blocks.
///
/// Externally sourced values; each one is pinned by the double-iterate
/// consistency test in `index_iteration`.
pub const N1_SPLITTING_TABLE: [((i8, i8), (u32, u32)); 6] = [
    ((1, 1), (1, 1)),
    ((1, 0), (1, 1)),
    ((1, -1), (0, 0)),
    ((-1, 1), (0, 0)),
    ((-1, 0), (1, 1)),
    ((-1, -1), (1, 1)),
];

fn n1_splitting(lambda: i8, a: i8) -> (u32, u32) {
    N1_SPLITTING_TABLE
        .iter()
        .find(|(key, _)| *key == (lambda, a))
        .map(|(_, v)| *v)
        .unwrap_or((0, 0))
}

impl SplittingProfile {
    fn add(&mut self, location: ExactScalar, plus: u32, minus: u32) {
        let pos = self.entries.binary_search_by(|e| e.location.partial_cmp(&location).unwrap_or(Ordering::Equal));
        match pos {
            Ok(i) => {
                self.entries[i].plus += plus;
                self.entries[i].minus += minus;
            }
            Err(i) => self.entries.insert(i, SplitEntry { location, plus, minus }),
        }
    }

    pub fn at(&self, location: &ExactScalar) -> (u32, u32) {
        self.entries
            .iter()
            .find(|e| &e.location == location)
            .map(|e| (e.plus, e.minus))
            .unwrap_or((0, 0))
    }

    /// `S⁺_M(1)`.
    pub fn plus_at_one(&self) -> u32 {
        self.at(&ExactScalar::zero()).0
    }

    /// `S⁻_M(-1)`.
    pub fn minus_at_minus_one(&self) -> u32 {
        self.at(&ExactScalar::ratio(1, 2)).1
    }

    /// `C(M)`: total `S⁻` over the circle minus the point 1.
    pub fn c_total(&self) -> u32 {
        self.entries.iter().filter(|e| !e.location.is_zero()).map(|e| e.minus).sum()
    }

    /// Net jump `Σ (S⁺ - S⁻)` over the open upper arc `0 < x < 1/2`.
    pub fn upper_arc_jump(&self) -> i64 {
        let half = ExactScalar::ratio(1, 2);
        self.entries
            .iter()
            .filter(|e| e.location.is_positive() && e.location.try_cmp(&half) == Ok(Ordering::Less))
            .map(|e| e.plus as i64 - e.minus as i64)
            .sum()
    }

    pub fn merged(&self, other: &SplittingProfile) -> SplittingProfile {
        let mut out = self.clone();
        for e in &other.entries {
            out.add(e.location.clone(), e.plus, e.minus);
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PoincareDecomposition {
    pub blocks: Vec<BlockSpec>,
}

impl PoincareDecomposition {
    pub fn new(blocks: Vec<BlockSpec>) -> Self {
        PoincareDecomposition { blocks }
    }

    pub fn counts(&self) -> BlockCounts {
        let mut c = BlockCounts::default();
        for block in &self.blocks {
            match block {
                BlockSpec::N1 { lambda: 1, a: 1 } => c.p_minus += 1,
                BlockSpec::N1 { lambda: 1, a: 0 } => c.p_zero += 1,
                BlockSpec::N1 { lambda: 1, .. } => c.p_plus += 1,
                BlockSpec::N1 { a: 1, .. } => c.q_minus += 1,
                BlockSpec::N1 { a: 0, .. } => c.q_zero += 1,
                BlockSpec::N1 { .. } => c.q_plus += 1,
                BlockSpec::H { .. } => c.h += 1,
                BlockSpec::R { angle } => {
                    c.r_bar += 1;
                    if angle.is_rational() {
                        c.r_rational += 1;
                    } else {
                        c.r_irrational += 1;
                    }
                }
                BlockSpec::N2 { nontrivial: true, .. } => c.r_star += 1,
                BlockSpec::N2 { .. } => c.r_zero += 1,
            }
        }
        c
    }

    pub fn symplectic_dim(&self) -> usize {
        self.blocks.iter().map(BlockSpec::symplectic_dim).sum()
    }

    pub fn rotation_angles(&self) -> impl Iterator<Item = &ExactScalar> {
        self.blocks.iter().filter_map(|b| match b {
            BlockSpec::R { angle } => Some(angle),
            _ => None,
        })
    }

    pub fn nontrivial_n2_angles(&self) -> impl Iterator<Item = &ExactScalar> {
        self.blocks.iter().filter_map(|b| match b {
            BlockSpec::N2 { angle, nontrivial: true } => Some(angle),
            _ => None,
        })
    }

    /// Checks block parameters and the dimension sum against `expected_dim`
    /// (`dn - 1` for a geodesic). Never panics; an empty list means valid.
    pub fn validate(&self, expected_dim: usize, mode: ValidationMode) -> Vec<Violation> {
        let mut out = Vec::new();
        let found = self.symplectic_dim();
        if found != expected_dim {
            out.push(Violation::DimensionMismatch { expected: expected_dim, found });
        }
        let half = ExactScalar::ratio(1, 2);
        for (i, block) in self.blocks.iter().enumerate() {
            match block {
                BlockSpec::N1 { lambda, a } => {
                    if !matches!(lambda, 1 | -1) || !matches!(a, -1..=1) {
                        out.push(Violation::InvalidN1 { block: i, lambda: *lambda, a: *a });
                    }
                    if mode != ValidationMode::General {
                        out.push(Violation::DegenerateBlock { block: i, label: block.label() });
                    }
                }
                BlockSpec::H { .. } => {
                    if mode == ValidationMode::BumpyElliptic {
                        out.push(Violation::HyperbolicBlock { block: i });
                    }
                }
                BlockSpec::R { angle } | BlockSpec::N2 { angle, .. } => {
                    if !angle.is_positive() || angle.try_cmp(&ExactScalar::one()) != Ok(Ordering::Less) {
                        out.push(Violation::AngleOutOfRange { block: i, angle: angle.to_string() });
                    } else if angle == &half {
                        out.push(Violation::AngleAtHalf { block: i });
                    }
                    if mode != ValidationMode::General && angle.is_rational() {
                        out.push(Violation::RationalAngle { block: i, angle: angle.to_string() });
                    }
                }
            }
        }
        out
    }

    pub fn elliptic_class(&self) -> EllipticClass {
        let height: usize = self.blocks.iter().map(BlockSpec::unit_multiplicity).sum();
        let dim = self.symplectic_dim();
        EllipticClass {
            height,
            elliptic: height == 2 * dim,
            hyperbolic: height == 0,
            non_degenerate: !self.blocks.iter().any(|b| matches!(b, BlockSpec::N1 { lambda: 1, .. })),
            irrationally_elliptic: !self.blocks.is_empty()
                && self.blocks.iter().all(|b| matches!(b, BlockSpec::R { angle } if angle.is_irrational())),
        }
    }

    /// `e(P)`.
    pub fn elliptic_height(&self) -> usize {
        self.elliptic_class().height
    }

    pub fn splitting_profile(&self) -> SplittingProfile {
        let mut profile = SplittingProfile::default();
        for block in &self.blocks {
            match block {
                BlockSpec::N1 { lambda, a } => {
                    let (plus, minus) = n1_splitting(*lambda, *a);
                    let loc = if *lambda == 1 { ExactScalar::zero() } else { ExactScalar::ratio(1, 2) };
                    profile.add(loc, plus, minus);
                }
                BlockSpec::H { .. } => {}
                BlockSpec::R { angle } => {
                    profile.add(angle.clone(), 0, 1);
                    profile.add(ExactScalar::one() - angle, 1, 0);
                }
                BlockSpec::N2 { angle, nontrivial } => {
                    let v = u32::from(*nontrivial);
                    profile.add(angle.clone(), v, v);
                    profile.add(ExactScalar::one() - angle, v, v);
                }
            }
        }
        profile
    }

    /// `ν` of the `m`-th iterate: dimension of the 1-eigenspace of `P^m`.
    pub fn nullity_of_iterate(&self, m: u64) -> u32 {
        let m_big = BigInt::from(m);
        self.blocks
            .iter()
            .map(|block| match block {
                BlockSpec::N1 { lambda, a } => {
                    if *lambda == 1 || m.is_even() {
                        if *a == 0 {
                            2
                        } else {
                            1
                        }
                    } else {
                        0
                    }
                }
                BlockSpec::H { .. } => 0,
                BlockSpec::R { angle } | BlockSpec::N2 { angle, .. } => {
                    let scaled = angle.scale(&num_rational::BigRational::from_integer(m_big.clone()));
                    if scaled.is_integer() {
                        2
                    } else {
                        0
                    }
                }
            })
            .sum()
    }

    /// Smallest `M̄ ≥ 1` with `M̄·θ/π ∈ Z` for every rational unit eigenvalue
    /// angle, i.e. the lcm of the denominators of `2x` over rational `x`.
    pub fn rational_angle_period(&self) -> BigInt {
        let mut acc = BigInt::one();
        for angle in self.blocks.iter().filter_map(BlockSpec::angle) {
            if let Some(q) = angle.as_rational() {
                let doubled = q * BigInt::from(2);
                acc = acc.lcm(doubled.denom());
            }
        }
        if acc.is_zero() {
            BigInt::one()
        } else {
            acc
        }
    }
}
