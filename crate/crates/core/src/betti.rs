//! Rational Betti numbers of `(ΛM/S¹, Λ⁰M/S¹)` for manifolds with
//! `H*(M; Q) ≅ Q[x]/(x^{n+1})`, `deg x = d`, and the resonance identity.
//!
//! Pointwise values and closed-form partial sums are implemented separately
//! so each can audit the other. Everything is exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::field::ExactScalar;
use crate::index::GeodesicRecord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BettiError {
    #[error("invalid manifold class (d, n) = ({d}, {n}): {reason}")]
    InvalidClass { d: u64, n: u64, reason: &'static str },
    #[error("operation needs {expected} d, got d = {d}")]
    WrongParity { d: u64, expected: &'static str },
    #[error("closed form needs k ≥ {min}, got {k}")]
    OutOfRange { k: u64, min: u64 },
    #[error("geodesic {name} has mean index {mean_index}; resonance needs a positive mean index")]
    NonPositiveMeanIndex { name: String, mean_index: String },
}

/// `(d, n)` with `dim M = dn`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ManifoldClass {
    pub d: u64,
    pub n: u64,
}

/// Which index set to use for the `n + 1` case of the even-`d` table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaVariant {
    /// `k₂ ∈ [0, n-1]`; agrees with the closed-form sums.
    #[default]
    Corrected,
    /// `k₂ ∈ [1, n-1]` as literally printed; empty when `n = 1`.
    Literal,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

impl ManifoldClass {
    pub fn new(d: u64, n: u64) -> Result<Self, BettiError> {
        if d < 2 {
            return Err(BettiError::InvalidClass { d, n, reason: "d must be at least 2" });
        }
        if n < 1 {
            return Err(BettiError::InvalidClass { d, n, reason: "n must be at least 1" });
        }
        if d % 2 == 1 && n != 1 {
            return Err(BettiError::InvalidClass { d, n, reason: "odd d forces n = 1" });
        }
        Ok(ManifoldClass { d, n })
    }

    pub fn d_is_even(&self) -> bool {
        self.d.is_multiple_of(2)
    }

    pub fn dim(&self) -> u64 {
        self.d * self.n
    }

    /// `D = d(n+1) - 2`.
    pub fn big_d(&self) -> u64 {
        self.d * (self.n + 1) - 2
    }

    /// Predicted number of closed geodesics in the finite case.
    pub fn expected_geodesic_count(&self) -> u64 {
        if self.d_is_even() {
            self.d * self.n * (self.n + 1) / 2
        } else {
            self.d + 1
        }
    }

    /// `B(d, n)`.
    pub fn resonance_constant(&self) -> BigRational {
        let (d, n) = (self.d as i64, self.n as i64);
        if self.d_is_even() {
            -ratio(n * (n + 1) * d, 2 * d * (n + 1) - 4)
        } else {
            ratio(d + 1, 2 * d - 2)
        }
    }

    fn require_even(&self) -> Result<(), BettiError> {
        if self.d_is_even() {
            Ok(())
        } else {
            Err(BettiError::WrongParity { d: self.d, expected: "even" })
        }
    }

    fn require_odd(&self) -> Result<(), BettiError> {
        if self.d_is_even() {
            Err(BettiError::WrongParity { d: self.d, expected: "odd" })
        } else {
            Ok(())
        }
    }

    /// `b_i` for odd `d`.
    pub fn betti_odd_d(&self, i: u64) -> Result<u64, BettiError> {
        self.require_odd()?;
        let step = self.d - 1;
        let in_k = i.is_multiple_of(step) && i / step >= 2;
        let in_ladder = i >= step && (i - step).is_multiple_of(2);
        Ok(if in_k {
            2
        } else if in_ladder {
            1
        } else {
            0
        })
    }

    /// Closed form `[k/(d-1)] + [k/2] - (d-1)/2`, for `k ≥ d - 1`.
    pub fn betti_sum_odd_d(&self, k: u64) -> Result<BigRational, BettiError> {
        self.require_odd()?;
        if k < self.d - 1 {
            return Err(BettiError::OutOfRange { k, min: self.d - 1 });
        }
        Ok(int(k / (self.d - 1)) + int(k / 2) - ratio(self.d as i64 - 1, 2))
    }

    pub fn in_omega(&self, k: u64, variant: OmegaVariant) -> bool {
        let (d, n, big_d) = (self.d, self.n, self.big_d());
        if k.is_multiple_of(2) || k < d - 1 {
            return false;
        }
        let t = k - (d - 1);
        let lo = match variant {
            OmegaVariant::Corrected => 0,
            OmegaVariant::Literal => 1,
        };
        (lo..n).any(|k2| {
            let shift = k2 * d;
            t >= shift + big_d && (t - shift).is_multiple_of(big_d)
        })
    }

    /// `b_i` for even `d`.
    pub fn betti_even_d(&self, i: u64, variant: OmegaVariant) -> Result<u64, BettiError> {
        self.require_even()?;
        let (d, n) = (self.d, self.n);
        Ok(if i.is_multiple_of(2) || i + 2 <= d {
            0
        } else if i < d - 1 + (n - 1) * d {
            (i - (d - 1)) / d + 1
        } else if self.in_omega(i, variant) {
            n + 1
        } else {
            n
        })
    }

    /// `Θ_{d,n}(k)`.
    pub fn theta(&self, k: u64) -> Result<BigRational, BettiError> {
        self.require_even()?;
        let (d, n, big_d) = (self.d as i64, self.n as i64, self.big_d() as i64);
        let f = frac(&ratio(k as i64 - (d - 1), big_d));
        let term1 = frac(&(ratio(big_d, d * n) * &f));
        let term2 = (ratio(2, d) + ratio(d - 2, d * n)) * &f;
        let term3 = BigRational::from_integer(n.into()) * frac(&(ratio(big_d, 2) * &f));
        let term4 = frac(&(ratio(big_d, d) * &f));
        Ok(term1 - term2 - term3 - term4)
    }

    /// Closed-form partial sum for even `d`, for `k ≥ dn - 1`.
    pub fn betti_sum_even_d(&self, k: u64) -> Result<BigRational, BettiError> {
        self.require_even()?;
        let min = self.dim() - 1;
        if k < min {
            return Err(BettiError::OutOfRange { k, min });
        }
        let (d, n, big_d) = (self.d as i64, self.n as i64, self.big_d() as i64);
        let slope = ratio(n * (n + 1) * d, 2 * big_d);
        let offset = ratio(n * (n - 1) * d, 4);
        Ok(slope * BigRational::from_integer((k as i64 - (d - 1)).into()) - offset + int(1) + self.theta(k)?)
    }

    pub fn betti(&self, i: u64, variant: OmegaVariant) -> u64 {
        if self.d_is_even() {
            self.betti_even_d(i, variant).expect("even d")
        } else {
            self.betti_odd_d(i).expect("odd d")
        }
    }

    /// Closed-form partial sum `Σ_{i ≤ k} b_i`, in its range of validity.
    pub fn betti_sum_closed(&self, k: u64) -> Result<BigRational, BettiError> {
        if self.d_is_even() {
            self.betti_sum_even_d(k)
        } else {
            self.betti_sum_odd_d(k)
        }
    }

    pub fn betti_sum_direct(&self, k: u64, variant: OmegaVariant) -> u64 {
        (0..=k).map(|i| self.betti(i, variant)).sum()
    }

    pub fn table(&self, max_k: u64, variant: OmegaVariant) -> BettiTable {
        let values: Vec<u64> = (0..=max_k).map(|i| self.betti(i, variant)).collect();
        let partial_sums = values
            .iter()
            .scan(0u64, |acc, b| {
                *acc += b;
                Some(*acc)
            })
            .collect();
        BettiTable { manifold: *self, variant, values, partial_sums }
    }
}

/// `b_i` for `0 ≤ i ≤ max_k` with running sums.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub manifold: ManifoldClass,
    pub variant: OmegaVariant,
    pub values: Vec<u64>,
    pub partial_sums: Vec<u64>,
}

impl BettiTable {
    pub fn get(&self, i: u64) -> u64 {
        self.values.get(i as usize).copied().unwrap_or_else(|| self.manifold.betti(i, self.variant))
    }

    pub fn max_degree(&self) -> u64 {
        self.values.len().saturating_sub(1) as u64
    }

    /// `(degree, b_i)` for the nonzero entries.
    pub fn nonzero(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.values.iter().enumerate().filter(|(_, b)| **b > 0).map(|(i, b)| (i as u64, *b))
    }
}

/// Result of comparing `Σ γ_k / î_k` with `B(d, n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceOutcome {
    pub pass: bool,
    pub sum: ExactScalar,
    pub target: ExactScalar,
    /// `sum - target`, exact.
    pub residual: ExactScalar,
    pub residual_approx: f64,
    /// `|residual|` below the diagnostic tolerance but nonzero.
    pub near_miss: bool,
}

pub fn resonance_check(
    manifold: &ManifoldClass,
    records: &[GeodesicRecord],
    tolerance: &BigRational,
) -> Result<ResonanceOutcome, BettiError> {
    let mut sum = ExactScalar::zero();
    for rec in records {
        let mean = rec.mean_index();
        if !mean.is_positive() {
            return Err(BettiError::NonPositiveMeanIndex { name: rec.name.clone(), mean_index: mean.to_string() });
        }
        let term = ExactScalar::from(rec.gamma().to_rational()).try_div(&mean).expect("single field");
        sum = sum + term;
    }
    let target = ExactScalar::from(manifold.resonance_constant());
    let residual = &sum - &target;
    let pass = residual.is_zero();
    let abs = if residual.is_negative() { -&residual } else { residual.clone() };
    let near_miss = !pass && abs.try_cmp(&ExactScalar::from(tolerance.abs())) == Ok(std::cmp::Ordering::Less);
    Ok(ResonanceOutcome { pass, residual_approx: residual.to_f64(), sum, target, residual, near_miss })
}

/// `Σ b_i` over one period `D` of the table starting at `start`, divided by `D`.
pub fn period_average(manifold: &ManifoldClass, start: u64, variant: OmegaVariant) -> BigRational {
    let big_d = manifold.big_d();
    let total: u64 = (start..start + big_d).map(|i| manifold.betti(i, variant)).sum();
    BigRational::new(BigInt::from(total), BigInt::from(big_d))
}

/// `true` if a rational is an integer; closed forms should always be.
pub fn as_integer(q: &BigRational) -> Option<u64> {
    if q.is_integer() && !q.is_negative() {
        q.to_integer().to_u64()
    } else if q.is_zero() {
        Some(0)
    } else {
        None
    }
}
