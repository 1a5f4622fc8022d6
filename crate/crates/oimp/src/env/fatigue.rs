//! Weariness functions and spread thinning.

use rand::Rng;

use super::{EnvError, Spread};

/// A known non-increasing weariness function `gamma` with `gamma(s) in (0,1]`
/// for every pull index `s >= 1`. The constant-one function recovers the
/// fatigue-free model.
#[derive(Debug, Clone, PartialEq)]
pub enum FatigueFunction {
    /// `gamma(s) = 1`: no fatigue.
    ConstantOne,
    /// `gamma(s) = 1/s`.
    Inverse,
    /// `gamma(s) = 1/sqrt(s)`.
    InverseSqrt,
    /// Explicit table indexed by `s - 1`; pulls beyond the table reuse the
    /// last entry.
    Table(Vec<f64>),
}

impl FatigueFunction {
    /// Builds a table-backed function, validating that values lie in (0, 1]
    /// and never increase.
    pub fn table(values: Vec<f64>) -> Result<Self, EnvError> {
        if values.is_empty() {
            return Err(EnvError::InvalidFatigue {
                reason: "empty table".into(),
            });
        }
        for &v in &values {
            if !(v > 0.0 && v <= 1.0) {
                return Err(EnvError::InvalidFatigue {
                    reason: format!("value {v} outside (0, 1]"),
                });
            }
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(EnvError::InvalidFatigue {
                reason: "table must be non-increasing".into(),
            });
        }
        Ok(FatigueFunction::Table(values))
    }

    /// `gamma(s)` for a 1-based pull index.
    pub fn value(&self, s: u64) -> f64 {
        debug_assert!(s >= 1, "pull index is 1-based");
        match self {
            FatigueFunction::ConstantOne => 1.0,
            FatigueFunction::Inverse => 1.0 / s as f64,
            FatigueFunction::InverseSqrt => 1.0 / (s as f64).sqrt(),
            FatigueFunction::Table(values) => {
                let idx = (s as usize - 1).min(values.len() - 1);
                values[idx]
            }
        }
    }

    /// Parses the CLI names `one`, `inv` and `invsqrt`.
    pub fn parse_name(name: &str) -> Result<Self, EnvError> {
        match name {
            "one" => Ok(FatigueFunction::ConstantOne),
            "inv" => Ok(FatigueFunction::Inverse),
            "invsqrt" => Ok(FatigueFunction::InverseSqrt),
            other => Err(EnvError::InvalidFatigue {
                reason: format!("unknown fatigue function `{other}` (expected one|inv|invsqrt)"),
            }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FatigueFunction::ConstantOne => "one",
            FatigueFunction::Inverse => "inv",
            FatigueFunction::InverseSqrt => "invsqrt",
            FatigueFunction::Table(_) => "table",
        }
    }
}

/// Keeps each activated node independently with probability `gamma(s)`,
/// where `s >= 1` is the pull index of the influencer being worn down.
/// Attribution is restricted to the kept nodes. When `gamma(s)` is exactly 1
/// the spread is returned unchanged without consuming randomness.
pub fn fatigue_filter<R: Rng>(
    spread: &Spread,
    gamma: &FatigueFunction,
    s: u64,
    rng: &mut R,
) -> Spread {
    assert!(s >= 1, "pull index is 1-based");
    let keep = gamma.value(s);
    if keep >= 1.0 {
        return spread.clone();
    }
    let kept = spread
        .entries()
        .iter()
        .filter(|_| rng.gen_bool(keep))
        .copied()
        .collect();
    Spread::from_claims(kept)
}
