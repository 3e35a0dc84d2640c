//! Static digit ordering for MAX nodes.
//!
//! The order is estimated once per expression. For a digit `i` and a
//! variable `X`, the value of the MAX node `{i -> X}` is estimated as the
//! largest value of the expression seen over random instantiations of the
//! other variables with `X` fixed at `i`. The estimate for the MIN node `{i}`
//! is the minimum of those over `X`, and digits are searched in decreasing
//! order of that estimate.
//!
//! Sampling uses ChaCha8 seeded with [`rand::SeedableRng::seed_from_u64`],
//! so a `(samples, seed)` pair always reproduces the same order.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::expr::Expression;
use crate::value::{Overflow, Rational, Value};

/// A permutation of the ten digits, optionally with the estimates that
/// produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitOrder {
    sequence: [u8; 10],
    estimates: Option<[Value; 10]>,
}

impl DigitOrder {
    pub const ASCENDING: [u8; 10] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9];

    pub fn ascending() -> Self {
        DigitOrder { sequence: Self::ASCENDING, estimates: None }
    }

    /// Returns `None` unless `sequence` is a permutation of 0-9.
    pub fn from_sequence(sequence: [u8; 10]) -> Option<Self> {
        let mut seen = [false; 10];
        for &d in &sequence {
            if d > 9 || std::mem::replace(&mut seen[d as usize], true) {
                return None;
            }
        }
        Some(DigitOrder { sequence, estimates: None })
    }

    pub fn sequence(&self) -> &[u8; 10] {
        &self.sequence
    }

    /// `estimates()[d]` is the estimated value of proposing digit `d`.
    pub fn estimates(&self) -> Option<&[Value; 10]> {
        self.estimates.as_ref()
    }

    pub fn is_ascending(&self) -> bool {
        self.sequence == Self::ASCENDING
    }
}

impl Default for DigitOrder {
    fn default() -> Self {
        Self::ascending()
    }
}

impl fmt::Display for DigitOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.sequence.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for DigitOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits: Vec<u8> = s
            .split([',', ' '])
            .filter(|p| !p.is_empty())
            .map(|p| p.trim().parse::<u8>().map_err(|e| format!("bad digit {p:?}: {e}")))
            .collect::<Result<_, _>>()?;
        let sequence: [u8; 10] = digits
            .try_into()
            .map_err(|d: Vec<u8>| format!("expected 10 digits, got {}", d.len()))?;
        DigitOrder::from_sequence(sequence).ok_or_else(|| format!("{s:?} is not a permutation of 0-9"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMode {
    /// Exhaustive for expressions with at most four variables, sampled above.
    #[default]
    Auto,
    Sampled,
    /// Every completion of the other variables.
    Exhaustive,
}

/// Largest variable count for which [`SamplingMode::Auto`] enumerates.
pub const AUTO_EXHAUSTIVE_MAX_VARS: usize = 4;

pub const DEFAULT_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateConfig {
    pub samples: usize,
    pub seed: u64,
    pub mode: SamplingMode,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        EstimateConfig { samples: DEFAULT_SAMPLES, seed: 0, mode: SamplingMode::Auto }
    }
}

/// Estimates the digit order with the default sampling mode.
pub fn estimate_digit_order(expr: &Expression, samples: usize, seed: u64) -> Result<DigitOrder, Overflow> {
    estimate_digit_order_with(expr, &EstimateConfig { samples, seed, mode: SamplingMode::Auto })
}

pub fn estimate_digit_order_with(expr: &Expression, config: &EstimateConfig) -> Result<DigitOrder, Overflow> {
    let n = expr.variable_count();
    if n == 0 {
        return Ok(DigitOrder::ascending());
    }
    let exhaustive = match config.mode {
        SamplingMode::Auto => n <= AUTO_EXHAUSTIVE_MAX_VARS,
        SamplingMode::Sampled => false,
        SamplingMode::Exhaustive => true,
    };
    let mut slots = vec![0u8; n];
    let mut stack = Vec::new();
    let mut estimates = [Value::Invalid; 10];

    // Every (digit, variable) pair is scored against the same completions,
    // so sampling noise is shared and the comparison between digits is fair.
    let completions: Vec<Vec<u8>> = if exhaustive {
        (0..10usize.pow(n as u32 - 1))
            .map(|mut code| {
                (0..n - 1)
                    .map(|_| {
                        let d = (code % 10) as u8;
                        code /= 10;
                        d
                    })
                    .collect()
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        (0..config.samples.max(1))
            .map(|_| (0..n - 1).map(|_| rng.random_range(0..10)).collect())
            .collect()
    };

    for digit in 0..10u8 {
        let mut backed_up: Option<Rational> = None;
        for var in 0..n {
            let mut best: Option<Rational> = None;
            for rest in &completions {
                let (before, after) = slots.split_at_mut(var);
                before.copy_from_slice(&rest[..var]);
                after[0] = digit;
                after[1..].copy_from_slice(&rest[var..]);
                if let Value::Finite(r) = expr.eval_indexed(&slots, &mut stack)? {
                    best = Some(best.map_or(r, |b| b.max(r)));
                }
            }
            if let Some(b) = best {
                backed_up = Some(backed_up.map_or(b, |m| m.min(b)));
            }
        }
        estimates[digit as usize] = Value::from(backed_up);
    }

    let mut sequence = DigitOrder::ASCENDING;
    // stable sort: ties keep ascending digit order
    sequence.sort_by(|&a, &b| {
        match (estimates[a as usize].finite(), estimates[b as usize].finite()) {
            (Some(x), Some(y)) => y.cmp(&x),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        }
    });
    Ok(DigitOrder { sequence, estimates: Some(estimates) })
}
