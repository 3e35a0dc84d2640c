//! Judging finished games and measuring how fair an expression is under
//! random play.
//!
//! A game is fair when a MAX and a MIN that both move uniformly at random win
//! equally often. Random MAX proposes each digit with probability 1/10;
//! random MIN picks each unbound variable with equal probability.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::expr::Expression;
use crate::search::{solve_alphabeta, SearchError, SearchOptions};
use crate::value::{Overflow, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    MaxWins,
    MinWins,
    Draw,
    /// The final value is undefined; no winner is declared.
    InvalidFinal,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::MaxWins => "MAX wins",
            Outcome::MinWins => "MIN wins",
            Outcome::Draw => "draw",
            Outcome::InvalidFinal => "no contest",
        })
    }
}

/// Compares the final value with the minimax value.
pub fn judge(final_value: Value, minimax: Value) -> Outcome {
    match (final_value.finite(), minimax.finite()) {
        (Some(v), Some(m)) => match v.cmp(&m) {
            std::cmp::Ordering::Greater => Outcome::MaxWins,
            std::cmp::Ordering::Less => Outcome::MinWins,
            std::cmp::Ordering::Equal => Outcome::Draw,
        },
        _ => Outcome::InvalidFinal,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairnessReport {
    pub trials: u64,
    pub max_wins: u64,
    pub min_wins: u64,
    pub draws: u64,
    pub invalid: u64,
    pub p_max_win: f64,
    pub p_min_win: f64,
    pub p_draw: f64,
    pub p_invalid: f64,
    pub minimax: Value,
}

impl FairnessReport {
    fn from_counts(minimax: Value, counts: [u64; 4]) -> Self {
        let trials: u64 = counts.iter().sum();
        let p = |c: u64| if trials == 0 { 0.0 } else { c as f64 / trials as f64 };
        FairnessReport {
            trials,
            max_wins: counts[0],
            min_wins: counts[1],
            draws: counts[2],
            invalid: counts[3],
            p_max_win: p(counts[0]),
            p_min_win: p(counts[1]),
            p_draw: p(counts[2]),
            p_invalid: p(counts[3]),
            minimax,
        }
    }
}

fn bucket(o: Outcome) -> usize {
    match o {
        Outcome::MaxWins => 0,
        Outcome::MinWins => 1,
        Outcome::Draw => 2,
        Outcome::InvalidFinal => 3,
    }
}

/// Solves the expression, then simulates `trials` random games.
pub fn estimate_fairness(expr: &Expression, trials: u64, seed: u64) -> Result<FairnessReport, SearchError> {
    let (solved, _) = solve_alphabeta(expr, &SearchOptions::plain().with_tt(true))?;
    Ok(simulate_random_play(expr, solved.value, trials, seed)?)
}

/// Monte-Carlo estimate of the outcome frequencies against a known minimax
/// value. Deterministic for a given seed.
pub fn simulate_random_play(
    expr: &Expression,
    minimax: Value,
    trials: u64,
    seed: u64,
) -> Result<FairnessReport, Overflow> {
    let n = expr.variable_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0u64; 4];
    let mut slots = vec![0u8; n];
    let mut unbound: Vec<usize> = Vec::with_capacity(n);
    let mut stack = Vec::new();
    for _ in 0..trials {
        unbound.clear();
        unbound.extend(0..n);
        while !unbound.is_empty() {
            let digit: u8 = rng.random_range(0..10);
            let pick = rng.random_range(0..unbound.len());
            let var = unbound.remove(pick);
            slots[var] = digit;
        }
        let final_value = expr.eval_indexed(&slots, &mut stack)?;
        counts[bucket(judge(final_value, minimax))] += 1;
    }
    Ok(FairnessReport::from_counts(minimax, counts))
}

/// Exact outcome probabilities under random play.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactFairness {
    pub p_max_win: f64,
    pub p_min_win: f64,
    pub p_draw: f64,
    pub p_invalid: f64,
}

/// Largest variable count [`exact_fairness`] enumerates (`n! 10^n` lines).
pub const EXACT_FAIRNESS_MAX_VARS: usize = 4;

/// Enumerates every line of random play, weighting each by its probability.
pub fn exact_fairness(expr: &Expression, minimax: Value) -> Result<ExactFairness, SearchError> {
    let n = expr.variable_count();
    if n > EXACT_FAIRNESS_MAX_VARS {
        return Err(SearchError::TooManyVariables { n, cap: EXACT_FAIRNESS_MAX_VARS });
    }
    let mut probs = [0.0f64; 4];
    let mut slots = vec![u8::MAX; n];
    let mut stack = Vec::new();
    enumerate(expr, minimax, &mut slots, n, 1.0, &mut probs, &mut stack)?;
    Ok(ExactFairness { p_max_win: probs[0], p_min_win: probs[1], p_draw: probs[2], p_invalid: probs[3] })
}

fn enumerate(
    expr: &Expression,
    minimax: Value,
    slots: &mut [u8],
    unbound: usize,
    weight: f64,
    probs: &mut [f64; 4],
    stack: &mut Vec<crate::value::Rational>,
) -> Result<(), Overflow> {
    if unbound == 0 {
        let v = expr.eval_indexed(slots, stack)?;
        probs[bucket(judge(v, minimax))] += weight;
        return Ok(());
    }
    let w = weight / (10.0 * unbound as f64);
    for digit in 0..10u8 {
        for var in 0..slots.len() {
            if slots[var] != u8::MAX {
                continue;
            }
            slots[var] = digit;
            enumerate(expr, minimax, slots, unbound - 1, w, probs, stack)?;
            slots[var] = u8::MAX;
        }
    }
    Ok(())
}
