//! Game positions, legal moves and exact game-tree sizes.
//!
//! A MAX node is a set of variable instantiations; a MIN node is the same
//! plus the digit MAX has just proposed. The root and every terminal are MAX
//! nodes. A node with `k` unbound variables has height `2k` if it is a MAX
//! node and `2k - 1` if it is a MIN node.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{EvalError, Expression};
use crate::value::Value;

/// Total node count of the game tree over `n` variables:
/// `T(n) = 11 + 10 n T(n-1)`, `T(0) = 1`.
pub fn tree_size(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |t, k| BigUint::from(11u32) + BigUint::from(10 * k) * t)
}

/// `T(n)` in machine width, or `None` if it does not fit in a `u128`.
pub fn tree_size_u128(n: usize) -> Option<u128> {
    (1..=n).try_fold(1u128, |t, k| t.checked_mul(10 * k as u128)?.checked_add(11))
}

/// Number of terminal positions, `n! * 10^n`.
pub fn leaf_count(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(10 * k))
}

/// `T(n)` together with the bounds `2 n! 10^n <= T(n) <= 2 n! 10^n e^(1/10)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeCount {
    pub n: usize,
    pub total: BigUint,
}

impl NodeCount {
    pub fn new(n: usize) -> Self {
        NodeCount { n, total: tree_size(n) }
    }

    pub fn lower_bound(&self) -> BigUint {
        leaf_count(self.n) * 2u32
    }

    /// `T(n) / (2 n! 10^n)`, which lies in `[1, e^(1/10)]` for `n >= 1`.
    pub fn bound_ratio(&self) -> f64 {
        let total = self.total.to_f64().unwrap_or(f64::INFINITY);
        let lower = self.lower_bound().to_f64().unwrap_or(f64::INFINITY);
        total / lower
    }

    pub fn within_bounds(&self) -> bool {
        self.total >= self.lower_bound() && self.bound_ratio() <= 0.1f64.exp()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    ProposeDigit(u8),
    AssignVariable(String),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::ProposeDigit(d) => write!(f, "propose {d}"),
            Move::AssignVariable(v) => write!(f, "assign to {v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Max,
    Min,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Max => Player::Min,
            Player::Min => Player::Max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IllegalMove {
    #[error("it is {0:?}'s turn")]
    WrongTurn(Player),
    #[error("variable {0} is already bound")]
    AlreadyBound(String),
    #[error("variable {0} does not occur in the expression")]
    UnknownVariable(String),
    #[error("digit {0} is outside 0-9")]
    DigitOutOfRange(u8),
    #[error("the game is over")]
    Terminal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("position is terminal")]
    TerminalPosition,
    #[error("illegal move: {0}")]
    IllegalMove(#[from] IllegalMove),
}

/// One instantiation `digit -> variable`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Binding {
    pub digit: u8,
    pub variable: String,
}

impl Binding {
    pub fn new(digit: u8, variable: impl Into<String>) -> Self {
        Binding { digit, variable: variable.into() }
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\u{2192}{}", self.digit, self.variable)
    }
}

impl std::str::FromStr for Binding {
    type Err = String;

    /// Parses `"3\u{2192}x"` or `"3->x"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (d, v) = s
            .split_once('\u{2192}')
            .or_else(|| s.split_once("->"))
            .ok_or_else(|| format!("{s:?} is not a binding"))?;
        let digit: u8 = d.trim().parse().map_err(|e| format!("bad digit in {s:?}: {e}"))?;
        if digit > 9 || v.trim().is_empty() {
            return Err(format!("{s:?} is not a binding"));
        }
        Ok(Binding::new(digit, v.trim()))
    }
}

/// A node of the game tree, identified by its move history.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Position {
    expr: Arc<Expression>,
    bindings: Vec<Binding>,
    pending: Option<u8>,
}

impl Position {
    pub fn root(expr: impl Into<Arc<Expression>>) -> Position {
        Position { expr: expr.into(), bindings: Vec::new(), pending: None }
    }

    /// Rebuilds a position by replaying `moves` from the root.
    pub fn from_history<'a>(
        expr: impl Into<Arc<Expression>>,
        moves: impl IntoIterator<Item = &'a Move>,
    ) -> Result<Position, TreeError> {
        let mut pos = Position::root(expr);
        for m in moves {
            pos = pos.apply_move(m)?;
        }
        Ok(pos)
    }

    pub fn expr(&self) -> &Expression {
        &self.expr
    }

    pub fn shared_expr(&self) -> Arc<Expression> {
        Arc::clone(&self.expr)
    }

    pub fn bindings(&self) -> &[Binding] {
        &self.bindings
    }

    pub fn pending(&self) -> Option<u8> {
        self.pending
    }

    pub fn to_move(&self) -> Player {
        if self.pending.is_some() {
            Player::Min
        } else {
            Player::Max
        }
    }

    pub fn is_max_node(&self) -> bool {
        self.pending.is_none()
    }

    pub fn digit_of(&self, variable: &str) -> Option<u8> {
        self.bindings.iter().find(|b| b.variable == variable).map(|b| b.digit)
    }

    pub fn unbound_variables(&self) -> impl Iterator<Item = &str> {
        self.expr
            .variables()
            .iter()
            .map(String::as_str)
            .filter(|v| self.digit_of(v).is_none())
    }

    pub fn unbound_count(&self) -> usize {
        self.expr.variable_count() - self.bindings.len()
    }

    pub fn height(&self) -> usize {
        2 * self.unbound_count() - usize::from(self.pending.is_some())
    }

    pub fn is_terminal(&self) -> bool {
        self.height() == 0
    }

    /// The move sequence that reaches this position from the root.
    pub fn history(&self) -> Vec<Move> {
        let mut moves = Vec::with_capacity(2 * self.bindings.len() + 1);
        for b in &self.bindings {
            moves.push(Move::ProposeDigit(b.digit));
            moves.push(Move::AssignVariable(b.variable.clone()));
        }
        if let Some(d) = self.pending {
            moves.push(Move::ProposeDigit(d));
        }
        moves
    }

    /// Digits indexed like `expr().variables()`; unbound slots hold `u8::MAX`.
    pub fn digit_slots(&self) -> Vec<u8> {
        let mut slots = vec![u8::MAX; self.expr.variable_count()];
        for b in &self.bindings {
            let i = self.expr.variable_index(&b.variable).expect("bound variables occur in expr");
            slots[i] = b.digit;
        }
        slots
    }

    /// Children in search order: MAX nodes yield the ten digits in
    /// `digit_order`, MIN nodes one assignment per unbound variable in
    /// first-occurrence order.
    pub fn legal_moves(&self, digit_order: &[u8; 10]) -> Result<Vec<Move>, TreeError> {
        if self.is_terminal() {
            return Err(TreeError::TerminalPosition);
        }
        Ok(match self.pending {
            None => digit_order.iter().map(|&d| Move::ProposeDigit(d)).collect(),
            Some(_) => self.unbound_variables().map(|v| Move::AssignVariable(v.to_string())).collect(),
        })
    }

    pub fn apply_move(&self, m: &Move) -> Result<Position, IllegalMove> {
        if self.is_terminal() {
            return Err(IllegalMove::Terminal);
        }
        match (m, self.pending) {
            (Move::ProposeDigit(_), Some(_)) => Err(IllegalMove::WrongTurn(Player::Min)),
            (Move::AssignVariable(_), None) => Err(IllegalMove::WrongTurn(Player::Max)),
            (Move::ProposeDigit(d), None) => {
                if *d > 9 {
                    return Err(IllegalMove::DigitOutOfRange(*d));
                }
                Ok(Position { pending: Some(*d), ..self.clone() })
            }
            (Move::AssignVariable(v), Some(d)) => {
                if self.expr.variable_index(v).is_none() {
                    return Err(IllegalMove::UnknownVariable(v.clone()));
                }
                if self.digit_of(v).is_some() {
                    return Err(IllegalMove::AlreadyBound(v.clone()));
                }
                let mut bindings = self.bindings.clone();
                bindings.push(Binding::new(d, v.clone()));
                Ok(Position { expr: Arc::clone(&self.expr), bindings, pending: None })
            }
        }
    }

    /// Value of a terminal position.
    pub fn terminal_value(&self) -> Result<Value, EvalError> {
        if !self.is_terminal() {
            let missing = self.unbound_variables().next().unwrap_or_default().to_string();
            return Err(EvalError::UnboundVariable(missing));
        }
        let mut stack = Vec::new();
        self.expr.eval_indexed(&self.digit_slots(), &mut stack).map_err(EvalError::from)
    }
}
