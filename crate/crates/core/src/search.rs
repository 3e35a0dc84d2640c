//! Minimax values and principal variations.
//!
//! [`solve_oracle`] is plain backward induction over [`Position`]s and is
//! only meant for small expressions. [`solve_alphabeta`] is the production
//! search: a depth-first alpha-beta where every node sees only the current
//! value of its parent (the parent's running maximum for a MIN node, its
//! running minimum for a MAX node). Cutoffs are counted exactly in terms of
//! the subtree sizes `T(k)` from [`crate::tree`], so that after every solve
//!
//! ```text
//! visited + alpha_prunes + beta_prunes + tt_prunes == T(n)
//! ```
//!
//! Invalid values (a zero divisor) never win a comparison: a child whose
//! value is invalid is visited but skipped, and a node none of whose children
//! is valid is itself invalid.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{EvalError, Expression};
use crate::ordering::{estimate_digit_order_with, DigitOrder, EstimateConfig};
use crate::tree::{tree_size_u128, Binding, IllegalMove, Move, Position};
use crate::ttable::{KeyLayout, PositionKey, PvStep, TTEntry, TableError, TranspositionTable};
use crate::value::{Overflow, Rational, Value};

/// Default cap on variables for [`solve_alphabeta`].
pub const DEFAULT_MAX_VARS: usize = 6;

/// Largest expression [`solve_oracle`] accepts.
pub const ORACLE_MAX_VARS: usize = 4;

const UNBOUND: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("expression has {n} variables; the limit is {cap}")]
    TooManyVariables { n: usize, cap: usize },
    #[error("no instantiation of the expression has a defined value")]
    Unsolvable,
    #[error(transparent)]
    Overflow(#[from] Overflow),
    #[error(transparent)]
    Table(#[from] TableError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("illegal move in principal variation: {0}")]
    Illegal(#[from] IllegalMove),
    #[error("principal variation leaves {0} variables unbound")]
    Incomplete(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Minimax value and the line of play that realizes it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub value: Value,
    pub pv: Vec<Binding>,
}

impl SolveResult {
    pub fn pv_string(&self) -> String {
        self.pv.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Nodes entered, including terminals and transposition hits.
    pub visited: u128,
    pub alpha_prunes: u128,
    pub beta_prunes: u128,
    pub tt_prunes: u128,
    /// Alpha cutoffs that pruned at least one subtree.
    pub alpha_cutoffs: u64,
    /// Beta cutoffs that pruned at least one subtree.
    pub beta_cutoffs: u64,
    pub tt_hits: u64,
    pub tt_stores: u64,
}

impl SearchStats {
    pub fn pruned(&self) -> u128 {
        self.alpha_prunes + self.beta_prunes + self.tt_prunes
    }

    pub fn accounted(&self) -> u128 {
        self.visited + self.pruned()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub digit_order: DigitOrder,
    pub use_tt: bool,
    /// Entry cap for the per-solve table; `None` is unbounded.
    pub tt_capacity: Option<usize>,
    pub max_vars: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            digit_order: DigitOrder::ascending(),
            use_tt: false,
            tt_capacity: None,
            max_vars: DEFAULT_MAX_VARS,
        }
    }
}

impl SearchOptions {
    /// Ascending digits, no transposition table.
    pub fn plain() -> Self {
        Self::default()
    }

    /// Estimated digit order plus a transposition table.
    pub fn heuristic(expr: &Expression, estimate: &EstimateConfig) -> Result<Self, Overflow> {
        Ok(SearchOptions {
            digit_order: estimate_digit_order_with(expr, estimate)?,
            use_tt: true,
            ..Self::default()
        })
    }

    pub fn with_tt(mut self, use_tt: bool) -> Self {
        self.use_tt = use_tt;
        self
    }

    pub fn with_order(mut self, order: DigitOrder) -> Self {
        self.digit_order = order;
        self
    }

    pub fn with_max_vars(mut self, cap: usize) -> Self {
        self.max_vars = cap;
        self
    }
}

struct Searcher<'a> {
    expr: &'a Expression,
    order: [u8; 10],
    slots: Vec<u8>,
    key: u64,
    layout: KeyLayout,
    /// `sizes[k] = T(k)`
    sizes: Vec<u128>,
    stats: SearchStats,
    table: Option<&'a mut TranspositionTable>,
    /// Principal variation below the MAX (resp. MIN) node with `k` unbound
    /// variables on the current path.
    max_pv: Vec<Vec<PvStep>>,
    min_pv: Vec<Vec<PvStep>>,
    stack: Vec<Rational>,
}

impl<'a> Searcher<'a> {
    fn new(expr: &'a Expression, order: [u8; 10], table: Option<&'a mut TranspositionTable>) -> Self {
        let n = expr.variable_count();
        Searcher {
            expr,
            order,
            slots: vec![UNBOUND; n],
            key: 0,
            layout: KeyLayout::new(expr),
            sizes: (0..=n).map(|k| tree_size_u128(k).expect("T(k) fits u128 for k <= 16")).collect(),
            stats: SearchStats::default(),
            table,
            max_pv: vec![Vec::new(); n + 1],
            min_pv: vec![Vec::new(); n + 1],
            stack: Vec::with_capacity(expr.postfix().len()),
        }
    }

    fn bind(&mut self, var: usize, digit: u8) {
        self.slots[var] = digit;
        self.key += self.layout.component(var, digit);
    }

    fn unbind(&mut self, var: usize) {
        self.key -= self.layout.component(var, self.slots[var]);
        self.slots[var] = UNBOUND;
    }

    /// MAX node with `k` unbound variables. `parent` is the running minimum
    /// of the MIN parent (`None` stands for +infinity).
    fn max_node(&mut self, k: usize, parent: Option<Rational>, is_root: bool) -> Result<Value, Overflow> {
        self.stats.visited += 1;
        if k == 0 {
            self.max_pv[0].clear();
            return self.expr.eval_indexed(&self.slots, &mut self.stack);
        }
        let key = PositionKey::from(self.key);
        if !is_root {
            if let Some(entry) = self.table.as_ref().and_then(|t| t.lookup(key)) {
                self.stats.tt_hits += 1;
                self.stats.tt_prunes += self.sizes[k] - 1;
                self.max_pv[k].clone_from(&entry.pv_suffix);
                return Ok(entry.value);
            }
        }

        let mut best: Option<Rational> = None;
        let mut cut = false;
        self.max_pv[k].clear();
        for i in 0..10 {
            let digit = self.order[i];
            let value = self.min_node(k, best, digit)?;
            if let Value::Finite(v) = value {
                if best.is_none_or(|b| v > b) {
                    best = Some(v);
                    let (max_pv, min_pv) = (&mut self.max_pv, &self.min_pv);
                    max_pv[k].clone_from(&min_pv[k]);
                }
            }
            if let (Some(b), Some(p)) = (best, parent) {
                if b >= p {
                    let remaining = (9 - i) as u128;
                    if remaining > 0 {
                        self.stats.beta_cutoffs += 1;
                        self.stats.beta_prunes += remaining * (self.sizes[k] - 1) / 10;
                    }
                    cut = true;
                    break;
                }
            }
        }

        let value = Value::from(best);
        if !cut {
            if let Some(table) = self.table.as_mut() {
                let entry = TTEntry { value, pv_suffix: self.max_pv[k].clone() };
                if table.store(key, entry) {
                    self.stats.tt_stores += 1;
                }
            }
        }
        Ok(value)
    }

    /// MIN node with `k` unbound variables and `digit` pending. `parent` is
    /// the running maximum of the MAX parent (`None` stands for -infinity).
    fn min_node(&mut self, k: usize, parent: Option<Rational>, digit: u8) -> Result<Value, Overflow> {
        self.stats.visited += 1;
        let mut best: Option<Rational> = None;
        let mut remaining = k;
        self.min_pv[k].clear();
        for var in 0..self.slots.len() {
            if self.slots[var] != UNBOUND {
                continue;
            }
            remaining -= 1;
            self.bind(var, digit);
            let value = self.max_node(k - 1, best, false);
            self.unbind(var);
            if let Value::Finite(v) = value? {
                if best.is_none_or(|b| v < b) {
                    best = Some(v);
                    let (min_pv, max_pv) = (&mut self.min_pv, &self.max_pv);
                    let line = &mut min_pv[k];
                    line.clear();
                    line.push(PvStep { digit, var: var as u8 });
                    line.extend_from_slice(&max_pv[k - 1]);
                }
            }
            if let (Some(b), Some(p)) = (best, parent) {
                if b <= p {
                    if remaining > 0 {
                        self.stats.alpha_cutoffs += 1;
                        self.stats.alpha_prunes += remaining as u128 * self.sizes[k - 1];
                    }
                    break;
                }
            }
        }
        Ok(Value::from(best))
    }

    fn pv_bindings(&self, steps: &[PvStep]) -> Vec<Binding> {
        steps
            .iter()
            .map(|s| Binding::new(s.digit, self.expr.variables()[s.var as usize].clone()))
            .collect()
    }
}

fn check_cap(expr: &Expression, cap: usize) -> Result<(), SearchError> {
    let n = expr.variable_count();
    if n > cap {
        Err(SearchError::TooManyVariables { n, cap })
    } else {
        Ok(())
    }
}

/// Alpha-beta solve from the root.
pub fn solve_alphabeta(expr: &Expression, opts: &SearchOptions) -> Result<(SolveResult, SearchStats), SearchError> {
    let root = Position::root(expr.clone());
    solve_position(&root, opts)
}

/// Alpha-beta solve reusing a caller-owned table built for the same
/// expression text.
pub fn solve_alphabeta_with_table(
    expr: &Expression,
    opts: &SearchOptions,
    table: &mut TranspositionTable,
) -> Result<(SolveResult, SearchStats), SearchError> {
    table.check_expression(expr)?;
    check_cap(expr, opts.max_vars)?;
    run(&Position::root(expr.clone()), opts, Some(table))
}

/// Alpha-beta solve of the subgame at `pos`, which may be a MAX or a MIN
/// node. The returned variation starts at `pos`; at a MIN node its first
/// binding uses the pending digit.
pub fn solve_position(pos: &Position, opts: &SearchOptions) -> Result<(SolveResult, SearchStats), SearchError> {
    check_cap(pos.expr(), opts.max_vars)?;
    if opts.use_tt {
        let mut table = TranspositionTable::with_capacity_limit(pos.expr(), opts.tt_capacity);
        run(pos, opts, Some(&mut table))
    } else {
        run(pos, opts, None)
    }
}

fn run(
    pos: &Position,
    opts: &SearchOptions,
    table: Option<&mut TranspositionTable>,
) -> Result<(SolveResult, SearchStats), SearchError> {
    let expr = pos.expr();
    let mut s = Searcher::new(expr, *opts.digit_order.sequence(), table);
    for b in pos.bindings() {
        let var = expr.variable_index(&b.variable).expect("bound variable occurs in expression");
        s.bind(var, b.digit);
    }
    let k = pos.unbound_count();
    let (value, steps) = match pos.pending() {
        None => {
            let v = s.max_node(k, None, true)?;
            (v, &s.max_pv[k])
        }
        Some(digit) => {
            let v = s.min_node(k, None, digit)?;
            (v, &s.min_pv[k])
        }
    };
    if !value.is_valid() {
        return Err(SearchError::Unsolvable);
    }
    let pv = s.pv_bindings(steps);
    Ok((SolveResult { value, pv }, s.stats))
}

/// Plays as the minimizer first: the value is `-minimax(-E)`, and the
/// variation is that of the negated game.
pub fn solve_min_first(expr: &Expression, opts: &SearchOptions) -> Result<(SolveResult, SearchStats), SearchError> {
    let (res, stats) = solve_alphabeta(&expr.negate(), opts)?;
    Ok((SolveResult { value: res.value.checked_neg()?, pv: res.pv }, stats))
}

/// Backward induction with no pruning.
pub fn solve_oracle(expr: &Expression) -> Result<SolveResult, SearchError> {
    check_cap(expr, ORACLE_MAX_VARS)?;
    oracle_position(&Position::root(expr.clone()))
}

/// Backward induction from an arbitrary position. Children are explored in
/// ascending digit order and first-occurrence variable order; the first
/// child reaching the optimum supplies the variation.
pub fn oracle_position(pos: &Position) -> Result<SolveResult, SearchError> {
    let (value, mut pv) = induct(pos)?;
    pv.reverse();
    match value {
        Some(r) => Ok(SolveResult { value: Value::Finite(r), pv }),
        None => Err(SearchError::Unsolvable),
    }
}

/// Returns the node value (`None` if invalid) and its variation reversed.
fn induct(pos: &Position) -> Result<(Option<Rational>, Vec<Binding>), SearchError> {
    if pos.is_terminal() {
        let v = pos.terminal_value().map_err(|e| match e {
            EvalError::Overflow(o) => SearchError::Overflow(o),
            _ => unreachable!("terminal positions bind every variable"),
        })?;
        return Ok((v.finite(), Vec::new()));
    }
    let maximizing = pos.is_max_node();
    let mut best: Option<(Rational, Vec<Binding>)> = None;
    for m in pos.legal_moves(&DigitOrder::ASCENDING).expect("non-terminal") {
        let child = pos.apply_move(&m).expect("legal move");
        let (value, mut line) = induct(&child)?;
        let Some(v) = value else { continue };
        let better = match &best {
            None => true,
            Some((b, _)) => (maximizing && v > *b) || (!maximizing && v < *b),
        };
        if better {
            if let Move::AssignVariable(var) = &m {
                line.push(Binding::new(pos.pending().expect("MIN node"), var.clone()));
            }
            best = Some((v, line));
        }
    }
    Ok(match best {
        Some((v, line)) => (Some(v), line),
        None => (None, Vec::new()),
    })
}

/// Plays `pv` from the root and evaluates the resulting terminal.
pub fn replay(expr: &Expression, pv: &[Binding]) -> Result<Value, ReplayError> {
    let mut pos = Position::root(expr.clone());
    for b in pv {
        pos = pos.apply_move(&Move::ProposeDigit(b.digit))?;
        pos = pos.apply_move(&Move::AssignVariable(b.variable.clone()))?;
    }
    if !pos.is_terminal() {
        return Err(ReplayError::Incomplete(pos.unbound_count()));
    }
    Ok(pos.terminal_value()?)
}

/// The optimal move at `pos` for the side to move, with the value of optimal
/// play from there. Ties go to the first optimal child in search order. When
/// no continuation has a defined value the first legal move is returned
/// with [`Value::Invalid`].
pub fn best_move(pos: &Position, opts: &SearchOptions) -> Result<(Move, Value), SearchError> {
    let fallback = || match pos.pending() {
        None => Move::ProposeDigit(opts.digit_order.sequence()[0]),
        Some(_) => Move::AssignVariable(pos.unbound_variables().next().unwrap_or_default().to_string()),
    };
    match solve_position(pos, opts) {
        Ok((res, _)) => {
            let first = res.pv.first().expect("non-terminal position has a variation");
            let m = match pos.pending() {
                None => Move::ProposeDigit(first.digit),
                Some(_) => Move::AssignVariable(first.variable.clone()),
            };
            Ok((m, res.value))
        }
        Err(SearchError::Unsolvable) => Ok((fallback(), Value::Invalid)),
        Err(e) => Err(e),
    }
}

/// Wall-clock timer around a solve.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}
