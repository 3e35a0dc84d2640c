//! Exact minimax engine for e-Valuate, a two-player game on arithmetic
//! expressions.
//!
//! MAX proposes a digit, MIN substitutes it for an uninstantiated variable
//! of its choice, and the two alternate until every variable is bound. The
//! final value is judged against the expression's minimax value.
//!
//! ```
//! use evaluate::{solve_alphabeta, Expression, SearchOptions};
//!
//! let expr = Expression::parse("(10-X)*Y").unwrap();
//! let (result, stats) = solve_alphabeta(&expr, &SearchOptions::plain()).unwrap();
//! assert_eq!(result.value.to_string(), "45");
//! assert_eq!(result.pv_string(), "5\u{2192}X, 9\u{2192}Y");
//! assert_eq!(stats.alpha_cutoffs, 4);
//! ```

pub mod bench;
pub mod expr;
pub mod fairness;
pub mod ordering;
pub mod search;
pub mod tree;
pub mod ttable;
pub mod value;

pub use expr::{tokenize, to_postfix, Assignment, EvalError, ExprError, Expression, Operator, Token};
pub use fairness::{estimate_fairness, exact_fairness, judge, FairnessReport, Outcome};
pub use ordering::{estimate_digit_order, estimate_digit_order_with, DigitOrder, EstimateConfig, SamplingMode};
pub use search::{
    best_move, replay, solve_alphabeta, solve_alphabeta_with_table, solve_min_first, solve_oracle, solve_position,
    SearchError, SearchOptions, SearchStats, SolveResult,
};
pub use tree::{leaf_count, tree_size, Binding, Move, NodeCount, Player, Position};
pub use ttable::{canonical_key, PositionKey, TTEntry, TranspositionTable};
pub use value::{Overflow, Rational, Value};
