//! One live game between a human and the engine.
//!
//! The minimax value is solved once when the game is created. Engine moves
//! come from sub-solves of the current position, so the engine punishes any
//! deviation by the human.

use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use evaluate::expr::{render_with_bindings, ExprError, Expression};
use evaluate::fairness::{judge, Outcome};
use evaluate::ordering::{DigitOrder, EstimateConfig};
use evaluate::search::{best_move, solve_alphabeta, SearchError, SearchOptions};
use evaluate::tree::{IllegalMove, Move, Player, Position};
use evaluate::value::Value;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use uuid::Uuid;

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("cannot parse expression: {0}")]
    Parse(#[from] ExprError),
    #[error("expression has {n} variables; interactive games allow at most {cap}")]
    TooManyVariables { n: usize, cap: usize },
    #[error("no instantiation of the expression has a defined value")]
    Unsolvable,
    #[error("it is not your turn")]
    NotYourTurn,
    #[error("the game is finished")]
    Finished,
    #[error("illegal move: {0}")]
    Illegal(#[from] IllegalMove),
    #[error("illegal move: {0}")]
    BadMove(String),
    #[error("search failed: {0}")]
    Search(SearchError),
}

impl From<SearchError> for SessionError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Unsolvable => SessionError::Unsolvable,
            SearchError::TooManyVariables { n, cap } => SessionError::TooManyVariables { n, cap },
            other => SessionError::Search(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Actor {
    Human,
    Engine,
}

/// A move as it travels over the wire.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MoveRequest {
    Digit { digit: i64 },
    Assign { variable: String },
}

impl MoveRequest {
    fn to_move(&self) -> Result<Move, SessionError> {
        match self {
            MoveRequest::Digit { digit } => match u8::try_from(*digit) {
                Ok(d) if d <= 9 => Ok(Move::ProposeDigit(d)),
                _ => Err(SessionError::BadMove(format!("digit {digit} is outside 0-9"))),
            },
            MoveRequest::Assign { variable } => Ok(Move::AssignVariable(variable.clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveView {
    #[serde(rename = "type")]
    pub kind: String,
    pub digit: u8,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub variable: Option<String>,
}

impl MoveView {
    /// `digit` is the pending digit for assignments.
    fn new(m: &Move, pending: Option<u8>) -> Self {
        match m {
            Move::ProposeDigit(d) => MoveView { kind: "digit".into(), digit: *d, variable: None },
            Move::AssignVariable(v) => MoveView {
                kind: "assign".into(),
                digit: pending.expect("assignments follow a proposal"),
                variable: Some(v.clone()),
            },
        }
    }

    fn to_move(&self) -> Move {
        match &self.variable {
            Some(v) => Move::AssignVariable(v.clone()),
            None => Move::ProposeDigit(self.digit),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub player: Player,
    pub actor: Actor,
    #[serde(rename = "move")]
    pub mv: MoveView,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueView {
    pub num: Option<i64>,
    pub den: Option<i64>,
    pub display: String,
}

impl From<Value> for ValueView {
    fn from(v: Value) -> Self {
        match v {
            Value::Finite(r) => ValueView { num: Some(r.numer()), den: Some(r.denom()), display: r.to_string() },
            Value::Invalid => ValueView { num: None, den: None, display: v.to_string() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableView {
    pub name: String,
    pub digit: Option<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    InProgress,
    Finished,
}

/// What a client may see. `minimax`, `final_value` and `outcome` stay
/// empty until the game is finished.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateView {
    pub id: Uuid,
    pub expression: String,
    pub display: String,
    pub variables: Vec<VariableView>,
    pub human_role: Player,
    pub pending_digit: Option<u8>,
    pub to_move: Option<Player>,
    pub your_turn: bool,
    pub history: Vec<HistoryEntry>,
    pub status: Status,
    pub hint_count: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub final_value: Option<ValueView>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub minimax: Option<ValueView>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub outcome: Option<Outcome>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verdict: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hint {
    #[serde(rename = "move")]
    pub mv: MoveView,
    pub value: ValueView,
}

/// Engine settings shared by every session.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub max_vars: usize,
    pub samples: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { max_vars: 5, samples: evaluate::ordering::DEFAULT_SAMPLES }
    }
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

#[derive(Debug, Clone)]
pub struct GameSession {
    id: Uuid,
    expr: Arc<Expression>,
    human_role: Player,
    seed: u64,
    opts: SearchOptions,
    position: Position,
    history: Vec<HistoryEntry>,
    minimax: Value,
    outcome: Option<Outcome>,
    hint_count: u32,
    last_active: u64,
}

impl GameSession {
    /// Parses and solves `expression`; if the engine plays MAX it proposes
    /// its first digit straight away.
    pub fn create(expression: &str, human_role: Player, seed: u64, config: &EngineConfig) -> Result<Self, SessionError> {
        let expr = Expression::parse(expression)?;
        let n = expr.variable_count();
        if n > config.max_vars {
            return Err(SessionError::TooManyVariables { n, cap: config.max_vars });
        }
        let estimate = EstimateConfig { samples: config.samples, seed, ..Default::default() };
        let opts = SearchOptions::heuristic(&expr, &estimate).map_err(SearchError::from)?.with_max_vars(config.max_vars);
        let (solved, _) = solve_alphabeta(&expr, &opts)?;
        let expr = Arc::new(expr);
        let mut session = GameSession {
            id: Uuid::new_v4(),
            position: Position::root(expr.clone()),
            expr,
            human_role,
            seed,
            opts,
            history: Vec::new(),
            minimax: solved.value,
            outcome: None,
            hint_count: 0,
            last_active: unix_now(),
        };
        session.engine_replies()?;
        Ok(session)
    }

    pub fn id(&self) -> Uuid {
        self.id
    }

    pub fn position(&self) -> &Position {
        &self.position
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    pub fn minimax(&self) -> Value {
        self.minimax
    }

    pub fn is_finished(&self) -> bool {
        self.position.is_terminal()
    }

    pub fn last_active(&self) -> u64 {
        self.last_active
    }

    pub fn touch(&mut self) {
        self.last_active = unix_now();
    }

    fn record(&mut self, m: &Move, actor: Actor) -> Result<(), SessionError> {
        let player = self.position.to_move();
        let view = MoveView::new(m, self.position.pending());
        self.position = self.position.apply_move(m)?;
        self.history.push(HistoryEntry { player, actor, mv: view });
        if self.position.is_terminal() {
            let v = self.position.terminal_value().map_err(|e| SessionError::BadMove(e.to_string()))?;
            self.outcome = Some(judge(v, self.minimax));
        }
        Ok(())
    }

    fn engine_replies(&mut self) -> Result<(), SessionError> {
        while !self.position.is_terminal() && self.position.to_move() != self.human_role {
            let (m, _) = best_move(&self.position, &self.opts)?;
            self.record(&m, Actor::Engine)?;
        }
        Ok(())
    }

    fn check_human_turn(&self) -> Result<(), SessionError> {
        if self.is_finished() {
            Err(SessionError::Finished)
        } else if self.position.to_move() != self.human_role {
            Err(SessionError::NotYourTurn)
        } else {
            Ok(())
        }
    }

    /// Applies the human's move and the engine's reply.
    pub fn play(&mut self, request: &MoveRequest) -> Result<(), SessionError> {
        self.touch();
        self.check_human_turn()?;
        let m = request.to_move()?;
        let wrong_kind = match (&m, self.position.pending()) {
            (Move::ProposeDigit(_), Some(_)) => Some("a digit is pending; assign it to a variable"),
            (Move::AssignVariable(_), None) => Some("propose a digit first"),
            _ => None,
        };
        if let Some(reason) = wrong_kind {
            return Err(SessionError::BadMove(reason.into()));
        }
        self.record(&m, Actor::Human)?;
        self.engine_replies()
    }

    /// The optimal move for the human and the value of optimal play after it.
    pub fn hint(&mut self) -> Result<Hint, SessionError> {
        self.touch();
        self.check_human_turn()?;
        let (m, value) = best_move(&self.position, &self.opts)?;
        self.hint_count += 1;
        Ok(Hint { mv: MoveView::new(&m, self.position.pending()), value: value.into() })
    }

    pub fn view(&self) -> StateView {
        let finished = self.is_finished();
        let display = render_with_bindings(self.expr.source(), |v| self.position.digit_of(v));
        let final_value = finished.then(|| self.position.terminal_value().unwrap_or(Value::Invalid));
        StateView {
            id: self.id,
            expression: self.expr.source().to_string(),
            display,
            variables: self
                .expr
                .variables()
                .iter()
                .map(|name| VariableView { name: name.clone(), digit: self.position.digit_of(name) })
                .collect(),
            human_role: self.human_role,
            pending_digit: self.position.pending(),
            to_move: (!finished).then(|| self.position.to_move()),
            your_turn: !finished && self.position.to_move() == self.human_role,
            history: self.history.clone(),
            status: if finished { Status::Finished } else { Status::InProgress },
            hint_count: self.hint_count,
            final_value: final_value.map(Into::into),
            minimax: finished.then(|| self.minimax.into()),
            outcome: self.outcome,
            verdict: self.outcome.map(|o| o.to_string()),
        }
    }

    pub fn to_record(&self) -> SessionRecord {
        SessionRecord {
            id: self.id,
            expression: self.expr.source().to_string(),
            human_role: self.human_role,
            seed: self.seed,
            digit_order: self.opts.digit_order.to_string(),
            minimax: self.minimax,
            history: self.history.clone(),
            hint_count: self.hint_count,
            last_active: self.last_active,
        }
    }

    /// Rebuilds a session by replaying its recorded history.
    pub fn from_record(r: &SessionRecord, config: &EngineConfig) -> Result<Self, SessionError> {
        let expr = Arc::new(Expression::parse(&r.expression)?);
        let order: DigitOrder = r.digit_order.parse().map_err(SessionError::BadMove)?;
        let opts = SearchOptions::plain().with_order(order).with_tt(true).with_max_vars(config.max_vars);
        let mut session = GameSession {
            id: r.id,
            position: Position::root(expr.clone()),
            expr,
            human_role: r.human_role,
            seed: r.seed,
            opts,
            history: Vec::new(),
            minimax: r.minimax,
            outcome: None,
            hint_count: r.hint_count,
            last_active: r.last_active,
        };
        for entry in &r.history {
            session.record(&entry.mv.to_move(), entry.actor)?;
        }
        Ok(session)
    }
}

/// Snapshot form of a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub id: Uuid,
    pub expression: String,
    pub human_role: Player,
    pub seed: u64,
    pub digit_order: String,
    pub minimax: Value,
    pub history: Vec<HistoryEntry>,
    pub hint_count: u32,
    pub last_active: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digit(d: i64) -> MoveRequest {
        MoveRequest::Digit { digit: d }
    }

    fn assign(v: &str) -> MoveRequest {
        MoveRequest::Assign { variable: v.into() }
    }

    #[test]
    fn engine_as_max_opens_with_five() {
        let s = GameSession::create("(10-X)*Y", Player::Min, 0, &EngineConfig::default()).unwrap();
        let view = s.view();
        assert_eq!(view.pending_digit, Some(5));
        assert!(view.your_turn);
        assert_eq!(view.history.len(), 1);
        assert!(view.minimax.is_none());
    }

    #[test]
    fn following_hints_draws() {
        let mut s = GameSession::create("(10-X)*Y", Player::Min, 0, &EngineConfig::default()).unwrap();
        while !s.is_finished() {
            let hint = s.hint().unwrap();
            assert_eq!(hint.value.display, "45");
            s.play(&assign(hint.mv.variable.as_deref().unwrap())).unwrap();
        }
        let view = s.view();
        assert_eq!(view.outcome, Some(Outcome::Draw));
        assert_eq!(view.final_value.unwrap().display, "45");
        assert_eq!(view.minimax.unwrap().display, "45");
        assert_eq!(view.hint_count, 2);
    }

    #[test]
    fn deviating_max_loses() {
        let mut s = GameSession::create("X*(Y-Z)", Player::Max, 0, &EngineConfig::default()).unwrap();
        for d in [5, 3, 9] {
            s.play(&digit(d)).unwrap();
        }
        let view = s.view();
        assert_eq!(view.final_value.unwrap().display, "-12");
        assert_eq!(view.outcome, Some(Outcome::MinWins));
        assert_eq!(view.minimax.unwrap().display, "18");
        let assigned: Vec<_> = view.history.iter().filter_map(|h| h.mv.variable.clone()).collect();
        assert_eq!(assigned, ["Y", "X", "Z"]);
    }

    #[test]
    fn display_substitutes_bound_variables() {
        let mut s = GameSession::create("(10-X)*Y", Player::Min, 0, &EngineConfig::default()).unwrap();
        s.play(&assign("X")).unwrap();
        assert_eq!(s.view().display, "(10-5)*Y");
    }

    #[test]
    fn rules_are_enforced() {
        let mut s = GameSession::create("X*(Y-Z)", Player::Max, 0, &EngineConfig::default()).unwrap();
        assert!(matches!(s.play(&digit(11)), Err(SessionError::BadMove(_))));
        assert!(matches!(s.play(&digit(-1)), Err(SessionError::BadMove(_))));
        assert!(matches!(s.play(&assign("X")), Err(SessionError::BadMove(_))));
        s.play(&digit(5)).unwrap();
        assert_eq!(s.view().history.len(), 2);
        let mut min = GameSession::create("X*(Y-Z)", Player::Min, 0, &EngineConfig::default()).unwrap();
        assert!(matches!(min.play(&assign("Q")), Err(SessionError::Illegal(_))));
        min.play(&assign("X")).unwrap();
        let bound = min.view().history[1].mv.variable.clone().unwrap();
        assert!(matches!(min.play(&assign(&bound)), Err(SessionError::Illegal(_))));
    }

    #[test]
    fn caps_and_unsolvable_expressions_are_rejected() {
        let cfg = EngineConfig::default();
        assert!(matches!(GameSession::create("a+b+c+d+e+f", Player::Max, 0, &cfg), Err(SessionError::TooManyVariables { .. })));
        assert!(matches!(GameSession::create("X*+Y", Player::Max, 0, &cfg), Err(SessionError::Parse(_))));
        assert!(matches!(GameSession::create("1/(X-X)", Player::Max, 0, &cfg), Err(SessionError::Unsolvable)));
    }

    #[test]
    fn records_replay_to_the_same_state() {
        let mut s = GameSession::create("X*(Y-Z)", Player::Max, 0, &EngineConfig::default()).unwrap();
        s.play(&digit(5)).unwrap();
        s.hint().unwrap();
        let record = s.to_record();
        let json = serde_json::to_string(&record).unwrap();
        let back = GameSession::from_record(&serde_json::from_str(&json).unwrap(), &EngineConfig::default()).unwrap();
        assert_eq!(back.view(), s.view());
        assert_eq!(back.position(), s.position());
    }
}
