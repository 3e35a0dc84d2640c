//! Arithmetic expressions: lexing, shunting-yard conversion to postfix, and
//! exact evaluation of the postfix program.
//!
//! The surface grammar is deliberately small: non-negative integer literals,
//! identifiers, the four binary operators and parentheses. There is no unary
//! minus; [`Expression::negate`] builds `0 - E` programmatically instead.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::value::{Overflow, Rational, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    Add,
    Sub,
    Mul,
    Div,
}

impl Operator {
    pub fn symbol(self) -> char {
        match self {
            Operator::Add => '+',
            Operator::Sub => '-',
            Operator::Mul => '*',
            Operator::Div => '/',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            Operator::Add | Operator::Sub => 1,
            Operator::Mul | Operator::Div => 2,
        }
    }

    fn apply(self, lhs: Rational, rhs: Rational) -> Result<Option<Rational>, Overflow> {
        match self {
            Operator::Add => lhs.checked_add(rhs).map(Some),
            Operator::Sub => lhs.checked_sub(rhs).map(Some),
            Operator::Mul => lhs.checked_mul(rhs).map(Some),
            Operator::Div => lhs.checked_div(rhs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    Number(i64),
    Variable(String),
    Operator(Operator),
    LeftParen,
    RightParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Number(n) => write!(f, "{n}"),
            Token::Variable(v) => f.write_str(v),
            Token::Operator(op) => write!(f, "{}", op.symbol()),
            Token::LeftParen => f.write_str("("),
            Token::RightParen => f.write_str(")"),
        }
    }
}

/// Lexing and parsing failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("unexpected character {ch:?} at offset {offset}")]
    Lex { ch: char, offset: usize },
    #[error("integer literal {literal} is too large")]
    LiteralTooLarge { literal: String },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Evaluation and substitution failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable {0} has no binding")]
    UnboundVariable(String),
    #[error("variable {0} does not occur in the expression")]
    UnknownVariable(String),
    #[error("digit {0} is outside 0-9")]
    DigitOutOfRange(u8),
    #[error(transparent)]
    Overflow(#[from] Overflow),
}

fn lex(text: &str) -> Result<Vec<(Token, Range<usize>)>, ExprError> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(start, ch)) = chars.peek() {
        if ch.is_whitespace() {
            chars.next();
            continue;
        }
        if ch.is_ascii_digit() {
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                end = i + c.len_utf8();
                chars.next();
            }
            let literal = &text[start..end];
            let n = literal
                .parse::<i64>()
                .map_err(|_| ExprError::LiteralTooLarge { literal: literal.to_string() })?;
            tokens.push((Token::Number(n), start..end));
            continue;
        }
        if ch.is_alphabetic() {
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if !(c.is_alphanumeric() || c == '_') {
                    break;
                }
                end = i + c.len_utf8();
                chars.next();
            }
            tokens.push((Token::Variable(text[start..end].to_string()), start..end));
            continue;
        }
        let token = match ch {
            '+' => Token::Operator(Operator::Add),
            '-' | '\u{2212}' => Token::Operator(Operator::Sub),
            '*' => Token::Operator(Operator::Mul),
            '/' => Token::Operator(Operator::Div),
            '(' => Token::LeftParen,
            ')' => Token::RightParen,
            _ => return Err(ExprError::Lex { ch, offset: start }),
        };
        chars.next();
        tokens.push((token, start..start + ch.len_utf8()));
    }
    Ok(tokens)
}

/// Splits `text` into tokens, skipping whitespace.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ExprError> {
    Ok(lex(text)?.into_iter().map(|(t, _)| t).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Push(Rational),
    Load(u8),
    Apply(Operator),
}

/// A parsed expression in postfix form.
///
/// Variables are indexed by first textual occurrence; that index is the
/// order used everywhere else (MIN-node children, principal variations).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expression {
    postfix: Vec<Token>,
    variables: Vec<String>,
    source: String,
    program: Vec<Op>,
}

/// Hard limit on distinct variables; search keys pack one nibble per variable.
pub const MAX_VARIABLES: usize = 16;

/// Converts infix tokens to postfix with Dijkstra's shunting-yard algorithm.
pub fn to_postfix(tokens: &[Token]) -> Result<Expression, ExprError> {
    let source = tokens.iter().map(ToString::to_string).collect::<String>();
    shunting_yard(tokens, source)
}

fn shunting_yard(tokens: &[Token], source: String) -> Result<Expression, ExprError> {
    if tokens.is_empty() {
        return Err(ExprError::Parse("empty expression".into()));
    }
    let mut output = Vec::with_capacity(tokens.len());
    let mut stack: Vec<&Token> = Vec::new();
    let mut expect_operand = true;

    for token in tokens {
        match token {
            Token::Number(_) | Token::Variable(_) => {
                if !expect_operand {
                    return Err(ExprError::Parse(format!("missing operator before {token}")));
                }
                output.push(token.clone());
                expect_operand = false;
            }
            Token::Operator(op) => {
                if expect_operand {
                    return Err(ExprError::Parse(format!("operator {} is missing its left operand", op.symbol())));
                }
                while let Some(Token::Operator(top)) = stack.last() {
                    if top.precedence() < op.precedence() {
                        break;
                    }
                    output.push(Token::Operator(*top));
                    stack.pop();
                }
                stack.push(token);
                expect_operand = true;
            }
            Token::LeftParen => {
                if !expect_operand {
                    return Err(ExprError::Parse("missing operator before (".into()));
                }
                stack.push(token);
            }
            Token::RightParen => {
                if expect_operand {
                    return Err(ExprError::Parse("missing operand before )".into()));
                }
                loop {
                    match stack.pop() {
                        Some(Token::LeftParen) => break,
                        Some(t) => output.push(t.clone()),
                        None => return Err(ExprError::Parse("unbalanced )".into())),
                    }
                }
            }
        }
    }
    if expect_operand {
        return Err(ExprError::Parse("expression ends without an operand".into()));
    }
    while let Some(t) = stack.pop() {
        if *t == Token::LeftParen {
            return Err(ExprError::Parse("unbalanced (".into()));
        }
        output.push(t.clone());
    }

    let mut variables: Vec<String> = Vec::new();
    for t in tokens {
        if let Token::Variable(name) = t {
            if !variables.contains(name) {
                variables.push(name.clone());
            }
        }
    }
    if variables.len() > MAX_VARIABLES {
        return Err(ExprError::Parse(format!(
            "{} distinct variables exceed the limit of {MAX_VARIABLES}",
            variables.len()
        )));
    }
    Ok(Expression::from_parts(output, variables, source))
}

impl Expression {
    /// Parses infix text.
    pub fn parse(text: &str) -> Result<Expression, ExprError> {
        shunting_yard(&tokenize(text)?, text.trim().to_string())
    }

    fn from_parts(postfix: Vec<Token>, variables: Vec<String>, source: String) -> Expression {
        let program = postfix
            .iter()
            .map(|t| match t {
                Token::Number(n) => Op::Push(Rational::integer(*n)),
                Token::Variable(v) => {
                    Op::Load(variables.iter().position(|x| x == v).expect("variable list is complete") as u8)
                }
                Token::Operator(op) => Op::Apply(*op),
                Token::LeftParen | Token::RightParen => unreachable!("postfix holds no parentheses"),
            })
            .collect();
        Expression { postfix, variables, source, program }
    }

    pub fn postfix(&self) -> &[Token] {
        &self.postfix
    }

    /// Distinct variables in first-occurrence order.
    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// True when the only operators are `+` and `*`.
    pub fn is_plus_times_only(&self) -> bool {
        self.postfix
            .iter()
            .all(|t| !matches!(t, Token::Operator(Operator::Sub | Operator::Div)))
    }

    /// Evaluates the expression under a full assignment.
    pub fn evaluate(&self, assignment: &Assignment) -> Result<Value, EvalError> {
        if let Some(extra) = assignment.variables().find(|v| self.variable_index(v).is_none()) {
            return Err(EvalError::UnknownVariable(extra.to_string()));
        }
        let mut digits = Vec::with_capacity(self.variables.len());
        for v in &self.variables {
            digits.push(assignment.get(v).ok_or_else(|| EvalError::UnboundVariable(v.clone()))?);
        }
        let mut stack = Vec::new();
        Ok(self.eval_indexed(&digits, &mut stack)?)
    }

    /// Evaluates with `digits[i]` bound to the `i`-th variable.
    ///
    /// `stack` is scratch space reused across calls. A zero divisor anywhere
    /// makes the whole expression [`Value::Invalid`].
    pub fn eval_indexed(&self, digits: &[u8], stack: &mut Vec<Rational>) -> Result<Value, Overflow> {
        stack.clear();
        for op in &self.program {
            match *op {
                Op::Push(r) => stack.push(r),
                Op::Load(i) => {
                    let d = digits[i as usize];
                    debug_assert!(d <= 9, "variable {i} is unbound");
                    stack.push(Rational::integer(d as i64));
                }
                Op::Apply(operator) => {
                    let rhs = stack.pop().expect("well-formed postfix");
                    let lhs = stack.pop().expect("well-formed postfix");
                    match operator.apply(lhs, rhs)? {
                        Some(r) => stack.push(r),
                        None => return Ok(Value::Invalid),
                    }
                }
            }
        }
        debug_assert_eq!(stack.len(), 1);
        Ok(Value::Finite(stack[0]))
    }

    /// Replaces every occurrence of `variable` with the literal `digit`.
    pub fn substitute(&self, variable: &str, digit: u8) -> Result<Expression, EvalError> {
        if digit > 9 {
            return Err(EvalError::DigitOutOfRange(digit));
        }
        if self.variable_index(variable).is_none() {
            return Err(EvalError::UnknownVariable(variable.to_string()));
        }
        let postfix = self
            .postfix
            .iter()
            .map(|t| match t {
                Token::Variable(v) if v == variable => Token::Number(digit as i64),
                other => other.clone(),
            })
            .collect();
        let variables = self.variables.iter().filter(|v| *v != variable).cloned().collect();
        let source = render_with_bindings(&self.source, |v| (v == variable).then_some(digit));
        Ok(Expression::from_parts(postfix, variables, source))
    }

    /// `0 - E`, with the same variables.
    pub fn negate(&self) -> Expression {
        let mut postfix = Vec::with_capacity(self.postfix.len() + 2);
        postfix.push(Token::Number(0));
        postfix.extend(self.postfix.iter().cloned());
        postfix.push(Token::Operator(Operator::Sub));
        Expression::from_parts(postfix, self.variables.clone(), format!("0-({})", self.source))
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl std::str::FromStr for Expression {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expression::parse(s)
    }
}

/// Rewrites `source`, replacing each identifier for which `binding` returns a
/// digit. Layout and spacing are preserved. Text that does not lex is
/// returned unchanged.
pub fn render_with_bindings(source: &str, binding: impl Fn(&str) -> Option<u8>) -> String {
    let Ok(tokens) = lex(source) else {
        return source.to_string();
    };
    let mut out = String::with_capacity(source.len());
    let mut last = 0;
    for (token, span) in tokens {
        if let Token::Variable(name) = &token {
            if let Some(d) = binding(name) {
                out.push_str(&source[last..span.start]);
                out.push(char::from(b'0' + d));
                last = span.end;
            }
        }
    }
    out.push_str(&source[last..]);
    out
}

/// Variable-to-digit bindings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    bindings: BTreeMap<String, u8>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, variable: impl Into<String>, digit: u8) -> Result<(), EvalError> {
        if digit > 9 {
            return Err(EvalError::DigitOutOfRange(digit));
        }
        self.bindings.insert(variable.into(), digit);
        Ok(())
    }

    pub fn with(mut self, variable: impl Into<String>, digit: u8) -> Result<Self, EvalError> {
        self.bind(variable, digit)?;
        Ok(self)
    }

    pub fn get(&self, variable: &str) -> Option<u8> {
        self.bindings.get(variable).copied()
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

impl<S: Into<String>> TryFrom<Vec<(S, u8)>> for Assignment {
    type Error = EvalError;

    fn try_from(pairs: Vec<(S, u8)>) -> Result<Self, Self::Error> {
        let mut a = Assignment::new();
        for (v, d) in pairs {
            a.bind(v, d)?;
        }
        Ok(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assign(pairs: &[(&str, u8)]) -> Assignment {
        Assignment::try_from(pairs.to_vec()).unwrap()
    }

    fn int(n: i64) -> Value {
        Value::Finite(Rational::integer(n))
    }

    #[test]
    fn tokenize_splits_multi_digit_numbers() {
        use Token::*;
        let tokens = tokenize("(10-X)*Y").unwrap();
        assert_eq!(
            tokens,
            vec![
                LeftParen,
                Number(10),
                Operator(super::Operator::Sub),
                Variable("X".into()),
                RightParen,
                Operator(super::Operator::Mul),
                Variable("Y".into()),
            ]
        );
    }

    #[test]
    fn tokenize_table_row_one() {
        let tokens = tokenize("x/y + 2*y/z - z/x").unwrap();
        assert_eq!(tokens.len(), 13);
        let e = Expression::parse("x/y + 2*y/z - z/x").unwrap();
        assert_eq!(e.variables(), ["x", "y", "z"]);
    }

    #[test]
    fn tokenize_rejects_illegal_characters() {
        assert_eq!(tokenize("3 $ x"), Err(ExprError::Lex { ch: '$', offset: 2 }));
        assert!(matches!(tokenize("99999999999999999999"), Err(ExprError::LiteralTooLarge { .. })));
    }

    #[test]
    fn postfix_hand_traces() {
        let e = Expression::parse("(10-X)*Y").unwrap();
        let rendered: Vec<String> = e.postfix().iter().map(ToString::to_string).collect();
        assert_eq!(rendered, ["10", "X", "-", "Y", "*"]);

        let e = Expression::parse("X*(Y-Z)").unwrap();
        let rendered: Vec<String> = e.postfix().iter().map(ToString::to_string).collect();
        assert_eq!(rendered, ["X", "Y", "Z", "-", "*"]);

        // left associativity
        let e = Expression::parse("a-b-c").unwrap();
        let rendered: Vec<String> = e.postfix().iter().map(ToString::to_string).collect();
        assert_eq!(rendered, ["a", "b", "-", "c", "-"]);
    }

    #[test]
    fn to_postfix_rejects_malformed_input() {
        for bad in ["X*+Y", "(X+Y", "X+Y)", "", "()", "X Y", "3(X)", "*X", "X-"] {
            let result = tokenize(bad).and_then(|t| to_postfix(&t));
            assert!(matches!(result, Err(ExprError::Parse(_))), "{bad:?} -> {result:?}");
        }
    }

    #[test]
    fn evaluate_worked_examples() {
        let e = Expression::parse("X*(Y-Z)").unwrap();
        assert_eq!(e.evaluate(&assign(&[("X", 5), ("Y", 9), ("Z", 3)])).unwrap(), int(30));
        assert_eq!(e.evaluate(&assign(&[("X", 3), ("Y", 5), ("Z", 9)])).unwrap(), int(-12));
        let inv = Expression::parse("1/X").unwrap();
        assert_eq!(inv.evaluate(&assign(&[("X", 0)])).unwrap(), Value::Invalid);
    }

    #[test]
    fn evaluate_is_exact() {
        let e = Expression::parse("x/y + 2*y/z - z/x").unwrap();
        let v = e.evaluate(&assign(&[("x", 3), ("z", 3), ("y", 9)])).unwrap();
        assert_eq!(v, Value::Finite(Rational::new(16, 3).unwrap()));
    }

    #[test]
    fn evaluate_reports_binding_errors() {
        let e = Expression::parse("X+Y").unwrap();
        assert_eq!(e.evaluate(&assign(&[("X", 1)])), Err(EvalError::UnboundVariable("Y".into())));
        assert_eq!(
            e.evaluate(&assign(&[("X", 1), ("Y", 2), ("Q", 3)])),
            Err(EvalError::UnknownVariable("Q".into()))
        );
        assert_eq!(Assignment::new().with("X", 10), Err(EvalError::DigitOutOfRange(10)));
    }

    #[test]
    fn evaluate_signals_overflow() {
        let e = Expression::parse("9223372036854775807 * X").unwrap();
        assert_eq!(e.evaluate(&assign(&[("X", 2)])), Err(EvalError::Overflow(Overflow)));
    }

    #[test]
    fn substitute_examples() {
        let e = Expression::parse("(10-X)*Y").unwrap();
        let s = e.substitute("Y", 1).unwrap();
        assert_eq!(s.variables(), ["X"]);
        assert_eq!(s.source(), "(10-X)*1");

        let e = Expression::parse("X*(Y-Z)").unwrap();
        let s = e.substitute("X", 5).unwrap();
        assert_eq!(s.source(), "5*(Y-Z)");
        assert_eq!(s.variables(), ["Y", "Z"]);

        let e = Expression::parse("X+Y").unwrap();
        assert_eq!(e.substitute("Q", 3), Err(EvalError::UnknownVariable("Q".into())));
    }

    #[test]
    fn negate_examples() {
        let x = Expression::parse("X").unwrap().negate();
        assert_eq!(x.evaluate(&assign(&[("X", 7)])).unwrap(), int(-7));
        let e = Expression::parse("X*(Y-Z)").unwrap().negate();
        assert_eq!(e.evaluate(&assign(&[("X", 5), ("Y", 9), ("Z", 3)])).unwrap(), int(-30));
        let inv = Expression::parse("1/X").unwrap().negate();
        assert_eq!(inv.evaluate(&assign(&[("X", 0)])).unwrap(), Value::Invalid);
        assert_eq!(Expression::parse(x.source()).unwrap().postfix(), x.postfix());
    }

    #[test]
    fn render_keeps_layout() {
        let s = render_with_bindings("(10 - X) * Y", |v| (v == "X").then_some(5));
        assert_eq!(s, "(10 - 5) * Y");
    }

    // Independent recursive-descent evaluator over the raw characters. A
    // zero divisor sets `invalid` and parsing carries on with a placeholder.
    struct Descent<'a> {
        chars: Vec<char>,
        pos: usize,
        env: &'a BTreeMap<String, u8>,
        invalid: bool,
    }

    impl Descent<'_> {
        fn run(src: &str, env: &BTreeMap<String, u8>) -> Option<Rational> {
            let mut d = Descent { chars: src.chars().collect(), pos: 0, env, invalid: false };
            let v = d.expr();
            assert_eq!(d.peek(), None);
            (!d.invalid).then_some(v)
        }

        fn peek(&mut self) -> Option<char> {
            while self.pos < self.chars.len() && self.chars[self.pos] == ' ' {
                self.pos += 1;
            }
            self.chars.get(self.pos).copied()
        }

        fn expr(&mut self) -> Rational {
            let mut acc = self.term();
            while let Some(c @ ('+' | '-')) = self.peek() {
                self.pos += 1;
                let rhs = self.term();
                acc = if c == '+' { acc.checked_add(rhs).unwrap() } else { acc.checked_sub(rhs).unwrap() };
            }
            acc
        }

        fn term(&mut self) -> Rational {
            let mut acc = self.atom();
            while let Some(c @ ('*' | '/')) = self.peek() {
                self.pos += 1;
                let rhs = self.atom();
                acc = if c == '*' {
                    acc.checked_mul(rhs).unwrap()
                } else {
                    acc.checked_div(rhs).unwrap().unwrap_or_else(|| {
                        self.invalid = true;
                        Rational::ZERO
                    })
                };
            }
            acc
        }

        fn atom(&mut self) -> Rational {
            let c = self.peek().unwrap();
            if c == '(' {
                self.pos += 1;
                let v = self.expr();
                assert_eq!(self.peek(), Some(')'));
                self.pos += 1;
                return v;
            }
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_alphanumeric() {
                self.pos += 1;
            }
            let word: String = self.chars[start..self.pos].iter().collect();
            match word.parse::<i64>() {
                Ok(n) => Rational::integer(n),
                Err(_) => Rational::integer(self.env[&word] as i64),
            }
        }
    }

    fn arb_expr() -> impl Strategy<Value = String> {
        let leaf = prop_oneof![
            (0i64..20).prop_map(|n| n.to_string()),
            prop::sample::select(vec!["a", "b", "c", "d"]).prop_map(str::to_string),
        ];
        leaf.prop_recursive(5, 32, 2, |inner| {
            prop_oneof![
                (inner.clone(), prop::sample::select(vec!['+', '-', '*', '/']), inner.clone())
                    .prop_map(|(l, op, r)| format!("{l} {op} {r}")),
                inner.prop_map(|e| format!("({e})")),
            ]
        })
    }

    proptest! {
        #[test]
        fn postfix_matches_recursive_descent(src in arb_expr(), digits in prop::array::uniform4(0u8..10)) {
            let env: BTreeMap<String, u8> =
                ["a", "b", "c", "d"].iter().map(|s| s.to_string()).zip(digits).collect();
            let expected = Descent::run(&src, &env);
            let e = Expression::parse(&src).unwrap();
            let mut a = Assignment::new();
            for v in e.variables() {
                a.bind(v.clone(), env[v]).unwrap();
            }
            prop_assert_eq!(e.evaluate(&a).unwrap(), Value::from(expected));
        }

        #[test]
        fn negate_flips_sign(src in arb_expr(), digits in prop::array::uniform4(0u8..10)) {
            let e = Expression::parse(&src).unwrap();
            let n = e.negate();
            let mut stack = Vec::new();
            let d = &digits[..e.variable_count()];
            let v = e.eval_indexed(d, &mut stack).unwrap();
            prop_assert_eq!(n.variables(), e.variables());
            prop_assert_eq!(n.eval_indexed(d, &mut stack).unwrap(), v.checked_neg().unwrap());
        }

        #[test]
        fn substitute_then_evaluate(src in arb_expr(), digits in prop::array::uniform4(0u8..10), pick in 0usize..4) {
            let e = Expression::parse(&src).unwrap();
            prop_assume!(e.variable_count() > 0);
            let var = e.variables()[pick % e.variable_count()].clone();
            let mut full = Assignment::new();
            let mut rest = Assignment::new();
            for (i, v) in e.variables().iter().enumerate() {
                full.bind(v.clone(), digits[i]).unwrap();
                if *v != var {
                    rest.bind(v.clone(), digits[i]).unwrap();
                }
            }
            let s = e.substitute(&var, full.get(&var).unwrap()).unwrap();
            prop_assert_eq!(s.evaluate(&rest).unwrap(), e.evaluate(&full).unwrap());
            let reparsed = Expression::parse(s.source()).unwrap();
            prop_assert_eq!(reparsed.postfix(), s.postfix());
        }
    }
}
