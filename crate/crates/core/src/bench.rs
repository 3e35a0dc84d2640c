//! Prune-count comparison on the four reference expressions.
//!
//! Each expression is solved twice: plain alpha-beta with ascending digits,
//! and alpha-beta with the estimated digit order plus a transposition table.
//! Results export to CSV, one record per (expression, method).

use std::fmt;
use std::io;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::expr::Expression;
use crate::ordering::{DigitOrder, EstimateConfig};
use crate::search::{solve_alphabeta, SearchError, SearchOptions, SearchStats};
use crate::tree::Binding;
use crate::value::{Rational, Value};

/// A reference expression with its published figures.
#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub expression: &'static str,
    pub minimax: (i64, i64),
    /// Published principal variation, in play order.
    pub pv: &'static [(u8, &'static str)],
    /// Nodes pruned by plain alpha-beta, as published (rounded for rows 3-4).
    pub plain_pruned: f64,
    pub digit_order: [u8; 10],
    pub ordered_pruned: f64,
}

impl Fixture {
    pub fn expr(&self) -> Expression {
        Expression::parse(self.expression).expect("fixtures parse")
    }

    pub fn minimax(&self) -> Value {
        Value::Finite(Rational::new(self.minimax.0, self.minimax.1).expect("nonzero denominator"))
    }

    pub fn pv(&self) -> Vec<Binding> {
        self.pv.iter().map(|&(d, v)| Binding::new(d, v)).collect()
    }
}

pub const TABLE: [Fixture; 4] = [
    Fixture {
        expression: "x/y + 2*y/z - z/x",
        minimax: (16, 3),
        pv: &[(3, "x"), (3, "z"), (9, "y")],
        plain_pruned: 4515.0,
        digit_order: [1, 4, 3, 5, 6, 7, 2, 8, 9, 0],
        ordered_pruned: 7526.0,
    },
    Fixture {
        expression: "w - y*z/3 + 3*x",
        minimax: (21, 1),
        pv: &[(6, "w"), (7, "y"), (5, "x"), (0, "z")],
        plain_pruned: 302_271.0,
        digit_order: [9, 8, 7, 6, 5, 4, 3, 2, 1, 0],
        ordered_pruned: 464_162.0,
    },
    Fixture {
        expression: "v + w + x - y - z",
        minimax: (12, 1),
        pv: &[(7, "y"), (8, "v"), (7, "w"), (4, "x"), (0, "z")],
        plain_pruned: 2.18e8,
        digit_order: [7, 3, 4, 5, 6, 1, 2, 8, 9, 0],
        ordered_pruned: 2.53e8,
    },
    Fixture {
        expression: "(a+b)/c + (d+e)/f",
        minimax: (38, 5),
        pv: &[(3, "a"), (3, "c"), (5, "f"), (9, "b"), (9, "d"), (9, "e")],
        plain_pruned: 1.33e10,
        digit_order: [5, 4, 3, 2, 8, 1, 9, 0, 6, 7],
        ordered_pruned: 1.55e10,
    },
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Ascending digits, no transposition table.
    Alphabeta,
    /// Estimated digit order and a transposition table.
    OrderedTt,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Alphabeta => "alphabeta",
            Method::OrderedTt => "ordered_tt",
        })
    }
}

/// One solve of one expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodRun {
    pub method: Method,
    pub minimax: Value,
    pub pv: Vec<Binding>,
    pub visited: u128,
    pub alpha_prunes: u128,
    pub beta_prunes: u128,
    pub tt_prunes: u128,
    pub digit_order: DigitOrder,
    pub millis: u64,
}

impl MethodRun {
    fn new(method: Method, value: Value, pv: Vec<Binding>, stats: &SearchStats, order: DigitOrder, millis: u64) -> Self {
        MethodRun {
            method,
            minimax: value,
            pv,
            visited: stats.visited,
            alpha_prunes: stats.alpha_prunes,
            beta_prunes: stats.beta_prunes,
            tt_prunes: stats.tt_prunes,
            digit_order: order,
            millis,
        }
    }

    pub fn pruned(&self) -> u128 {
        self.alpha_prunes + self.beta_prunes + self.tt_prunes
    }

    pub fn accounted(&self) -> u128 {
        self.visited + self.pruned()
    }

    fn to_record(&self, expression: &str) -> BenchRecord {
        BenchRecord {
            expression: expression.to_string(),
            minimax: self.minimax.to_string(),
            pv: self.pv.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
            method: self.method,
            visited: self.visited,
            alpha_prunes: self.alpha_prunes,
            beta_prunes: self.beta_prunes,
            tt_prunes: self.tt_prunes,
            digit_order: self.digit_order.to_string(),
            millis: self.millis,
        }
    }

    fn from_record(r: &BenchRecord) -> Result<Self, String> {
        Ok(MethodRun {
            method: r.method,
            minimax: r.minimax.parse()?,
            pv: r.pv.split_whitespace().map(Binding::from_str).collect::<Result<_, _>>()?,
            visited: r.visited,
            alpha_prunes: r.alpha_prunes,
            beta_prunes: r.beta_prunes,
            tt_prunes: r.tt_prunes,
            digit_order: r.digit_order.parse()?,
            millis: r.millis,
        })
    }
}

/// Both configurations on one expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub expression: String,
    pub variables: usize,
    pub plain: MethodRun,
    pub ordered: MethodRun,
}

impl BenchRow {
    pub fn ab_pruned(&self) -> u128 {
        self.plain.pruned()
    }

    pub fn ordered_tt_pruned(&self) -> u128 {
        self.ordered.pruned()
    }

    /// Plain visited count over ordered visited count.
    pub fn visit_ratio(&self) -> f64 {
        self.plain.visited as f64 / self.ordered.visited.max(1) as f64
    }

    pub fn to_records(&self) -> [BenchRecord; 2] {
        [self.plain.to_record(&self.expression), self.ordered.to_record(&self.expression)]
    }

    pub fn from_records(plain: &BenchRecord, ordered: &BenchRecord) -> Result<Self, String> {
        if plain.expression != ordered.expression {
            return Err("records describe different expressions".into());
        }
        let expr = Expression::parse(&plain.expression).map_err(|e| e.to_string())?;
        Ok(BenchRow {
            expression: plain.expression.clone(),
            variables: expr.variable_count(),
            plain: MethodRun::from_record(plain)?,
            ordered: MethodRun::from_record(ordered)?,
        })
    }
}

/// CSV line layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub expression: String,
    pub minimax: String,
    pub pv: String,
    pub method: Method,
    pub visited: u128,
    pub alpha_prunes: u128,
    pub beta_prunes: u128,
    pub tt_prunes: u128,
    pub digit_order: String,
    pub millis: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    pub estimate: EstimateConfig,
    pub max_vars: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { estimate: EstimateConfig::default(), max_vars: crate::search::DEFAULT_MAX_VARS }
    }
}

/// Runs both configurations on `expr`. The ordered run's time
/// includes estimating the digit order.
pub fn run_row(expr: &Expression, config: &BenchConfig) -> Result<BenchRow, SearchError> {
    let plain_opts = SearchOptions::plain().with_max_vars(config.max_vars);
    let start = Instant::now();
    let (res, stats) = solve_alphabeta(expr, &plain_opts)?;
    let plain = MethodRun::new(
        Method::Alphabeta,
        res.value,
        res.pv,
        &stats,
        plain_opts.digit_order.clone(),
        start.elapsed().as_millis() as u64,
    );

    let start = Instant::now();
    let opts = SearchOptions::heuristic(expr, &config.estimate)?.with_max_vars(config.max_vars);
    let (res, stats) = solve_alphabeta(expr, &opts)?;
    let ordered = MethodRun::new(
        Method::OrderedTt,
        res.value,
        res.pv,
        &stats,
        opts.digit_order.clone(),
        start.elapsed().as_millis() as u64,
    );

    Ok(BenchRow { expression: expr.source().to_string(), variables: expr.variable_count(), plain, ordered })
}

pub fn write_csv<W: io::Write>(rows: &[BenchRow], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        for rec in row.to_records() {
            w.serialize(rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads rows written by [`write_csv`]; records pair up in file order.
pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<BenchRow>, String> {
    let mut r = csv::Reader::from_reader(input);
    let records: Vec<BenchRecord> = r.deserialize().collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    if !records.len().is_multiple_of(2) {
        return Err("odd number of bench records".into());
    }
    records.chunks(2).map(|pair| BenchRow::from_records(&pair[0], &pair[1])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::replay;
    use crate::tree::tree_size_u128;

    #[test]
    fn fixtures_are_consistent() {
        for f in TABLE {
            let e = f.expr();
            assert_eq!(e.variable_count(), f.pv.len());
            assert_eq!(replay(&e, &f.pv()).unwrap(), f.minimax(), "{}", f.expression);
            assert!(DigitOrder::from_sequence(f.digit_order).is_some());
        }
    }

    #[test]
    fn csv_round_trip() {
        let row = run_row(&TABLE[0].expr(), &BenchConfig::default()).unwrap();
        let n = tree_size_u128(3).unwrap();
        assert_eq!(row.plain.accounted(), n);
        assert_eq!(row.ordered.accounted(), n);
        let mut buf = Vec::new();
        write_csv(std::slice::from_ref(&row), &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(
            "expression,minimax,pv,method,visited,alpha_prunes,beta_prunes,tt_prunes,digit_order,millis"
        ));
        // the CSV keeps the digit sequence but not the estimates behind it
        let mut expected = row;
        expected.ordered.digit_order = DigitOrder::from_sequence(*expected.ordered.digit_order.sequence()).unwrap();
        assert_eq!(read_csv(&buf[..]).unwrap(), vec![expected]);
    }
}
