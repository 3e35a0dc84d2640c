#![allow(dead_code)]

use evaluate::expr::Expression;
use evaluate::ordering::DigitOrder;
use evaluate::search::{replay, SearchOptions};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NAMES: [&str; 3] = ["a", "b", "c"];

fn random_term(rng: &mut ChaCha8Rng, depth: u32, vars: &[&str], out: &mut String) {
    if depth == 0 || rng.random_bool(0.3) {
        if rng.random_bool(0.7) {
            out.push_str(vars[rng.random_range(0..vars.len())]);
        } else {
            out.push_str(&rng.random_range(0..13).to_string());
        }
        return;
    }
    let op = ['+', '-', '*', '/'][rng.random_range(0..4)];
    out.push('(');
    random_term(rng, depth - 1, vars, out);
    out.push(op);
    random_term(rng, depth - 1, vars, out);
    out.push(')');
}

/// `count` random expressions over one to three variables, all of which
/// occur, reproducible from `seed`.
pub fn random_expressions(count: usize, seed: u64) -> Vec<Expression> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.random_range(1..=3);
        let vars = &NAMES[..n];
        let mut src = String::new();
        random_term(&mut rng, 3, vars, &mut src);
        let e = Expression::parse(&src).expect("generated expressions parse");
        if e.variable_count() == n {
            out.push(e);
        }
    }
    out
}

pub fn shuffled_order(seed: u64) -> DigitOrder {
    let mut seq = DigitOrder::ASCENDING;
    seq.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    DigitOrder::from_sequence(seq).unwrap()
}

/// Ascending and estimated orders, each with the table off and on, plus
/// two fixed shuffles.
pub fn configurations(expr: &Expression) -> Vec<(String, SearchOptions)> {
    let heuristic = SearchOptions::heuristic(expr, &Default::default()).unwrap().digit_order;
    let mut out = Vec::new();
    for (name, order) in [
        ("ascending", DigitOrder::ascending()),
        ("heuristic", heuristic),
        ("shuffle-1", shuffled_order(1)),
        ("shuffle-2", shuffled_order(2)),
    ] {
        for tt in [false, true] {
            let label = format!("{name}/tt-{}", if tt { "on" } else { "off" });
            out.push((label, SearchOptions::plain().with_order(order.clone()).with_tt(tt)));
        }
    }
    out
}

/// True when the variation replays to `value`.
pub fn pv_sound(expr: &Expression, res: &evaluate::search::SolveResult) -> bool {
    replay(expr, &res.pv).ok() == Some(res.value)
}
