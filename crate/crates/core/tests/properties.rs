mod common;

use evaluate::expr::Expression;
use evaluate::fairness::{exact_fairness, judge, Outcome};
use evaluate::ordering::DigitOrder;
use evaluate::search::{best_move, oracle_position, solve_alphabeta, solve_oracle, solve_position, SearchOptions};
use evaluate::tree::{tree_size_u128, Move, Position};
use evaluate::value::Value;
use proptest::prelude::*;

fn arb_expr() -> impl Strategy<Value = Expression> {
    any::<u64>().prop_map(|seed| common::random_expressions(1, seed).pop().unwrap())
}

fn arb_order() -> impl Strategy<Value = DigitOrder> {
    Just(DigitOrder::ASCENDING.to_vec())
        .prop_shuffle()
        .prop_map(|v| DigitOrder::from_sequence(v.try_into().unwrap()).unwrap())
}

/// Plays from the root, choosing each legal move by index modulo the count.
fn walk(expr: &Expression, picks: &[usize]) -> Position {
    let mut pos = Position::root(expr.clone());
    for &p in picks {
        if pos.is_terminal() {
            break;
        }
        let moves = pos.legal_moves(&DigitOrder::ASCENDING).unwrap();
        pos = pos.apply_move(&moves[p % moves.len()]).unwrap();
    }
    pos
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn any_order_and_table_setting_agree_with_the_oracle(e in arb_expr(), order in arb_order(), tt in any::<bool>()) {
        let opts = SearchOptions::plain().with_order(order).with_tt(tt);
        let ab = solve_alphabeta(&e, &opts);
        let oracle = solve_oracle(&e);
        prop_assert_eq!(ab.as_ref().ok().map(|(r, _)| r.value), oracle.as_ref().ok().map(|r| r.value));
        if let Ok((res, stats)) = ab {
            prop_assert_eq!(stats.accounted(), tree_size_u128(e.variable_count()).unwrap());
            prop_assert!(common::pv_sound(&e, &res));
        }
    }

    #[test]
    fn capped_tables_stay_exact(e in arb_expr(), cap in 0usize..20) {
        let mut opts = SearchOptions::plain().with_tt(true);
        opts.tt_capacity = Some(cap);
        let capped = solve_alphabeta(&e, &opts).map(|(r, s)| (r.value, s.accounted()));
        let full = solve_alphabeta(&e, &SearchOptions::plain().with_tt(true)).map(|(r, s)| (r.value, s.accounted()));
        prop_assert_eq!(capped, full);
    }

    #[test]
    fn mid_game_positions_solve_like_the_oracle(e in arb_expr(), picks in prop::collection::vec(0usize..40, 0..5)) {
        let pos = walk(&e, &picks);
        prop_assume!(!pos.is_terminal());
        let ab = solve_position(&pos, &SearchOptions::plain().with_tt(true)).map(|(r, _)| r.value);
        let oracle = oracle_position(&pos).map(|r| r.value);
        prop_assert_eq!(ab.ok(), oracle.ok());
    }

    #[test]
    fn best_move_keeps_the_value(e in arb_expr(), picks in prop::collection::vec(0usize..40, 0..5)) {
        let pos = walk(&e, &picks);
        prop_assume!(!pos.is_terminal());
        let (m, value) = best_move(&pos, &SearchOptions::plain()).unwrap();
        let child = pos.apply_move(&m).unwrap();
        let after = if child.is_terminal() {
            child.terminal_value().unwrap()
        } else {
            oracle_position(&child).map(|r| r.value).unwrap_or(Value::Invalid)
        };
        prop_assert_eq!(after, value);
    }

    #[test]
    fn plus_times_games_are_never_won_by_max(src in "[xy]( ?[+*] ?([xy]|[0-9]))+") {
        let e = Expression::parse(&src).unwrap();
        let minimax = solve_oracle(&e).unwrap().value;
        prop_assert_eq!(exact_fairness(&e, minimax).unwrap().p_max_win, 0.0);
    }

    #[test]
    fn every_terminal_is_judged_against_the_minimax(e in arb_expr(), picks in prop::collection::vec(0usize..40, 6)) {
        let Ok(solved) = solve_oracle(&e) else { return Ok(()) };
        let end = walk(&e, &picks);
        prop_assert!(end.is_terminal());
        let v = end.terminal_value().unwrap();
        let outcome = judge(v, solved.value);
        match v.finite() {
            None => prop_assert_eq!(outcome, Outcome::InvalidFinal),
            Some(r) => prop_assert_eq!(outcome == Outcome::Draw, Value::Finite(r) == solved.value),
        }
    }
}

#[test]
fn pending_digit_positions_have_min_to_move() {
    let e = Expression::parse("X*(Y-Z)").unwrap();
    let pos = Position::root(e).apply_move(&Move::ProposeDigit(5)).unwrap();
    assert!(!pos.is_max_node());
    let (m, v) = best_move(&pos, &SearchOptions::plain()).unwrap();
    assert_eq!(m, Move::AssignVariable("Y".into()));
    // 5→X leaves 20, 5→Z leaves 36
    assert_eq!(v.to_string(), "15");
}
