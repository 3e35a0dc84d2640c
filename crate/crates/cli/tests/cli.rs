use std::process::{Command, Output};

fn evaluate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evaluate")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn solve_prints_value_variation_and_counters() {
    let out = evaluate(&["solve", "(10-X)*Y"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("minimax:      45 (45)"), "{text}");
    assert!(text.contains("pv:           5\u{2192}X, 9\u{2192}Y"), "{text}");
    assert!(text.contains("alpha_prunes: 84 (4 cutoffs)"), "{text}");
    for counter in ["visited:", "beta_prunes:", "tt_prunes:"] {
        assert!(text.contains(counter), "{text}");
    }
}

#[test]
fn solve_reports_fractions_with_a_decimal() {
    let out = evaluate(&["solve", "x/y + 2*y/z - z/x", "--order", "heuristic", "--tt", "on"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("minimax:      16/3 (5.33333)"));
}

#[test]
fn min_first_negates() {
    // MIN proposes 4; assigning it to Y lets MIN put 0 on X
    let out = evaluate(&["solve", "X-Y", "--min-first"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("minimax:      -4 (-4)"), "{text}");
    let negated = evaluate(&["solve", "0-(X-Y)"]);
    assert!(stdout(&negated).contains("minimax:      4 (4)"));
}

#[test]
fn exit_codes() {
    let parse = evaluate(&["solve", "X*+Y"]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("error"));
    assert_eq!(evaluate(&["solve", "1/(X-X)"]).status.code(), Some(3));
    assert_eq!(evaluate(&["solve", "a+b+c+d+e+f+g"]).status.code(), Some(2));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = evaluate(&["bench", "--rows", "1,2", "--csv", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("9,8,7,6,5,4,3,2,1,0"), "{text}");
    let rows = evaluate::bench::read_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].ab_pruned(), 4515);
    assert_eq!(rows[1].ordered.digit_order.sequence(), &[9, 8, 7, 6, 5, 4, 3, 2, 1, 0]);
    assert_eq!(evaluate(&["bench", "--rows", "7"]).status.code(), Some(1));
}

#[test]
fn fairness_is_reproducible() {
    let a = evaluate(&["fairness", "X+Y", "--trials", "10000", "--seed", "3"]);
    assert!(a.status.success());
    let text = stdout(&a);
    assert!(text.contains("MAX wins:          0  0.0000"), "{text}");
    let b = evaluate(&["fairness", "X+Y", "--trials", "10000", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
}
