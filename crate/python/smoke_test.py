"""Smoke test for the evaluate_py extension module.

Build and run from the repository root:

    cargo build --release -p evaluate-py
    cp target/release/libevaluate_py.so python/evaluate_py.so
    python3 python/smoke_test.py
"""

import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import evaluate_py as ev  # noqa: E402


def main():
    e = ev.Expression("(10-X)*Y")
    assert e.variables == ["X", "Y"]
    assert e.postfix == ["10", "X", "-", "Y", "*"]
    assert e.evaluate({"X": 5, "Y": 9}) == 45
    assert ev.Expression("1/X").evaluate({"X": 0}) is None

    r = ev.solve(e)
    assert r.value == 45, r
    assert r.pv == [(5, "X"), (9, "Y")], r.pv
    assert r.alpha_cutoffs == 4 and r.alpha_prunes == 84
    assert r.visited + r.pruned == ev.tree_size(2) == 431

    row1 = "x/y + 2*y/z - z/x"
    fast = ev.solve(row1, order="heuristic", tt=True)
    assert fast.value == Fraction(16, 3)
    assert ev.replay(row1, fast.pv) == Fraction(16, 3)
    assert ev.solve(row1).pruned == 4515
    assert ev.oracle("X*(Y-Z)")[0] == 18

    assert ev.digit_order("w - y*z/3 + 3*x") == [9, 8, 7, 6, 5, 4, 3, 2, 1, 0]
    assert ev.digit_order("(10-X)*Y", mode="exhaustive") == [5, 4, 6, 3, 7, 2, 8, 1, 9, 0]

    assert ev.solve("X-Y", min_first=True).value == -ev.oracle("0-(X-Y)")[0]
    assert ev.tree_size(6) == 1_552_953_671
    assert ev.tree_size(20) > 2**64

    report = ev.fairness("X+Y", trials=10_000, seed=1)
    assert report["max_wins"] == 0.0 and report["minimax"] == 18
    exact = ev.exact_fairness("X+Y")
    assert abs(exact["draw"] - 0.01) < 1e-12

    assert ev.judge(Fraction(30), Fraction(18)) == "max_wins"
    assert ev.judge(None, Fraction(18)) == "invalid"

    try:
        ev.Expression("X*+Y")
    except ValueError:
        pass
    else:
        raise AssertionError("parse error expected")
    try:
        ev.solve("1/(X-X)")
    except ev.UnsolvableError:
        pass
    else:
        raise AssertionError("unsolvable expected")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
