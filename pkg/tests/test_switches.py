import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperfn import core, switches
from hyperfn.errors import DimensionMismatch, InvalidTerm
from hyperfn.switches import Node, SwitchExpr


def test_sgn():
    assert switches.sgn_eval(2) == 1
    assert switches.sgn_eval(-3) == -1
    assert switches.sgn_eval(0) == 1
    v = core.eval_numeric(switches.sgn_hyperfunction(), 0.25)
    assert abs(v - 1) < 1e-6
    assert abs(core.eval_numeric(switches.sgn_hyperfunction(), -0.25) + 1) < 1e-6


def test_steps():
    assert switches.step_weak_one((2, 3), (1, 3)) == 1
    assert switches.step_weak_one((2, 3), (1, 4)) == 0
    assert switches.step_weak_one((0, 0, 0), (0, 0, 0)) == 1
    assert switches.step_strict((0, 0), (0, 0)) == 0
    assert switches.step_weak_zero(1.0, 1.0) == 0
    with pytest.raises(DimensionMismatch):
        switches.step_weak_one((1, 2), (1,))


def test_kronecker():
    assert switches.kron_one((1, 2), (1, 2)) == 1
    assert switches.kron_one((1, 2), (1, 3)) == 0
    assert switches.kron_zero((1, 2), (1, 3)) == 1


def test_kronecker_composition_matches_direct():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        dim = int(rng.integers(1, 4))
        X = rng.integers(-2, 3, size=dim)
        R = rng.integers(-2, 3, size=dim)
        assert switches.kron_one_composed(X, R) == switches.kron_one(X, R)


def test_interval_switch():
    assert switches.interval_switch(0.5, 0, 0.5, 1) == 1
    assert switches.interval_switch(2, 0, 2, 1) == 0
    # lower edge in, upper edge out
    assert switches.interval_switch(0, 0, 0, 1) == 1
    assert switches.interval_switch(1, 0, 1, 1) == 0
    assert core.eval_closed(core.Hyperfunction.of(core.interval(0, 1)), 0.5) == switches.interval_switch(0.5, 0, 0.5, 1)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(
    st.lists(st.integers(-3, 3), min_size=d, max_size=d),
    st.lists(st.integers(-3, 3), min_size=d, max_size=d),
)))
def test_complementarity(pair):
    X, R = pair
    assert switches.step_weak_one(X, R) + switches.step_weak_zero(X, R) == 1
    assert switches.kron_one(X, R) + switches.kron_zero(X, R) == 1
    for fn in (switches.step_weak_one, switches.step_strict, switches.kron_one):
        assert fn(X, R) in (0, 1)


def test_count_measure():
    assert switches.count_measure(["a", "b", "c"]) == 3
    assert switches.count_measure([]) == 0
    rng = np.random.default_rng(5)
    for _ in range(200):
        labels = list(rng.integers(0, 6, size=int(rng.integers(0, 12))))
        assert switches.count_measure(labels) == len(set(labels))


# -- expressions ------------------------------------------------------------------


def test_conjunction_examples():
    a = SwitchExpr(Node.STEP_WEAK_ONE, ("X", "R"))
    b = SwitchExpr(Node.STEP_WEAK_ONE, ("Y", "P"))
    b0 = SwitchExpr(Node.STEP_WEAK_ZERO, ("Y", "P"))
    assert switches.conjunction(a, b, {"X": 2, "R": 1, "Y": 5, "P": 5}) == 1
    assert switches.conjunction(a, b0, {"X": 2, "R": 1, "Y": 4, "P": 5}) == 1


def test_product_rejects_sgn_children():
    with pytest.raises(InvalidTerm):
        switches.product(SwitchExpr(Node.SGN, ("x",)))
    with pytest.raises(InvalidTerm):
        SwitchExpr(Node.INTERVAL, ("x", "r"))


def test_expression_round_trip():
    e = switches.product(
        SwitchExpr(Node.INTERVAL, ("x", [0.0], "x", [1.0])),
        SwitchExpr(Node.KRON_ZERO, ("y", (1.0, 2.0))),
    )
    assert SwitchExpr.from_dict(e.to_dict()) == e
    assert e.operand_names() == {"x", "y"}
    with pytest.raises(InvalidTerm):
        SwitchExpr.from_dict({"node": "STEP_WEAK_ONE"})


def test_missing_input():
    with pytest.raises(KeyError):
        switches.evaluate(SwitchExpr(Node.STEP_STRICT, ("x", [0.0])), {})


def test_hyperfunction_forms_agree_with_discrete():
    rng = np.random.default_rng(9)
    nodes = [Node.STEP_WEAK_ONE, Node.STEP_WEAK_ZERO, Node.STEP_STRICT, Node.INTERVAL]
    for _ in range(300):
        node = nodes[int(rng.integers(0, len(nodes)))]
        dim = int(rng.integers(1, 3))
        names = ["a", "b", "c", "d"][: 4 if node is Node.INTERVAL else 2]
        vals = {n: tuple(rng.uniform(-2, 2, size=dim)) for n in names}
        if node is Node.INTERVAL and rng.random() < 0.5:
            vals["c"] = vals["a"]
        e = SwitchExpr(node, tuple(names))
        assert switches.evaluate_via_hyperfunctions(e, vals) == switches.evaluate(e, vals)
    assert switches.evaluate_via_hyperfunctions(SwitchExpr(Node.SGN, ("x",)), {"x": -0.3}) == -1


def test_truth_tables_first_two_exhaustive():
    pattern = (-1.0, 0.0, 1.0)
    for dim in (1, 2, 3):
        for dx in itertools.product(pattern, repeat=dim):
            for dy in itertools.product(pattern, repeat=dim):
                X, R = dx, (0.0,) * dim
                Y, P = dy, (0.0,) * dim
                x_ge = all(v >= 0 for v in dx)
                y_ge = all(v >= 0 for v in dy)
                one = lambda a, b: SwitchExpr(Node.STEP_WEAK_ONE, (a, b))
                zero = lambda a, b: SwitchExpr(Node.STEP_WEAK_ZERO, (a, b))
                inp = {"X": X, "R": R, "Y": Y, "P": P}
                assert switches.conjunction(one("X", "R"), one("Y", "P"), inp) == int(x_ge and y_ge)
                assert switches.conjunction(one("X", "R"), zero("Y", "P"), inp) == int(x_ge and not y_ge)
                assert switches.conjunction(zero("X", "R"), zero("Y", "P"), inp) == int(not x_ge and not y_ge)
