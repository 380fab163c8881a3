import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abcprop.flowlp import (
    ClosureProblem,
    RationalLP,
    SolverLimitError,
    check_point,
    closure_bruteforce,
    fourier_motzkin_feasible,
    lp_feasible,
    lp_from_rows,
    max_closure,
)


def test_closure_two_voters_no_requirements():
    # two voters with empty overlap with W earn k=4 each; nothing to pay for
    p = ClosureProblem({("v", 0): 4, ("v", 1): 4, ("w", 3): -4}, {("v", 0): frozenset(),
                                                                  ("v", 1): frozenset()})
    res = max_closure(p)
    assert res.value == 8
    assert res.chosen == frozenset({("v", 0), ("v", 1)})
    assert res.cut_value + res.value == res.total_profit


def test_closure_requirement_makes_item_unprofitable():
    p = ClosureProblem({"a": 3, "b": -5}, {"a": frozenset({"b"})})
    res = max_closure(p)
    assert res.value == 0 and res.chosen == frozenset()
    assert res.cut_value == 3


def test_closure_unknown_item():
    with pytest.raises(KeyError):
        max_closure(ClosureProblem({"a": 1}, {"a": frozenset({"zz"})}))


@st.composite
def closure_problems(draw):
    size = draw(st.integers(1, 9))
    weights = {j: draw(st.integers(-6, 6)) for j in range(size)}
    requires = {j: frozenset(draw(st.sets(st.integers(0, size - 1), max_size=3)) - {j})
                for j in range(size)}
    return ClosureProblem(weights, requires)


@settings(max_examples=300, deadline=None)
@given(closure_problems())
def test_closure_matches_bruteforce(p):
    res = max_closure(p)
    assert res.value == closure_bruteforce(p)
    assert res.cut_value + res.value == res.total_profit
    chosen = res.chosen
    assert all(p.requires.get(x, frozenset()) <= chosen for x in chosen)
    assert sum(p.weights[x] for x in chosen) == res.value


def test_lp_feasible_point_is_exact():
    lp = RationalLP()
    x, y = lp.var("x"), lp.var("y", 0, 1)
    lp.add({x: 3, y: 1}, "==", Fraction(7, 3))
    lp.add({x: 1, y: -1}, ">=", Fraction(1, 5))
    point = lp_feasible(lp)
    assert point is not None and check_point(lp, point)
    assert 3 * point["x"] + point["y"] == Fraction(7, 3)


def test_lp_infeasible():
    lp = lp_from_rows([("x", 0, 1)], [({"x": 1}, ">=", 2)])
    assert lp_feasible(lp) is None
    assert not fourier_motzkin_feasible(lp)


def test_lp_free_variable():
    lp = lp_from_rows([("x", None, None)], [({"x": 1}, "<=", -3)])
    point = lp_feasible(lp)
    assert point["x"] <= -3


def test_lp_rejects_bad_sense_and_unknown_variable():
    lp = RationalLP()
    lp.var("x")
    with pytest.raises(ValueError):
        lp.add({"x": 1}, "<", 0)
    with pytest.raises(KeyError):
        lp.add({"y": 1}, "<=", 0)
    with pytest.raises(ValueError):
        lp.var("x")


def test_lp_size_limit():
    lp = RationalLP()
    for j in range(5):
        lp.var(f"x{j}")
    with pytest.raises(SolverLimitError):
        lp_feasible(lp, max_vars=3)


def _random_lp(rng):
    nv = rng.randint(1, 4)
    lp = RationalLP()
    for j in range(nv):
        lp.var(f"x{j}", rng.choice([0, None, -1]), rng.choice([None, 2, 3]))
    for _ in range(rng.randint(1, 5)):
        coeffs = {f"x{j}": Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for j in range(nv)}
        lp.add(coeffs, rng.choice(["<=", ">=", "=="]), Fraction(rng.randint(-4, 4), rng.randint(1, 2)))
    return lp


def test_simplex_agrees_with_fourier_motzkin():
    rng = random.Random(7)
    feasible = 0
    for _ in range(400):
        lp = _random_lp(rng)
        point = lp_feasible(lp)
        assert (point is not None) == fourier_motzkin_feasible(lp)
        if point is not None:
            feasible += 1
            assert check_point(lp, point)
    assert 50 < feasible < 400
