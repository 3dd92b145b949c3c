import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wpcount.counting import (
    asymptotic_report,
    count_box,
    count_points_height,
    count_points_size,
    count_primitive_fast,
    fixed_tuple_count,
    height_classes_box,
    size_classes,
)
from wpcount.errors import BudgetExceededError
from wpcount.space import WeightSystem

SYSTEMS = [(1, 2), (2, 3), (1, 1, 2), (1, 1), (1, 4, 2), (3, 5)]


def brute_primitive(weights, X):
    """Box tuples admitting no prime p with p**q_i | x_i for every i."""
    bounds = [X**w for w in weights]
    primes = [p for p in range(2, X + 1) if all(p % r for r in range(2, p))]
    total = 0
    for c in itertools.product(*(range(-b, b + 1) for b in bounds)):
        if any(c) and not any(all(x % p**w == 0 for x, w in zip(c, weights)) for p in primes):
            total += 1
    return total


def test_count_box_examples():
    assert count_box(WeightSystem((1, 2)), 2) == 44
    assert count_box(WeightSystem((1, 1)), 1) == 8
    assert count_box(WeightSystem((1, 2)), Fraction(1, 2)) == 0
    assert count_box(WeightSystem((1, 2)), Fraction(3, 2)) == 3 * 5 - 1


@pytest.mark.parametrize("weights", [(1, 2), (2, 3), (1, 1, 2)])
def test_primitive_matches_brute_force(weights):
    ws = WeightSystem(weights)
    top = {(1, 2): 30, (2, 3): 5, (1, 1, 2): 6}[weights]
    for X in range(1, top + 1):
        assert count_primitive_fast(ws, X) == brute_primitive(weights, X)


def test_primitive_small_values():
    assert count_primitive_fast(WeightSystem((1, 1)), 1) == 8


def test_fixed_tuples():
    assert fixed_tuple_count(WeightSystem((1, 2)), 2) == 6  # (0, x) with x in +-{1, 2, 3}
    assert fixed_tuple_count(WeightSystem((1, 3, 5)), 7) == 0
    ws = WeightSystem((2, 4))
    assert fixed_tuple_count(ws, 3) == count_primitive_fast(ws, 3)


@pytest.mark.parametrize("weights", SYSTEMS)
def test_direct_equals_fast(weights):
    ws = WeightSystem(weights)
    for X in range(1, 16):
        assert count_points_size(ws, X, "direct") == count_points_size(ws, X, "fast")


@pytest.mark.parametrize("weights", [(1, 2), (2, 3), (1, 1, 2), (1, 4, 2)])
def test_naive_equals_fast(weights):
    ws = WeightSystem(weights)
    for X in (1, 2, 3):
        assert count_points_size(ws, X, "naive") == count_points_size(ws, X, "fast")


def test_listed_classes_present():
    classes = size_classes(WeightSystem((1, 2)), 2)
    for c in [(1, 0), (1, 1), (1, 2), (2, 1), (2, 2)]:
        assert c in classes
    assert len(classes) == count_points_size(WeightSystem((1, 2)), 2, "direct") == 21


def test_rational_bounds():
    ws = WeightSystem((1, 2))
    assert count_points_size(ws, Fraction(5, 2), "direct") == count_points_size(ws, Fraction(5, 2))
    assert count_points_size(ws, Fraction(5, 2)) == len(size_classes(ws, Fraction(5, 2)))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=2, max_size=3), st.integers(1, 8))
def test_burnside_identity(weights, X):
    ws = WeightSystem(weights)
    size_count = count_points_size(ws, X)
    assert 2 * size_count - fixed_tuple_count(ws, X) == count_primitive_fast(ws, X)
    assert size_count == count_points_size(ws, X, "direct")


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=2, max_size=3), st.integers(1, 10))
def test_box_splits_by_wgcd(weights, X):
    # every tuple in the box has exactly one wgcd d <= X with a primitive quotient
    ws = WeightSystem(weights)
    assert count_box(ws, X) == sum(count_primitive_fast(ws, Fraction(X, d)) for d in range(1, X + 1))


@pytest.mark.parametrize("weights", SYSTEMS)
def test_counts_monotone(weights):
    ws = WeightSystem(weights)
    counts = [count_points_size(ws, X) for X in range(1, 25)]
    assert counts == sorted(counts)


def classical_counts(n, top):
    """#P^n(Q) points of height <= X for X = 1..top, by gcd over [-top, top]^(n+1)."""
    hist = [0] * (top + 1)
    for c in itertools.product(range(-top, top + 1), repeat=n + 1):
        if any(c) and math.gcd(*c) == 1:
            hist[max(abs(x) for x in c)] += 1
    out, run = {}, 0
    for X in range(1, top + 1):
        run += hist[X]
        out[X] = run // 2
    return out


@pytest.mark.parametrize("n,top", [(1, 50), (2, 20)])
def test_all_ones_match_classical(n, top):
    ws = WeightSystem((1,) * (n + 1))
    ref = classical_counts(n, top)
    for X in range(1, top + 1):
        assert count_points_size(ws, X) == ref[X]
        assert count_points_size(ws, X, "direct") == ref[X]


def test_projective_line_totient_formula():
    # primitive pairs with max |x| = k number 8 phi(k); halve for the sign
    phi = [0] + [sum(1 for a in range(1, k + 1) if math.gcd(a, k) == 1) for k in range(1, 61)]
    for X in range(1, 61):
        assert count_points_size(WeightSystem((1, 1)), X) == 4 * sum(phi[1 : X + 1])


@pytest.mark.parametrize("weights,X", [((1, 2), 1), ((1, 2), 2), ((1, 2), 3), ((1, 1, 2), 1), ((1, 1, 2), 2)])
def test_height_count_matches_box_filter(weights, X):
    ws = WeightSystem(weights)
    assert count_points_height(ws, X) == len(height_classes_box(ws, X, budget=10**8))


def test_height_count_all_ones_is_classical():
    for X in range(1, 8):
        ws = WeightSystem((1, 1, 1))
        assert count_points_height(ws, X) == count_points_size(ws, X)


def test_height_count_includes_unit_point():
    for weights in [(1, 2), (2, 3), (1, 1, 2)]:
        assert count_points_height(WeightSystem(weights), 1) >= 1


def test_height_count_workers_deterministic():
    ws = WeightSystem((1, 1, 2))
    assert count_points_height(ws, 2, workers=1) == count_points_height(ws, 2, workers=3)


def test_budgets():
    with pytest.raises(BudgetExceededError):
        count_points_size(WeightSystem((2, 3)), 30, "direct", budget=100)
    with pytest.raises(BudgetExceededError):
        count_points_height(WeightSystem((2, 3)), 5, budget=1000)
    with pytest.raises(ValueError):
        count_points_size(WeightSystem((1, 2)), 5, "sideways")


def test_ratio_relative_error_is_order_one_over_x():
    ws = WeightSystem((1, 2))
    rows = asymptotic_report(ws, range(50, 2001, 50))
    worst = max(abs(float(r.ratio.midpoint) - 1) * float(r.X) for r in rows)
    assert worst <= 3


def test_report_rows():
    ws = WeightSystem((1, 2))
    rows = asymptotic_report(ws, [1, 2, 5], methods={"fast", "direct", "height"})
    assert [r.fast_size_count for r in rows] == [r.direct_size_count for r in rows]
    assert rows[0].ratio.lower > 0
    assert rows[1].height_count == 24
    with pytest.raises(ValueError):
        asymptotic_report(ws, [5, 2])
