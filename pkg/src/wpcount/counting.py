"""Exact counts of points of bounded size and bounded weighted height.

Three independent routes:

* fast: Moebius inversion over the weighted box, then an exact Burnside
  quotient by {+1, -1};
* direct: a per-coordinate sweep of the box that tracks, for each prefix,
  the set of primes p with p**q_i | x_i so far (no Moebius function), and
  counts canonical representatives only;
* naive: canonicalize every tuple of the box and deduplicate (small boxes).

Heights are counted through the Veronese image: h(p)**q = H(phi(p)).
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .arith import BoundedReal, Rational, as_fraction, mobius_sieve
from .errors import BudgetExceededError, check_budget
from .lift import fiber_rational_points
from .space import (
    ProjectivePoint,
    WeightedPoint,
    WeightSystem,
    canonical_tuple,
    geometric_key,
    projective_blocks,
    projective_points_in_block,
    weighted_height,
)

METHODS = ("direct", "fast", "naive")


def floor_power(t: Rational, k: int) -> int:
    t = as_fraction(t)
    v = t**k
    return v.numerator // v.denominator


def _box(weights: Sequence[int], t: Fraction) -> int:
    return math.prod(2 * floor_power(t, w) + 1 for w in weights) - 1


def count_box(ws: WeightSystem, t: Rational) -> int:
    """Nonzero integer tuples with |x_i| <= t**q_i."""
    t = as_fraction(t)
    if t <= 0:
        raise ValueError("box parameter must be positive")
    return _box(ws.weights, t)


def _primitive(weights: Sequence[int], X: Fraction, mu: Optional[list] = None) -> int:
    top = X.numerator // X.denominator
    if top < 1:
        return 0
    mu = mu if mu is not None and len(mu) > top else mobius_sieve(top)
    return sum(mu[d] * _box(weights, X / d) for d in range(1, top + 1) if mu[d])


def count_primitive_fast(ws: WeightSystem, X: Rational) -> int:
    """Tuples in the box with wgcd 1: sum over d <= X of mu(d) * box(X/d)."""
    return _primitive(ws.weights, as_fraction(X))


def fixed_tuple_count(ws: WeightSystem, X: Rational) -> int:
    """wgcd-1 tuples in the box fixed by lam = -1 (zero at every odd weight)."""
    even = [w for w in ws.weights if w % 2 == 0]
    return _primitive(even, as_fraction(X))


def _fast_size(weights, X: Fraction, mu=None) -> int:
    even = [w for w in weights if w % 2 == 0]
    total = _primitive(weights, X, mu) + _primitive(even, X, mu)
    assert total % 2 == 0, "Burnside numerator must be even"
    return total // 2


# --------------------------------------------------------------------------
# direct sweep

_ALL = None  # prefix is all zeros: every prime still divides to the needed power


def _spf_table(N: int) -> list:
    spf = list(range(N + 1))
    for i in range(2, math.isqrt(N) + 1):
        if spf[i] == i:
            for j in range(i * i, N + 1, i):
                if spf[j] == j:
                    spf[j] = i
    return spf


def _power_primes(x: int, w: int, spf: list) -> frozenset:
    out = []
    while x > 1:
        p, e = spf[x], 0
        while x % p == 0:
            x //= p
            e += 1
        if e >= w:
            out.append(p)
    return frozenset(out)


def _power_free_count(B: int, w: int) -> int:
    """#{1 <= x <= B : no prime p with p**w | x}."""
    bad = bytearray(B + 1)
    p = 2
    while p**w <= B:
        if all(p % r for r in range(2, math.isqrt(p) + 1)):
            for m in range(p**w, B + 1, p**w):
                bad[m] = 1
        p += 1
    return B - sum(bad)


def _multiples(S: frozenset, w: int, B: int) -> dict:
    """x in [1, B] divisible by p**w for some p in S, mapped to those p."""
    out: dict = defaultdict(set)
    for p in S:
        for m in range(p**w, B + 1, p**w):
            out[m].add(p)
    return out


def _direct_size(weights: Sequence[int], X: Fraction, budget: int) -> int:
    bounds = [floor_power(X, w) for w in weights]
    inner = max(bounds[:-1], default=1)
    spf = _spf_table(max(inner, 1))
    states = {(_ALL, True): 1}
    work = 0
    for i, (w, B) in enumerate(zip(weights[:-1], bounds[:-1])):
        odd = w % 2 == 1
        new: dict = defaultdict(int)
        cache: dict = {}
        for (S, is_open), cnt in states.items():
            new[(S, is_open)] += cnt  # x_i = 0
            mult = 1 if (odd and is_open) else 2
            nxt_open = is_open and not odd
            work += B
            if work > budget:
                raise BudgetExceededError(f"direct count: work exceeds budget {budget}")
            if S is _ALL:
                if w not in cache:
                    groups: dict = defaultdict(int)
                    for x in range(1, B + 1):
                        groups[_power_primes(x, w, spf)] += 1
                    cache[w] = groups
                for S2, k in cache[w].items():
                    new[(S2, nxt_open)] += cnt * k * mult
            else:
                hits = _multiples(S, w, B)
                new[(frozenset(), nxt_open)] += cnt * (B - len(hits)) * mult
                for ps in hits.values():
                    new[(frozenset(ps), nxt_open)] += cnt * mult
        states = new

    w, B = weights[-1], bounds[-1]
    odd = w % 2 == 1
    total = 0
    free_all = None
    for (S, is_open), cnt in states.items():
        mult = 1 if (odd and is_open) else 2
        if S is _ALL:
            if free_all is None:
                free_all = _power_free_count(B, w)
            total += cnt * free_all * mult
            continue
        if not S:
            total += cnt  # x_n = 0 keeps a finished wgcd-1 prefix
            total += cnt * B * mult
        else:
            total += cnt * (B - len(_multiples(S, w, B))) * mult
    return total


def _naive_classes(weights: Sequence[int], X: Fraction, budget: int) -> set:
    bounds = [floor_power(X, w) for w in weights]
    check_budget(math.prod(2 * b + 1 for b in bounds), budget, "naive enumeration")
    out = set()
    for c in itertools.product(*(range(-b, b + 1) for b in bounds)):
        if any(c):
            out.add(canonical_tuple(weights, c))
    return out


def size_classes(ws: WeightSystem, X: Rational, budget: int = 10**7) -> set:
    """Canonical representatives of all classes with size <= X (small boxes)."""
    return _naive_classes(ws.weights, as_fraction(X), budget)


def count_points_size(ws: WeightSystem, X: Rational, method: str = "fast", budget: int = 10**8) -> int:
    """Q*-classes whose canonical wgcd-1 representative has H_inf <= X."""
    X = as_fraction(X)
    if X < 1:
        raise ValueError("X must be at least 1")
    if method == "fast":
        return _fast_size(ws.weights, X)
    if method == "direct":
        return _direct_size(ws.weights, X, budget)
    if method == "naive":
        return len(_naive_classes(ws.weights, X, budget))
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


# --------------------------------------------------------------------------
# weighted height


def _fiber_blocks(args) -> int:
    weights, B, blocks = args
    ws = WeightSystem(weights)
    total = 0
    for block in blocks:
        for c in projective_points_in_block(len(weights), B, block):
            if ws.q == 1:
                total += 1  # phi is the identity
            else:
                total += len(fiber_rational_points(ProjectivePoint(c), ws))
    return total


def count_points_height(ws: WeightSystem, X: Rational, budget: int = 10**8, workers: int = 1) -> int:
    """Points with weighted height <= X, up to scaling by algebraic numbers.

    Sums rational fiber sizes over projective points y with H(y) <= X**q.
    """
    X = as_fraction(X)
    if X < 1:
        raise ValueError("X must be at least 1")
    B = floor_power(X, ws.q)
    check_budget((2 * B + 1) ** len(ws.weights), budget, "height count")
    blocks = projective_blocks(len(ws.weights), B)
    if workers <= 1:
        return _fiber_blocks((ws.weights, B, blocks))
    chunks = [blocks[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(_fiber_blocks, [(ws.weights, B, ch) for ch in chunks]))


def height_classes_box(ws: WeightSystem, X: Rational, slack: int = 4, budget: int = 10**7) -> set:
    """Cross-check for count_points_height: scan |x_i| <= (slack X)**q_i.

    Keeps tuples with exact h <= X and deduplicates by class.  Complete only
    when every class has a representative inside the slack box.
    """
    X = as_fraction(X)
    bounds = [floor_power(slack * X, w) for w in ws.weights]
    check_budget(math.prod(2 * b + 1 for b in bounds), budget, "height box scan")
    out = set()
    for c in itertools.product(*(range(-b, b + 1) for b in bounds)):
        if not any(c):
            continue
        if weighted_height(WeightedPoint(c, ws)).at_most(X):
            out.add(geometric_key(ws.weights, c))
    return out


# --------------------------------------------------------------------------
# report rows


@dataclass(frozen=True)
class CountRecord:
    X: Fraction
    fast_size_count: int
    predicted: BoundedReal
    ratio: BoundedReal
    direct_size_count: Optional[int] = None
    height_count: Optional[int] = None
    height_ratio: Optional[BoundedReal] = None


def asymptotic_report(
    ws: WeightSystem,
    X_values: Iterable[Rational],
    methods: Iterable[str] = ("fast",),
    tol: Rational = Fraction(1, 10**9),
    budget: int = 10**8,
    workers: int = 1,
) -> list:
    """One CountRecord per X; ratio = fast count / (2**n / zeta(Q) * X**Q)."""
    from .constants import rational_leading_constant

    xs = [as_fraction(x) for x in X_values]
    if any(b < a for a, b in zip(xs, xs[1:])):
        raise ValueError("X values must be ascending")
    methods = set(methods)
    unknown = methods - {"fast", "direct", "height"}
    if unknown:
        raise ValueError(f"unknown methods {sorted(unknown)}")
    c = rational_leading_constant(ws, tol)
    top = max((x.numerator // x.denominator for x in xs), default=1)
    mu = mobius_sieve(max(top, 1))
    rows = []
    for X in xs:
        if X < 1:
            raise ValueError("X must be at least 1")
        fast = _fast_size(ws.weights, X, mu)
        predicted = c * X**ws.Q
        direct = _direct_size(ws.weights, X, budget) if "direct" in methods else None
        height = count_points_height(ws, X, budget, workers) if "height" in methods else None
        rows.append(
            CountRecord(
                X=X,
                fast_size_count=fast,
                predicted=predicted,
                ratio=BoundedReal.exact(fast) / predicted,
                direct_size_count=direct,
                height_count=height,
                height_ratio=None if height is None else BoundedReal.exact(height) / predicted,
            )
        )
    return rows
