"""Acceptance suite: one PASS/FAIL line per criterion.

Run with pytest (lines appear in the terminal summary) or directly with
`python tests/test_acceptance.py`.
"""

import itertools
import math
import random
import time
from fractions import Fraction

from wpcount.arith import zeta
from wpcount.cli import evaluate_disputed, load_disputed
from wpcount.constants import (
    FieldInvariants,
    bounds_evaluators,
    numberfield_leading_constant,
    rational_leading_constant,
    schanuel_constant,
    sparsity_factor,
)
from wpcount.counting import asymptotic_report, count_points_size
from wpcount.lift import lift_bruteforce_oracle, lift_check, orbit_count_oracle, veronese_degree
from wpcount.space import (
    ExactHeight,
    ProjectivePoint,
    WeightSystem,
    normalize,
    point,
    projective_points,
    size,
    veronese,
    weighted_height,
    weil_height,
    wgcd,
)

RESULTS = []
TOL = Fraction(1, 10**9)


def report(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_criterion_1_leading_constant():
    start = time.perf_counter()
    rows = asymptotic_report(WeightSystem((1, 2)), [250, 500, 1000, 2000], tol=TOL)
    limits = {250: 0.05, 500: 0.03, 1000: 0.02, 2000: 0.01}
    errors = {int(r.X): abs(float(r.ratio.midpoint) - 1) for r in rows}
    elapsed = time.perf_counter() - start
    ok = all(errors[x] <= limits[x] for x in limits) and elapsed < 10
    shown = ", ".join(f"X={x}: {errors[x]:.2e}" for x in limits)
    report(1, ok, f"(1,2) relative errors {shown}; {elapsed:.2f}s")


def test_criterion_2_direct_equals_fast():
    start = time.perf_counter()
    cases = [((1, 2), 30), ((2, 3), 30), ((1, 1, 2), 30), ((2, 4, 6, 10), 3)]
    bad = []
    for weights, top in cases:
        ws = WeightSystem(weights)
        for X in range(1, top + 1):
            if count_points_size(ws, X, "direct", budget=10**9) != count_points_size(ws, X, "fast"):
                bad.append((weights, X))
    elapsed = time.perf_counter() - start
    report(2, not bad and elapsed < 60, f"direct == fast on 4 systems, mismatches {bad}; {elapsed:.2f}s")


def test_criterion_3_degree():
    systems = [(1, 1), (1, 2), (2, 3), (1, 1, 2), (1, 2, 3), (1, 4, 2), (2, 4, 6, 10), (3, 5), (2, 2, 3), (1, 1, 1, 3)]
    bad = []
    for w in systems:
        ws = WeightSystem(w)
        if orbit_count_oracle(ws) != veronese_degree(ws):
            bad.append(w)
    pinned = [veronese_degree(WeightSystem(w)) for w in [(1, 1, 2), (2, 3), (2, 4, 6, 10)]]
    report(3, not bad and pinned == [2, 1, 900], f"orbit oracle == degree on {len(systems)} systems; pinned {pinned}")


def test_criterion_4_heights():
    p1 = point([9, 81, 729, 59049], (2, 4, 6, 10))
    p2 = point([1, Fraction(1, 3), 1, 1], (2, 4, 6, 10))
    fixtures = (
        wgcd(p1).value() == 3
        and normalize(p1).coords == (1, 1, 1, 1)
        and weighted_height(p1) == ExactHeight(1)
        and size(p1) == ExactHeight(1)
        and weighted_height(p2) == ExactHeight(3, 4)
    )
    rng = random.Random(20240601)
    failures = 0
    systems = [(1, 2), (2, 3), (1, 1, 2), (1, 4, 2), (2, 4, 6, 10)]
    for w in systems:
        ws = WeightSystem(w)
        for _ in range(10**4):
            coords = [Fraction(rng.randint(-999, 999), rng.randint(1, 999)) for _ in w]
            if not any(coords):
                coords[0] = Fraction(1)
            p = point(coords, ws)
            if weighted_height(p).power(ws.q) != weil_height(veronese(p)):
                failures += 1
    report(4, fixtures and failures == 0, f"fixtures ok={fixtures}; identity failures {failures} on {len(systems)}x10^4 points")


def test_criterion_5_lift():
    bad = []
    checked = 0
    for w in [(1, 2), (2, 3), (1, 1, 2), (1, 4, 2)]:
        ws = WeightSystem(w)
        for c in projective_points(len(w), 10):
            y = ProjectivePoint(c)
            checked += 1
            if lift_check(y, ws).liftable != lift_bruteforce_oracle(y, ws, 6).liftable:
                bad.append((w, c))
    y = ProjectivePoint((1, 2))
    res = lift_check(y, WeightSystem((2, 3)))
    witness_ok = res.liftable and res.check_witness(y)
    z = ProjectivePoint((1, 2, 1))
    neg = lift_check(z, WeightSystem((1, 1, 2)))
    cert_ok = not neg.liftable and neg.obstruction.verify(z, WeightSystem((1, 1, 2)))
    dispute = next(evaluate_disputed(f) for f in load_disputed() if f["quantity"] == "liftable")
    print(f"  reported divergence: {dispute['name']} claimed {dispute['claimed']}, computed {dispute['computed']}")
    ok = not bad and witness_ok and cert_ok
    report(5, ok, f"{checked} points agree with bounded search (mismatches {len(bad)}); witness {witness_ok}; certificate {cert_ok}")


def classical_counts(n, top):
    hist = [0] * (top + 1)
    for c in itertools.product(range(-top, top + 1), repeat=n + 1):
        if any(c) and math.gcd(*c) == 1:
            hist[max(abs(x) for x in c)] += 1
    out, run = {}, 0
    for X in range(1, top + 1):
        run += hist[X]
        out[X] = run // 2
    return out


def test_criterion_6_specialization():
    bad = []
    for n in (1, 2):
        ref = classical_counts(n, 50)
        ws = WeightSystem((1,) * (n + 1))
        bad += [(n, X) for X in range(1, 51) if count_points_size(ws, X) != ref[X]]
    qq = FieldInvariants.rationals()
    overlap = all(
        schanuel_constant(n, qq, TOL).overlaps(rational_leading_constant(WeightSystem((1,) * (n + 1)), TOL))
        for n in (1, 2, 3)
    )
    report(6, not bad and overlap, f"all-ones counts vs gcd enumerator mismatches {bad}; Schanuel overlap {overlap}")


def test_criterion_7_evaluators():
    sparsity_ok = all(sparsity_factor(q, 1, 1) == 1 for q in range(1, 101))
    tuples = [(1, 2, 1, 3), (1, 3, 2, 5), (1, 4, 1, 7), (1, 5, 3, 2), (1, 6, 2, 22)]
    gamma_ok = all(bounds_evaluators(g, e, m, Q).gamma == m * (e * e + e + 2) for g, e, m, Q in tuples)
    ws = WeightSystem((1, 2))
    field = numberfield_leading_constant(ws, FieldInvariants.rationals(), TOL).constant
    const_ok = field.overlaps(rational_leading_constant(ws, TOL)) and field.overlaps(2 / zeta(3, TOL))
    ok = sparsity_ok and gamma_ok and const_ok
    report(7, ok, f"sparsity factor 1 for q<=100 {sparsity_ok}; gamma_1 form {gamma_ok}; field constant at Q {const_ok}")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion"):
            try:
                fn()
            except AssertionError:
                pass
