"""Rational lifts through the weighted Veronese map.

A projective point y lifts iff some lam in Q* makes every lam * y_i an
n_i-th power (n_i = q / q_i).  Over Q this splits into one congruence system
per prime, t_p = -v_p(y_i) (mod n_i), plus a sign condition on the even n_i.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arith import FactoredRational, prime_divisors, rational_root
from .errors import OracleTooLargeError, check_budget
from .space import (
    ProjectivePoint,
    WeightedPoint,
    WeightSystem,
    canonical_tuple,
    canonicalize,
    geometric_key,
    projective_blocks,
    projective_points_in_block,
    veronese,
)


@dataclass(frozen=True)
class Obstruction:
    """Why a point has no rational lift.

    kind "congruence": residues holds two (index, residue, modulus) entries
    whose residues disagree modulo gcd of the moduli at `prime`.
    kind "sign": `indices` are two coordinates with even exponent and
    opposite signs.  kind "exhausted": a bounded search found nothing.
    """

    kind: str
    prime: Optional[int] = None
    residues: tuple = ()
    indices: tuple = ()
    bound: Optional[int] = None

    def verify(self, y: ProjectivePoint, ws: WeightSystem) -> bool:
        n = ws.exponents
        if self.kind == "congruence":
            (i, ri, mi), (j, rj, mj) = self.residues
            if mi != n[i] or mj != n[j] or 0 in (y.coords[i], y.coords[j]):
                return False
            vi = FactoredRational.of(y.coords[i]).factors.get(self.prime, 0)
            vj = FactoredRational.of(y.coords[j]).factors.get(self.prime, 0)
            g = math.gcd(mi, mj)
            return ri == -vi % mi and rj == -vj % mj and (ri - rj) % g != 0
        if self.kind == "sign":
            i, j = self.indices
            return n[i] % 2 == 0 and n[j] % 2 == 0 and y.coords[i] * y.coords[j] < 0
        return False

    def to_json(self) -> dict:
        out = {"type": self.kind, "prime": self.prime, "residues": [list(r) for r in self.residues]}
        if self.indices:
            out["indices"] = list(self.indices)
        if self.bound is not None:
            out["bound"] = self.bound
        return out


@dataclass(frozen=True)
class LiftResult:
    liftable: bool
    witness_lambda: Optional[Fraction] = None
    witness_point: Optional[WeightedPoint] = None
    obstruction: Optional[Obstruction] = None

    def check_witness(self, y: ProjectivePoint) -> bool:
        """veronese(witness) == y and x_i**n_i == lam * y_i for all i."""
        if not self.liftable:
            return False
        x = self.witness_point
        n = x.system.exponents
        return veronese(x) == y and all(
            xi**e == self.witness_lambda * yi for xi, e, yi in zip(x.coords, n, y.coords)
        )

    def to_json(self) -> dict:
        return {
            "liftable": self.liftable,
            "lambda": None if self.witness_lambda is None else str(self.witness_lambda),
            "witness": None if self.witness_point is None else [int(c) for c in self.witness_point.coords],
            "obstruction": None if self.obstruction is None else self.obstruction.to_json(),
        }


@dataclass(frozen=True)
class SparsityRecord:
    bound: int
    total: int
    liftable: int
    density: Fraction = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "density", Fraction(self.liftable, self.total) if self.total else Fraction(0))

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "total": self.total,
            "liftable": self.liftable,
            "density": str(self.density),
            "density_decimal": float(self.density),
        }


def _check_arity(y: ProjectivePoint, ws: WeightSystem):
    if len(y.coords) != len(ws.weights):
        raise ValueError(f"target has {len(y.coords)} coordinates, weights have {len(ws.weights)}")


# --------------------------------------------------------------------------
# degree of the map


def veronese_degree(ws: WeightSystem) -> int:
    deg = Fraction(ws.q**ws.n * ws.d, math.prod(ws.weights))
    if deg.denominator != 1:  # pragma: no cover - impossible for a valid system
        raise ArithmeticError(f"non-integral degree {deg} for {ws}")
    return deg.numerator


def orbit_count_oracle(ws: WeightSystem, budget: int = 10**6) -> int:
    """Orbits of t in Z/q acting on prod Z/n_i by a_i -> a_i + t (mod n_i).

    a_i indexes the n_i-th root of unity omega**(q_i a_i) for a primitive
    q-th root omega; scaling by omega**t multiplies it by omega**(q_i t).
    """
    n = ws.exponents
    total = math.prod(n)
    if total > budget:
        raise OracleTooLargeError(f"oracle too large: {total} tuples exceeds budget {budget}")
    strides = [math.prod(n[i + 1 :]) for i in range(len(n))]
    seen = bytearray(total)
    orbits = 0
    for start in range(total):
        if seen[start]:
            continue
        orbits += 1
        a = [(start // s) % m for s, m in zip(strides, n)]
        for t in range(ws.q):
            seen[sum(((ai + t) % m) * s for ai, m, s in zip(a, n, strides))] = 1
    return orbits


# --------------------------------------------------------------------------
# lift decision


def _crt_pair(r1, m1, r2, m2):
    g = math.gcd(m1, m2)
    if (r1 - r2) % g:
        return None
    l = m1 // g * m2
    k = ((r2 - r1) // g) * pow(m1 // g, -1, m2 // g) % (m2 // g) if m2 // g > 1 else 0
    return (r1 + m1 * k) % l, l


def lift_check(y: ProjectivePoint, ws: WeightSystem) -> LiftResult:
    _check_arity(y, ws)
    n = ws.exponents
    support = [i for i, c in enumerate(y.coords) if c != 0]
    facts = {i: FactoredRational.of(y.coords[i]).factors for i in support}
    primes = sorted(set().union(*(f.keys() for f in facts.values())))

    lam = Fraction(1)
    for p in primes:
        system = [(i, -facts[i].get(p, 0) % n[i], n[i]) for i in support]
        for a, b in itertools.combinations(system, 2):
            if (a[1] - b[1]) % math.gcd(a[2], b[2]):
                return LiftResult(False, obstruction=Obstruction("congruence", prime=p, residues=(a, b)))
        t, m = 0, 1
        for _, r, mod in system:
            t, m = _crt_pair(t, m, r, mod)
        lam *= Fraction(p) ** t

    even = [i for i in support if n[i] % 2 == 0]
    signs = {1 if y.coords[i] > 0 else -1 for i in even}
    if len(signs) > 1:
        pos = next(i for i in even if y.coords[i] > 0)
        neg = next(i for i in even if y.coords[i] < 0)
        return LiftResult(False, obstruction=Obstruction("sign", indices=(min(pos, neg), max(pos, neg))))
    if signs == {-1}:
        lam = -lam

    x = []
    for e, c in zip(n, y.coords):
        if c == 0:
            x.append(Fraction(0))
            continue
        root = rational_root(lam * c, e)
        if root is None:  # pragma: no cover - excluded by the congruence solve
            raise ArithmeticError(f"internal: {lam * c} is not a {e}-th power")
        x.append(root)
    witness = canonicalize(WeightedPoint(tuple(x), ws))
    j = support[0]
    lam = witness.coords[j] ** n[j] / y.coords[j]
    return LiftResult(True, witness_lambda=lam, witness_point=witness)


def lift_bruteforce_oracle(y: ProjectivePoint, ws: WeightSystem, exponent_bound: int = 6) -> LiftResult:
    """Try lam = +-prod p**t_p over primes of y with |t_p| <= bound.

    Exponents t_p that leave some lam * y_i with a p-adic valuation not
    divisible by n_i are skipped (an n-th power needs that); every surviving
    lam is verified by exact root extraction.
    """
    _check_arity(y, ws)
    n = ws.exponents
    primes = sorted(set().union(*(prime_divisors(c) for c in y.coords)))
    pairs = [(e, Fraction(c)) for e, c in zip(n, y.coords) if c != 0 and e > 1]

    def val(x: Fraction, p: int) -> int:
        v, a, b = 0, x.numerator, x.denominator
        while a % p == 0:
            a //= p
            v += 1
        while b % p == 0:
            b //= p
            v -= 1
        return v

    rng = range(-exponent_bound, exponent_bound + 1)
    choices = [[t for t in rng if all((t + val(c, p)) % e == 0 for e, c in pairs)] for p in primes]
    for exps in itertools.product(*choices):
        base = Fraction(1)
        for p, t in zip(primes, exps):
            base *= Fraction(p) ** t
        for lam in (base, -base):
            if all(rational_root(lam * c, e) is not None for e, c in pairs):
                x = [Fraction(0) if c == 0 else rational_root(lam * c, e) for e, c in zip(n, y.coords)]
                witness = canonicalize(WeightedPoint(tuple(x), ws))
                j = next(i for i, c in enumerate(y.coords) if c)
                return LiftResult(True, witness.coords[j] ** n[j] / y.coords[j], witness)
    return LiftResult(False, obstruction=Obstruction("exhausted", bound=exponent_bound))


def fiber_rational_points(y: ProjectivePoint, ws: WeightSystem) -> set:
    """Rational points over y, one per class under scaling by algebraic numbers.

    Every valid lam equals +-lam0 times a power that is absorbed by rescaling,
    so the classes come from the two signs of lam and the +-choices of even
    roots.  Each class is returned as its Q*-canonical representative.
    """
    res = lift_check(y, ws)
    if not res.liftable:
        return set()
    n = ws.exponents
    w = ws.weights
    lam0 = res.witness_lambda
    even = [i for i, c in enumerate(y.coords) if c != 0 and n[i] % 2 == 0]
    keys = set()
    for eps in (1, -1):
        lam = eps * lam0
        base = []
        for e, c in zip(n, y.coords):
            base.append(Fraction(0) if c == 0 else rational_root(lam * c, e))
        if any(b is None for b in base):
            continue
        for flips in itertools.product((1, -1), repeat=len(even)):
            x = list(base)
            for i, s in zip(even, flips):
                x[i] = s * x[i]
            keys.add(geometric_key(w, x))
    return {WeightedPoint(canonical_tuple(w, k), ws, normalized=True) for k in sorted(keys)}


# --------------------------------------------------------------------------
# sparsity scan


def _scan_blocks(args):
    weights, B, blocks = args
    ws = WeightSystem(weights)
    total = liftable = 0
    for block in blocks:
        for c in projective_points_in_block(len(weights), B, block):
            total += 1
            if lift_check(ProjectivePoint(c), ws).liftable:
                liftable += 1
    return total, liftable


def sparsity_scan(ws: WeightSystem, B: int, budget: int = 10**8, workers: int = 1) -> SparsityRecord:
    if B < 1:
        raise ValueError("bound must be positive")
    check_budget((2 * B + 1) ** len(ws.weights), budget, "sparsity scan")
    blocks = projective_blocks(len(ws.weights), B)
    if workers <= 1:
        total, liftable = _scan_blocks((ws.weights, B, blocks))
        return SparsityRecord(B, total, liftable)
    chunks = [blocks[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_scan_blocks, [(ws.weights, B, ch) for ch in chunks]))
    return SparsityRecord(B, sum(p[0] for p in parts), sum(p[1] for p in parts))
