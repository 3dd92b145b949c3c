"""Weight systems, weighted points over Q, normalization and heights."""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce, total_ordering
from typing import Iterable, Sequence

from .arith import (
    BoundedReal,
    FactoredRational,
    Rational,
    as_fraction,
    factorize,
    prime_divisors,
    rational_root,
    root_enclosure,
)


class InvalidWeightsError(ValueError):
    pass


class ZeroPointError(ValueError):
    def __init__(self):
        super().__init__("the zero tuple is not a point")


class NotWellFormedWarning(UserWarning):
    pass


def _lcm(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


@dataclass(frozen=True)
class WeightSystem:
    weights: tuple
    q: int = field(init=False)
    Q: int = field(init=False)
    d: int = field(init=False)
    exponents: tuple = field(init=False)
    well_formed: bool = field(init=False)

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        if len(w) < 2:
            raise InvalidWeightsError(f"need at least two weights, got {w}")
        if any(x < 1 for x in w):
            raise InvalidWeightsError(f"weights must be positive integers, got {w}")
        q = _lcm(w)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "Q", sum(w))
        object.__setattr__(self, "d", math.gcd(*w))
        object.__setattr__(self, "exponents", tuple(q // x for x in w))
        object.__setattr__(
            self,
            "well_formed",
            all(math.gcd(*(w[:i] + w[i + 1 :])) == 1 for i in range(len(w))),
        )

    @property
    def n(self) -> int:
        return len(self.weights) - 1

    def __len__(self):
        return len(self.weights)

    def __str__(self):
        return "(" + ",".join(map(str, self.weights)) + ")"


def validate(weights: Sequence[int]) -> WeightSystem:
    ws = WeightSystem(tuple(weights))
    if not ws.well_formed:
        warnings.warn(f"weights {ws} are not well-formed", NotWellFormedWarning, stacklevel=2)
    return ws


@dataclass(frozen=True)
class WeightedPoint:
    coords: tuple
    system: WeightSystem
    normalized: bool = False

    def __post_init__(self):
        c = tuple(as_fraction(x) for x in self.coords)
        if len(c) != len(self.system.weights):
            raise ValueError(f"point has {len(c)} coordinates, weights have {len(self.system.weights)}")
        if all(x == 0 for x in c):
            raise ZeroPointError()
        object.__setattr__(self, "coords", c)

    def scale(self, lam: Rational) -> "WeightedPoint":
        """The point [lam**q_i * x_i]."""
        lam = as_fraction(lam)
        if lam == 0:
            raise ValueError("scaling by zero")
        return WeightedPoint(tuple(lam**w * x for w, x in zip(self.system.weights, self.coords)), self.system)

    def __str__(self):
        return "[" + " : ".join(str(x) for x in self.coords) + "]"


def point(coords: Sequence[Rational], weights) -> WeightedPoint:
    ws = weights if isinstance(weights, WeightSystem) else WeightSystem(tuple(weights))
    return WeightedPoint(tuple(coords), ws)


@dataclass(frozen=True)
class ProjectivePoint:
    """Canonical integer representative: gcd 1, leading nonzero entry positive."""

    coords: tuple

    def __post_init__(self):
        c = tuple(int(x) for x in self.coords)
        if all(x == 0 for x in c):
            raise ZeroPointError()
        g = math.gcd(*c)
        lead = next(x for x in c if x != 0)
        if g != 1 or lead < 0:
            raise ValueError(f"{c} is not a canonical projective representative")
        object.__setattr__(self, "coords", c)

    @classmethod
    def from_rationals(cls, coords: Sequence[Rational]) -> "ProjectivePoint":
        c = [as_fraction(x) for x in coords]
        if all(x == 0 for x in c):
            raise ZeroPointError()
        den = _lcm(x.denominator for x in c)
        ints = [int(x * den) for x in c]
        g = math.gcd(*ints)
        ints = [x // g for x in ints]
        if next(x for x in ints if x != 0) < 0:
            ints = [-x for x in ints]
        return cls(tuple(ints))

    def __str__(self):
        return "[" + " : ".join(map(str, self.coords)) + "]"


# --------------------------------------------------------------------------
# exact heights


@total_ordering
@dataclass(frozen=True, eq=False)
class ExactHeight:
    """The positive real radicand**(1/root), kept with minimal root."""

    radicand: Fraction
    root: int = 1

    def __post_init__(self):
        r, s = as_fraction(self.radicand), int(self.root)
        if r <= 0 or s < 1:
            raise ValueError(f"invalid height {r}^(1/{s})")
        changed = True
        while changed and s > 1:
            changed = False
            for ell in factorize(s).factors:
                rt = rational_root(r, ell)
                if rt is not None:
                    r, s, changed = rt, s // ell, True
                    break
        object.__setattr__(self, "radicand", r)
        object.__setattr__(self, "root", s)

    def _cross(self, other: "ExactHeight"):
        L = self.root * other.root // math.gcd(self.root, other.root)
        return self.radicand ** (L // self.root), other.radicand ** (L // other.root)

    def __eq__(self, other):
        if not isinstance(other, ExactHeight):
            return NotImplemented
        return self.radicand == other.radicand and self.root == other.root

    def __hash__(self):
        return hash((self.radicand, self.root))

    def __lt__(self, other):
        if not isinstance(other, ExactHeight):
            return NotImplemented
        a, b = self._cross(other)
        return a < b

    def power(self, k: int) -> "ExactHeight":
        g = math.gcd(k, self.root)
        return ExactHeight(self.radicand ** (k // g), self.root // g)

    def at_most(self, bound: Rational) -> bool:
        """self <= bound for a nonnegative rational bound."""
        bound = as_fraction(bound)
        return bound >= 0 and self.radicand <= bound**self.root

    def enclosure(self, tol: Rational = Fraction(1, 10**12)) -> BoundedReal:
        return root_enclosure(self.radicand, self.root, tol)

    def __str__(self):
        return str(self.radicand) if self.root == 1 else f"{self.radicand}^(1/{self.root})"

    def __repr__(self):
        return f"ExactHeight({self})"


# --------------------------------------------------------------------------
# tuple-level machinery shared by the point API and the counters


def wgcd_exponents(weights: Sequence[int], coords: Sequence[Fraction]) -> dict:
    """Map p -> min_i floor(v_p(x_i) / q_i) over nonzero coordinates."""
    vals: dict = {}
    nonzero = [(w, FactoredRational.of(x).factors) for w, x in zip(weights, coords) if x != 0]
    primes = set()
    for _, f in nonzero:
        primes.update(f)
    for p in primes:
        e = min(f.get(p, 0) // w for w, f in nonzero)
        if e:
            vals[p] = e
    return vals


def scale_tuple(weights, coords, lam: Fraction) -> tuple:
    return tuple(lam**w * x for w, x in zip(weights, coords))


def normalize_tuple(weights, coords) -> tuple:
    coords = tuple(as_fraction(x) for x in coords)
    lam = Fraction(1)
    for p, e in wgcd_exponents(weights, coords).items():
        lam /= Fraction(p) ** e
    return scale_tuple(weights, coords, lam)


def sign_canonical(weights, coords) -> bool:
    for w, x in zip(weights, coords):
        if w % 2 == 1 and x != 0:
            return x > 0
    return True


def canonical_tuple(weights, coords) -> tuple:
    """Deterministic representative of the Q*-orbit of a nonzero tuple."""
    c = normalize_tuple(weights, coords)
    if not sign_canonical(weights, c):
        c = scale_tuple(weights, c, Fraction(-1))
    return tuple(int(x) for x in c)


def geometric_key(weights, coords) -> tuple:
    """Representative of the orbit under scaling by nonzero algebraic numbers.

    Two rational tuples are equivalent over Q-bar iff they have the same
    support and agree under Q*-scaling for the support weights divided by
    their gcd.
    """
    support = tuple(i for i, x in enumerate(coords) if x != 0)
    if not support:
        raise ZeroPointError()
    g = math.gcd(*(weights[i] for i in support))
    reduced = [weights[i] // g for i in support]
    canon = canonical_tuple(reduced, [coords[i] for i in support])
    out = [0] * len(coords)
    for i, x in zip(support, canon):
        out[i] = x
    return tuple(out)


# --------------------------------------------------------------------------
# point operations


def wgcd(p: WeightedPoint) -> FactoredRational:
    return FactoredRational(1, wgcd_exponents(p.system.weights, p.coords))


def normalize(p: WeightedPoint) -> WeightedPoint:
    c = normalize_tuple(p.system.weights, p.coords)
    return WeightedPoint(c, p.system, normalized=sign_canonical(p.system.weights, c))


def canonicalize(p: WeightedPoint) -> WeightedPoint:
    return WeightedPoint(canonical_tuple(p.system.weights, p.coords), p.system, normalized=True)


def equivalent(p1: WeightedPoint, p2: WeightedPoint) -> bool:
    if p1.system.weights != p2.system.weights:
        raise ValueError("points live in different weight systems")
    return canonicalize(p1).coords == canonicalize(p2).coords


def equivalent_bruteforce(p1: WeightedPoint, p2: WeightedPoint, bound: int = 4) -> bool:
    """Search lam = +-prod p**t_p, |t_p| <= bound, with lam * p1 == p2."""
    if len(p1.coords) != len(p2.coords):
        raise ValueError("mismatched arity")
    w = p1.system.weights
    primes = sorted(set().union(*(prime_divisors(x) for x in p1.coords + p2.coords)))
    for exps in itertools.product(range(-bound, bound + 1), repeat=len(primes)):
        base = Fraction(1)
        for p, t in zip(primes, exps):
            base *= Fraction(p) ** t
        for lam in (base, -base):
            if scale_tuple(w, p1.coords, lam) == p2.coords:
                return True
    return False


def weighted_height(p: WeightedPoint) -> ExactHeight:
    """h(p) as (h**q, q): finite places from valuations, then the real place."""
    n = p.system.exponents
    q = p.system.q
    nonzero = [(e, x) for e, x in zip(n, p.coords) if x != 0]
    value = Fraction(1)
    facts = [(e, FactoredRational.of(x).factors) for e, x in nonzero]
    primes = set().union(*(f.keys() for _, f in facts))
    for prime in primes:
        value *= Fraction(prime) ** (-min(e * f.get(prime, 0) for e, f in facts))
    value *= max(abs(x) ** e for e, x in nonzero)
    return ExactHeight(value, q)


def archimedean_height(p: WeightedPoint) -> ExactHeight:
    return max(ExactHeight(abs(x), w) for w, x in zip(p.system.weights, p.coords) if x != 0)


def size(p: WeightedPoint) -> ExactHeight:
    return archimedean_height(normalize(p))


def weil_height(y: ProjectivePoint) -> ExactHeight:
    return ExactHeight(max(abs(z) for z in y.coords), 1)


def veronese(p: WeightedPoint) -> ProjectivePoint:
    return ProjectivePoint.from_rationals([x**e for e, x in zip(p.system.exponents, p.coords)])


def parse_rationals(text: str) -> tuple:
    try:
        return tuple(Fraction(tok.strip()) for tok in text.split(",") if tok.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse rational list {text!r}: {exc}") from None


def parse_weights(text: str) -> WeightSystem:
    try:
        vals = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise InvalidWeightsError(f"cannot parse weights {text!r}") from None
    return WeightSystem(vals)


def projective_blocks(arity: int, B: int) -> list:
    """Partition of the canonical projective points in [-B, B]**arity.

    A block is (k, v): the first nonzero coordinate sits at index k with value v.
    """
    return [(k, v) for k in range(arity) for v in range(1, B + 1)]


def projective_points_in_block(arity: int, B: int, block) -> Iterable[tuple]:
    k, v = block
    head = (0,) * k + (v,)
    for tail in itertools.product(range(-B, B + 1), repeat=arity - k - 1):
        c = head + tail
        if math.gcd(*c) == 1:
            yield c


def projective_points(arity: int, B: int) -> Iterable[tuple]:
    """Canonical integer tuples with max |y_i| <= B, in block order."""
    for block in projective_blocks(arity, B):
        yield from projective_points_in_block(arity, B, block)
