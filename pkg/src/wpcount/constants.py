"""Leading constants and exponent bookkeeping for the point-count asymptotics.

Every real constant comes back as a BoundedReal enclosure.  Field data
(class number, regulator, ...) is supplied by the caller; nothing here
computes invariants of a number field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .arith import BoundedReal, Rational, as_fraction, euler_totient, pi_enclosure, root_enclosure, zeta
from .space import WeightSystem


class InconsistentFieldError(ValueError):
    pass


def _refine(build: Callable[[Fraction], BoundedReal], tol: Rational) -> BoundedReal:
    tol = as_fraction(tol)
    inner = tol / 1000
    for _ in range(12):
        out = build(inner)
        if out.width <= tol:
            return out
        inner /= 10**4
    return out


@dataclass(frozen=True)
class FieldInvariants:
    """Arithmetic data of a number field K of degree m*e over Q.

    zeta_value, when given, is used as the Dedekind zeta value at whatever
    argument an evaluator needs; for Q it may be omitted and is computed.
    """

    m: int = 1
    e: int = 1
    h: int = 1
    R: Fraction = Fraction(1)
    w: int = 2
    disc: int = 1
    r: int = 1
    s: int = 0
    zeta_value: Optional[BoundedReal] = None

    def __post_init__(self):
        object.__setattr__(self, "R", as_fraction(self.R))
        if self.m < 1 or self.e < 1:
            raise InconsistentFieldError("degrees must be positive")
        if self.r + 2 * self.s != self.m * self.e:
            raise InconsistentFieldError(
                f"r + 2s = {self.r + 2 * self.s} differs from m*e = {self.m * self.e}"
            )
        if self.w < 2 or self.h < 1 or self.disc < 1 or self.R <= 0:
            raise InconsistentFieldError("need w >= 2, h >= 1, |disc| >= 1, R > 0")

    @classmethod
    def rationals(cls) -> "FieldInvariants":
        return cls()

    @property
    def degree(self) -> int:
        return self.m * self.e

    @property
    def is_rationals(self) -> bool:
        return self.degree == 1

    def zeta_at(self, arg: int, tol: Fraction) -> BoundedReal:
        if self.zeta_value is not None:
            return self.zeta_value
        if self.is_rationals:
            return zeta(arg, tol)
        raise ValueError("a Dedekind zeta enclosure is required for fields other than Q")


@dataclass(frozen=True)
class ConstantReport:
    constant: BoundedReal
    exponent: Fraction
    error_exponent: Optional[Fraction] = None
    log_power: int = 0
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "constant_mid": float(self.constant.midpoint),
            "constant_width": float(self.constant.width),
            "exponent": _num(self.exponent),
            "error_exponent": None if self.error_exponent is None else _num(self.error_exponent),
            "log_power": self.log_power,
        }
        out.update(self.extra)
        return out


def _num(x: Fraction):
    x = as_fraction(x)
    return x.numerator if x.denominator == 1 else float(x)


def _volume_factor(inv: FieldInvariants, n: int, tol: Fraction) -> BoundedReal:
    """(2**r (2 pi)**s / sqrt|disc|)**(n+1)."""
    base = BoundedReal.exact(2**inv.r) * (2 * pi_enclosure(tol)) ** inv.s / root_enclosure(inv.disc, 2, tol)
    return base ** (n + 1)


def rational_leading_constant(ws: WeightSystem, tol: Rational = Fraction(1, 10**9)) -> BoundedReal:
    """2**n / zeta(Q)."""
    if ws.Q < 2:
        raise ValueError("Q must be at least 2")
    return _refine(lambda t: BoundedReal.exact(2**ws.n) / zeta(ws.Q, t), tol)


def schanuel_constant(n: int, inv: FieldInvariants, tol: Rational = Fraction(1, 10**9)) -> BoundedReal:
    """S_K(n) = hR/(w zeta_K(n+1)) * (2^r (2pi)^s / sqrt|D|)^(n+1) * (n+1)^(r+s-1)."""
    if n < 1:
        raise ValueError("n must be positive")

    def build(t):
        arith = BoundedReal.exact(inv.h * inv.R) / (inv.w * inv.zeta_at(n + 1, t))
        return arith * _volume_factor(inv, n, t) * Fraction(n + 1) ** (inv.r + inv.s - 1)

    return _refine(build, tol)


def numberfield_leading_constant(
    ws: WeightSystem, inv: FieldInvariants, tol: Rational = Fraction(1, 10**9)
) -> ConstantReport:
    """Leading constant over a field K: hR/(w zeta_K(Q)) * (2^r (2pi)^s / sqrt|D|)^(n+1)."""
    deg = inv.degree

    def build(t):
        arith = BoundedReal.exact(inv.h * inv.R) / (inv.w * inv.zeta_at(ws.Q, t))
        return arith * _volume_factor(inv, ws.n, t)

    return ConstantReport(
        constant=_refine(build, tol),
        exponent=Fraction(deg * ws.Q),
        error_exponent=deg * ws.Q - Fraction(1, deg),
        log_power=1,
    )


def sparsity_factor(q: int, m: int, e: int) -> Fraction:
    """1 / gcd(q, phi(m e))."""
    if min(q, m, e) < 1:
        raise ValueError("q, m, e must be positive")
    return Fraction(1, math.gcd(q, euler_totient(m * e)))


def log_power(me: int, n: int) -> int:
    return 2 if (me, n) == (1, 1) else 1


def covolume_factor(inv: FieldInvariants, q: int, n: int, tol: Rational = Fraction(1, 10**12)) -> BoundedReal:
    """V_K = 2^(-s(n+1)) |D|^((n+1)/2) / gcd(q, phi(m e))."""
    tol = as_fraction(tol)
    disc_part = root_enclosure(inv.disc, 2, tol) ** (n + 1)
    return disc_part * Fraction(1, 2 ** (inv.s * (n + 1))) * sparsity_factor(q, inv.m, inv.e)


def degree_e_constant_term(
    ws: WeightSystem, inv: FieldInvariants, n: Optional[int] = None, tol: Rational = Fraction(1, 10**9)
) -> ConstantReport:
    """Single-field term D_K / (q^n / prod q_i) with D_K = V_K S_K(n).

    The divisor is taken literally as q^n / prod q_i.  The map degree
    q^n d / prod q_i differs when d > 1; both are reported.
    """
    n = ws.n if n is None else n
    if n != ws.n:
        raise ValueError(f"n = {n} does not match the weight system (n = {ws.n})")
    literal = Fraction(ws.q**n, math.prod(ws.weights))
    map_degree = literal * ws.d

    def build(t):
        return covolume_factor(inv, ws.q, n, t) * schanuel_constant(n, inv, t) / literal

    me = inv.degree
    return ConstantReport(
        constant=_refine(build, tol),
        exponent=Fraction(me * ws.Q),
        error_exponent=me * ws.Q - Fraction(min(ws.weights), inv.m),
        log_power=log_power(me, n),
        extra={
            "sparsity_factor": str(sparsity_factor(ws.q, inv.m, inv.e)),
            "divisor_literal": str(literal),
            "divisor_map_degree": str(map_degree),
            "divisor_discrepancy": ws.d > 1,
        },
    )


@dataclass(frozen=True)
class BoundsRecord:
    gamma: Fraction
    mu: Fraction
    beta: Fraction
    converges: Optional[bool]

    def to_json(self) -> dict:
        return {"gamma": str(self.gamma), "mu": str(self.mu), "beta": str(self.beta), "converges": self.converges}


def bounds_evaluators(g: int, e: int, m: int, Q: int, n: Optional[int] = None) -> BoundsRecord:
    """gamma_g = m(g^2 + g + e^2/g + e), mu_g = m e (e-g) Q - 1, beta = m e (e-1) + 1."""
    if min(g, e, m, Q) < 1:
        raise ValueError("g, e, m, Q must be positive")
    if e % g:
        raise ValueError(f"g = {g} does not divide e = {e}")
    gamma = m * (g * g + g + Fraction(e * e, g) + e)
    mu = Fraction(m * e * (e - g) * Q - 1)
    beta = Fraction(m * e * (e - 1) + 1)
    return BoundsRecord(gamma, mu, beta, None if n is None else n > e)


def comparison_constants(ws: WeightSystem, e: Optional[int] = None, tol: Rational = Fraction(1, 10**9)) -> dict:
    """Size-count, morphism-count and weighted-height leading terms side by side.

    e is the degree of the morphism used for the target-height count; it
    defaults to q, the Veronese case, where T = X**q.
    """
    e = ws.q if e is None else e
    c = rational_leading_constant(ws, tol)
    min_q = min(ws.weights)
    size_count = ConstantReport(c, Fraction(ws.Q), Fraction(ws.Q - min_q), 0)
    rough = _refine(lambda t: BoundedReal.exact(Fraction(2**ws.n, ws.q)) / zeta(ws.n + 1, t), tol)
    morphism = {
        "exponent_T": _num(Fraction(ws.Q, e)),
        "exponent_X": _num(Fraction(ws.q * ws.Q, e)),
        "error_exponent_T": _num(Fraction(ws.Q, e) - Fraction(min_q, e)),
        "rough_constant_mid": float(rough.midpoint),
        "rough_constant_width": float(rough.width),
        "degree": e,
    }
    out = {
        "size_count": size_count.to_json(),
        "morphism_count": morphism,
        "weighted_height": ConstantReport(c, Fraction(ws.Q), Fraction(ws.Q - min_q), 0).to_json(),
    }
    if all(x == 1 for x in ws.weights):
        s = schanuel_constant(ws.n, FieldInvariants.rationals(), tol)
        out["schanuel"] = ConstantReport(s, Fraction(ws.n + 1), Fraction(ws.n), 1 if ws.n == 1 else 0).to_json()
    return out


def exponent_predictors(dim: int, m: int = 1, rank_pic: int = 1) -> dict:
    """a_W = m (dim W + 1); b_W = rank Pic - 1, forced to 0 when dim W > 1 or m > 1."""
    b = 0 if (dim > 1 or m > 1) else rank_pic - 1
    return {"a_W": m * (dim + 1), "b_W": b}
