"""Exact integer and rational helpers.

Factorization, p-adic valuations, Moebius and totient tables, integer roots,
and rigorous rational enclosures of zeta(s), pi and real roots.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Union[int, Fraction]


class ArithmeticInputError(ValueError):
    """Base class for rejected inputs in this module."""


class ZeroFactorizationError(ArithmeticInputError):
    def __init__(self):
        super().__init__("zero has no factorization")


class NotPrimeError(ArithmeticInputError):
    pass


class DivergentZetaError(ArithmeticInputError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


# --------------------------------------------------------------------------
# primality and factorization

_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % d for d in range(2, int(p**0.5) + 1))]
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin with the first 13 prime bases (deterministic below 3.3e24)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES[:25]:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _factor_positive(n: int, out: dict, rng: random.Random) -> None:
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n == 1:
        return
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack.extend((r, r))
            continue
        d = _pollard_brent(m, rng)
        stack.extend((d, m // d))


@dataclass(frozen=True)
class FactoredRational:
    """sign * prod p**e over a finite map of primes to nonzero exponents."""

    sign: int = 1
    factors: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        clean = {p: e for p, e in sorted(self.factors.items()) if e != 0}
        object.__setattr__(self, "factors", clean)

    def __hash__(self):
        return hash((self.sign, tuple(self.factors.items())))

    def __eq__(self, other):
        if not isinstance(other, FactoredRational):
            return NotImplemented
        return self.sign == other.sign and self.factors == other.factors

    def value(self) -> Fraction:
        num = den = 1
        for p, e in self.factors.items():
            if e > 0:
                num *= p**e
            else:
                den *= p ** (-e)
        return Fraction(self.sign * num, den)

    def __int__(self):
        v = self.value()
        if v.denominator != 1:
            raise ValueError(f"{v} is not an integer")
        return v.numerator

    def __str__(self):
        if not self.factors:
            return str(self.sign)
        body = " * ".join(f"{p}^{e}" if e != 1 else str(p) for p, e in self.factors.items())
        return body if self.sign > 0 else f"-({body})"

    @classmethod
    def of(cls, x: Rational) -> "FactoredRational":
        x = as_fraction(x)
        if x == 0:
            raise ZeroFactorizationError()
        factors = dict(factorize(x.numerator).factors)
        if x.denominator != 1:
            for p, e in factorize(x.denominator).factors.items():
                factors[p] = factors.get(p, 0) - e
        return cls(1 if x > 0 else -1, factors)


def factorize(n: int) -> FactoredRational:
    """Factor a nonzero integer; the result is re-multiplied as a certificate."""
    if n == 0:
        raise ZeroFactorizationError()
    out: dict = {}
    _factor_positive(abs(n), out, random.Random(n))
    res = FactoredRational(1 if n > 0 else -1, out)
    if res.value() != n:  # pragma: no cover - certification guard
        raise ArithmeticError(f"factorization of {n} failed certification")
    return res


def prime_divisors(x: Rational) -> list[int]:
    x = as_fraction(x)
    if x == 0:
        return []
    return sorted(FactoredRational.of(x).factors)


def valuation(x: Rational, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    x = as_fraction(x)
    if x == 0:
        raise ZeroFactorizationError()
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def mobius_sieve(N: int) -> list[int]:
    """Return mu with mu[d] the Moebius function for 1 <= d <= N; mu[0] is 0."""
    if N < 1:
        raise ArithmeticInputError("mobius_sieve needs N >= 1")
    mu = [1] * (N + 1)
    mu[0] = 0
    composite = bytearray(N + 1)
    primes: list[int] = []
    for i in range(2, N + 1):
        if not composite[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            ip = i * p
            if ip > N:
                break
            composite[ip] = 1
            if i % p == 0:
                mu[ip] = 0
                break
            mu[ip] = -mu[i]
    return mu


def euler_totient(n: int) -> int:
    if n < 1:
        raise ArithmeticInputError("euler_totient needs n >= 1")
    result = n
    for p in factorize(n).factors:
        result = result // p * (p - 1)
    return result


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def rational_root(x: Rational, k: int):
    """Exact real k-th root of a rational when it is rational, else None."""
    x = as_fraction(x)
    if k == 1:
        return x
    if x < 0:
        if k % 2 == 0:
            return None
        r = rational_root(-x, k)
        return None if r is None else -r
    a, b = iroot(x.numerator, k), iroot(x.denominator, k)
    if a**k == x.numerator and b**k == x.denominator:
        return Fraction(a, b)
    return None


def is_nth_power(x: Rational, k: int) -> bool:
    """x in (Q*)**k, decided by valuations and sign."""
    x = as_fraction(x)
    if x == 0:
        return False
    if k % 2 == 0 and x < 0:
        return False
    return all(e % k == 0 for e in FactoredRational.of(x).factors.values())


# --------------------------------------------------------------------------
# rigorous enclosures


@dataclass(frozen=True)
class BoundedReal:
    """A real number known to lie in [lower, upper]."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        lo, hi = as_fraction(self.lower), as_fraction(self.upper)
        if lo > hi:
            raise ValueError(f"empty enclosure [{lo}, {hi}]")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def exact(cls, x: Rational) -> "BoundedReal":
        x = as_fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def contains(self, x) -> bool:
        if isinstance(x, BoundedReal):
            return self.lower <= x.lower and x.upper <= self.upper
        x = as_fraction(x)
        return self.lower <= x <= self.upper

    def overlaps(self, other: "BoundedReal") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    @staticmethod
    def _lift(x) -> "BoundedReal":
        return x if isinstance(x, BoundedReal) else BoundedReal.exact(x)

    def __add__(self, other):
        o = self._lift(other)
        return BoundedReal(self.lower + o.lower, self.upper + o.upper)

    __radd__ = __add__

    def __neg__(self):
        return BoundedReal(-self.upper, -self.lower)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        ends = [a * b for a in (self.lower, self.upper) for b in (o.lower, o.upper)]
        return BoundedReal(min(ends), max(ends))

    __rmul__ = __mul__

    def reciprocal(self) -> "BoundedReal":
        if self.lower <= 0 <= self.upper:
            raise ZeroDivisionError("enclosure contains zero")
        return BoundedReal(1 / self.upper, 1 / self.lower)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        if k == 0:
            return BoundedReal.exact(1)
        if self.lower >= 0:
            return BoundedReal(self.lower**k, self.upper**k)
        ends = [self.lower**k, self.upper**k]
        if k % 2 == 0 and self.upper >= 0:
            return BoundedReal(Fraction(0), max(ends))
        return BoundedReal(min(ends), max(ends))

    def decimal(self, digits: int = 12) -> str:
        return format_decimal(self.midpoint, digits)

    def __str__(self):
        return f"{self.decimal()} (+/- {float(self.width) / 2:.1e})"


def format_decimal(x: Rational, digits: int = 12) -> str:
    """Render a rational with `digits` significant digits (round half even)."""
    from decimal import Decimal, localcontext

    x = as_fraction(x)
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return format(d, "f") if abs(d) >= Decimal("1e-6") or d == 0 else format(d, "e")


def root_enclosure(x: Rational, k: int, tol: Rational = Fraction(1, 10**12)) -> BoundedReal:
    """Enclosure of the positive real k-th root of x >= 0 with width <= tol."""
    x, tol = as_fraction(x), as_fraction(tol)
    if x < 0:
        raise ValueError("root_enclosure needs x >= 0")
    if tol <= 0:
        raise ValueError("tol must be positive")
    exact = rational_root(x, k)
    if exact is not None:
        return BoundedReal.exact(exact)
    scale = 1
    while Fraction(1, scale) > tol:
        scale *= 10
    a = iroot(x.numerator * scale**k // x.denominator, k)
    return BoundedReal(Fraction(a, scale), Fraction(a + 1, scale))


def _zeta_level(s: int, j: int) -> BoundedReal:
    """Enclosure of zeta(s) from the partial sum to N = 2**j.

    The tail sum_{k>N} k**-s is bracketed by consecutive Euler-Maclaurin
    truncations (the summand is completely monotone):
        I - f/2 + s N**(-s-1)/12 - s(s+1)(s+2) N**(-s-3)/720 <= tail
        tail <= I - f/2 + s N**(-s-1)/12,  I = N**(1-s)/(s-1), f = N**-s.
    Terms are rounded outward onto a 2**-bits grid fixed by (s, j).
    """
    N = 1 << j
    D = 1 << ((s + 4) * j + 12)
    floor_sum = ceil_sum = 0
    for k in range(1, N + 1):
        q, r = divmod(D, k**s)
        floor_sum += q
        ceil_sum += q + (1 if r else 0)
    upper_tail = Fraction(1, (s - 1) * N ** (s - 1)) - Fraction(1, 2 * N**s) + Fraction(s, 12 * N ** (s + 1))
    lower_tail = upper_tail - Fraction(s * (s + 1) * (s + 2), 720 * N ** (s + 3))
    return BoundedReal(Fraction(floor_sum, D) + lower_tail, Fraction(ceil_sum, D) + upper_tail)


def _zeta_width_bound(s: int, j: int) -> Fraction:
    N = 1 << j
    return Fraction(s * (s + 1) * (s + 2), 720 * N ** (s + 3)) + Fraction(2 * N, 1 << ((s + 4) * j + 12))


def zeta(s: int, tol: Rational = Fraction(1, 10**9)) -> BoundedReal:
    """Rigorous enclosure of the Riemann zeta value at an integer s >= 2.

    The result is the intersection of the enclosures for N = 1, 2, 4, ...
    up to the first level whose width bound is <= tol, so a smaller tol
    always yields a sub-interval.
    """
    if not isinstance(s, int) or s <= 1:
        raise DivergentZetaError(f"zeta({s}) diverges or is unsupported; need integer s >= 2")
    tol = as_fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    j = 0
    out = _zeta_level(s, 0)
    while _zeta_width_bound(s, j) > tol:
        j += 1
        e = _zeta_level(s, j)
        out = BoundedReal(max(out.lower, e.lower), min(out.upper, e.upper))
    return out


def _arctan_inv(x: int, tol: Fraction) -> BoundedReal:
    # arctan(1/x) by its alternating series; consecutive partial sums bracket it
    total = Fraction(0)
    k = 0
    while True:
        term = Fraction(1, (2 * k + 1) * x ** (2 * k + 1))
        nxt = total + (term if k % 2 == 0 else -term)
        if term <= tol:
            return BoundedReal(min(total, nxt), max(total, nxt))
        total = nxt
        k += 1


def pi_enclosure(tol: Rational = Fraction(1, 10**15)) -> BoundedReal:
    """pi = 16 arctan(1/5) - 4 arctan(1/239), enclosed with width <= tol."""
    tol = as_fraction(tol)
    return 16 * _arctan_inv(5, tol / 64) - 4 * _arctan_inv(239, tol / 16)


def product(values: Iterable[int]) -> int:
    return math.prod(values)
