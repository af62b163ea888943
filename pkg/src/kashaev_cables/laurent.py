"""Exact sparse Laurent polynomials in one variable.

Coefficients are Python ints (ring ``"Z"``) or :class:`fractions.Fraction`
(ring ``"Q"``). Instances are immutable and always canonical: no stored
coefficient is zero.

Throughout the package the formal variable is ``x`` with ``q = x**8``,
``v = q**(1/2) = x**4`` and ``q**(1/4) = x**2``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Integral, Rational
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple

import mpmath

__all__ = [
    "LaurentPoly",
    "NotDivisible",
    "Evaluation",
    "eval_at",
    "exact_div",
    "divmod_poly",
    "substitute_power",
    "derivative",
    "fold",
]

RINGS = ("Z", "Q")


class NotDivisible(ArithmeticError):
    """Raised by :func:`exact_div` when the divisor does not divide.

    The nonzero remainder is kept on ``remainder`` so callers can show it.
    """

    def __init__(self, remainder: "LaurentPoly"):
        super().__init__(f"not divisible; remainder has {len(remainder)} terms")
        self.remainder = remainder


def _coerce(c, ring):
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, Integral):
        return int(c)
    if isinstance(c, Rational):
        c = Fraction(c)
        if c.denominator == 1:
            return c.numerator
        if ring == "Z":
            raise ValueError(f"non-integer coefficient {c} in integer ring")
        return c
    if isinstance(c, str):
        return _coerce(Fraction(c), ring)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


def _join(r1, r2):
    return "Q" if "Q" in (r1, r2) else "Z"


class LaurentPoly:
    __slots__ = ("_terms", "_ring", "_hash")

    def __init__(self, terms: Mapping[int, object] | None = None, ring: str = "Z"):
        if ring not in RINGS:
            raise ValueError(f"unknown ring {ring!r}")
        clean = {}
        for e, c in (terms or {}).items():
            c = _coerce(c, ring)
            if c:
                clean[int(e)] = c
        self._terms = clean
        self._ring = ring
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, ring: str) -> "LaurentPoly":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p._terms = terms
        p._ring = ring
        p._hash = None
        return p

    @classmethod
    def monomial(cls, exponent: int, coeff=1, ring: str = "Z") -> "LaurentPoly":
        return cls({exponent: coeff}, ring)

    @classmethod
    def constant(cls, c, ring: str = "Z") -> "LaurentPoly":
        return cls({0: c}, ring)

    @classmethod
    def zero(cls, ring: str = "Z") -> "LaurentPoly":
        return cls._raw({}, ring)

    @classmethod
    def one(cls, ring: str = "Z") -> "LaurentPoly":
        return cls._raw({0: 1}, ring)

    @property
    def ring(self) -> str:
        return self._ring

    @property
    def terms(self) -> Mapping[int, int | Fraction]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        if not self._terms:
            raise ValueError("degree of the zero polynomial")
        return max(self._terms)

    def valuation(self) -> int:
        if not self._terms:
            raise ValueError("valuation of the zero polynomial")
        return min(self._terms)

    def coeff(self, e: int):
        return self._terms.get(e, 0)

    def items(self) -> list[tuple[int, int | Fraction]]:
        """Terms sorted by exponent."""
        return sorted(self._terms.items())

    def to_ring(self, ring: str) -> "LaurentPoly":
        if ring == self._ring:
            return self
        return LaurentPoly(self._terms, ring)

    # arithmetic -----------------------------------------------------------

    def _other(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (Integral, Rational)) and not isinstance(other, bool):
            ring = "Z" if Fraction(other).denominator == 1 else "Q"
            return LaurentPoly({0: other}, ring)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out, _join(self._ring, other._ring))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()}, self._ring)

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, object] = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = ea + eb
                out[e] = get(e, 0) + ca * cb
        out = {e: c for e, c in out.items() if c}
        return LaurentPoly._raw(out, _join(self._ring, other._ring))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("negative power of a non-monomial")
            (e, c), = self._terms.items()
            inv = Fraction(1, 1) / c
            ring = self._ring if abs(c) == 1 else "Q"
            return LaurentPoly({-e: inv}, ring) ** (-n)
        result = LaurentPoly.one(self._ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "LaurentPoly":
        """Multiply by a rational scalar; the ring widens to Q when needed."""
        c = Fraction(c)
        ring = self._ring if c.denominator == 1 else "Q"
        return LaurentPoly({e: v * c for e, v in self._terms.items()}, ring)

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``x**k``."""
        return LaurentPoly._raw({e + k: c for e, c in self._terms.items()}, self._ring)

    def __eq__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        if not self._terms:
            return "LaurentPoly(0)"
        parts = []
        for e, c in self.items():
            parts.append(f"{c}*x^{e}" if e else f"{c}")
        return "LaurentPoly(" + " + ".join(parts) + f", ring={self._ring!r})"

    def __call__(self, z):
        """Evaluate at ``z`` using the precision of ``z``'s mpmath context."""
        return _horner(self, z)

    # serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "ring": self._ring,
            "terms": {str(e): str(c) for e, c in self.items()},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "LaurentPoly":
        ring = obj.get("ring", "Z")
        terms = obj.get("terms", {})
        if not isinstance(terms, Mapping):
            raise ValueError("'terms' must be an object")
        parsed = {}
        for e, c in terms.items():
            try:
                exp = int(e)
            except ValueError:
                raise ValueError(f"bad exponent {e!r}") from None
            if not isinstance(c, str):
                raise ValueError(f"coefficient for exponent {e} must be a decimal string")
            parsed[exp] = Fraction(c)
        return cls(parsed, ring)


class Evaluation(NamedTuple):
    value: mpmath.mpc
    error_bound: mpmath.mpf
    guard_bits: int


def _to_mp(ctx, c):
    if isinstance(c, Fraction):
        return ctx.mpf(c.numerator) / c.denominator
    return ctx.mpf(c)


def _horner(p: LaurentPoly, z):
    ctx = getattr(z, "context", mpmath.mp)
    z = ctx.mpmathify(z)
    if not p._terms:
        return ctx.mpc(0)
    pos = sorted((e for e in p._terms if e >= 0), reverse=True)
    neg = sorted((-e for e in p._terms if e < 0), reverse=True)

    def run(exps, point, sign):
        acc = ctx.mpc(0)
        prev = None
        for e in exps:
            if prev is not None:
                acc *= point ** (prev - e)
            acc += _to_mp(ctx, p._terms[sign * e])
            prev = e
        return acc * point ** prev

    total = ctx.mpc(0)
    if pos:
        total += run(pos, z, 1)
    if neg:
        total += run(neg, 1 / z, -1)
    return total


def eval_at(p: LaurentPoly, z, prec: int = 53) -> Evaluation:
    """Evaluate ``p`` at the complex point ``z`` with ``prec`` working bits.

    The bound is ``2**(g - prec) * sum(|c| |z|**e)`` where ``g`` grows with
    the log of the number of terms and the largest exponent gap.
    """
    if z == 0:
        raise ZeroDivisionError("evaluation point must be nonzero")
    ctx = mpmath.MPContext()
    ctx.prec = prec
    zz = ctx.mpc(z)
    value = _horner(p, zz)
    r = abs(zz)
    mass = ctx.fsum(abs(_to_mp(ctx, c)) * r ** e for e, c in p._terms.items())
    span = max((abs(e) for e in p._terms), default=0)
    guard = 4 + math.ceil(math.log2(len(p._terms) + 1)) + math.ceil(math.log2(span + 2))
    bound = mass * ctx.ldexp(1, guard - prec)
    return Evaluation(value, bound, guard)


def divmod_poly(p: LaurentPoly, d: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Sparse long division after shifting both operands to ordinary polynomials.

    Returns ``(quotient, remainder)`` with ``p = d * quotient + remainder``
    (remainder shifted back by ``x**val(p)``). In ring Z the quotient stays
    integral: division stops at the first leading coefficient that does
    not divide.
    """
    if not d:
        raise ZeroDivisionError("division by the zero polynomial")
    ring = _join(p.ring, d.ring)
    if not p:
        return LaurentPoly.zero(ring), LaurentPoly.zero(ring)
    vp, vd = p.valuation(), d.valuation()
    rem = {e - vp: c for e, c in p._terms.items()}
    div = sorted(((e - vd, c) for e, c in d._terms.items()), reverse=True)
    dd, lead = div[0]
    quot = {}
    integral = ring == "Z"
    while rem:
        top = max(rem)
        if top < dd:
            break
        c = rem[top]
        if integral:
            if c % lead:
                break
            f = c // lead
        else:
            f = Fraction(c) / lead
            if f.denominator == 1:
                f = f.numerator
        shift = top - dd
        quot[shift] = f
        for e, dc in div:
            k = e + shift
            s = rem.get(k, 0) - f * dc
            if s:
                rem[k] = s
            else:
                rem.pop(k, None)
    q = LaurentPoly({e + vp - vd: c for e, c in quot.items()}, ring)
    r = LaurentPoly({e + vp: c for e, c in rem.items()}, ring)
    return q, r


def exact_div(p: LaurentPoly, d: LaurentPoly) -> LaurentPoly:
    """Return ``q`` with ``p == d * q`` or raise :class:`NotDivisible`."""
    q, r = divmod_poly(p, d)
    if r:
        raise NotDivisible(r)
    return q


def substitute_power(p: LaurentPoly, k: int) -> LaurentPoly:
    """Replace the variable by its ``k``-th power."""
    if k == 0:
        raise ValueError("substitution power must be nonzero")
    return LaurentPoly._raw({e * k: c for e, c in p._terms.items()}, p.ring)


def derivative(p: LaurentPoly) -> LaurentPoly:
    return LaurentPoly._raw({e - 1: e * c for e, c in p._terms.items() if e}, p.ring)


def fold(p: LaurentPoly, period: int) -> LaurentPoly:
    """Reduce exponents modulo ``period`` (exact when ``x**period == 1``)."""
    if period <= 0:
        raise ValueError("period must be positive")
    out: dict[int, object] = {}
    for e, c in p._terms.items():
        r = e % period
        out[r] = out.get(r, 0) + c
    return LaurentPoly(out, p.ring)


def poly_sum(polys: Iterable[LaurentPoly], ring: str = "Z") -> LaurentPoly:
    out: dict[int, object] = {}
    for p in polys:
        ring = _join(ring, p.ring)
        for e, c in p._terms.items():
            out[e] = out.get(e, 0) + c
    return LaurentPoly(out, ring)
