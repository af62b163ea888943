"""Colored Jones polynomials from Habiro coefficients, and (m,2)-cables.

Exact results are :class:`LaurentPoly` objects in ``x = q**(1/8)``. Numeric
results take the evaluation point as ``x`` directly, which fixes the branch
of every fractional power of ``q``; :func:`x_from_q` picks a branch when
only ``q`` is known.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterator, Sequence

import mpmath

from .blocks import RootContext, exact_qint
from .laurent import LaurentPoly, fold, poly_sum, substitute_power
from .result import CableInvariantResult

__all__ = [
    "HabiroKnot",
    "figure_eight",
    "unknot",
    "trefoil",
    "builtin_knot",
    "load_knot_file",
    "knot_to_json",
    "frame_shift",
    "habiro_jones",
    "cable_jones",
    "cable_indices",
    "kashaev_knot",
    "x_from_q",
]


@dataclass(frozen=True, eq=False)
class HabiroKnot:
    """A knot given by its Habiro coefficients ``C_K(l; q)`` and a framing.

    ``coeffs`` is either a finite sequence of q-polynomials or a callable
    ``l -> LaurentPoly``. ``max_l`` caps the available index (inclusive);
    it defaults to ``len(coeffs) - 1`` for sequences.
    """

    name: str
    coeffs: Sequence[LaurentPoly] | Callable[[int], LaurentPoly]
    framing: Fraction = Fraction(0)
    max_l: int | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        fr = Fraction(self.framing)
        if (2 * fr).denominator != 1:
            raise ValueError(f"framing must be an integer or half-integer, got {fr}")
        object.__setattr__(self, "framing", fr)
        if not callable(self.coeffs):
            seq = tuple(self.coeffs)
            for i, c in enumerate(seq):
                if not isinstance(c, LaurentPoly) or c.ring != "Z":
                    raise ValueError(f"coefficient {i} must be an integer Laurent polynomial")
            object.__setattr__(self, "coeffs", seq)
            cap = len(seq) - 1
            if self.max_l is None or self.max_l > cap:
                object.__setattr__(self, "max_l", cap)

    @property
    def half_integer_framing(self) -> bool:
        return self.framing.denominator == 2

    def coeff(self, l: int) -> LaurentPoly:
        """``C_K(l; q)`` as a polynomial in ``q``."""
        if l < 0 or (self.max_l is not None and l > self.max_l):
            raise IndexError(f"coefficient index out of range: {l} (knot {self.name!r})")
        if callable(self.coeffs):
            c = self.coeffs(l)
            if c.ring != "Z":
                raise ValueError(f"coefficient {l} of {self.name!r} is not integral")
            return c
        return self.coeffs[l]

    def habiro_sum(self, n: int) -> LaurentPoly:
        """``sum_{l<n} C_K(l;q) prod_{k<=l} A(n,k)`` in the q-variable, unframed."""
        key = ("sum", n)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        acc = LaurentPoly.zero()
        for l in range(n - 1, -1, -1):
            # Horner: C_l + A(n, l+1) * acc
            if l + 1 <= n - 1:
                a = LaurentPoly({n: 1, -n: 1, l + 1: -1, -(l + 1): -1})
                acc = a * acc
            acc = acc + self.coeff(l)
        self._cache[key] = acc
        return acc


def _const_one(l: int) -> LaurentPoly:
    return LaurentPoly.one()


def _trefoil_coeff(l: int) -> LaurentPoly:
    return LaurentPoly({l * (l + 3) // 2: (-1) ** l})


def figure_eight() -> HabiroKnot:
    return HabiroKnot("fig8", _const_one)


def unknot() -> HabiroKnot:
    return HabiroKnot("unknot", _unknot_coeffs)


def trefoil() -> HabiroKnot:
    """A trefoil with ``C(l;q) = (-1)**l q**(l(l+3)/2)``; its Jones polynomial is ``q + q**3 - q**4``."""
    return HabiroKnot("trefoil", _trefoil_coeff)


_BUILTINS = {"fig8": figure_eight, "figure-eight": figure_eight, "4_1": figure_eight,
             "unknot": unknot, "trefoil": trefoil, "3_1": trefoil}


def builtin_knot(name: str) -> HabiroKnot:
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown built-in knot {name!r}") from None


def _unknot_coeffs(l: int) -> LaurentPoly:
    return LaurentPoly.one() if l == 0 else LaurentPoly.zero()


def load_knot_file(path: str | Path) -> HabiroKnot:
    """Read a knot file or resolve a built-in name.

    Format: ``{"name": str, "framing": "p" or "p/2", "coeffs": [poly, ...]}``
    where each poly is ``{"ring": "Z", "terms": {"<exp>": "<coef>"}}`` in q.
    """
    p = Path(path)
    if not p.exists() and str(path) in _BUILTINS:
        return builtin_knot(str(path))
    text = p.read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{p}: parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise ValueError(f"{p}: top level must be an object")
    for key in ("name", "coeffs"):
        if key not in obj:
            raise ValueError(f"{p}: missing key {key!r}")
    framing = obj.get("framing", "0")
    try:
        fr = Fraction(str(framing))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"{p}: bad framing {framing!r}") from None
    if (2 * fr).denominator != 1:
        raise ValueError(f"{p}: framing must have denominator 1 or 2, got {framing!r}")
    coeffs = []
    for i, c in enumerate(obj["coeffs"]):
        try:
            poly = LaurentPoly.from_json(c)
        except (ValueError, TypeError, ZeroDivisionError, AttributeError) as exc:
            raise ValueError(f"{p}: coeffs[{i}]: {exc}") from None
        if poly.ring != "Z" or any(isinstance(v, Fraction) for v in poly.terms.values()):
            raise ValueError(f"{p}: coeffs[{i}]: non-integer coefficient")
        coeffs.append(poly)
    return HabiroKnot(str(obj["name"]), coeffs, fr)


def knot_to_json(K: HabiroKnot, count: int | None = None) -> dict:
    if count is None:
        if K.max_l is None:
            raise ValueError("count required for a knot with unbounded coefficients")
        count = K.max_l + 1
    fr = K.framing
    return {
        "name": K.name,
        "framing": str(fr.numerator) if fr.denominator == 1 else f"{fr.numerator}/{fr.denominator}",
        "coeffs": [K.coeff(l).to_json() for l in range(count)],
    }


def frame_shift(K: HabiroKnot, p) -> HabiroKnot:
    """Same knot with framing increased by ``p`` (integer or half-integer)."""
    p = Fraction(p)
    if (2 * p).denominator != 1:
        raise ValueError("framing shift must be an integer or half-integer")
    return HabiroKnot(K.name, K.coeffs, K.framing + p, K.max_l, K._cache)


def framing_exponent(framing: Fraction, n: int) -> int:
    """Exponent of ``x`` in ``q**(p (n**2-1)/4)``."""
    e = 2 * framing * (n * n - 1)
    if e.denominator != 1:
        raise ValueError("framing exponent is not integral")
    return int(e)


def x_from_q(q, branch: int = 0, prec: int = 128):
    """``q**(1/8)``: principal root times ``exp(2 pi i branch/8)``."""
    ctx = mpmath.MPContext()
    ctx.prec = prec
    q = ctx.mpc(q)
    return ctx.root(q, 8) * ctx.expjpi(ctx.mpf(branch) / 4)


# -- colored Jones -----------------------------------------------------------


def _exact_jones(K: HabiroKnot, n: int) -> LaurentPoly:
    key = ("jones", n)
    hit = K._cache.get(key)
    if hit is None:
        hit = exact_qint(n) * substitute_power(K.habiro_sum(n), 8)
        K._cache[key] = hit
    return hit.shift(framing_exponent(K.framing, n))


def _numeric_qint(n: int, x):
    v = x ** 4
    den = v - 1 / v
    if abs(den) > x.context.ldexp(1, -8):
        return (v ** n - v ** -n) / den
    return exact_qint(n)(x)          # near v = +-1 the quotient form cancels badly


def _coeff_value(c: LaurentPoly, q):
    if not c:
        return 0
    if len(c) == 1 and c.valuation() == 0:
        return c.coeff(0)
    return c(q)


def _numeric_jones(K: HabiroKnot, n: int, x):
    ctx = x.context
    q = x ** 8
    qinv = 1 / q
    qn = q ** n + qinv ** n
    qk = q ** (n - 1)
    qk_inv = qinv ** (n - 1)
    acc = ctx.mpc(0)
    for l in range(n - 1, -1, -1):
        if l + 1 <= n - 1:
            acc = (qn - qk - qk_inv) * acc      # A(n, l+1)
            qk *= qinv
            qk_inv *= q
        acc += _coeff_value(K.coeff(l), q)
    return _numeric_qint(n, x) * acc


def _point(x, prec):
    ctx = getattr(x, "context", None)
    if isinstance(ctx, mpmath.MPContext) and ctx.prec >= prec and isinstance(x, ctx.mpc):
        return x
    ctx = mpmath.MPContext()
    ctx.prec = max(prec, getattr(getattr(x, "context", None), "prec", 0))
    return ctx.mpc(x)


def habiro_jones(K: HabiroKnot, n: int, x=None, prec: int = 128):
    """``J_K(n; q)`` with the functorial normalization (unknot gives ``[n]``).

    With ``x=None`` an exact x-polynomial is returned, otherwise the value at
    ``q**(1/8) = x``.
    """
    if n < 1:
        raise ValueError("color must be a positive integer")
    if x is None:
        return _exact_jones(K, n)
    x = _point(x, prec)
    key = ("value", n, x.real, x.imag, x.context.prec)
    hit = K._cache.get(key)
    if hit is None:
        hit = _numeric_jones(K, n, x)     # unframed; the cache is shared by frame shifts
        K._cache[key] = hit
    return hit * x ** framing_exponent(K.framing, n)


def cable_indices(N: int, positive: bool = False) -> Iterator[int]:
    """``j`` in ``[1-N, N-1]`` with ``N - j + 1`` even (only ``j >= 1`` if ``positive``).

    Both cabling formulas and the pairing sum iterate through this one helper.
    """
    lo = 1 if positive else 1 - N
    for j in range(lo, N):
        if (N - j + 1) % 2 == 0:
            yield j


def _t_sign(N: int, j: int) -> int:
    # i**(N-1-j) with N-1-j even on every index from cable_indices
    e = N - 1 - j
    assert e % 2 == 0
    return -1 if (e // 2) % 2 else 1


def _mu_exponent(N: int, l: int) -> int:
    return 4 * (1 - N * N) + 4 * l * (l - 1)


def cable_jones(K: HabiroKnot, m: int, N: int, x=None, method: str = "mu_form", prec: int = 128):
    """Colored Jones polynomial of the (m,2)-cable, both components colored ``N``.

    ``method="mu_form"`` sums ``mu_l**m J_K(2l-1)`` over the decomposition of
    ``V_N (x) V_N``; ``method="t_form"`` uses ``a_N**m sum_j t_{j,N}**m J_K(N+j)``.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    if method not in ("mu_form", "t_form"):
        raise ValueError(f"unknown method {method!r}")
    exact = x is None
    if not exact:
        x = _point(x, prec)
    terms = []
    if method == "mu_form":
        for l in range(1, N + 1):
            sign = (-1) ** ((N - l) * m % 2)
            e = m * _mu_exponent(N, l)
            terms.append((sign, e, 2 * l - 1))
    else:
        a_exp = m * (3 - 4 * N * N)
        for j in cable_indices(N):
            sign = _t_sign(N, j) ** (m % 2)
            e = a_exp + m * (N + j) ** 2
            terms.append((sign, e, N + j))
    if exact:
        return poly_sum(habiro_jones(K, n).shift(e) * sign for sign, e, n in terms)
    ctx = x.context
    return ctx.fsum(sign * x ** e * habiro_jones(K, n, x) for sign, e, n in terms)


# -- Kashaev invariant of the knot ---------------------------------------------


def coeff_at_root(K: HabiroKnot, l: int, ctx: RootContext):
    """``C_K(l; q)`` at ``q = x0**8`` (exponents folded modulo ``N``)."""
    c = fold(K.coeff(l), ctx.N)
    mp = ctx.mp
    return mp.fsum(mp.mpf(v) * ctx.x_power(8 * e) for e, v in c.items()) if c else mp.mpc(0)


def kashaev_knot(K: HabiroKnot, N: int, prec: int = 128) -> CableInvariantResult:
    """``<K>_N = J_K(N)/[N]`` at the root, as the Habiro sum (no division)."""
    ctx = RootContext(N, prec)
    mp = ctx.mp
    total = mp.mpc(0)
    prod = mp.one
    max_term = mp.zero
    for l in range(N):
        if l:
            prod *= 4 * ctx.sin(l) ** 2          # A(N,l) at the root
        term = coeff_at_root(K, l, ctx) * prod
        max_term = max(max_term, abs(term))
        total += term
    if K.framing:
        total *= ctx.x_power(framing_exponent(K.framing, N))
    bound = max_term * N * mp.ldexp(1, 8 - prec)
    return CableInvariantResult(total, bound, max_term, "habiro", prec, None, N)
