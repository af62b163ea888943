"""Building blocks of the Habiro expansion at ``q**(1/4) = exp(pi i / 2N)``.

Numeric blocks live on a :class:`RootContext`, which owns a private mpmath
context at a fixed precision together with sine/cosine tables. Every
brace value is read from the tables after reducing the index modulo ``2N``,
so zeros at the root (``{0}``, ``{N}``, ...) are exact zeros.

Exact counterparts (``exact_*``) return :class:`LaurentPoly` objects in the
variable ``x`` (``v = x**4``, ``q = x**8``).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import mpmath

from .laurent import LaurentPoly

__all__ = [
    "RootContext",
    "BlockValue",
    "DRowEntry",
    "brace",
    "qint",
    "A",
    "S",
    "S_prime",
    "primed_product_A",
    "block_eval",
    "t_exponent",
    "t_power",
    "D_eval",
    "D_row",
    "E_value",
    "F_value",
    "log_E",
    "exact_brace",
    "exact_qint",
    "exact_A",
    "exact_S",
    "exact_S_prime",
    "exact_block",
    "D_grid_csv",
    "split_row",
]


class RootContext:
    """Evaluation environment for a fixed color ``N`` and precision.

    Attributes are read-only after construction. ``m`` is only used as a
    default for the cable-dependent blocks.
    """

    def __init__(self, N: int, prec: int = 192, m: int = 0):
        if N < 1:
            raise ValueError("N must be a positive integer")
        if prec < 16:
            raise ValueError("precision too small")
        self.N = N
        self.prec = prec
        self.m = m
        mp = mpmath.MPContext()
        mp.prec = prec
        self.mp = mp
        angles = [mp.mpf(k) / N for k in range(N + 1)]
        sin_table = [mp.sinpi(a) for a in angles]
        cos_table = [mp.cospi(a) for a in angles]
        sin_table[0] = sin_table[N] = mp.zero
        cos_table[0] = mp.one
        cos_table[N] = -mp.one
        self.sin_table = tuple(sin_table)
        self.cos_table = tuple(cos_table)
        self.x0 = mp.expjpi(mp.mpf(1) / (4 * N))
        self._root_cache: dict[int, mpmath.mpc] = {}

    def __repr__(self):
        return f"RootContext(N={self.N}, prec={self.prec}, m={self.m})"

    def sin(self, j: int):
        """``sin(j*pi/N)`` for any integer ``j``."""
        N = self.N
        r = j % (2 * N)
        if r <= N:
            return self.sin_table[r]
        return -self.sin_table[r - N]

    def cos(self, j: int):
        """``cos(j*pi/N)`` for any integer ``j``."""
        N = self.N
        r = j % (2 * N)
        if r <= N:
            return self.cos_table[r]
        return self.cos_table[2 * N - r]

    def x_power(self, e: int):
        """``x0**e`` with the exponent reduced modulo ``8N``."""
        r = e % (8 * self.N)
        val = self._root_cache.get(r)
        if val is None:
            val = self.mp.expjpi(self.mp.mpf(r) / (4 * self.N))
            self._root_cache[r] = val
        return val

    @property
    def v(self):
        return self.x_power(4)

    @cached_property
    def _two_sin_prefix(self) -> tuple:
        """``P[n] = prod_{r=1}^{n} 2 sin(r pi / N)`` for ``0 <= n <= N``."""
        out = [self.mp.one]
        for r in range(1, self.N + 1):
            out.append(out[-1] * 2 * self.sin_table[r])
        return tuple(out)

    @cached_property
    def _log_two_sin_prefix(self) -> tuple:
        mp = self.mp
        out = [mp.zero]
        for r in range(1, self.N):
            out.append(out[-1] + mp.log(2 * self.sin_table[r]))
        return tuple(out)


@dataclass(frozen=True)
class BlockValue:
    value: mpmath.mpc
    magnitude_hint: mpmath.mpf


# -- numeric blocks ----------------------------------------------------------


def brace(ctx: RootContext, j: int):
    """``{j} = v**j - v**-j = 2i sin(j pi / N)`` at the root."""
    return ctx.mp.mpc(0, 2 * ctx.sin(j))


def qint(ctx: RootContext, j: int):
    """Quantum integer ``[j] = {j}/{1}``; real at the root."""
    if ctx.N == 1:
        # {1} vanishes at N=1; [j] -> j * (-1)**(j-1) by continuity
        return ctx.mp.mpc((-1) ** (j - 1) * j)
    return ctx.mp.mpc(ctx.sin(j) / ctx.sin(1))


def _A_real(ctx: RootContext, j: int, k: int):
    return -4 * ctx.sin(j - k) * ctx.sin(j + k)


def A(ctx: RootContext, j: int, k: int):
    """``A(j,k) = {j-k}{j+k}``; real at the root."""
    return ctx.mp.mpc(_A_real(ctx, j, k))


def S(ctx: RootContext, k: int, l: int):
    """``prod_{k <= j <= l} {j}``; the empty product is 1."""
    out = ctx.mp.mpc(1)
    for j in range(k, l + 1):
        out *= brace(ctx, j)
    return out


def S_prime(ctx: RootContext, k: int, l: int):
    """Like :func:`S` but skipping ``j`` in ``{0, N}``."""
    out = ctx.mp.mpc(1)
    for j in range(k, l + 1):
        if j == 0 or j == ctx.N:
            continue
        out *= brace(ctx, j)
    return out


def primed_product_A(ctx: RootContext, j: int, l: int):
    """``sum_{i=1}^{l} prod_{k != i} A(j,k)``, straight from the definition."""
    mp = ctx.mp
    factors = [_A_real(ctx, j, k) for k in range(1, l + 1)]
    total = mp.zero
    for i in range(l):
        p = mp.one
        for k, a in enumerate(factors):
            if k != i:
                p *= a
        total += p
    return mp.mpc(total)


_BLOCK_KINDS = {
    "brace": brace,
    "bracket": qint,
    "qint": qint,
    "A": A,
    "S": S,
    "Sprime": S_prime,
    "primed_product_A": primed_product_A,
}


def block_eval(ctx: RootContext, kind: str, *indices: int) -> BlockValue:
    try:
        fn = _BLOCK_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown block kind {kind!r}") from None
    value = fn(ctx, *indices)
    return BlockValue(value, abs(value))


def t_exponent(N: int, j: int) -> int:
    """Exponent of ``x`` in ``t_{j,N} = i**(N-1-j) q**((N+j)**2/8)`` with ``i = x**(2N)``."""
    return 2 * N * (N - 1 - j) + (N + j) ** 2


def t_power(ctx: RootContext, j: int, m: int):
    """``t_{j,N}**m`` at the root."""
    return ctx.x_power(m * t_exponent(ctx.N, j))


# -- D(j,l) ------------------------------------------------------------------


@dataclass(frozen=True)
class DRowEntry:
    l: int
    re: mpmath.mpf
    im: mpmath.mpf
    magnitude_hint: mpmath.mpf


def D_row(ctx: RootContext, j: int, m: int, l_max: int | None = None) -> Iterator[DRowEntry]:
    """Yield ``D(j,l)`` for ``l = 0, 1, ...`` in O(1) work per step.

    ``P = prod_k A(j,k)`` and the primed product ``P'`` follow the product
    rule ``P'_l = A_l P'_{l-1} + P_{l-1}``, which needs no division and
    is exact at the zeros ``A(j,j) = 0`` and ``A(j,N-j) = 0``. The row
    stops once both vanish for good (two zero factors).
    """
    N = ctx.N
    if l_max is None:
        l_max = N - 1
    s_j = ctx.sin(j)
    c2 = 2 * ctx.cos(j)                  # v^j + v^-j
    brace_sq = -4 * s_j * s_j            # {j}^2
    im_coef = m * j * s_j                # (mj/2) {j} / i
    P = ctx.mp.one
    Pp = ctx.mp.zero
    zeros = 0
    for l in range(0, l_max + 1):
        if l:
            a = _A_real(ctx, j, l)
            if not a:
                zeros += 1
            Pp = a * Pp + P
            P = a * P
        inner_b = 2 * brace_sq * Pp
        re = c2 * (P + inner_b)
        im = im_coef * P
        hint = max(abs(c2 * P), abs(c2 * inner_b), abs(im))
        yield DRowEntry(l, re, im, hint)
        if zeros >= 2:
            return


def _d_direct(ctx, j, l, m):
    """``(v^j + v^-j)(prod A + 2{j}^2 prod' A) + (mj/2){j} prod A`` term by term."""
    mp = ctx.mp
    P = mp.one
    for k in range(1, l + 1):
        P *= _A_real(ctx, j, k)
    Pp = primed_product_A(ctx, j, l).real
    bj = brace(ctx, j)
    first = 2 * ctx.cos(j) * P
    second = 2 * ctx.cos(j) * 2 * (bj * bj).real * Pp
    third = mp.mpf(m * j) / 2 * bj * P
    value = first + second + third
    return BlockValue(mp.mpc(value), max(abs(first), abs(second), abs(third)))


def _d1(ctx, j, l, m):
    N = ctx.N
    mp = ctx.mp
    if not l < min(j, N - j):
        return BlockValue(mp.mpc(0), mp.zero)
    # in this range {j} and every A(j,k) are nonzero
    vsum = mp.mpc(2 * ctx.cos(j))
    inv_sum = mp.fsum(1 / A(ctx, j, k) for k in range(1, l + 1))
    first = mp.mpf(m * j) / 2
    second = vsum / brace(ctx, j)
    third = 2 * brace(ctx, 2 * j) * inv_sum
    s = S(ctx, j - l, j + l)
    value = (first + second + third) * s
    hint = max(abs(first * s), abs(second * s), abs(third * s))
    return BlockValue(value, hint)


def _d2(ctx, j, l, m):
    N = ctx.N
    mp = ctx.mp
    if j <= l < N - j:
        value = 2 * S_prime(ctx, j - l, j + l)
    elif N - j <= l < j:
        value = -2 * S_prime(ctx, j - l, j + l)
    else:
        return BlockValue(mp.mpc(0), mp.zero)
    return BlockValue(value, abs(value))


def _b_part(ctx, j, l, m):
    e = None
    for e in D_row(ctx, j, 0, l_max=l):
        pass
    if e.l != l:
        return BlockValue(ctx.mp.mpc(0), ctx.mp.zero)
    return BlockValue(ctx.mp.mpc(e.re, 0), e.magnitude_hint)


_D_MODES = {"direct": _d_direct, "split_D1": _d1, "split_D2": _d2, "B_part": _b_part}


def D_eval(ctx: RootContext, j: int, l: int, m: int | None = None, mode: str = "direct") -> BlockValue:
    """Evaluate ``D(j,l)`` (or one of its parts) at the root.

    ``mode`` is one of ``direct``, ``split_D1``, ``split_D2``, ``B_part``.
    """
    N = ctx.N
    if not (0 <= j <= N - 1 and 0 <= l <= N - 1):
        raise ValueError(f"indices out of range: j={j}, l={l}, N={N}")
    if m is None:
        m = ctx.m
    try:
        fn = _D_MODES[mode]
    except KeyError:
        raise ValueError(f"unknown mode {mode!r}") from None
    return fn(ctx, j, l, m)


def split_row(ctx: RootContext, j: int, m: int) -> Iterator[tuple[int, object, object]]:
    """Yield ``(l, D1(j,l), D2(j,l))`` for ``l = 0..N-1`` from the piecewise closed forms.

    ``S``, ``S'`` and ``sum 1/A`` are carried along the row; this path never
    uses the primed-product recurrence of :func:`D_row`.
    """
    N = ctx.N
    mp = ctx.mp
    low, high = min(j, N - j), max(j, N - j)
    bj = brace(ctx, j)
    s_full = bj                      # S(j-l, j+l)
    s_prime = mp.mpc(1) if j in (0, N) else bj
    inv_sum = mp.zero
    head = None
    if 0 < low:
        head = mp.mpf(m * j) / 2 + mp.mpc(2 * ctx.cos(j)) / bj
    two_b2j = 2 * brace(ctx, 2 * j)
    zero = mp.mpc(0)
    for l in range(N):
        if l:
            for i in (j - l, j + l):
                b = brace(ctx, i)
                s_full *= b
                if i not in (0, N):
                    s_prime *= b
            if l < low:
                inv_sum += 1 / _A_real(ctx, j, l)
        d1 = (head + two_b2j * inv_sum) * s_full if l < low else zero
        if j <= l < N - j:
            d2 = 2 * s_prime
        elif N - j <= l < j:
            d2 = -2 * s_prime
        else:
            d2 = zero
        yield l, d1, d2


def D_grid_csv(ctx: RootContext, m: int | None = None) -> str:
    """Dump all ``D(j,l)`` as CSV: ``N,m,j,l,re,im,magnitude_hint``."""
    if m is None:
        m = ctx.m
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "m", "j", "l", "re", "im", "magnitude_hint"])
    mp = ctx.mp
    for j in range(ctx.N):
        row = {e.l: e for e in D_row(ctx, j, m)}
        for l in range(ctx.N):
            e = row.get(l)
            if e is None:
                vals = ("0.0", "0.0", "0.0")
            else:
                vals = (mp.nstr(e.re, 17), mp.nstr(e.im, 17), mp.nstr(e.magnitude_hint, 17))
            w.writerow([ctx.N, m, j, l, *vals])
    return buf.getvalue()


# -- E and F -----------------------------------------------------------------


def E_value(ctx: RootContext, j: int, l: int):
    """``E(j,l) = prod_{r<=l-j} 2sin(r pi/N) * prod_{r<=l+j} 2sin(r pi/N)``."""
    if not (0 <= j <= l <= ctx.N - j):
        raise ValueError(f"E({j},{l}) needs 0 <= j <= l <= N-j (N={ctx.N})")
    P = ctx._two_sin_prefix
    return P[l - j] * P[l + j]


def F_value(ctx: RootContext, j: int, l: int):
    """``F(j,l) = prod_{r<=l+j} 2sin(r pi/N) / prod_{r<=j-l-1} 2sin(r pi/N)``."""
    if not (0 < l < j and 2 * j < ctx.N):
        raise ValueError(f"F({j},{l}) needs 0 < l < j < N/2 (N={ctx.N})")
    P = ctx._two_sin_prefix
    return P[l + j] / P[j - l - 1]


def log_E(ctx: RootContext, j: int, l: int):
    """``log E(j,l)`` from running log sums; requires ``l + j < N``."""
    if not (0 <= j <= l and l + j < ctx.N):
        raise ValueError(f"log E({j},{l}) needs 0 <= j <= l and l+j < N (N={ctx.N})")
    L = ctx._log_two_sin_prefix
    return L[l - j] + L[l + j]


# -- exact blocks --------------------------------------------------------------


def exact_brace(j: int) -> LaurentPoly:
    """``{j} = x**(4j) - x**(-4j)``."""
    if j == 0:
        return LaurentPoly.zero()
    return LaurentPoly({4 * j: 1, -4 * j: -1})


def exact_qint(j: int) -> LaurentPoly:
    """``[j] = sum_{k=0}^{|j|-1} v**(|j|-1-2k)``, signed for negative ``j``."""
    n = abs(j)
    sign = 1 if j >= 0 else -1
    return LaurentPoly({4 * (n - 1 - 2 * k): sign for k in range(n)})


def exact_A(j: int, k: int) -> LaurentPoly:
    """``A(j,k) = q**j + q**-j - q**k - q**-k`` in ``x``."""
    return exact_brace(j - k) * exact_brace(j + k)


def exact_S(k: int, l: int) -> LaurentPoly:
    out = LaurentPoly.one()
    for j in range(k, l + 1):
        out = out * exact_brace(j)
    return out


def exact_S_prime(N: int, k: int, l: int) -> LaurentPoly:
    out = LaurentPoly.one()
    for j in range(k, l + 1):
        if j in (0, N):
            continue
        out = out * exact_brace(j)
    return out


def _exact_primed_A(j: int, l: int) -> LaurentPoly:
    factors = [exact_A(j, k) for k in range(1, l + 1)]
    P = LaurentPoly.one()
    Pp = LaurentPoly.zero()
    for a in factors:
        Pp = a * Pp + P
        P = a * P
    return Pp


def exact_block(N: int, kind: str, *indices: int) -> LaurentPoly:
    """Exact version of :func:`block_eval` (``N`` only matters for ``Sprime``)."""
    if kind == "brace":
        return exact_brace(*indices)
    if kind in ("bracket", "qint"):
        return exact_qint(*indices)
    if kind == "A":
        return exact_A(*indices)
    if kind == "S":
        return exact_S(*indices)
    if kind == "Sprime":
        return exact_S_prime(N, *indices)
    if kind == "primed_product_A":
        return _exact_primed_A(*indices)
    if kind == "t":
        j, m = indices
        return LaurentPoly.monomial(m * t_exponent(N, j))
    raise ValueError(f"unknown block kind {kind!r}")
