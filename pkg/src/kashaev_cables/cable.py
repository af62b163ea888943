"""Kashaev invariants of (m,2)-cables at ``q**(1/4) = exp(pi i / 2N)``.

The production path pairs the colors ``N+j`` and ``N-j`` so the division
by ``[N]`` disappears and the invariant becomes a double sum of
``t_j**m D(j,l)``. Two independent oracles resolve ``J/[N]`` directly: an
exact L'Hopital quotient of derivatives, and a Richardson-extrapolated
limit along the unit circle.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction

import mpmath

from .blocks import D_row, RootContext, exact_A, exact_qint, t_power
from .jones import (
    HabiroKnot,
    cable_jones,
    cable_indices,
    coeff_at_root,
    frame_shift,
    habiro_jones,
)
from .laurent import LaurentPoly, derivative, fold
from .result import CableInvariantResult

__all__ = [
    "ParityCase",
    "parity_case",
    "in_S_m",
    "default_prec",
    "kashaev_cable",
    "paired_sum_at",
    "kashaev_cable_oracle",
    "closed_form_applies",
    "even_m_closed_form",
    "pairing_lhs",
]

AGREEMENT_BITS = 48


class ParityCase(enum.Enum):
    ODD = "odd"
    ZERO_MOD_8 = "0 mod 8"
    TWO_MOD_4 = "2 mod 4"
    FOUR_MOD_8 = "4 mod 8"

    @property
    def description(self) -> str:
        return {
            ParityCase.ODD: "all positive integers",
            ParityCase.ZERO_MOD_8: "odd positive integers",
            ParityCase.TWO_MOD_4: "positive integers N with N != 2 mod 4",
            ParityCase.FOUR_MOD_8: "empty set",
        }[self]


def parity_case(m: int) -> ParityCase:
    if m % 2:
        return ParityCase.ODD
    if m % 8 == 0:
        return ParityCase.ZERO_MOD_8
    if m % 4 == 2:
        return ParityCase.TWO_MOD_4
    return ParityCase.FOUR_MOD_8


def in_S_m(m: int, N: int) -> bool:
    """Whether color ``N`` lies in the set where the volume-conjecture limit holds for ``m``."""
    case = parity_case(m)
    if case is ParityCase.ODD:
        return True
    if case is ParityCase.ZERO_MOD_8:
        return N % 2 == 1
    if case is ParityCase.TWO_MOD_4:
        return N % 4 != 2
    return False


def default_prec(N: int) -> int:
    return max(192, 6 * N)


# -- production path -----------------------------------------------------------


def paired_sum_at(K: HabiroKnot, m: int, N: int, prec: int):
    """One evaluation of the paired double sum at fixed precision.

    Returns ``(value, max_term, n_terms)``; ``max_term`` is the largest
    ``|C_K(l) t_j**m D(j,l)|`` seen. An integer framing ``p`` of ``K`` is
    absorbed as ``m -> m + 2p`` times ``x0**(8p(N**2-1))``.
    """
    p = K.framing
    if p.denominator != 1:
        raise ValueError("the paired sum needs an integer framing; use an oracle for half-integer framings")
    p = int(p)
    m_eff = m + 2 * p
    ctx = RootContext(N, prec, m_eff)
    mp = ctx.mp
    coeffs = [coeff_at_root(K, l, ctx) for l in range(N)]
    real_coeffs = all(c.imag == 0 for c in coeffs)
    abs_coeffs = [abs(c) for c in coeffs]
    max_term = mp.zero
    n_terms = 0
    total = mp.mpc(0)

    def row_sum(j):
        nonlocal max_term, n_terms
        re = mp.zero
        im = mp.zero
        acc = mp.mpc(0)
        for e in D_row(ctx, j, m_eff):
            c = coeffs[e.l]
            if not c:
                continue
            mag = abs_coeffs[e.l] * e.magnitude_hint
            if mag > max_term:
                max_term = mag
            n_terms += 1
            if real_coeffs:
                cr = c.real
                re += cr * e.re
                im += cr * e.im
            else:
                acc += c * mp.mpc(e.re, e.im)
        return acc + mp.mpc(re, im)

    for j in cable_indices(N, positive=True):
        total += t_power(ctx, j, m_eff) * row_sum(j)
    if N % 2:
        # (1 - (-1)**N)/4 = 1/2 for odd N, 0 for even N
        total += t_power(ctx, 0, m_eff) * row_sum(0) / 2
    total *= ctx.x_power(m_eff * (3 - 4 * N * N))      # a_N**m
    if p:
        total *= ctx.x_power(8 * p * (N * N - 1))
    return total, max_term, max(n_terms, 1)


def _zero_under(value, max_term, prec):
    return abs(value) <= max_term * mpmath.ldexp(1, -(prec // 2))


def kashaev_cable(
    K: HabiroKnot,
    m: int,
    N: int,
    prec: int | None = None,
    cap_multiplier: int = 16,
) -> CableInvariantResult:
    """``<K^(m,2)>_N`` from the paired double sum with adaptive precision.

    Starts at ``prec`` (default ``max(192, 6N)``), doubles until two
    consecutive values agree to 48 bits relative or both fall under the
    zero threshold, and gives up at ``cap_multiplier * prec``.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    start = prec or default_prec(N)
    cap = start * cap_multiplier
    p = start
    prev = paired_sum_at(K, m, N, p)
    prev_p = p
    while True:
        if 2 * p > cap:
            value, max_term, n_terms = prev
            return CableInvariantResult(
                value, mpmath.inf, max_term, "paired", prev_p, m, N,
                is_zero=False, status="unresolved", candidates=(value,), in_S_m=in_S_m(m, N),
            )
        p *= 2
        cur = paired_sum_at(K, m, N, p)
        v0, t0, _ = prev
        v1, t1, n_terms = cur
        zero0 = _zero_under(v0, t0, prev_p)
        zero1 = _zero_under(v1, t1, p)
        diff = abs(v1 - v0)
        floor = t1 * n_terms * mpmath.ldexp(1, 8 - p)
        if zero0 and zero1:
            return CableInvariantResult(
                v1, max(diff, floor), t1, "paired", p, m, N, is_zero=True, in_S_m=in_S_m(m, N)
            )
        if not zero1 and diff <= abs(v1) * mpmath.ldexp(1, -AGREEMENT_BITS):
            return CableInvariantResult(
                v1, max(diff, floor), t1, "paired", p, m, N, is_zero=False, in_S_m=in_S_m(m, N)
            )
        if 2 * p > cap:
            return CableInvariantResult(
                v1, diff, t1, "paired", p, m, N, status="unresolved",
                candidates=(v0, v1), in_S_m=in_S_m(m, N),
            )
        prev, prev_p = cur, p


# -- oracles ---------------------------------------------------------------------


def _eval_folded(p: LaurentPoly, ctx: RootContext):
    """Evaluate at ``x0`` after exact reduction of exponents modulo ``8N``."""
    mp = ctx.mp
    f = fold(p, 8 * ctx.N)
    total = mp.mpc(0)
    mass = mp.zero
    for e, c in f.items():
        c = mp.mpf(c)
        total += c * ctx.x_power(e)
        mass += abs(c)
    return total, mass


def _lhopital_prec(*polys: LaurentPoly, N: int, prec: int) -> int:
    bits = 0
    for p in polys:
        f = fold(p, 8 * N)
        if f:
            bits = max(bits, max(abs(int(c)).bit_length() for c in f.terms.values()))
    return prec + bits + 2 * math.ceil(math.log2(8 * N)) + 16


def _lhopital_quotient(P: LaurentPoly, Q: LaurentPoly, N: int, prec: int):
    """``lim P/Q`` at ``x0`` for exact x-polynomials; returns ``(value, scale)``."""
    dP, dQ = derivative(P), derivative(Q)
    wp = _lhopital_prec(P, Q, dP, dQ, N=N, prec=prec)
    ctx = RootContext(N, wp)
    mp = ctx.mp
    q0, q_mass = _eval_folded(Q, ctx)
    tol = mp.ldexp(1, -(prec // 2))
    if abs(q0) > tol * max(q_mass, 1):
        p0, p_mass = _eval_folded(P, ctx)
        return p0 / q0, p_mass / abs(q0)
    p0, p_mass = _eval_folded(P, ctx)
    if abs(p0) > tol * max(p_mass, 1):
        raise ArithmeticError("numerator does not vanish where the denominator does")
    dq0, dq_mass = _eval_folded(dQ, ctx)
    if abs(dq0) <= tol * max(dq_mass, 1):
        raise ArithmeticError("degenerate zero: derivative of the denominator vanishes")
    dp0, dp_mass = _eval_folded(dP, ctx)
    return dp0 / dq0, dp_mass / abs(dq0)


def _numeric_limit(K: HabiroKnot, m: int, N: int, prec: int, levels: int = 5, eps_exp: int = 20):
    wp = prec + 8 * N + 40 * levels + 64
    mp = mpmath.MPContext()
    mp.prec = wp
    table = []
    for k in range(levels):
        eps = mp.ldexp(1, -(eps_exp + k))
        x = mp.expjpi((1 + eps) / (4 * N))
        J = cable_jones(K, m, N, x, method="mu_form", prec=wp)
        Q = exact_qint(N)(x)
        row = [J / Q]
        for i in range(1, k + 1):
            f = 2 ** i
            row.append((f * row[i - 1] - table[k - 1][i - 1]) / (f - 1))
        table.append(row)
    best = table[-1][-1]
    err = abs(best - table[-2][-2]) if levels > 1 else mp.zero
    return best, err


def kashaev_cable_oracle(
    K: HabiroKnot, m: int, N: int, prec: int = 128, flavor: str = "lhopital_exact"
) -> CableInvariantResult:
    """Resolve ``J_{K^(m,2)}(N)/[N]`` at the root without the pairing argument."""
    if flavor == "lhopital_exact":
        P = cable_jones(K, m, N, method="t_form")
        Q = exact_qint(N)
        value, scale = _lhopital_quotient(P, Q, N, prec)
        bound = scale * mpmath.ldexp(1, 8 - prec)
        return CableInvariantResult(value, bound, scale, "oracle:lhopital_exact", prec, m, N,
                                    is_zero=abs(value) <= scale * mpmath.ldexp(1, -(prec // 2)),
                                    in_S_m=in_S_m(m, N))
    if flavor == "numeric_limit":
        value, err = _numeric_limit(K, m, N, prec)
        return CableInvariantResult(value, err, abs(value), "oracle:numeric_limit", prec, m, N,
                                    in_S_m=in_S_m(m, N))
    raise ValueError(f"unknown oracle flavor {flavor!r}")


def pairing_lhs(m: int, N: int, j: int, l: int, prec: int = 128):
    """``(t_j^m [N+j] prod A(N+j,k) + t_{-j}^m [N-j] prod A(N-j,k)) / [N]`` at the root.

    Resolved by L'Hopital on exact x-polynomials, independently of ``D``.
    The common unit ``i**((N-1-j) m)`` is factored out first so that what
    remains is a genuine polynomial in ``x``.
    """
    if not 1 <= j <= N - 1:
        raise ValueError("need 1 <= j <= N-1")

    def side(n):
        prod = exact_qint(n)
        for k in range(1, l + 1):
            prod = prod * exact_A(n, k)
        return prod

    sign = -1 if (j * m) % 2 else 1
    P = side(N + j).shift(m * (N + j) ** 2) + side(N - j).shift(m * (N - j) ** 2) * sign
    value, _ = _lhopital_quotient(P, exact_qint(N), N, prec)
    unit = mpmath.mpc(0, 1) ** (((N - 1 - j) * m) % 4)
    return value * unit


# -- closed form for even m ----------------------------------------------------------


def closed_form_applies(m: int, N: int) -> bool:
    return (m % 4 == 0 and N % 2 == 0) or (m % 4 == 2 and N % 4 == 2)


def even_m_closed_form(K: HabiroKnot, m: int, N: int, prec: int = 192):
    """``q^(m/2) {1} (mN/4) sum_{j=1}^{N/2} J_{K_{m/2}}(2j-1)`` at the root."""
    if not closed_form_applies(m, N):
        raise ValueError(f"closed form only holds for m = 0 mod 4, N even or m = N = 2 mod 4 (m={m}, N={N})")
    ctx = RootContext(N, prec, m)
    mp = ctx.mp
    if m == 0:
        return mp.mpc(0)
    Kf = frame_shift(K, Fraction(m, 2))
    total = mp.mpc(0)
    for j in range(1, N // 2 + 1):
        total += habiro_jones(Kf, 2 * j - 1, ctx.x0, prec=prec)
    brace1 = mp.mpc(0, 2 * ctx.sin(1))
    return ctx.x_power(4 * m) * brace1 * mp.mpf(m * N) / 4 * total
