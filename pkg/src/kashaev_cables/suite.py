"""Verification suite, growth sweeps and report serialization.

Every check produces a :class:`Check` carrying the mathematical statement it
tests (``anchor``), the parameters it ran over, a status (``pass``, ``fail``
or ``unresolved``) and a one-line detail string. Details only contain
quantities computed at fixed precision, so reports are byte-identical from
run to run.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import mpmath

from . import asymptotics as asy
from .blocks import (
    D_eval,
    D_row,
    E_value,
    RootContext,
    S,
    S_prime,
    brace,
    log_E,
    split_row,
    t_power,
)
from .cable import (
    closed_form_applies,
    even_m_closed_form,
    in_S_m,
    kashaev_cable,
    kashaev_cable_oracle,
)
from .jones import builtin_knot, cable_jones, figure_eight, kashaev_knot, load_knot_file, trefoil
from .laurent import LaurentPoly, NotDivisible, exact_div
from .result import CableInvariantResult, fmt

__all__ = [
    "RunConfig",
    "Check",
    "SuiteReport",
    "CHECKS",
    "check_names",
    "compute_cable",
    "d1_partial_ratio",
    "run_verification_suite",
    "GrowthRow",
    "GrowthDataset",
    "growth_sweep",
    "emit_report",
    "env_prec",
    "GROWTH_COLUMNS",
]

PREC_ENV = "KASHAEV_CABLES_PREC"
GROWTH_COLUMNS = (
    "N", "re", "im", "log_abs", "rate", "predicted_log_abs",
    "residual", "parity_factor_abs", "in_S_m", "prec_used",
)
VOLUME = "2.029883212819307250042405108549040571883378615"


def env_prec() -> int | None:
    """Default initial precision from the environment, if set."""
    raw = os.environ.get(PREC_ENV)
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{PREC_ENV} must be an integer number of bits, got {raw!r}") from None


@dataclass
class RunConfig:
    """Parameters shared by ``verify`` and ``growth``.

    ``prec_initial=None`` means the per-N default ``max(192, 6N)``.
    """

    prec_initial: int | None = None
    prec_cap_multiplier: int = 16
    alpha: float = asy.DEFAULT_ALPHA
    knot: str = "fig8"
    m_list: tuple = (-4, -1, 0, 1, 2, 3, 4, 6, 8)
    N_range: tuple = (3, 101, 2)
    parity: str = "auto"
    format: str = "json"
    lemma_N_max: int = 30
    block_N_max: int = 40
    oracle_N_max: int = 24
    limit_N_sample: tuple = (2, 3, 5, 8, 13, 21, 34, 47, 60)
    vanishing_N_max: int = 60
    closed_form_N_max: int = 40
    cabling_exact_N_max: int = 8
    cabling_numeric_N_max: int = 40
    convergence_N: tuple = (101, 201, 401)
    seed: int = 20240611
    only: tuple = ()

    def __post_init__(self):
        if self.prec_initial is not None and self.prec_initial < 64:
            raise ValueError("prec_initial must be at least 64 bits")
        if self.prec_cap_multiplier < 1:
            raise ValueError("prec_cap_multiplier must be >= 1")
        if not 0.5 < self.alpha < 2 / 3:
            raise ValueError("alpha must lie in (1/2, 2/3)")
        if self.parity not in ("auto", "odd", "even", "all"):
            raise ValueError(f"unknown parity filter {self.parity!r}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")
        a, b, step = self.N_range
        if a < 1 or step < 1 or b < a:
            raise ValueError("N range must be a:b:step with 1 <= a <= b and step >= 1")
        self.m_list = tuple(self.m_list)
        self.only = tuple(self.only)

    def to_json(self) -> dict:
        out = asdict(self)
        for k, v in out.items():
            if isinstance(v, tuple):
                out[k] = list(v)
        return out


@dataclass
class Check:
    name: str
    anchor: str
    params: dict
    status: str
    detail: str
    candidates: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "paper_anchor": self.anchor,
            "params": self.params,
            "status": self.status,
            "detail": self.detail,
        }
        if self.candidates:
            out["candidates"] = self.candidates
        return out


@dataclass
class SuiteReport:
    checks: list
    config: dict

    @property
    def totals(self) -> dict:
        out = {"pass": 0, "fail": 0, "unresolved": 0}
        for c in self.checks:
            out[c.status] += 1
        out["total"] = len(self.checks)
        return out

    @property
    def exit_code(self) -> int:
        t = self.totals
        if t["fail"]:
            return 1
        if t["unresolved"]:
            return 2
        return 0

    def to_json(self) -> dict:
        return {
            "checks": [c.to_json() for c in self.checks],
            "totals": self.totals,
            "config": self.config,
        }


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _knot(cfg: RunConfig):
    return load_knot_file(cfg.knot)


def _ms(cfg: RunConfig, wanted: Iterable[int]) -> list[int]:
    return [m for m in wanted if m in cfg.m_list]


def _cap(cfg: RunConfig, N: int):
    return cfg.prec_initial, cfg.prec_cap_multiplier


# -- exact congruences --------------------------------------------------------------


def _vbrace(j: int) -> LaurentPoly:
    if j == 0:
        return LaurentPoly.zero()
    return LaurentPoly({j: 1, -j: -1})


def _vqint(n: int) -> LaurentPoly:
    return LaurentPoly({n - 1 - 2 * i: 1 for i in range(n)})


def check_A_congruence(cfg: RunConfig) -> Check:
    """``A(N-j,k) - A(N+j,k) - 2[2j]{N}{N-1}`` divisible by ``{N}^2`` in ``Z[v^{+-1}]``."""
    bad = []
    count = 0
    for N in range(1, cfg.lemma_N_max + 1):
        bN = _vbrace(N)
        modulus = bN * bN
        tail = _vbrace(N) * _vbrace(N - 1) * 2
        for j in range(1, N + 1):
            t2 = _vqint(2 * j) * tail
            for k in range(1, N + 1):
                p = _vbrace(N - j - k) * _vbrace(N - j + k) - _vbrace(N + j - k) * _vbrace(N + j + k) - t2
                count += 1
                try:
                    exact_div(p, modulus)
                except NotDivisible:
                    bad.append((N, j, k))
    detail = f"{count} instances, {len(bad)} with nonzero remainder"
    if bad:
        detail += f"; first {bad[0]}"
    return Check("exact.A_congruence", "A(N-j,k) - A(N+j,k) = 2[2j]{N}{N-1} mod {N}^2 in Z[v^+-1]",
                 {"N_max": cfg.lemma_N_max}, _status(not bad), detail)


def check_brace_sum_identity(cfg: RunConfig) -> Check:
    """``{N-j} + {N+j} = {N}(v^j + v^-j)`` as polynomials."""
    bad = []
    count = 0
    for N in range(1, cfg.lemma_N_max + 1):
        for j in range(1, N + 1):
            count += 1
            rhs = _vbrace(N) * LaurentPoly({j: 1, -j: 1})
            if _vbrace(N - j) + _vbrace(N + j) - rhs:
                bad.append((N, j))
    return Check("exact.brace_sum_identity", "{N-j} + {N+j} = {N}(v^j + v^-j) in Z[v^+-1]",
                 {"N_max": cfg.lemma_N_max}, _status(not bad),
                 f"{count} instances, {len(bad)} nonzero")


def check_w_congruence(cfg: RunConfig) -> Check:
    """``(-w^-1)^(mj) - 1 - (mj/2)(w - w^-1)`` divisible by ``(w+1)^2`` over Q."""
    modulus = LaurentPoly({2: 1, 1: 2, 0: 1}, ring="Q")
    bad = []
    count = 0
    for m in range(-8, 9):
        for j in range(1, 13):
            e = m * j
            p = (LaurentPoly.monomial(-e, (-1) ** (e % 2), ring="Q")
                 - LaurentPoly.one("Q")
                 - LaurentPoly({1: 1, -1: -1}, ring="Q").scale(Fraction(e, 2)))
            count += 1
            try:
                exact_div(p, modulus)
            except NotDivisible:
                bad.append((m, j))
    return Check("exact.w_congruence",
                 "(-w^-1)^(mj) = 1 + (mj/2)(w - w^-1) mod (w+1)^2 in Q[w^+-1], w = v^N",
                 {"m": [-8, 8], "j": [1, 12]}, _status(not bad),
                 f"{count} instances, {len(bad)} with nonzero remainder")


# -- root-of-unity block identities -------------------------------------------------------


PREC_BLOCKS = 128


def _tol(ctx):
    return ctx.mp.ldexp(1, -(ctx.prec // 2))


def check_sign_laws(cfg: RunConfig) -> Check:
    # At the closing endpoints l = N-j (first range) and l = j (second) the
    # product has an odd number of factors and is purely imaginary, so the
    # real sign law is checked on the half-open ranges where it is used.
    worst = mpmath.mpf(0)
    count = 0
    endpoints_imaginary = True
    for N in range(2, cfg.block_N_max + 1):
        ctx = RootContext(N, PREC_BLOCKS)
        mp = ctx.mp
        for j in range(1, N):
            for l in range(N):
                if l == max(j, N - j):
                    s = S_prime(ctx, j - l, j + l)
                    endpoints_imaginary &= abs(s.real) <= abs(s) * _tol(ctx)
                if j <= l < N - j:
                    sign = (-1) ** j
                elif N - j <= l < j:
                    sign = (-1) ** (N - j)
                else:
                    sign = None
                if sign is not None:
                    s = S_prime(ctx, j - l, j + l)
                    dev = abs(s - sign * abs(s)) / abs(s)
                elif 0 < l < j < N / 2:
                    s = S(ctx, j - l, j + l)
                    dev = abs(s / abs(s) - mp.mpc(0, (-1) ** l))
                else:
                    continue
                count += 1
                worst = max(worst, dev)
    ok = worst <= mpmath.ldexp(1, -(PREC_BLOCKS // 2)) and endpoints_imaginary
    return Check("blocks.sign_laws",
                 "S'(j-l,j+l) has sign (-1)^j (j<=l<N-j) or (-1)^(N-j) (N-j<=l<j); "
                 "S(j-l,j+l) has phase i(-1)^l for 0<l<j<N/2",
                 {"N_max": cfg.block_N_max}, _status(ok),
                 f"{count} instances, worst deviation {fmt(worst, 4)}; "
                 f"closing endpoints purely imaginary: {endpoints_imaginary}")


def check_D_decomposition(cfg: RunConfig) -> Check:
    ms = (-8, -3, 0, 5, 8)
    worst = mpmath.mpf(0)
    count = 0
    for N in range(1, cfg.block_N_max + 1):
        ctx = RootContext(N, PREC_BLOCKS)
        for m in ms:
            for j in range(N):
                row = {e.l: e for e in D_row(ctx, j, m)}
                for l, d1, d2 in split_row(ctx, j, m):
                    e = row.get(l)
                    d = ctx.mp.mpc(e.re, e.im) if e else 0
                    hint = max(e.magnitude_hint if e else 0, abs(d1), abs(d2), 1)
                    worst = max(worst, abs(d - d1 - d2) / hint)
                    count += 1
    # a few entries through the single-value entry point
    ctx = RootContext(min(cfg.block_N_max, 9), PREC_BLOCKS)
    for j in range(ctx.N):
        for l in range(ctx.N):
            d = D_eval(ctx, j, l, 3).value
            d12 = D_eval(ctx, j, l, 3, "split_D1").value + D_eval(ctx, j, l, 3, "split_D2").value
            worst = max(worst, abs(d - d12) / max(abs(d), 1))
            count += 1
    ok = worst <= mpmath.ldexp(1, -(PREC_BLOCKS // 2))
    return Check("blocks.D_decomposition", "D(j,l) = D1(j,l) + D2(j,l) (piecewise closed forms)",
                 {"N_max": cfg.block_N_max, "m": list(ms)}, _status(ok),
                 f"{count} entries, worst relative deviation {fmt(worst, 4)}")


def _rows(ctx, m):
    out = []
    for j in range(ctx.N):
        row = [ctx.mp.mpc(0)] * ctx.N
        hint = [ctx.mp.zero] * ctx.N
        for e in D_row(ctx, j, m):
            row[e.l] = ctx.mp.mpc(e.re, e.im)
            hint[e.l] = e.magnitude_hint
        out.append((row, hint))
    return out


def check_pairing(cfg: RunConfig) -> list[Check]:
    ms = (-8, -1, 0, 1, 2, 5, 8)
    worst_d = mpmath.mpf(0)
    worst_b = mpmath.mpf(0)
    count = 0
    for N in range(2, cfg.block_N_max + 1):
        ctx = RootContext(N, PREC_BLOCKS)
        mp = ctx.mp
        for m in ms:
            rows = _rows(ctx, m)
            for j in range(1, N):
                s = brace(ctx, j)     # S(j-l, j+l) carried along l
                for l in range(N):
                    if l:
                        s *= brace(ctx, j - l) * brace(ctx, j + l)
                    (a, ha), (b, hb) = rows[N - j], rows[j]
                    scale = max(ha[l], hb[l], abs(s) * abs(m) * N, 1)
                    lhs = a[l] + b[l]
                    rhs = mp.mpf(m * N) / 2 * s
                    worst_d = max(worst_d, abs(lhs - rhs) / scale)
                    # B is the real part of D at the root
                    worst_b = max(worst_b, abs(a[l].real + b[l].real) / scale)
                    count += 1
    # B through the single-value entry point
    ctx = RootContext(min(cfg.block_N_max, 11), PREC_BLOCKS)
    for j in range(1, ctx.N):
        for l in range(ctx.N):
            b1 = D_eval(ctx, j, l, 0, "B_part")
            b2 = D_eval(ctx, ctx.N - j, l, 0, "B_part")
            worst_b = max(worst_b, abs(b1.value + b2.value) / max(b1.magnitude_hint, b2.magnitude_hint, 1))
    tol = mpmath.ldexp(1, -(PREC_BLOCKS // 2))
    params = {"N_max": cfg.block_N_max, "m": list(ms)}
    return [
        Check("blocks.pairing_identity", "D(N-j,l) + D(j,l) = (mN/2) S(j-l,j+l)", params,
              _status(worst_d <= tol), f"{count} entries, worst relative deviation {fmt(worst_d, 4)}"),
        Check("blocks.B_antisymmetry", "B(N-j,l) + B(j,l) = 0", params,
              _status(worst_b <= tol), f"{count} entries, worst relative deviation {fmt(worst_b, 4)}"),
    ]


def check_t_monomial(cfg: RunConfig) -> Check:
    worst = mpmath.mpf(0)
    count = 0
    for N in range(1, cfg.block_N_max + 1):
        ctx = RootContext(N, PREC_BLOCKS)
        mp = ctx.mp
        for j in range(-N + 1, N):
            # t_j = i^(N-1-j) q^((N+j)^2/8) from exp calls, not the x0 table
            t = mp.mpc(0, 1) ** ((N - 1 - j) % 4) * mp.expjpi(mp.mpf((N + j) ** 2) / (4 * N))
            rhs = mp.expjpi(mp.mpf(3 * N - 2) / 4) * mp.expjpi(mp.mpf(j * j) / (4 * N))
            worst = max(worst, abs(t - rhs), abs(t_power(ctx, j, 1) - rhs))
            count += 1
    ok = worst <= mpmath.ldexp(1, -(PREC_BLOCKS // 2))
    return Check("blocks.t_monomial", "t_j = delta^(3N-2) q^(j^2/8), delta = exp(pi i/4)",
                 {"N_max": cfg.block_N_max}, _status(ok),
                 f"{count} instances, worst deviation {fmt(worst, 4)}")


def check_brace_reflection(cfg: RunConfig) -> Check:
    worst = mpmath.mpf(0)
    for N in range(1, cfg.block_N_max + 1):
        ctx = RootContext(N, PREC_BLOCKS)
        for j in range(-2 * N, 2 * N + 1):
            worst = max(worst, abs(brace(ctx, N + j) + brace(ctx, j)), abs(brace(ctx, N - j) - brace(ctx, j)))
        worst = max(worst, abs(ctx.v ** N + 1), abs(ctx.x0 ** (8 * N) - 1))
    ok = worst <= mpmath.ldexp(1, -(PREC_BLOCKS // 2))
    return Check("blocks.brace_reflection", "{N+j} = -{j}, {N-j} = {j}, v^N = -1 at the root",
                 {"N_max": cfg.block_N_max}, _status(ok), f"worst deviation {fmt(worst, 4)}")


def check_sine_product(cfg: RunConfig) -> Check:
    worst = mpmath.mpf(0)
    for N in range(1, cfg.block_N_max + 1):
        ctx = RootContext(N, PREC_BLOCKS)
        mp = ctx.mp
        prod = mp.one
        for k in range(1, N):
            prod *= 2 * mp.sinpi(mp.mpf(k) / N)
        worst = max(worst, abs(prod - N) / N, abs(E_value(ctx, 0, N - 1) - N * N) / (N * N))
        for k in range(1, N):
            worst = max(worst, abs(brace(ctx, N - k) * brace(ctx, N + k) - 4 * ctx.sin(k) ** 2))
    ok = worst <= mpmath.ldexp(1, -(PREC_BLOCKS // 2))
    return Check("blocks.sine_product",
                 "prod_{k<N} 2 sin(k pi/N) = N, E(0,N-1) = N^2, A(N,k) = 4 sin^2(k pi/N)",
                 {"N_max": cfg.block_N_max}, _status(ok), f"worst relative deviation {fmt(worst, 4)}")


# -- invariants --------------------------------------------------------------------------------


def check_knot_values(cfg: RunConfig) -> Check:
    K = figure_eight()
    expected = {1: 1, 2: 5, 3: 13}
    worst = mpmath.mpf(0)
    for N, val in expected.items():
        r = kashaev_knot(K, N, prec=128)
        worst = max(worst, abs(r.value - val) / val)
    ok = worst <= mpmath.ldexp(1, -60)
    return Check("knot.kashaev_values", "<4_1>_1 = 1, <4_1>_2 = 5, <4_1>_3 = 13", {"N": [1, 2, 3]},
                 _status(ok), f"worst relative deviation {fmt(worst, 4)}")


def check_method_equivalence(cfg: RunConfig) -> Check:
    K = _knot(cfg)
    ms = list(cfg.m_list)
    bad = []
    for m in ms:
        for N in range(1, cfg.cabling_exact_N_max + 1):
            if cable_jones(K, m, N, method="mu_form") != cable_jones(K, m, N, method="t_form"):
                bad.append((m, N))
    rng = random.Random(cfg.seed)
    thetas = [rng.uniform(0, 2 * math.pi) for _ in range(5)]
    worst = mpmath.mpf(0)
    prec = 160
    mp = mpmath.MPContext()
    mp.prec = prec
    points = [mp.expj(mp.mpf(t)) for t in thetas]
    for m in ms:
        for N in range(1, cfg.cabling_numeric_N_max + 1):
            for x in points:
                a = cable_jones(K, m, N, x, method="mu_form", prec=prec)
                b = cable_jones(K, m, N, x, method="t_form", prec=prec)
                worst = max(worst, abs(a - b) / max(abs(a), abs(b), 1))
    ok = not bad and worst <= mpmath.ldexp(1, -60)
    return Check("cable.method_equivalence",
                 "sum_l mu_l^m J(2l-1) = a_N^m sum_j t_j^m J(N+j)",
                 {"m": ms, "exact_N_max": cfg.cabling_exact_N_max,
                  "numeric_N_max": cfg.cabling_numeric_N_max, "seed": cfg.seed},
                 _status(ok),
                 f"{len(bad)} exact mismatches; numeric worst relative deviation {fmt(worst, 4)} at 5 points")


def _compare(res: CableInvariantResult, ref, tol_bits: int):
    """Relative agreement, or absolute against ``max_term`` when both vanish."""
    if res.status != "ok":
        return "unresolved", None
    if res.is_zero:
        dev = abs(ref) / max(res.max_term, 1)
        return ("pass" if dev <= mpmath.ldexp(1, -tol_bits) else "fail"), dev
    dev = abs(res.value - ref) / abs(ref) if ref else mpmath.inf
    return ("pass" if dev <= mpmath.ldexp(1, -tol_bits) else "fail"), dev


def _combine(statuses: list[str]) -> str:
    if "fail" in statuses:
        return "fail"
    if "unresolved" in statuses:
        return "unresolved"
    return "pass"


def _oracle_check(cfg, name, anchor, flavor, ms, Ns, tol_bits) -> Check:
    K = _knot(cfg)
    statuses = []
    worst = mpmath.mpf(0)
    first_bad = None
    candidates = []
    for m in ms:
        for N in Ns:
            prec, cap = _cap(cfg, N)
            res = kashaev_cable(K, m, N, prec, cap)
            ref = kashaev_cable_oracle(K, m, N, prec=128, flavor=flavor)
            st, dev = _compare(res, ref.value, tol_bits)
            statuses.append(st)
            if dev is not None:
                worst = max(worst, dev)
            if st != "pass" and first_bad is None:
                first_bad = (m, N, st)
            if st == "unresolved":
                candidates.append({"m": m, "N": N, "values": res.to_json().get("candidates", [])})
    detail = f"{len(statuses)} cases, worst deviation {fmt(worst, 4)}"
    if first_bad:
        detail += f"; first non-pass (m, N, status) = {first_bad}"
    return Check(name, anchor, {"m": ms, "N": list(Ns), "tolerance_bits": tol_bits},
                 _combine(statuses), detail, candidates)


def check_oracle_lhopital(cfg: RunConfig) -> Check:
    return _oracle_check(cfg, "cable.oracle_lhopital",
                         "paired double sum = lim J_{K^(m,2)}(N)/[N] by L'Hopital on exact polynomials",
                         "lhopital_exact", _ms(cfg, (0, 1, -1, 2, 3, 4, 8)),
                         range(1, cfg.oracle_N_max + 1), 40)


def check_oracle_limit(cfg: RunConfig) -> Check:
    return _oracle_check(cfg, "cable.oracle_numeric_limit",
                         "paired double sum = numeric limit of J_{K^(m,2)}(N)/[N] at the root",
                         "numeric_limit", _ms(cfg, (0, 1, -1, 2, 3, 4, 8)),
                         cfg.limit_N_sample, 30)


def check_vanishing(cfg: RunConfig) -> Check:
    """``<K^(0,2)>_N = 0`` for even ``N`` with cancellation ratio below ``1e-30``."""
    statuses = []
    worst_ratio = mpmath.mpf(0)
    candidates = []
    knots = [figure_eight(), trefoil()]
    for K in knots:
        for N in range(2, cfg.vanishing_N_max + 1, 2):
            prec, cap = _cap(cfg, N)
            res = kashaev_cable(K, 0, N, prec, cap)
            if res.status != "ok":
                statuses.append("unresolved")
                candidates.append({"knot": K.name, "N": N, "values": res.to_json().get("candidates", [])})
                continue
            ratio = res.cancellation_ratio
            worst_ratio = max(worst_ratio, ratio)
            statuses.append(_status(res.is_zero and ratio < mpmath.mpf("1e-30")))
    return Check("cable.vanishing_m0_even_N", "<K^(0,2)>_N = 0 for every even N",
                 {"knots": [K.name for K in knots], "N_max": cfg.vanishing_N_max,
                  "prec_initial": cfg.prec_initial, "prec_cap_multiplier": cfg.prec_cap_multiplier},
                 _combine(statuses),
                 f"{len(statuses)} cases, worst cancellation ratio {fmt(worst_ratio, 4)}", candidates)


def check_closed_form(cfg: RunConfig) -> Check:
    K = _knot(cfg)
    ms = _ms(cfg, (-4, 0, 2, 4, 6, 8))
    statuses = []
    worst = mpmath.mpf(0)
    count = 0
    for m in ms:
        for N in range(1, cfg.closed_form_N_max + 1):
            if not closed_form_applies(m, N):
                continue
            count += 1
            prec, cap = _cap(cfg, N)
            res = kashaev_cable(K, m, N, prec, cap)
            ref = even_m_closed_form(K, m, N, prec=max(192, 6 * N))
            st, dev = _compare(res, ref, 40)
            statuses.append(st)
            if dev is not None:
                worst = max(worst, dev)
    return Check("cable.even_m_closed_form",
                 "<K^(m,2)>_N = q^(m/2){1}(mN/4) sum_{j<=N/2} J_{K_{m/2}}(2j-1) "
                 "for m = 0 mod 4, N even or m = N = 2 mod 4",
                 {"m": ms, "N_max": cfg.closed_form_N_max}, _combine(statuses),
                 f"{count} cases, worst deviation {fmt(worst, 4)}")


# -- asymptotic model -----------------------------------------------------------------------


def check_parity_classification(cfg: RunConfig) -> list[Check]:
    bad = []
    small = []
    for m in range(16):
        for N in range(1, 9):
            pf = asy.beta_gamma_classify(m, N)
            rule = ((m % 4 == 0 and N % 2 == 0) or (m % 4 == 2 and N % 4 == 2)
                    or (m % 8 == 4 and N % 2 == 1))
            if pf.is_zero != rule:
                bad.append((m, N))
            if not pf.is_zero and not asy.abs_squared_at_least(pf.abs_squared, 4):
                small.append((m, N))
            # S_m membership is the complement of the zero set
            if in_S_m(m, N) == pf.is_zero:
                bad.append((m, N, "S_m"))
    params = {"m_residues": 16, "N_residues": 8}
    return [
        Check("parity.classification",
              "beta + gamma + 2(-1)^(N-1) = 0 iff m = 0 mod 4 and N even, m = N = 2 mod 4, "
              "or m = 4 mod 8 and N odd",
              params, _status(not bad), f"{len(bad)} mismatches over all residues"),
        Check("parity.magnitude_dichotomy", "|beta + gamma + 2(-1)^(N-1)| is 0 or >= 2",
              params, _status(not small), f"{len(small)} nonzero factors below 2 (exact test)"),
    ]


def check_lobachevsky(cfg: RunConfig) -> list[Check]:
    worst_q = 0.0
    worst_cl = 0.0
    for k in range(100):
        x = mpmath.pi * k / 99
        a = asy.lobachevsky(x, 80)
        worst_q = max(worst_q, float(abs(a - asy.lobachevsky_quad(x, 80))))
        worst_cl = max(worst_cl, float(abs(a - mpmath.clsin(2, 2 * x) / 2)))
    worst_sym = 0.0
    for k in range(1, 40):
        x = mpmath.mpf(k) / 7
        worst_sym = max(worst_sym,
                        float(abs(asy.lobachevsky(-x) + asy.lobachevsky(x))),
                        float(abs(asy.lobachevsky(x + mpmath.pi) - asy.lobachevsky(x))))
    L6 = asy.lobachevsky(mpmath.pi / 6, 80)
    vol = asy.fig8_volume(80)
    with mpmath.workdps(40):
        ok_val = abs(L6 - mpmath.mpf("0.5074708032048")) < 1e-12 and abs(vol - mpmath.mpf(VOLUME)) < 1e-20
    return [
        Check("lobachevsky.series_vs_quadrature",
              "L(x) = -int_0^x log|2 sin u| du, series vs quadrature (and Clausen Cl_2(2x)/2)",
              {"points": 100, "interval": "[0, pi]"},
              _status(worst_q <= 1e-12 and worst_cl <= 1e-12),
              f"quadrature {worst_q:.3e}, Clausen {worst_cl:.3e}"),
        Check("lobachevsky.symmetry", "L(-x) = -L(x), L(x + pi) = L(x)", {"points": 39},
              _status(worst_sym <= 1e-12), f"worst deviation {worst_sym:.3e}"),
        Check("lobachevsky.values", "L(pi/6) = 0.5074708..., 4 L(pi/6) = 2.0298832... (volume of 4_1)",
              {}, _status(bool(ok_val)), f"L(pi/6) = {fmt(L6, 16)}, 4L(pi/6) = {fmt(vol, 16)}"),
    ]


def check_potential(cfg: RunConfig) -> list[Check]:
    res = asy.find_max_f(prec=64)
    x, y = res.point
    dx = abs(float(x))
    dy = abs(float(y - 5 * mpmath.pi / 6))
    two_L = 2 * asy.lobachevsky(mpmath.pi / 6, 64)
    dv = abs(float(res.value - two_L))
    dh = abs(float(res.hessian_scale) - math.sqrt(3))
    return [
        Check("potential.maximum", "f(x,y) = -L(y-x) - L(x+y) peaks at (0, 5pi/6) with value 2L(pi/6)",
              {"grid": 60}, _status(max(dx, dy) <= 1e-8 and dv <= 1e-12),
              f"argmax offset ({dx:.2e}, {dy:.2e}), value offset {dv:.2e}"),
        Check("potential.taylor_sqrt3", "f(h, 5pi/6 + k) = f(0, 5pi/6) - sqrt3 (h^2 + k^2) + ...",
              {"fd_step": 1e-3}, _status(dh <= 1e-4),
              f"quadratic coefficient {float(res.hessian_scale):.9f}, offset {dh:.2e}"),
    ]


def check_gaussian(cfg: RunConfig) -> list[Check]:
    worst = 0.0
    mags = []
    for m in range(-16, 17):
        a = asy.gaussian_constant(m, 64)
        b = asy.gaussian_constant(m, 64, method="quadrature")
        worst = max(worst, float(abs(a - b)))
        if m >= 0:
            mags.append(abs(a))
    c0 = asy.gaussian_constant(0, 64)
    ok0 = abs(c0 - 1 / (2 * mpmath.sqrt(3))) <= 1e-15
    decreasing = all(mags[i + 1] < mags[i] for i in range(len(mags) - 1)) and min(mags) > 0
    return [
        Check("gaussian.closed_vs_quadrature",
              "C = (1/2) int exp(pi i m x^2/4 - pi sqrt3 (x^2+y^2)) dx dy, C(0) = 1/(2 sqrt3)",
              {"m": [-16, 16]}, _status(worst <= 1e-8 and bool(ok0)),
              f"worst deviation {worst:.3e}, C(0) = {fmt(c0, 15)}"),
        Check("gaussian.nonzero_decreasing", "C(m) != 0 and |C(m)| decreasing in |m|",
              {"m": [0, 16]}, _status(decreasing), f"|C(16)| = {fmt(mags[-1], 8)}"),
    ]


def check_log_bounds(cfg: RunConfig) -> list[Check]:
    Ns = (50, 100, 200, 500, 1000, 2000)
    c_fit = 0.0
    e_fit = 0.0
    L6 = float(asy.lobachevsky(math.pi / 6))
    for N in Ns:
        ctx = RootContext(N, 53)
        L = ctx._log_two_sin_prefix
        dev = max(abs(-float(L[n]) - N / math.pi * float(asy.lobachevsky(n * math.pi / N)))
                  for n in range(1, N))
        c_fit = max(c_fit, dev / math.log(N))
        le = float(log_E(ctx, 0, round(5 * N / 6))) - 2 * N / math.pi * L6
        e_fit = max(e_fit, abs(le) / math.log(N))
    return [
        Check("asymptotics.s_n_bound", "s_n = (N/pi) L(n pi/N) + O(log N)", {"N": list(Ns)},
              _status(c_fit <= 1.0), f"fitted c = {c_fit:.4f} (bound 1)"),
        Check("asymptotics.log_E_bound", "log E(0, 5N/6) = (2N/pi) L(pi/6) + O(log N)", {"N": list(Ns)},
              _status(e_fit <= 2.0), f"fitted c = {e_fit:.4f} (bound 2)"),
    ]


def d1_partial_ratio(m: int, N: int, prec: int | None = None):
    """``sum_{j<N/2} sum_{l<j} |D1(j,l)|`` relative to ``E(0, l*) N``."""
    from .jones import cable_indices

    ctx = RootContext(N, prec or max(192, 6 * N))
    total = ctx.mp.zero
    for j in cable_indices(N, positive=True):
        if 2 * j >= N:
            continue
        for l, d1, _ in split_row(ctx, j, m):
            if l >= j:
                break
            total += abs(d1)
    return total / (E_value(ctx, 0, round(5 * N / 6)) * N)


def check_d1_partial(cfg: RunConfig) -> Check:
    ms = _ms(cfg, (0, 1, 2))
    Ns = (51, 101, 201)
    worst = 0.0
    ok = True
    for m in ms:
        for N in Ns:
            r = float(d1_partial_ratio(m, N))
            bound = N ** (3 * cfg.alpha - 2)
            ok = ok and r <= bound
            worst = max(worst, r / bound)
    return Check("asymptotics.d1_partial_sum",
                 "D1 part over l < j is O(N^(3 alpha - 1) E(0,5N/6)), i.e. <= N^(3 alpha - 2) of E(0,l*) N",
                 {"m": ms, "N": list(Ns), "alpha": cfg.alpha}, _status(ok),
                 f"largest ratio / bound = {worst:.4f}")


CONVERGENCE_FAMILIES = ((0, "odd"), (1, "all"), (2, "0 mod 4"))


def _family_N(parity: str, N: int) -> int:
    if parity == "odd":
        return N if N % 2 else N + 1
    if parity == "0 mod 4":
        return 4 * round(N / 4)
    return N


def check_convergence(cfg: RunConfig) -> Check:
    K = figure_eight()
    vol = float(mpmath.mpf(VOLUME))
    statuses = []
    lines = []
    lo, mid, hi = cfg.convergence_N
    for m, parity in CONVERGENCE_FAMILIES:
        if m not in cfg.m_list:
            continue
        rates = {}
        ratios = {}
        for N0 in (lo, mid, hi):
            N = _family_N(parity, N0)
            prec, cap = _cap(cfg, N)
            res = kashaev_cable(K, m, N, prec, cap)
            if res.status != "ok" or res.is_zero:
                statuses.append("unresolved" if res.status != "ok" else "fail")
                break
            pred = asy.predict_leading(m, N, alpha=cfg.alpha)
            rates[N0] = 2 * math.pi * float(mpmath.log(abs(res.value))) / N
            ratios[N0] = float(abs(res.value) / abs(pred.predicted_value))
        else:
            ok = (abs(rates[hi] - vol) <= 0.25
                  and abs(rates[hi] - vol) < abs(rates[lo] - vol)
                  and 0.7 <= ratios[mid] <= 1.4
                  and abs(ratios[hi] - 1) < abs(ratios[mid] - 1))
            statuses.append(_status(ok))
            lines.append(f"m={m}: rate {rates[lo]:.4f}/{rates[hi]:.4f}, ratio {ratios[mid]:.4f}/{ratios[hi]:.4f}")
    return Check("asymptotics.convergence",
                 "2 pi log|<E^(m,2)>_N| / N -> 4 L(pi/6) for N in S_m, with the leading-term magnitude",
                 {"families": [list(f) for f in CONVERGENCE_FAMILIES if f[0] in cfg.m_list],
                  "N": list(cfg.convergence_N)},
                 _combine(statuses), "; ".join(lines))


def check_knot_rate(cfg: RunConfig) -> Check:
    K = figure_eight()
    vol = float(mpmath.mpf(VOLUME))
    rates = {}
    for N in (201, 401):
        r = kashaev_knot(K, N, prec=max(192, 6 * N))
        rates[N] = 2 * math.pi * float(mpmath.log(abs(r.value))) / N
    ok = abs(rates[201] - vol) <= 0.25 and abs(rates[401] - vol) < abs(rates[201] - vol)
    return Check("asymptotics.knot_rate", "2 pi log <4_1>_N / N -> 4 L(pi/6)", {"N": [201, 401]},
                 _status(ok), f"rates {rates[201]:.4f}, {rates[401]:.4f}")


# -- runner ----------------------------------------------------------------------------


def _one(fn):
    return lambda cfg: [fn(cfg)]


# (name, needs a nonempty m list, producer); producers may return several checks
CHECKS: tuple[tuple[str, bool, Callable[[RunConfig], list[Check]]], ...] = (
    ("exact.A_congruence", False, _one(check_A_congruence)),
    ("exact.brace_sum_identity", False, _one(check_brace_sum_identity)),
    ("exact.w_congruence", False, _one(check_w_congruence)),
    ("blocks.sign_laws", False, _one(check_sign_laws)),
    ("blocks.D_decomposition", False, _one(check_D_decomposition)),
    ("blocks.pairing_identity", False, check_pairing),
    ("blocks.t_monomial", False, _one(check_t_monomial)),
    ("blocks.brace_reflection", False, _one(check_brace_reflection)),
    ("blocks.sine_product", False, _one(check_sine_product)),
    ("knot.kashaev_values", False, _one(check_knot_values)),
    ("cable.method_equivalence", True, _one(check_method_equivalence)),
    ("cable.oracle_lhopital", True, _one(check_oracle_lhopital)),
    ("cable.oracle_numeric_limit", True, _one(check_oracle_limit)),
    ("cable.vanishing_m0_even_N", True, _one(check_vanishing)),
    ("cable.even_m_closed_form", True, _one(check_closed_form)),
    ("parity.classification", False, check_parity_classification),
    ("lobachevsky.series_vs_quadrature", False, check_lobachevsky),
    ("potential.maximum", False, check_potential),
    ("gaussian.closed_vs_quadrature", False, check_gaussian),
    ("asymptotics.s_n_bound", False, check_log_bounds),
    ("asymptotics.d1_partial_sum", True, _one(check_d1_partial)),
    ("asymptotics.convergence", True, _one(check_convergence)),
    ("asymptotics.knot_rate", False, _one(check_knot_rate)),
)


def _selected(cfg: RunConfig, produced: list[Check]) -> list[Check]:
    if not cfg.only:
        return produced
    return [c for c in produced if c.name in cfg.only]


def check_names() -> list[str]:
    """All check names, including those emitted by multi-check producers."""
    extra = {
        "blocks.pairing_identity": ["blocks.B_antisymmetry"],
        "parity.classification": ["parity.magnitude_dichotomy"],
        "lobachevsky.series_vs_quadrature": ["lobachevsky.symmetry", "lobachevsky.values"],
        "potential.maximum": ["potential.taylor_sqrt3"],
        "gaussian.closed_vs_quadrature": ["gaussian.nonzero_decreasing"],
        "asymptotics.s_n_bound": ["asymptotics.log_E_bound"],
    }
    out = []
    for name, _, _ in CHECKS:
        out.append(name)
        out.extend(extra.get(name, []))
    return out


def run_verification_suite(config: RunConfig | None = None) -> SuiteReport:
    """Run every check (or those named in ``config.only``) in a fixed order."""
    cfg = config or RunConfig()
    known = set(check_names())
    unknown = [n for n in cfg.only if n not in known]
    if unknown:
        raise ValueError(f"unknown check name(s): {', '.join(unknown)}")
    checks: list[Check] = []
    for name, needs_m, producer in CHECKS:
        if needs_m and not cfg.m_list:
            continue
        if cfg.only and not _produces_any(name, cfg.only):
            continue
        checks.extend(_selected(cfg, producer(cfg)))
    return SuiteReport(checks, cfg.to_json())


def _produces_any(head: str, wanted: tuple) -> bool:
    names = check_names()
    i = names.index(head)
    group = [head]
    for n in names[i + 1:]:
        if any(n == h for h, _, _ in CHECKS):
            break
        group.append(n)
    return any(n in wanted for n in group)


# -- growth sweeps -----------------------------------------------------------------------------


@dataclass
class GrowthRow:
    N: int
    result: CableInvariantResult
    log_abs: str
    rate: str
    predicted_log_abs: str
    residual: str
    parity_factor_abs: str
    in_S_m: bool

    def csv_fields(self) -> list[str]:
        r = self.result
        return [str(self.N), fmt(r.value.real), fmt(r.value.imag), self.log_abs, self.rate,
                self.predicted_log_abs, self.residual, self.parity_factor_abs,
                "true" if self.in_S_m else "false", str(r.prec_used)]

    def to_json(self) -> dict:
        out = dict(zip(GROWTH_COLUMNS, self.csv_fields()))
        out["N"] = self.N
        out["prec_used"] = self.result.prec_used
        out["in_S_m"] = self.in_S_m
        out["is_zero"] = self.result.is_zero
        out["status"] = self.result.status
        out["assertion"] = "limit" if self.in_S_m else "none"
        if self.result.candidates:
            out["candidates"] = [[fmt(c.real), fmt(c.imag)] for c in self.result.candidates]
        return out


@dataclass
class GrowthDataset:
    m: int
    rows: list
    notes: list

    def to_json(self) -> dict:
        return {"m": self.m, "rows": [r.to_json() for r in self.rows], "notes": self.notes}


def _parity_ok(parity: str, m: int, N: int) -> bool:
    if parity == "auto":
        return in_S_m(m, N)
    if parity == "odd":
        return N % 2 == 1
    if parity == "even":
        return N % 2 == 0
    return True


def growth_sweep(config: RunConfig, m: int | None = None, method: str = "paired") -> list[GrowthDataset]:
    """Exact values, rates and leading-term residuals over ``config.N_range``.

    One dataset per ``m`` (``config.m_list`` unless ``m`` is given), rows in
    increasing ``N``.
    """
    K = _knot(config)
    ms = [m] if m is not None else list(config.m_list)
    a, b, step = config.N_range
    out = []
    for mm in ms:
        notes = []
        Ns = [N for N in range(a, b + 1, step) if _parity_ok(config.parity, mm, N)]
        if not Ns and config.parity == "auto" and mm % 8 == 4:
            notes.append(f"S_m is empty for m = {mm} (m = 4 mod 8): the leading term vanishes for every N")
        elif not Ns:
            notes.append("no N in range passes the parity filter")
        if any(not in_S_m(mm, N) for N in Ns):
            notes.append("rows with in_S_m = false carry no limit assertion")
        rows = []
        for N in Ns:
            res = compute_cable(K, mm, N, config, method)
            pf = asy.beta_gamma_classify(mm, N)
            pf_abs = fmt(mpmath.sqrt(pf.abs_squared[0] + pf.abs_squared[1] * mpmath.sqrt(2)), 12)
            pred = ""
            if N >= 6:
                p = asy.predict_leading(mm, N, alpha=config.alpha)
                if p.predicted_value:
                    pred = fmt(p.predicted_log_abs, 15)
            if res.is_zero or not res.value:
                log_abs = rate = "-inf"
                resid = ""
            else:
                la = mpmath.log(abs(res.value))
                log_abs = fmt(la, 15)
                rate = fmt(2 * mpmath.pi * la / N, 15)
                resid = fmt(la - mpmath.mpf(pred), 15) if pred else ""
            rows.append(GrowthRow(N, res, log_abs, rate, pred, resid, pf_abs, in_S_m(mm, N)))
        out.append(GrowthDataset(mm, rows, notes))
    return out


def compute_cable(K, m: int, N: int, config: RunConfig, method: str = "paired") -> CableInvariantResult:
    if method == "paired":
        return kashaev_cable(K, m, N, config.prec_initial, config.prec_cap_multiplier)
    if method == "oracle":
        return kashaev_cable_oracle(K, m, N, prec=config.prec_initial or 128)
    if method == "closed-form":
        prec = config.prec_initial or max(192, 6 * N)
        value = even_m_closed_form(K, m, N, prec=prec)
        return CableInvariantResult(mpmath.mpc(value), mpmath.ldexp(abs(value) + 1, 16 - prec),
                                    abs(value), "closed-form", prec, m, N, is_zero=not value,
                                    in_S_m=in_S_m(m, N))
    raise ValueError(f"unknown method {method!r}")


# -- serialization ----------------------------------------------------------------------


def emit_report(report, format: str = "json") -> str:
    """Serialize a :class:`SuiteReport` or a list of :class:`GrowthDataset`."""
    if format not in ("csv", "json"):
        raise ValueError(f"unknown format {format!r}")
    if isinstance(report, SuiteReport):
        if format == "json":
            return json.dumps(report.to_json(), indent=2) + "\n"
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "paper_anchor", "status", "detail"])
        for c in report.checks:
            w.writerow([c.name, c.anchor, c.status, c.detail])
        return buf.getvalue()
    datasets = list(report)
    if format == "json":
        return json.dumps([d.to_json() for d in datasets], indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    multi = len(datasets) > 1
    w.writerow((["m"] if multi else []) + list(GROWTH_COLUMNS))
    for d in datasets:
        for row in d.rows:
            w.writerow(([str(d.m)] if multi else []) + row.csv_fields())
    return buf.getvalue()
