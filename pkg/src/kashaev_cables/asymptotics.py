"""Leading-order asymptotics of the cable invariants of the figure-eight knot.

The Lobachevsky function is evaluated from the power series of the Clausen
function ``Cl_2(t) = 2 L(t/2)``,

    Cl_2(t) = t - t log|t| + sum_{k>=1} |B_2k| t**(2k+1) / (2k (2k+1)!),

after reducing ``x`` to ``[-pi/2, pi/2]`` with oddness and ``pi``-periodicity.
The series converges like ``(t/2pi)**(2k)`` on that interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import mpmath

from .blocks import RootContext, E_value
from .result import CableInvariantResult

__all__ = [
    "lobachevsky",
    "lobachevsky_quad",
    "f_potential",
    "find_max_f",
    "gaussian_constant",
    "beta_gamma_classify",
    "ParityFactor",
    "AsymptoticPrediction",
    "predict_leading",
    "GrowthRecord",
    "growth_rate",
    "fig8_volume",
    "s_n",
]

DEFAULT_ALPHA = 0.55


def _ctx(prec):
    mp = mpmath.MPContext()
    mp.prec = prec
    return mp


def lobachevsky(x, prec: int = 53, return_error: bool = False):
    """``L(x) = -int_0^x log|2 sin u| du`` (odd, pi-periodic).

    Summation stops once a term drops below ``2**(-prec-8)``; the geometric
    tail bound is returned alongside when ``return_error`` is set.
    """
    mp = _ctx(prec + 20)
    x = mp.mpf(x)
    pi = mp.pi
    # reduce to [-pi/2, pi/2]
    x = x - pi * mp.nint(x / pi)
    if x == 0:
        return (mp.zero, mp.zero) if return_error else mp.zero
    t = 2 * x
    at = abs(t)
    total = t - t * mp.log(at)
    r = (t / (2 * pi)) ** 2
    tol = mp.ldexp(1, -prec - 8)
    t2 = t * t
    power = t                          # t**(2k+1)
    fact = mp.one                      # (2k+1)!
    k = 0
    tail = mp.zero
    while True:
        k += 1
        power *= t2
        fact *= (2 * k) * (2 * k + 1)
        term = abs(mp.bernoulli(2 * k)) * power / (2 * k * fact)
        total += term
        if abs(term) < tol:
            # |B_2k| <= 2 zeta(2) (2k)!/(2pi)^(2k): later terms shrink by at least r
            tail = abs(term) * r / (1 - r)
            break
    value = total / 2
    if return_error:
        return +value, tail / 2 + mp.ldexp(abs(value), -prec)
    return +value


def lobachevsky_quad(x, prec: int = 53):
    """Direct quadrature of the defining integral (tanh-sinh, endpoint log singularities)."""
    mp = _ctx(prec + 10)
    x = mp.mpf(x)
    pi = mp.pi
    n = mp.floor(x / pi)
    r = x - n * pi
    # integral over a full period vanishes
    f = lambda u: mp.log(abs(2 * mp.sin(u)))
    if r == 0:
        return mp.zero
    return -mp.quad(f, [0, r])


def f_potential(x, y, prec: int = 53):
    """``f(x, y) = -L(y - x) - L(x + y)``."""
    return -lobachevsky(y - x, prec) - lobachevsky(x + y, prec)


class MaxResult(NamedTuple):
    point: tuple
    value: float
    hessian_scale: float


def find_max_f(prec: int = 53, grid: int = 60, fd_step: float = 1e-3) -> MaxResult:
    """Maximize ``f`` over ``0 <= x <= y``, ``x + y <= pi``.

    A coarse grid locates the peak, Newton steps on the gradient refine it,
    and central differences at ``fd_step`` estimate the quadratic
    coefficient (``-f_yy/2``).
    """
    mp = _ctx(prec + 20)
    pi = mp.pi
    best = None
    for a in range(grid + 1):
        for b in range(a, grid + 1):
            x = pi * a / grid
            y = pi * b / grid
            if x + y > pi or y - x <= 0 or y + x >= pi:
                continue
            val = f_potential(x, y, prec)
            if best is None or val > best[0]:
                best = (val, x, y)
    _, x, y = best
    # gradient: f_x = log|2 sin(x+y)| - log|2 sin(y-x)|, f_y = log|2 sin(x+y)| + log|2 sin(y-x)|
    for _ in range(60):
        sp = mp.sin(x + y)
        sm = mp.sin(y - x)
        gx = mp.log(abs(2 * sp)) - mp.log(abs(2 * sm))
        gy = mp.log(abs(2 * sp)) + mp.log(abs(2 * sm))
        cp = mp.cot(x + y)
        cm = mp.cot(y - x)
        hxx, hxy, hyy = cp + cm, cp - cm, cp + cm
        det = hxx * hyy - hxy * hxy
        dx = (hyy * gx - hxy * gy) / det
        dy = (hxx * gy - hxy * gx) / det
        x, y = x - dx, y - dy
        if x < 0:
            x = -x          # f is even in x
        if abs(dx) + abs(dy) < mp.ldexp(1, -prec):
            break
    h = mp.mpf(fd_step)
    f0 = f_potential(x, y, prec)
    fyy = (f_potential(x, y + h, prec) - 2 * f0 + f_potential(x, y - h, prec)) / h ** 2
    fxx = (f_potential(x + h, y, prec) - 2 * f0 + f_potential(x - h, y, prec)) / h ** 2
    scale = -(fxx + fyy) / 4
    return MaxResult((x, y), f0, scale)


def gaussian_constant(m: int, prec: int = 53, method: str = "closed_form"):
    """``C = (1/2) int_{R^2} exp(pi i m x^2/4 - pi sqrt3 (x^2 + y^2)) dx dy``."""
    mp = _ctx(prec + 10)
    s3 = mp.sqrt(3)
    if method == "closed_form":
        # int exp(-a x^2) = sqrt(pi/a) with Re a > 0, principal root
        a = mp.pi * (s3 - mp.mpc(0, m) / 4)
        b = mp.pi * s3
        return mp.sqrt(mp.pi / a) * mp.sqrt(mp.pi / b) / 2
    if method == "quadrature":
        # truncated at |x| = R where the Gaussian is below 2**-(prec+20)
        R = mp.sqrt((prec + 20) * mp.log(2) / (mp.pi * s3))
        fx = lambda x: mp.expj(mp.pi * m * x * x / 4) * mp.exp(-mp.pi * s3 * x * x)
        fy = lambda y: mp.exp(-mp.pi * s3 * y * y)
        pts = mp.linspace(-R, R, 9)
        ix = mp.quad(fx, pts)
        iy = mp.quad(fy, pts)
        return ix * iy / 2
    raise ValueError(f"unknown method {method!r}")


# -- parity factor -------------------------------------------------------------


def _zeta8_power(k: int) -> tuple:
    """``exp(pi i k / 4)`` in the basis 1, z, z^2, z^3 of Z[z], z^4 = -1."""
    k %= 8
    sign = 1 if k < 4 else -1
    out = [0, 0, 0, 0]
    out[k % 4] = sign
    return tuple(out)


def _z8_add(*elts):
    return tuple(sum(e[i] for e in elts) for i in range(4))


def _z8_mul(a, b):
    out = [0, 0, 0, 0]
    for i in range(4):
        for j in range(4):
            k = i + j
            if k < 4:
                out[k] += a[i] * b[j]
            else:
                out[k - 4] -= a[i] * b[j]
    return tuple(out)


def _z8_conj(a):
    # conj(z^k) = z^-k = -z^(4-k)
    out = [a[0], 0, 0, 0]
    for k in (1, 2, 3):
        out[4 - k] -= a[k]
    return tuple(out)


def _z8_to_complex(a):
    z = mpmath.expjpi(mpmath.mpf(1) / 4)
    return sum(c * z ** k for k, c in enumerate(a))


class ParityFactor(NamedTuple):
    parity_factor: complex
    is_zero: bool
    abs_squared: tuple       # (a, b) meaning a + b sqrt(2), exact
    exact: tuple             # coordinates in Z[exp(pi i/4)]


def beta_gamma_classify(m: int, N: int) -> ParityFactor:
    """``beta + gamma + 2(-1)**(N-1)`` with ``beta = exp(pi i m(N+2)/4)``, ``gamma = exp(pi i m(N-2)/4)``.

    Arithmetic is exact in ``Z[exp(pi i/4)]``.
    """
    beta = _zeta8_power(m * (N + 2))
    gamma = _zeta8_power(m * (N - 2))
    two = (2 * (-1) ** (N - 1), 0, 0, 0)
    total = _z8_add(beta, gamma, two)
    norm = _z8_mul(total, _z8_conj(total))
    # real element: c0 + c1 z + c3 z^3 with z - z^3 = sqrt 2
    assert norm[2] == 0 and norm[1] == -norm[3]
    return ParityFactor(complex(_z8_to_complex(total)), total == (0, 0, 0, 0), (norm[0], norm[1]), total)


def abs_squared_at_least(ab: tuple, bound: int) -> bool:
    """Exact test of ``a + b sqrt2 >= bound``."""
    a, b = ab
    a -= bound
    if a >= 0 and b >= 0:
        return True
    if a <= 0 and b <= 0:
        return a == 0 and b == 0
    if a > 0:                   # b < 0
        return a * a >= 2 * b * b
    return 2 * b * b >= a * a   # a < 0 < b


# -- prediction ----------------------------------------------------------------------


@dataclass
class AsymptoticPrediction:
    m: int
    N: int
    parity_factor: complex
    C_const: mpmath.mpc
    E_leading: mpmath.mpf
    l_star: int
    predicted_value: mpmath.mpc
    alpha: float = DEFAULT_ALPHA

    @property
    def error_envelope(self) -> float:
        """Relative size ``N**(3 alpha - 2)`` of the neglected terms."""
        return self.N ** (3 * self.alpha - 2)

    @property
    def predicted_log_abs(self):
        if not self.predicted_value:
            return None
        return mpmath.log(abs(self.predicted_value))


def predict_leading(m: int, N: int, prec: int = 128, alpha: float = DEFAULT_ALPHA) -> AsymptoticPrediction:
    """Leading term ``delta^((3N-2)m) a_N^m (1/2)(beta+gamma+2(-1)^(N-1)) C E(0, l*) N``."""
    if N < 6:
        raise ValueError("prediction needs N >= 6")
    if not 0.5 < alpha < 2 / 3:
        raise ValueError("alpha must lie in (1/2, 2/3)")
    ctx = RootContext(N, prec, m)
    mp = ctx.mp
    l_star = int(math.floor(5 * N / 6 + 0.5))
    E = E_value(ctx, 0, l_star)
    pf = beta_gamma_classify(m, N)
    C = mp.mpc(gaussian_constant(m, prec))
    # delta = x0**N, a_N = x0**(3 - 4N^2)
    phase = ctx.x_power(m * N * (3 * N - 2)) * ctx.x_power(m * (3 - 4 * N * N))
    factor = mp.mpc(_z8_to_complex(pf.exact))
    value = phase * factor * C * E * N / 2
    return AsymptoticPrediction(m, N, complex(factor), C, E, l_star, value, alpha)


@dataclass
class GrowthRecord:
    N: int
    exact_log_abs: float | None
    rate: float | None
    predicted_log_abs: float | None
    residual: float | None
    is_zero: bool = False


def fig8_volume(prec: int = 53):
    """``4 L(pi/6)``, the hyperbolic volume of the figure-eight knot complement."""
    mp = _ctx(prec + 20)
    return 4 * lobachevsky(mp.pi / 6, prec)


def growth_rate(values: Iterable[tuple[int, CableInvariantResult]], m: int | None = None,
                alpha: float = DEFAULT_ALPHA) -> list[GrowthRecord]:
    """``2 pi log|<K>_N| / N`` per color, with residuals against the leading term.

    Zero values are flagged and carry no rate. Predictions are attached
    when ``m`` is given and ``N >= 6``.
    """
    out = []
    for N, res in values:
        pred_log = None
        if m is not None and N >= 6:
            pred = predict_leading(m, N, alpha=alpha)
            if pred.predicted_value:
                pred_log = float(pred.predicted_log_abs)
        if res.is_zero or not res.value:
            out.append(GrowthRecord(N, None, None, pred_log, None, True))
            continue
        la = float(mpmath.log(abs(res.value)))
        rate = 2 * math.pi * la / N
        resid = la - pred_log if pred_log is not None else None
        out.append(GrowthRecord(N, la, rate, pred_log, resid))
    return out


def s_n(N: int, n: int, prec: int = 53):
    """``-sum_{j<=n} log|2 sin(j pi/N)|``."""
    ctx = RootContext(N, prec)
    return -ctx._log_two_sin_prefix[n]
