import math

import mpmath
import pytest

from kashaev_cables.asymptotics import (
    abs_squared_at_least,
    beta_gamma_classify,
    f_potential,
    fig8_volume,
    find_max_f,
    gaussian_constant,
    growth_rate,
    lobachevsky,
    lobachevsky_quad,
    predict_leading,
    s_n,
)
from kashaev_cables.cable import kashaev_cable
from kashaev_cables.jones import figure_eight


def test_lobachevsky_values():
    assert lobachevsky(0) == 0
    assert abs(lobachevsky(mpmath.pi / 2)) < 1e-15
    assert abs(lobachevsky(mpmath.pi / 6) - mpmath.mpf("0.5074708032048268")) < 1e-15
    assert abs(fig8_volume() - mpmath.mpf("2.0298832128193072")) < 1e-14


def test_lobachevsky_error_bound_and_references():
    for x in (0.1, 0.7, 1.3, 2.9):
        val, err = lobachevsky(x, 80, return_error=True)
        assert err < 1e-20
        assert abs(val - lobachevsky_quad(x, 80)) < 1e-20
        assert abs(val - mpmath.clsin(2, 2 * x) / 2) < 1e-14


def test_lobachevsky_symmetry():
    for x in (0.2, 1.0, 2.5):
        assert abs(lobachevsky(-x) + lobachevsky(x)) < 1e-15
        assert abs(lobachevsky(x + math.pi) - lobachevsky(x)) < 1e-14


def test_potential_maximum():
    res = find_max_f()
    x, y = res.point
    assert abs(x) < 1e-8 and abs(y - 5 * mpmath.pi / 6) < 1e-8
    assert abs(res.value - 2 * lobachevsky(mpmath.pi / 6)) < 1e-12
    assert abs(res.hessian_scale - math.sqrt(3)) < 1e-4
    assert f_potential(0.1, 2.0) < res.value


def test_gaussian_constant():
    c0 = gaussian_constant(0)
    assert abs(c0 - 1 / (2 * math.sqrt(3))) < 1e-15
    assert abs(c0 - gaussian_constant(0, method="quadrature")) < 1e-8
    mags = [abs(gaussian_constant(m)) for m in range(17)]
    assert all(b < a for a, b in zip(mags, mags[1:]))
    for m in (0, 5, 16):
        closed = 0.5 * 3 ** -0.25 * (3 + m * m / 16) ** -0.25
        assert abs(mags[m] - closed) < 1e-14
    with pytest.raises(ValueError):
        gaussian_constant(1, method="bogus")


def test_parity_factor_examples():
    assert beta_gamma_classify(2, 2).is_zero
    for m in (1, 3, -5, 7):
        for N in range(1, 9):
            pf = beta_gamma_classify(m, N)
            assert not pf.is_zero and abs(abs(pf.parity_factor) - 2) < 1e-12
    assert all(beta_gamma_classify(4, N).is_zero for N in (1, 3, 5))


def test_abs_squared_exact_comparison():
    assert abs_squared_at_least((4, 0), 4)
    assert not abs_squared_at_least((3, 0), 4)
    assert abs_squared_at_least((2, 2), 4)          # 2 + 2 sqrt2 > 4
    assert not abs_squared_at_least((6, -2), 4)     # 6 - 2 sqrt2 < 4


def test_prediction_zero_exactly_when_factor_zero():
    for m, N in ((0, 8), (2, 10), (4, 7)):
        assert predict_leading(m, N).predicted_value == 0
    p = predict_leading(1, 101)
    assert p.l_star == 84 and p.E_leading > 0
    with pytest.raises(ValueError):
        predict_leading(1, 5)
    with pytest.raises(ValueError):
        predict_leading(1, 11, alpha=0.7)


def test_prediction_ratio_m1_N101():
    exact = kashaev_cable(figure_eight(), 1, 101)
    ratio = abs(exact.value) / abs(predict_leading(1, 101).predicted_value)
    assert 0.7 <= ratio <= 1.4
    assert float(ratio) == pytest.approx(0.855, abs=5e-3)


def test_growth_rate_records():
    K = figure_eight()
    vals = [(N, kashaev_cable(K, 0, N)) for N in (10, 11)]
    recs = growth_rate(vals, m=0)
    assert recs[0].is_zero and recs[0].rate is None
    r = recs[1]
    assert r.residual == pytest.approx(r.exact_log_abs - r.predicted_log_abs)
    assert r.rate == pytest.approx(2 * math.pi * r.exact_log_abs / 11)


def test_s_n_log_bound():
    for N in (60, 300):
        worst = max(abs(float(s_n(N, n)) - N / math.pi * float(lobachevsky(n * math.pi / N)))
                    for n in range(1, N))
        assert worst <= math.log(N)
