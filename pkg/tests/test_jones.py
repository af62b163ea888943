import json
from fractions import Fraction

import mpmath
import pytest

from kashaev_cables.blocks import exact_qint
from kashaev_cables.jones import (
    builtin_knot,
    cable_jones,
    figure_eight,
    frame_shift,
    habiro_jones,
    kashaev_knot,
    knot_to_json,
    load_knot_file,
    trefoil,
    unknot,
)
from kashaev_cables.laurent import LaurentPoly, eval_at, substitute_power


def q_poly(terms):
    return substitute_power(LaurentPoly(terms), 8)


def test_fig8_color_one():
    assert habiro_jones(figure_eight(), 1) == LaurentPoly.one()


def test_fig8_color_two_is_known_jones():
    expected = exact_qint(2) * q_poly({2: 1, 1: -1, 0: 1, -1: -1, -2: 1})
    assert habiro_jones(figure_eight(), 2) == expected


def test_trefoil_color_two():
    # J = [2] (q + q^3 - q^4) for the trefoil of this handedness
    expected = exact_qint(2) * q_poly({1: 1, 3: 1, 4: -1})
    assert habiro_jones(trefoil(), 2) == expected


def test_unknot_gives_quantum_integer():
    x = mpmath.expj(0.7)
    assert habiro_jones(unknot(), 5) == exact_qint(5)
    assert abs(habiro_jones(unknot(), 5, x) - exact_qint(5)(mpmath.mpc(x))) < 1e-14


def test_exact_and_numeric_tracks_agree():
    K = trefoil()
    mp = mpmath.MPContext()
    mp.prec = 160
    x = mp.expj(mp.mpf("0.37"))
    for n in range(1, 13):
        ev = eval_at(habiro_jones(K, n), x, 160)
        num = habiro_jones(K, n, x, prec=160)
        assert abs(ev.value - num) <= ev.error_bound + abs(num) * mp.ldexp(1, -120)


@pytest.mark.parametrize("p, n, q_exp", [(0, 4, Fraction(0)), (1, 2, Fraction(3, 4)), (2, 3, Fraction(4))])
def test_frame_shift(p, n, q_exp):
    K = figure_eight()
    x_exp = int(8 * q_exp)
    assert habiro_jones(frame_shift(K, p), n) == habiro_jones(K, n).shift(x_exp)


def test_half_integer_frame_shift():
    K = frame_shift(figure_eight(), Fraction(1, 2))
    assert K.half_integer_framing
    with pytest.raises(ValueError):
        frame_shift(figure_eight(), Fraction(1, 3))


def test_cable_methods_agree_exactly():
    for K in (figure_eight(), trefoil()):
        for m in (-3, 0, 1, 2, 5):
            for N in range(1, 7):
                assert cable_jones(K, m, N, method="mu_form") == cable_jones(K, m, N, method="t_form")


def test_cable_methods_agree_generic_q():
    mp = mpmath.MPContext()
    mp.prec = 200
    q = mp.expj(mp.mpf("0.3"))
    x = q ** (mp.mpf(1) / 8)
    K = figure_eight()
    for m in range(4):
        for N in range(2, 6):
            a = cable_jones(K, m, N, x, method="mu_form", prec=200)
            b = cable_jones(K, m, N, x, method="t_form", prec=200)
            assert abs(a - b) <= abs(a) * mp.ldexp(1, -60)


def test_cable_trivial_cases():
    assert cable_jones(figure_eight(), 0, 1) == LaurentPoly.one()
    U = unknot()
    two = exact_qint(2)
    assert cable_jones(U, 0, 2) == exact_qint(1) + exact_qint(3) == two * two


def test_kashaev_knot_values():
    for N, val in ((1, 1), (2, 5), (3, 13)):
        r = kashaev_knot(figure_eight(), N, prec=128)
        assert abs(r.value - val) <= val * mpmath.ldexp(1, -60)


def test_kashaev_fig8_real_positive():
    for N in (5, 17, 40):
        r = kashaev_knot(figure_eight(), N, prec=128)
        assert abs(r.value.imag) < 1e-20 and r.value.real > 0


def test_builtin_names():
    K = load_knot_file("fig8")
    assert K.framing == 0
    assert all(K.coeff(l) == LaurentPoly.one() for l in range(10))
    assert builtin_knot("4_1").name == builtin_knot("figure-eight").name
    with pytest.raises(KeyError):
        builtin_knot("5_2")


def write(tmp_path, obj, name="k.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj), encoding="utf-8")
    return p


def test_knot_file_round_trip(tmp_path):
    p = write(tmp_path, knot_to_json(trefoil(), 6))
    K = load_knot_file(p)
    for n in range(1, 6):
        assert habiro_jones(K, n) == habiro_jones(trefoil(), n)


def test_knot_file_coefficient_out_of_range(tmp_path):
    p = write(tmp_path, {"name": "short", "framing": "0", "coeffs": [{"ring": "Z", "terms": {"0": "1"}}]})
    K = load_knot_file(p)
    assert K.coeff(0) == LaurentPoly.one()
    with pytest.raises(IndexError, match="coefficient index out of range"):
        K.coeff(1)


def test_knot_file_half_integer_framing(tmp_path):
    p = write(tmp_path, {"name": "h", "framing": "3/2", "coeffs": [{"ring": "Z", "terms": {"0": "1"}}]})
    K = load_knot_file(p)
    assert K.framing == Fraction(3, 2) and K.half_integer_framing


def test_knot_file_errors(tmp_path):
    with pytest.raises(ValueError, match="line 1 column"):
        load_knot_file(write(tmp_path, '{"name": "x", '))
    with pytest.raises(ValueError, match="non-integer"):
        load_knot_file(write(tmp_path, {"name": "x", "coeffs": [{"ring": "Q", "terms": {"0": "1/2"}}]}))
    with pytest.raises(ValueError, match="framing"):
        load_knot_file(write(tmp_path, {"name": "x", "framing": "1/3", "coeffs": []}))
    with pytest.raises(ValueError, match="missing key"):
        load_knot_file(write(tmp_path, {"name": "x"}))
