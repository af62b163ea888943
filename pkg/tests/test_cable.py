import mpmath
import pytest

from kashaev_cables.blocks import D_eval, RootContext, t_power
from kashaev_cables.cable import (
    ParityCase,
    closed_form_applies,
    even_m_closed_form,
    in_S_m,
    kashaev_cable,
    kashaev_cable_oracle,
    pairing_lhs,
    parity_case,
)
from kashaev_cables.jones import figure_eight, frame_shift, trefoil


def agree(res, ref, bits=40):
    if res.is_zero:
        return abs(ref) <= res.max_term * mpmath.ldexp(1, -bits)
    return abs(res.value - ref) <= abs(ref) * mpmath.ldexp(1, -bits)


def test_parity_cases():
    assert parity_case(3) is ParityCase.ODD
    assert parity_case(16) is ParityCase.ZERO_MOD_8
    assert parity_case(-2) is ParityCase.TWO_MOD_4
    assert parity_case(12) is ParityCase.FOUR_MOD_8
    assert all(in_S_m(1, N) for N in range(1, 20))
    assert [N for N in range(1, 9) if in_S_m(8, N)] == [1, 3, 5, 7]
    assert [N for N in range(1, 9) if in_S_m(2, N)] == [1, 3, 4, 5, 7, 8]
    assert not any(in_S_m(4, N) for N in range(1, 30))


@pytest.mark.parametrize("m", [0, 1, -1, 2, 3, 4, 8])
def test_paired_sum_matches_lhopital(m):
    K = figure_eight()
    for N in range(1, 11):
        res = kashaev_cable(K, m, N)
        ref = kashaev_cable_oracle(K, m, N, prec=128)
        assert res.resolved and agree(res, ref.value)


def test_paired_sum_matches_numeric_limit():
    K = trefoil()
    for m, N in ((1, 7), (2, 6), (0, 9), (3, 12)):
        res = kashaev_cable(K, m, N)
        ref = kashaev_cable_oracle(K, m, N, flavor="numeric_limit")
        assert agree(res, ref.value, 30)


def test_vanishing_for_even_N():
    for K in (figure_eight(), trefoil()):
        for N in (2, 8, 20):
            res = kashaev_cable(K, 0, N)
            assert res.is_zero and res.cancellation_ratio < mpmath.mpf("1e-30")


def test_unresolved_reports_candidates():
    res = kashaev_cable(figure_eight(), 0, 60, prec=64, cap_multiplier=1)
    assert res.status == "unresolved" and not res.resolved
    assert res.candidates and "candidates" in res.to_json()


def test_closed_form():
    K = figure_eight()
    for m in (-4, 2, 4, 6, 8):
        for N in range(2, 15):
            if closed_form_applies(m, N):
                res = kashaev_cable(K, m, N)
                assert agree(res, even_m_closed_form(K, m, N))
    assert even_m_closed_form(K, 0, 4) == 0
    with pytest.raises(ValueError):
        even_m_closed_form(K, 2, 4)


def test_framed_knot_matches_oracle():
    K = frame_shift(figure_eight(), 1)
    for N in (3, 4, 7):
        res = kashaev_cable(K, 1, N)
        ref = kashaev_cable_oracle(K, 1, N)
        assert agree(res, ref.value)


def test_half_integer_framing_needs_oracle():
    from fractions import Fraction
    K = frame_shift(figure_eight(), Fraction(1, 2))
    with pytest.raises(ValueError):
        kashaev_cable(K, 1, 5)
    assert kashaev_cable_oracle(K, 1, 5).value != 0


def test_pairing_lhs_matches_D():
    # the pair (j, -j) of the cabling sum, resolved by L'Hopital, equals t_j^m D(j,l)
    # summed with the framing/a_N factor stripped
    for N in (3, 4, 7):
        ctx = RootContext(N, 160)
        for m in (0, 1, 2):
            for j in range(1, N):
                if (N - j + 1) % 2:
                    continue
                for l in range(N):
                    lhs = pairing_lhs(m, N, j, l, prec=128)
                    rhs = t_power(ctx, j, m) * D_eval(ctx, j, l, m).value
                    assert abs(lhs - rhs) <= max(1, abs(rhs)) * mpmath.mpf(2) ** -60


def test_result_json_fields():
    res = kashaev_cable(figure_eight(), 1, 5)
    obj = res.to_json()
    assert list(obj) == ["m", "N", "method", "re", "im", "error_bound", "max_term",
                         "cancellation_ratio", "prec_used", "in_S_m", "is_zero", "status"]
    assert obj["method"] == "paired" and obj["in_S_m"] is True
